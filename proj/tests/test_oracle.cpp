#include <doctest.h>

#include <cmath>

#include "sdr/oracle.hpp"

using namespace sdr;

namespace {

LinearMatrixPolynomial disk_pencil() {
  LinearMatrixPolynomial lmp;
  lmp.dim = 2;
  lmp.vars = {"x1", "x2"};
  lmp.a0 = SymmetricMatrix::identity(2);
  lmp.coeffs = {SymmetricMatrix(2, {-1, 0, 0, 1}), SymmetricMatrix(2, {0, 1, 1, 0})};
  return validated(lmp);
}

bool disk_member(const Assignment& x) {
  return std::hypot(x.at("x1"), x.at("x2")) <= 1.0 + 1e-12;
}

bool segment_member(const Assignment& x) {
  return std::abs(x.at("x2")) <= 1e-9 && x.at("x1") >= -1e-9 &&
         x.at("x1") <= 1.0 + 1e-9;
}

Assignment pt(double a, double b) { return {{"x1", a}, {"x2", b}}; }

}  // namespace

TEST_CASE("albert criterion on pinned cases") {
  // nonsingular A accepts any B
  Matrix b(1, 2, {3, -4});
  CHECK(albert_criterion(SymmetricMatrix::identity(2), b));

  // A = diag(1, 0): kernel is e2, so B must kill e2
  SymmetricMatrix a = SymmetricMatrix::diagonal({1, 0});
  CHECK(albert_criterion(a, Matrix(1, 2, {1, 0})));
  CHECK_FALSE(albert_criterion(a, Matrix(1, 2, {0, 1})));
  CHECK_FALSE(albert_criterion(a, Matrix(1, 2, {1, 1e-3})));

  // zero A: only zero B works
  CHECK(albert_criterion(SymmetricMatrix(2), Matrix(1, 2)));
  CHECK_FALSE(albert_criterion(SymmetricMatrix(2), Matrix(1, 2, {1, 0})));

  // A not PSD: never
  CHECK_FALSE(albert_criterion(SymmetricMatrix::diagonal({-1, 1}), Matrix(1, 2)));

  // multi-row B against a rank-1 A
  SymmetricMatrix ones(2, {1, 1, 1, 1});  // kernel spans (1, -1)
  CHECK(albert_criterion(ones, Matrix(2, 2, {1, 1, 2, 2})));
  CHECK_FALSE(albert_criterion(ones, Matrix(2, 2, {1, 1, 1, -1})));
}

TEST_CASE("relint membership through the push-out test") {
  const Assignment center = pt(0, 0);
  CHECK(relint_member(disk_member, center, pt(0, 0)));
  CHECK(relint_member(disk_member, center, pt(0.5, 0)));
  CHECK(relint_member(disk_member, center, pt(0, -0.9)));
  CHECK_FALSE(relint_member(disk_member, center, pt(1, 0)));
  CHECK_FALSE(relint_member(disk_member, center, pt(0, 1)));
  CHECK_FALSE(relint_member(disk_member, center, pt(2, 0)));  // not even in S

  // flat set: relative interior, not interior
  const Assignment mid = pt(0.5, 0);
  CHECK(relint_member(segment_member, mid, pt(0.25, 0)));
  CHECK(relint_member(segment_member, mid, pt(0.5, 0)));
  CHECK_FALSE(relint_member(segment_member, mid, pt(0, 0)));
  CHECK_FALSE(relint_member(segment_member, mid, pt(1, 0)));
  CHECK_FALSE(relint_member(segment_member, mid, pt(0.5, 0.1)));

  // the eps grid bottoms out at 1e-3: a 1e-4 boundary offset reads as
  // non-interior, which is the documented resolution of the oracle
  CHECK_FALSE(relint_member(disk_member, center, pt(1.0 - 1e-4, 0)));
  CHECK(relint_member(disk_member, center, pt(1.0 - 1e-2, 0)));
}

TEST_CASE("face_of_point returns the kernel of the pencil value") {
  LinearMatrixPolynomial d = disk_pencil();
  CHECK(face_of_point(d, pt(0, 0)).rank() == 0);
  CHECK(face_of_point(d, pt(0.3, -0.4)).rank() == 0);

  Subspace f = face_of_point(d, pt(1, 0));
  REQUIRE(f.rank() == 1);
  CHECK(std::abs(f.basis().at(0, 0)) == doctest::Approx(1));

  // at angle theta the kernel is spanned by (cos t/2, -sin t/2)
  const double theta = 2.0;
  f = face_of_point(d, pt(std::cos(theta), std::sin(theta)));
  REQUIRE(f.rank() == 1);
  const double c0 = f.basis().at(0, 0), c1 = f.basis().at(1, 0);
  const double want0 = std::cos(theta / 2), want1 = -std::sin(theta / 2);
  CHECK(std::abs(c0 * want1 - c1 * want0) == doctest::Approx(0).epsilon(1e-8));
}

TEST_CASE("face eps characterization agrees with kernel containment") {
  // interior x: every u in S lies in its face (the whole disk)
  CHECK(face_eps_characterization(disk_member, pt(0, 0), pt(1, 0)));
  CHECK(face_eps_characterization(disk_member, pt(0, 0), pt(-0.3, 0.4)));

  // boundary x: the face is the singleton, so only u = x passes
  CHECK(face_eps_characterization(disk_member, pt(1, 0), pt(1, 0)));
  CHECK_FALSE(face_eps_characterization(disk_member, pt(1, 0), pt(0, 0)));
  CHECK_FALSE(face_eps_characterization(disk_member, pt(1, 0), pt(0, 1)));

  // matches the algebraic version through kernels
  LinearMatrixPolynomial d = disk_pencil();
  const Assignment xs[3] = {pt(0, 0), pt(1, 0), pt(std::cos(0.5), std::sin(0.5))};
  const Assignment us[3] = {pt(0.2, 0.1), pt(1, 0), pt(0, -1)};
  for (const auto& x : xs)
    for (const auto& u : us) {
      const bool geometric = face_eps_characterization(disk_member, x, u);
      const bool algebraic =
          subspace_contained(face_of_point(d, x), face_of_point(d, u));
      CHECK(geometric == algebraic);
    }
}

TEST_CASE("looparrow membership from a finite sample of T") {
  LinearMatrixPolynomial d = disk_pencil();
  // T = {0}: keeps exactly the open disk
  const std::vector<Assignment> origin = {pt(0, 0)};
  CHECK(looparrow_member(origin, d, pt(0, 0)));
  CHECK(looparrow_member(origin, d, pt(0.9, 0)));
  CHECK_FALSE(looparrow_member(origin, d, pt(1, 0)));
  CHECK_FALSE(looparrow_member(origin, d, pt(0, -1)));
  CHECK_FALSE(looparrow_member(origin, d, pt(1.5, 0)));

  // T = {(0,-1)}: open disk plus that boundary point
  const std::vector<Assignment> south = {pt(0, -1)};
  CHECK(looparrow_member(south, d, pt(0, -1)));
  CHECK(looparrow_member(south, d, pt(0, 0)));
  CHECK_FALSE(looparrow_member(south, d, pt(1, 0)));

  // empty sample: nothing is kept
  CHECK_FALSE(looparrow_member({}, d, pt(0, 0)));
}

TEST_CASE("rejection sampling is seeded and respects the predicate") {
  const std::vector<std::string> vars = {"x1", "x2"};
  const std::vector<std::pair<double, double>> box = {{-1, 1}, {-1, 1}};
  std::vector<Assignment> a = rejection_sample(disk_member, vars, box, 50, 7);
  CHECK(a.size() == 50);
  for (const auto& x : a) CHECK(disk_member(x));

  std::vector<Assignment> b = rejection_sample(disk_member, vars, box, 50, 7);
  REQUIRE(b.size() == a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].at("x1") == b[i].at("x1"));
    CHECK(a[i].at("x2") == b[i].at("x2"));
  }

  std::vector<Assignment> c = rejection_sample(disk_member, vars, box, 50, 8);
  bool any_difference = false;
  for (size_t i = 0; i < c.size(); ++i)
    if (c[i].at("x1") != a[i].at("x1")) any_difference = true;
  CHECK(any_difference);

  // an unsatisfiable predicate yields nothing (bounded attempts)
  const MembershipFn never = [](const Assignment&) { return false; };
  CHECK(rejection_sample(never, vars, box, 5, 1).empty());
}
