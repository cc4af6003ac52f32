#include <doctest.h>

#include <cmath>
#include <limits>

#include "sdr/feasibility.hpp"

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

LinearMatrixPolynomial interval_pencil() {  // x1 in [0, 1]
  LinearMatrixPolynomial lmp;
  lmp.dim = 2;
  lmp.vars = {"x1"};
  lmp.a0 = SymmetricMatrix::diagonal({0, 1});
  lmp.coeffs = {SymmetricMatrix::diagonal({1, -1})};
  lmp.blocks = {1, 1};
  return validated(lmp);
}

LinearMatrixPolynomial albert_block(double ell) {  // [[lambda, 1], [1, ell]]
  LinearMatrixPolynomial lmp;
  lmp.dim = 2;
  lmp.vars = {"lambda"};
  lmp.a0 = SymmetricMatrix(2, {0, 1, 1, ell});
  lmp.coeffs = {SymmetricMatrix(2, {1, 0, 0, 0})};
  return validated(lmp);
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS(validated(EngineConfig{-1.0, 1e-7, 2e-7, 100, 1, 0}), Error);
  CHECK_THROWS_AS(validated(EngineConfig{1e6, 0.0, 2e-7, 100, 1, 0}), Error);
  // out_threshold must exceed tol_feas
  CHECK_THROWS_AS(validated(EngineConfig{1e6, 1e-7, 1e-7, 100, 1, 0}), Error);
  CHECK_THROWS_AS(validated(EngineConfig{1e6, 1e-7, 2e-7, 0, 1, 0}), Error);
  CHECK_NOTHROW(validated(EngineConfig{}));
}

TEST_CASE("constant pencils decide by eigenvalues alone") {
  EngineConfig cfg;
  LinearMatrixPolynomial c;
  c.dim = 3;
  c.a0 = SymmetricMatrix::identity(3);
  Verdict v = find_psd_point(c, cfg);
  CHECK(v.kind == VerdictKind::In);
  CHECK(v.margin == doctest::Approx(1));
  CHECK(v.residual == 0);

  c.a0 = SymmetricMatrix::diagonal({1, -1, 2});
  v = find_psd_point(c, cfg);
  CHECK(v.kind == VerdictKind::Out);
  CHECK(v.residual == doctest::Approx(1));
  CHECK(v.margin == doctest::Approx(-1));

  // within tol_feas: still In
  c.a0 = SymmetricMatrix::diagonal({1, -1e-8, 2});
  CHECK(find_psd_point(c, cfg).kind == VerdictKind::In);

  // in the gray band between tol_feas and out_threshold: Unknown
  c.a0 = SymmetricMatrix::diagonal({1, -1.5e-7, 2});
  CHECK(find_psd_point(c, cfg).kind == VerdictKind::Unknown);
}

TEST_CASE("albert gadget block: feasible iff the corner is large enough") {
  EngineConfig cfg;  // lambda_max 1e6
  // exists |lambda| <= L with [[lambda,1],[1,ell]] >= 0 iff
  // ell >= 1/L; the best slack at ell < 1/L is about ell - 1/L.
  CHECK(find_psd_point(albert_block(1.0), cfg).kind == VerdictKind::In);
  CHECK(find_psd_point(albert_block(2e-6), cfg).kind == VerdictKind::In);
  CHECK(find_psd_point(albert_block(1e-6), cfg).kind == VerdictKind::In);
  CHECK(find_psd_point(albert_block(1e-7), cfg).kind == VerdictKind::Out);
  CHECK(find_psd_point(albert_block(0.0), cfg).kind == VerdictKind::Out);
  Verdict v = find_psd_point(albert_block(-1.0), cfg);
  CHECK(v.kind == VerdictKind::Out);
  CHECK(v.residual >= 1.0);  // the -1 corner alone is distance 1 from PSD

  // In witnesses are genuinely feasible
  v = find_psd_point(albert_block(2e-6), cfg);
  SymmetricMatrix at = evaluate(albert_block(2e-6), v.witness);
  CHECK(min_eigenvalue(at) >= -2.0 * cfg.tol_feas);
  CHECK(std::abs(v.witness.at("lambda")) <= cfg.lambda_max);
}

TEST_CASE("deterministic verdicts") {
  EngineConfig cfg;
  Verdict a = find_psd_point(albert_block(3e-6), cfg);
  Verdict b = find_psd_point(albert_block(3e-6), cfg);
  CHECK(a.kind == b.kind);
  CHECK(a.margin == b.margin);
  CHECK(a.residual == b.residual);
  CHECK(a.iterations == b.iterations);
  CHECK(a.witness.at("lambda") == b.witness.at("lambda"));
}

TEST_CASE("membership on the disk spectrahedron") {
  SemidefRepresentation s = spectrahedron(disk_pencil());
  EngineConfig cfg;
  Verdict v = membership(s, {{"x1", 0.0}, {"x2", 0.0}}, cfg);
  CHECK(v.kind == VerdictKind::In);
  CHECK(v.margin == doctest::Approx(1));

  v = membership(s, {{"x1", 0.8}, {"x2", 0.6}}, cfg);  // exact boundary
  CHECK(v.kind == VerdictKind::In);
  CHECK(v.margin == doctest::Approx(0).epsilon(1e-9));

  v = membership(s, {{"x1", 2.0}, {"x2", 0.0}}, cfg);
  CHECK(v.kind == VerdictKind::Out);
  CHECK(v.residual == doctest::Approx(1));

  CHECK_THROWS_AS(membership(s, {{"x1", 0.0}}, cfg), Error);
  CHECK_THROWS_AS(
      membership(s, {{"x1", 0.0}, {"x2", 0.0}, {"x3", 0.0}}, cfg), Error);
}

TEST_CASE("infeasible pencil with a variable is certified Out") {
  // x1 >= 0 and x1 <= -1: best slack is -0.5 at x1 = -0.5
  LinearMatrixPolynomial lmp;
  lmp.dim = 2;
  lmp.vars = {"x1"};
  lmp.a0 = SymmetricMatrix::diagonal({0, -1});
  lmp.coeffs = {SymmetricMatrix::diagonal({1, -1})};
  lmp.blocks = {1, 1};
  EngineConfig cfg;
  Verdict v = find_psd_point(lmp, cfg);
  CHECK(v.kind == VerdictKind::Out);
  CHECK(v.residual >= 0.5 - 1e-6);
  CHECK(v.margin <= -0.5 + 1e-6);
}

TEST_CASE("non-finite pencils are rejected") {
  LinearMatrixPolynomial lmp = interval_pencil();
  LinearMatrixPolynomial bad = lmp;
  bad.a0.set(0, 0, std::nan(""));
  CHECK_THROWS_AS(find_psd_point(bad, EngineConfig{}), Error);
  bad = lmp;
  bad.coeffs[0].set(1, 1, std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(find_psd_point(bad, EngineConfig{}), Error);
}

TEST_CASE("sampled feasible points are feasible and plentiful") {
  EngineConfig cfg;
  std::vector<Assignment> pts = sample_feasible_points(disk_pencil(), cfg, 12);
  CHECK(static_cast<int>(pts.size()) == 12);
  for (const auto& p : pts) {
    const double r = std::hypot(p.at("x1"), p.at("x2"));
    CHECK(r <= 1.0 + 1e-7);
  }

  // constant feasible pencil: one empty assignment
  LinearMatrixPolynomial c;
  c.dim = 1;
  c.a0 = SymmetricMatrix::identity(1);
  pts = sample_feasible_points(c, cfg, 5);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].empty());

  // constant infeasible pencil: nothing
  c.a0 = SymmetricMatrix::diagonal({-1});
  CHECK(sample_feasible_points(c, cfg, 5).empty());

  // flat set: samples stay on the segment x2 = 0, x1 in [0,1]
  LinearMatrixPolynomial seg;
  seg.dim = 4;
  seg.vars = {"x1", "x2"};
  seg.a0 = SymmetricMatrix::diagonal({0, 1, 0, 0});
  seg.coeffs = {SymmetricMatrix::diagonal({1, -1, 0, 0}),
                SymmetricMatrix::diagonal({0, 0, 1, -1})};
  seg.blocks = {1, 1, 1, 1};
  pts = sample_feasible_points(validated(seg), cfg, 8);
  CHECK(pts.size() >= 4);
  for (const auto& p : pts) {
    CHECK(std::abs(p.at("x2")) <= 1e-6);
    CHECK(p.at("x1") >= -1e-6);
    CHECK(p.at("x1") <= 1.0 + 1e-6);
  }
}

TEST_CASE("interior point of full-dimensional sets") {
  EngineConfig cfg;
  // disk: the deepest point is the center
  Assignment z = interior_point(spectrahedron(disk_pencil()), cfg);
  CHECK(std::hypot(z.at("x1"), z.at("x2")) <= 5e-3);

  // interval [0,1]: the deepest point is 0.5
  z = interior_point(spectrahedron(interval_pencil()), cfg);
  CHECK(z.at("x1") == doctest::Approx(0.5).epsilon(5e-3));
}

TEST_CASE("interior point of a flat set lands in the relative interior") {
  LinearMatrixPolynomial seg;  // segment [0,1] x {0}
  seg.dim = 4;
  seg.vars = {"x1", "x2"};
  seg.a0 = SymmetricMatrix::diagonal({0, 1, 0, 0});
  seg.coeffs = {SymmetricMatrix::diagonal({1, -1, 0, 0}),
                SymmetricMatrix::diagonal({0, 0, 1, -1})};
  seg.blocks = {1, 1, 1, 1};
  EngineConfig cfg;
  Assignment z = interior_point(spectrahedron(validated(seg)), cfg);
  CHECK(std::abs(z.at("x2")) <= 1e-6);
  CHECK(z.at("x1") >= 0.05);
  CHECK(z.at("x1") <= 0.95);
}

TEST_CASE("interior point of an empty set throws EmptySet") {
  LinearMatrixPolynomial lmp;
  lmp.dim = 2;
  lmp.vars = {"x1"};
  lmp.a0 = SymmetricMatrix::diagonal({0, -1});
  lmp.coeffs = {SymmetricMatrix::diagonal({1, -1})};
  lmp.blocks = {1, 1};
  try {
    interior_point(spectrahedron(validated(lmp)), EngineConfig{});
    FAIL("expected EmptySet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptySet);
  }
}

TEST_CASE("verdict names") {
  CHECK(std::string(verdict_name(VerdictKind::In)) == "In");
  CHECK(std::string(verdict_name(VerdictKind::Out)) == "Out");
  CHECK(std::string(verdict_name(VerdictKind::Unknown)) == "Unknown");
}
