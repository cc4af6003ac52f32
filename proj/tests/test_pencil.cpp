#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "sdr/pencil.hpp"

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

}  // namespace

TEST_CASE("affine parsing round-trips and evaluates") {
  AffineFunctional f = parse_affine("1 - x1");
  CHECK(f.constant == doctest::Approx(1));
  REQUIRE(f.vars.size() == 1);
  CHECK(f.vars[0] == "x1");
  CHECK(f.gradient[0] == doctest::Approx(-1));
  CHECK(f.evaluate({{"x1", 0.25}}) == doctest::Approx(0.75));

  f = parse_affine("0.5*x1 + x2 - 2");
  CHECK(f.constant == doctest::Approx(-2));
  CHECK(f.evaluate({{"x1", 2.0}, {"x2", 3.0}}) == doctest::Approx(2.0));

  f = parse_affine("-x2");
  CHECK(f.constant == 0);
  CHECK(f.evaluate({{"x2", -1.5}}) == doctest::Approx(1.5));

  // repeated variables accumulate
  f = parse_affine("x1 + x1 - 3*x1");
  CHECK(f.evaluate({{"x1", 2.0}}) == doctest::Approx(-2.0));

  // to_string parses back to the same functional
  for (const char* text : {"1 - x1", "0.5*x1 + x2 - 2", "-x2", "3", "x1"}) {
    AffineFunctional a = parse_affine(text);
    AffineFunctional b = parse_affine(a.to_string());
    Assignment pt = {{"x1", 0.3}, {"x2", -0.7}};
    Assignment restricted;
    for (const auto& v : a.vars) restricted[v] = pt[v];
    CHECK(a.evaluate(restricted) == doctest::Approx(b.evaluate(restricted)));
  }

  CHECK(parse_affine("x1").negated().evaluate({{"x1", 2.0}}) == doctest::Approx(-2));

  CHECK_THROWS_AS(parse_affine(""), Error);
  CHECK_THROWS_AS(parse_affine("1 +"), Error);
  CHECK_THROWS_AS(parse_affine("2*"), Error);
  CHECK_THROWS_AS(parse_affine("x1 x2"), Error);
  try {
    parse_affine("1 + * 2");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SyntaxError);
    CHECK(std::string(e.what()).find("offset") != std::string::npos);
  }
}

TEST_CASE("format_double scans back exactly") {
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-2.5) == "-2.5");
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 500; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 13) - 6);
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("disk pencil evaluates to the textbook values") {
  LinearMatrixPolynomial d = disk_pencil();
  SymmetricMatrix a = evaluate(d, {{"x1", 0.0}, {"x2", 0.0}});
  CHECK((a - SymmetricMatrix::identity(2)).frobenius_norm() == doctest::Approx(0));

  a = evaluate(d, {{"x1", 1.0}, {"x2", 0.0}});
  CHECK(a.at(0, 0) == doctest::Approx(0));
  CHECK(a.at(1, 1) == doctest::Approx(2));

  a = evaluate(d, {{"x1", 0.0}, {"x2", 1.0}});
  CHECK(a.at(0, 1) == doctest::Approx(1));

  // spectrum at x is {1 - |x|, 1 + |x|}
  a = evaluate(d, {{"x1", 0.6}, {"x2", 0.8}});
  CHECK(min_eigenvalue(a) == doctest::Approx(0).epsilon(1e-12));

  CHECK_THROWS_AS(evaluate(d, {{"x1", 0.0}}), Error);
  CHECK_THROWS_AS(evaluate(d, {{"x1", 0.}, {"x2", 0.}, {"x3", 0.}}), Error);
}

TEST_CASE("validated rejects malformed pencils") {
  LinearMatrixPolynomial d = disk_pencil();
  CHECK(d.blocks == std::vector<int>{2});
  CHECK(d.has_var("x1"));
  CHECK_FALSE(d.has_var("y"));
  CHECK(d.coeff_of("x2").at(0, 1) == doctest::Approx(1));
  CHECK_THROWS_AS(d.coeff_of("nope"), Error);

  LinearMatrixPolynomial bad = d;
  bad.coeffs[0] = SymmetricMatrix(3);
  CHECK_THROWS_AS(validated(bad), Error);

  bad = d;
  bad.vars = {"x1", "x1"};
  CHECK_THROWS_AS(validated(bad), Error);

  bad = d;
  bad.blocks = {1, 2};
  CHECK_THROWS_AS(validated(bad), Error);

  bad = d;
  bad.coeffs.pop_back();
  CHECK_THROWS_AS(validated(bad), Error);
}

TEST_CASE("partial evaluation substitutes and drops variables") {
  LinearMatrixPolynomial d = disk_pencil();
  LinearMatrixPolynomial rest = partial_evaluate(d, {{"x1", 0.3}});
  CHECK(rest.vars == std::vector<std::string>{"x2"});
  CHECK(rest.a0.at(0, 0) == doctest::Approx(0.7));
  CHECK(rest.a0.at(1, 1) == doctest::Approx(1.3));

  // full substitution leaves a constant pencil equal to evaluate()
  LinearMatrixPolynomial all = partial_evaluate(d, {{"x1", 0.3}, {"x2", -0.4}});
  CHECK(all.vars.empty());
  SymmetricMatrix direct = evaluate(d, {{"x1", 0.3}, {"x2", -0.4}});
  CHECK((all.a0 - direct).frobenius_norm() == doctest::Approx(0));

  CHECK_THROWS_AS(partial_evaluate(d, {{"zz", 1.0}}), Error);
}

TEST_CASE("substitute_var rewrites one variable affinely") {
  LinearMatrixPolynomial d = disk_pencil();
  // x2 := 1 - t
  LinearMatrixPolynomial s = substitute_var(d, "x2", parse_affine("1 - t"));
  CHECK(s.has_var("t"));
  CHECK_FALSE(s.has_var("x2"));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 50; ++i) {
    const double x1 = u(rng), t = u(rng);
    SymmetricMatrix lhs = evaluate(s, {{"x1", x1}, {"t", t}});
    SymmetricMatrix rhs = evaluate(d, {{"x1", x1}, {"x2", 1.0 - t}});
    CHECK((lhs - rhs).frobenius_norm() <= 1e-12);
  }
  CHECK_THROWS_AS(substitute_var(d, "nope", parse_affine("t")), Error);
  // reusing the substituted variable on the right is rejected
  CHECK_THROWS_AS(substitute_var(d, "x2", parse_affine("x2 + 1")), Error);
}

TEST_CASE("direct_sum concatenates blocks and unifies variables") {
  LinearMatrixPolynomial d = disk_pencil();
  LinearMatrixPolynomial s1 = scalar_block(parse_affine("1 - x1"));
  LinearMatrixPolynomial sum = direct_sum({d, s1});
  CHECK(sum.dim == 3);
  CHECK(sum.vars == std::vector<std::string>{"x1", "x2"});
  CHECK(sum.blocks == std::vector<int>{2, 1});
  SymmetricMatrix v = evaluate(sum, {{"x1", 0.25}, {"x2", 0.0}});
  CHECK(v.at(2, 2) == doctest::Approx(0.75));
  CHECK(v.at(0, 0) == doctest::Approx(0.75));
  CHECK(v.at(0, 2) == doctest::Approx(0));

  CHECK_THROWS_AS(direct_sum({}), Error);
}

TEST_CASE("scalar and strict positivity gadget blocks") {
  LinearMatrixPolynomial s = scalar_block(parse_affine("2*x1 - 1"));
  CHECK(s.dim == 1);
  CHECK(evaluate(s, {{"x1", 1.0}}).at(0, 0) == doctest::Approx(1));

  LinearMatrixPolynomial g = strict_pos_block(parse_affine("1 - x1"), "lam");
  CHECK(g.dim == 2);
  CHECK(g.has_var("lam"));
  SymmetricMatrix v = evaluate(g, {{"x1", 0.5}, {"lam", 3.0}});
  CHECK(v.at(0, 0) == doctest::Approx(3));
  CHECK(v.at(0, 1) == doctest::Approx(1));
  CHECK(v.at(1, 1) == doctest::Approx(0.5));
  // det = lam * l - 1: psd iff lam >= 0, l >= 0, lam*l >= 1
  CHECK(min_eigenvalue(evaluate(g, {{"x1", 0.5}, {"lam", 2.0}})) >= -1e-12);
  CHECK(min_eigenvalue(evaluate(g, {{"x1", 0.5}, {"lam", 1.0}})) < 0);

  CHECK_THROWS_AS(strict_pos_block(parse_affine("x1"), "x1"), Error);
}

TEST_CASE("homogenize scales the constant term") {
  LinearMatrixPolynomial d = disk_pencil();
  LinearMatrixPolynomial h = homogenize(d, "t");
  CHECK(h.has_var("t"));
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 30; ++i) {
    const double x1 = u(rng), x2 = u(rng);
    SymmetricMatrix at1 = evaluate(h, {{"x1", x1}, {"x2", x2}, {"t", 1.0}});
    CHECK((at1 - evaluate(d, {{"x1", x1}, {"x2", x2}})).frobenius_norm() <= 1e-12);
  }
  SymmetricMatrix at0 = evaluate(h, {{"x1", 1.0}, {"x2", 0.0}, {"t", 0.0}});
  CHECK(at0.at(0, 0) == doctest::Approx(-1));  // pure linear part
  CHECK_THROWS_AS(homogenize(d, "x1"), Error);
}

TEST_CASE("rename and embed preserve evaluation") {
  LinearMatrixPolynomial d = disk_pencil();
  LinearMatrixPolynomial r = rename_vars(d, {{"x1", "u"}, {"x2", "v"}});
  CHECK(r.vars == std::vector<std::string>{"u", "v"});
  SymmetricMatrix a = evaluate(r, {{"u", 0.3}, {"v", 0.4}});
  CHECK((a - evaluate(d, {{"x1", 0.3}, {"x2", 0.4}})).frobenius_norm() <= 1e-12);
  // round-trip
  LinearMatrixPolynomial rr = rename_vars(r, {{"u", "x1"}, {"v", "x2"}});
  CHECK(rr.vars == d.vars);

  CHECK_THROWS_AS(rename_vars(d, {{"x1", "x2"}}), Error);  // collision

  LinearMatrixPolynomial e = embed_vars(d, {"x1", "x2", "x3"});
  CHECK(e.vars.size() == 3);
  CHECK(e.coeff_of("x3").is_zero());
  a = evaluate(e, {{"x1", 0.3}, {"x2", 0.4}, {"x3", 99.0}});
  CHECK((a - evaluate(d, {{"x1", 0.3}, {"x2", 0.4}})).frobenius_norm() <= 1e-12);
  CHECK_THROWS_AS(embed_vars(d, {"x1"}), Error);
  CHECK_THROWS_AS(embed_vars(d, {"x1", "x2", "x2"}), Error);
}

TEST_CASE("reserved auxiliary names") {
  CHECK(is_reserved_name("_aux0"));
  CHECK(is_reserved_name("_aux12"));
  CHECK_FALSE(is_reserved_name("x1"));
  FreshNames names;
  CHECK(names.next() == "_aux0");
  CHECK(names.next() == "_aux1");
}

TEST_CASE("spectrahedron wraps a pencil with no auxiliaries") {
  SemidefRepresentation s = spectrahedron(disk_pencil());
  CHECK(s.visible == std::vector<std::string>{"x1", "x2"});
  CHECK(s.auxiliary.empty());
  CHECK(s.relint_count == 0);
}
