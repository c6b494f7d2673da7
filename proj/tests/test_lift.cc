#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "circfactor/lift.hh"

using namespace circfactor;

static MultiPoly P(const std::string& s, std::vector<std::string> vars = {}) { return parse_poly(s, vars); }

// Oracle: binomial series of (1 + T)^(1/2), sign s for the branch.
static MultiPoly sqrt_series(int k, int s) {
  MultiPoly r({"T"});
  Scalar c = 1;
  for (int j = 0; j < k; ++j) {
    Exponent e{j};
    r.add_term(e, Coeff(c * s));
    c = c * (Scalar(1, 2) - j) / (j + 1);
  }
  return r;
}

TEST_CASE("check_regularized") {
  CHECK(check_regularized(P("z + T*x1")));
  CHECK(!check_regularized(P("z + x1")));
  CHECK(check_regularized(P("z^3 - 1")));
}

TEST_CASE("newton_lift_linear examples") {
  MultiPoly p = P("z^2 - 1 - T", {"T", "z"});
  ApproxRoot r = newton_lift_linear(p, Coeff(1), 3);
  CHECK(r.phi == P("1 + T/2 - T^2/8", {"T"}));
  CHECK(r.phi == sqrt_series(3, 1));
  CHECK(newton_lift_linear(p, Coeff(-1), 2).phi == P("-1 - T/2", {"T"}));
  CHECK(newton_lift_linear(p, Coeff(1), 1).phi == P("1", {"T"}));
  CHECK_THROWS_AS(newton_lift_linear(P("(z - 1)^2 - T", {"T", "z"}), Coeff(1), 3), DegenerateRoot);
  CHECK_THROWS_AS(newton_lift_linear(p, Coeff(2), 3), NotARoot);
}

TEST_CASE("newton_lift_quadratic examples") {
  MultiPoly p = P("z^2 - 1 - T", {"T", "z"});
  auto [r, w] = newton_lift_quadratic(p, Coeff(1), 4);
  CHECK(r.phi == P("1 + T/2 - T^2/8 + T^3/16", {"T"}));
  CHECK(r.phi == sqrt_series(4, 1));
  CHECK(w.sigma[0] == P("1/2", {"T"}));
  CHECK(w.sigma.size() == 3);
}

TEST_CASE("check_approx_root examples") {
  MultiPoly p = P("z^2 - 1 - T", {"T", "z"});
  CHECK(check_approx_root(p, P("1 + T/2"), 2));
  CHECK(!check_approx_root(p, P("1 + T/2"), 3));
  MultiPoly q = P("(z - 1 - T*x)*(z + 2)", {"T", "x", "z"});
  for (int k = 2; k <= 6; ++k) CHECK(check_approx_root(q, P("1 + T*x"), k));
  CHECK(!check_approx_root(q, P("1 + T*x"), 1));
}

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(uint64_t s) : rng(s) {}
  int uni(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }
  // Monic in z, T-regularized, with P(0,0,z) = (z - alpha) * g(z), g(alpha) != 0.
  MultiPoly poly(int alpha, int dz) {
    std::vector<std::string> vars{"T", "x", "y", "z"};
    MultiPoly z = MultiPoly::variable("z", vars);
    MultiPoly base = z - MultiPoly::constant(Coeff(alpha), vars);
    MultiPoly g = z.pow(dz - 1);
    for (int i = 0; i < dz - 1; ++i) g += MultiPoly::constant(Coeff(uni(-3, 3)), vars) * z.pow(i);
    if (evaluate(g, {Coeff(0), Coeff(0), Coeff(0), Coeff(alpha)}).is_zero()) g += MultiPoly::constant(Coeff(1), vars);
    MultiPoly p = base * g;
    for (int t = 0; t < 4; ++t) {
      Exponent e{uni(1, 2), uni(0, 1), uni(0, 1), uni(0, dz - 1)};
      if (e[1] + e[2] > e[0]) e[1] = 0;
      p.add_term(e, Coeff(uni(-3, 3)));
    }
    return p;
  }
};

TEST_CASE("linear and quadratic lifts agree") {
  Gen g(14);
  for (int t = 0; t < 30; ++t) {
    int alpha = g.uni(-2, 2);
    MultiPoly p = g.poly(alpha, g.uni(1, 3));
    REQUIRE(check_regularized(p));
    int k = g.uni(1, 7);
    ApproxRoot a = newton_lift_linear(p, Coeff(alpha), k);
    auto [b, w] = newton_lift_quadratic(p, Coeff(alpha), k);
    CHECK(a.phi == b.phi);
    CHECK(check_approx_root(p, a.phi, k));
    // Each stage's inverse witness.
    MultiPoly dp = derivative(p, "z");
    for (size_t i = 0; i < w.sigma.size(); ++i) {
      int m = 1 << i;
      ApproxRoot ai = newton_lift_linear(p, Coeff(alpha), m);
      MultiPoly prod = poly_trunc(w.sigma[i] * eval_at_root_trunc(dp, ai.phi, m), {"T"}, m);
      CHECK(prod == MultiPoly::constant(Coeff(1), prod.vars()));
    }
    // A longer lift truncates to the shorter one.
    ApproxRoot longer = newton_lift_linear(p, Coeff(alpha), k + 3);
    CHECK(poly_trunc(longer.phi, {"T"}, k) == a.phi);
  }
}

TEST_CASE("lifting over a number field") {
  auto K = number_field({Scalar(-2), Scalar(0), Scalar(1)});
  MultiPoly p = P("z^2 - 2 - T*x", {"T", "x", "z"});
  Coeff u = Coeff::generator(K);
  ApproxRoot r = newton_lift_linear(p, u, 5);
  CHECK(check_approx_root(p, r.phi, 5));
  auto [q, w] = newton_lift_quadratic(p, u, 5);
  CHECK(q.phi == r.phi);
  // Conjugate root: phi(-u) pairs with phi(u) to z^2 - 2 - T*x mod T^5.
  ApproxRoot c = newton_lift_linear(p, -u, 5);
  MultiPoly zz = MultiPoly::variable("z", {"T", "x", "z"});
  MultiPoly prod = poly_trunc((zz - r.phi) * (zz - c.phi), {"T"}, 5);
  CHECK(prod == p.with_field(K));
}

TEST_CASE("exact polynomial roots are reproduced") {
  Gen g(3);
  std::vector<std::string> vars{"T", "x", "z"};
  MultiPoly z = MultiPoly::variable("z", vars);
  for (int t = 0; t < 15; ++t) {
    int a1 = g.uni(-3, 3), a2 = a1 + g.uni(1, 3);
    MultiPoly r1 = P(std::to_string(a1) + " + (" + std::to_string(g.uni(-2, 2)) + ")*T*x + T^2", vars);
    MultiPoly r2 = P(std::to_string(a2) + " + T", vars);
    MultiPoly p = (z - r1) * (z - r2);
    ApproxRoot r = newton_lift_linear(p, Coeff(a1), 4);
    CHECK(r.phi == r1.with_vars(r.phi.vars()));
  }
}

TEST_CASE("homomorphism stability") {
  Gen g(5);
  for (int t = 0; t < 10; ++t) {
    int alpha = g.uni(-2, 2);
    MultiPoly p = g.poly(alpha, 2);
    int k = 4;
    ApproxRoot r = newton_lift_linear(p, Coeff(alpha), k);
    std::map<std::string, MultiPoly> lam{{"T", P(std::to_string(g.uni(1, 3)) + "*T", {"T"})},
                                         {"x", P("w1*w2 + 1", {"w1", "w2"})},
                                         {"y", P("w2 - w1", {"w1", "w2"})}};
    MultiPoly p2 = substitute(p, lam);
    MultiPoly phi2 = substitute(r.phi, lam);
    CHECK(check_approx_root(p2, phi2, k));
  }
}

TEST_CASE("mul_trunc equals truncating the full product") {
  Gen g(21);
  for (int t = 0; t < 20; ++t) {
    MultiPoly a = g.poly(g.uni(-2, 2), g.uni(1, 3)), b = g.poly(g.uni(-2, 2), g.uni(1, 3));
    int k = g.uni(1, 4);
    CHECK(mul_trunc(a, b, "T", k) == poly_trunc(a * b, {"T"}, k));
  }
  CHECK(mul_trunc(P("x + 1", {"x"}), P("x - 1", {"x"}), "T", 1) == P("x^2 - 1", {"x"}));
}
