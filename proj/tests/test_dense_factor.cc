#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "circfactor/factor_engine.hh"

using namespace circfactor;

static MultiPoly P(const std::string& s, std::vector<std::string> vars = {}) { return parse_poly(s, vars); }
static QPoly Q(std::initializer_list<long> c) {
  QPoly p;
  for (long x : c) p.push_back(Scalar(x));
  return p;
}

static QPoly multiply_back(const std::vector<UnivariateFactor>& fs) {
  QPoly r{Scalar(1)};
  for (const auto& f : fs) r = qpoly::mul(r, qpoly::pow(f.factor, f.multiplicity));
  return r;
}

// Oracle: rational roots of an integer polynomial by the rational root test.
static bool has_rational_root(const QPoly& f) {
  mpz_class l = 1;
  for (const auto& c : f) l = lcm(l, mpz_class(c.get_den()));
  std::vector<mpz_class> z;
  for (const auto& c : f) z.push_back(mpz_class(c * l));
  if (z[0] == 0) return true;
  auto divisors = [](mpz_class n) {
    std::vector<long> d;
    n = abs(n);
    for (long i = 1; i <= n.get_si(); ++i)
      if (n % i == 0) d.push_back(i);
    return d;
  };
  for (long p : divisors(z[0]))
    for (long q : divisors(z.back()))
      for (int s : {-1, 1})
        if (qpoly::eval(f, Scalar(s * p, q)) == 0) return true;
  return false;
}

TEST_CASE("univariate_factor_Q examples") {
  auto a = univariate_factor_Q(Q({-1, 0, 1}));
  REQUIRE(a.size() == 2);
  CHECK(a[0].factor == Q({-1, 1}));
  CHECK(a[1].factor == Q({1, 1}));
  auto b = univariate_factor_Q(Q({-2, 0, 1}));
  REQUIRE(b.size() == 1);
  CHECK(!has_rational_root(Q({-2, 0, 1})));
  // (z-1)^2 (z^2+1)
  QPoly c = qpoly::mul(qpoly::pow(Q({-1, 1}), 2), Q({1, 0, 1}));
  auto fc = univariate_factor_Q(c);
  REQUIRE(fc.size() == 2);
  CHECK(fc[0].factor == Q({-1, 1}));
  CHECK(fc[0].multiplicity == 2);
  CHECK(fc[1].factor == Q({1, 0, 1}));
  CHECK(multiply_back(fc) == c);
  CHECK(univariate_factor_Q(Q({5})).empty());
}

TEST_CASE("univariate factorization round trip") {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<int> co(-6, 6), dg(1, 4), cnt(1, 4), mu(1, 2);
  for (int t = 0; t < 60; ++t) {
    QPoly f{Scalar(1)};
    int k = cnt(rng);
    for (int i = 0; i < k; ++i) {
      QPoly g(dg(rng) + 1);
      for (auto& c : g) c = co(rng);
      g.back() = 1 + (co(rng) + 6) % 3;
      f = qpoly::mul(f, qpoly::pow(g, mu(rng)));
    }
    qpoly::trim(f);
    if (qpoly::degree(f) < 1) continue;
    auto fs = univariate_factor_Q(f);
    CHECK(multiply_back(fs) == qpoly::monic(f));
    for (const auto& u : fs) {
      if (qpoly::degree(u.factor) >= 2) CHECK(!has_rational_root(u.factor));
      // Oracle for degree <= 3: irreducible iff no rational root.
      if (qpoly::degree(u.factor) <= 3) CHECK((qpoly::degree(u.factor) == 1 || !has_rational_root(u.factor)));
    }
  }
  // Swinnerton-Dyer style: x^4 - 10x^2 + 1 is irreducible but splits mod every prime.
  CHECK(univariate_factor_Q(Q({1, 0, -10, 0, 1})).size() == 1);
  // Cyclotomic product.
  auto cyc = univariate_factor_Q(Q({-1, 0, 0, 0, 0, 0, 1}));
  CHECK(cyc.size() == 4);
}

TEST_CASE("dense_multivariate_factor examples") {
  auto a = dense_multivariate_factor(P("(y - x)*(y + x + 1)", {"x", "y"}), "y");
  REQUIRE(a.size() == 2);
  CHECK(a[0] * a[1] == P("(y - x)*(y + x + 1)", {"x", "y"}));
  CHECK_THROWS_AS(dense_multivariate_factor(P("y^2 - x", {"x", "y"}), "y"), HypothesisViolated);
  CHECK_THROWS_AS(dense_multivariate_factor(P("2*y - x", {"x", "y"}), "y"), HypothesisViolated);
  // (y-1)(y-2)(y-x-3): projection (y-1)(y-2)(y-3) is squarefree.
  MultiPoly c = P("(y-1)*(y-2)*(y-x-3)", {"x", "y"});
  auto fc = dense_multivariate_factor(c, "y");
  CHECK(fc.size() == 3);
  MultiPoly prod = P("1", {"x", "y"});
  for (auto& f : fc) prod *= f;
  CHECK(prod == c);
  // Irreducible with reducible projection needs recombination.
  MultiPoly d = P("y^2 - 1 - x", {"x", "y"});
  CHECK(dense_multivariate_factor(d, "y").size() == 1);
}

TEST_CASE("dense_factor_all round trip") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> co(-3, 3), ex(0, 2);
  std::vector<std::string> vars{"x", "y", "z"};
  for (int t = 0; t < 25; ++t) {
    MultiPoly f = MultiPoly::constant(Coeff(1 + t % 4), vars);
    int k = 1 + t % 3;
    int planted = 0;
    for (int i = 0; i < k; ++i) {
      MultiPoly h(vars);
      for (int j = 0; j < 3; ++j) h.add_term({ex(rng), ex(rng), ex(rng)}, Coeff(co(rng)));
      if (h.is_constant()) continue;
      f *= h.pow(1 + i % 2);
      ++planted;
    }
    auto r = dense_factor_all(f);
    MultiPoly back = MultiPoly::constant(r.unit, vars);
    int count = 0;
    for (const auto& [g, m] : r.factors) {
      back *= g.pow(m);
      count += 1;
      CHECK(!g.is_constant());
    }
    CHECK(back == f);
    CHECK(count >= planted);
  }
  auto r = dense_factor_all(P("x^2 - y^2"));
  CHECK(r.factors.size() == 2);
  auto s = dense_factor_all(P("x^2 + y^2 + 1"));
  CHECK(s.factors.size() == 1);
}
