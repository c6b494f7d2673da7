#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "circfactor/certify.hh"

using namespace circfactor;

static MultiPoly P(const std::string& s, std::vector<std::string> vars = {"T", "x", "z"}) { return parse_poly(s, vars); }

static std::vector<MultiPoly> low(const MultiPoly& p) {
  auto c = coefficients_in(p, "z");
  c.pop_back();
  return c;
}

TEST_CASE("div_test examples") {
  CHECK(div_test(low(P("z^2 - 1")), low(P("z - 1"))).is_zero());
  MultiPoly r = div_test(low(P("z^2 - 1")), low(P("z - 2")));
  CHECK(!r.is_zero());
  CHECK(!dense_divide(P("z^2 - 1"), P("z - 2"), "z").remainder.is_zero());
  MultiPoly q;
  CHECK(div_test(low(P("z^3 + x*z + T")), low(P("z^3 + x*z + T")), "z", &q).is_zero());
  CHECK(q == MultiPoly::constant(Coeff(1), q.vars()));
  CHECK_THROWS_AS(div_test(low(P("z - 1")), low(P("z^2 - 1"))), DegreeOrder);
}

TEST_CASE("div_test agrees with dense division") {
  // Exhaustive over small integer coefficients, degree <= 3.
  std::vector<int> vals{-1, 0, 1};
  auto all = [&](int deg) {
    std::vector<MultiPoly> out;
    int count = 1;
    for (int i = 0; i < deg; ++i) count *= 3;
    for (int k = 0; k < count; ++k) {
      MultiPoly f = P("z").pow(deg);
      int m = k;
      for (int i = 0; i < deg; ++i, m /= 3) f += P("z").pow(i) * Coeff(vals[m % 3]);
      out.push_back(f);
    }
    return out;
  };
  long agree = 0;
  for (int D = 1; D <= 3; ++D)
    for (const auto& f : all(D))
      for (int t = 1; t <= D; ++t)
        for (const auto& g : all(t)) {
          MultiPoly q;
          bool zero = div_test(low(f), low(g), "z", &q).is_zero();
          auto dd = dense_divide(f, g, "z");
          CHECK(zero == dd.remainder.is_zero());
          if (zero) CHECK(q.with_vars(dd.quotient.vars()) == dd.quotient);
          ++agree;
        }
  CHECK(agree > 100);
  // Random pairs over Q[T, x].
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> co(-2, 2), ex(0, 1);
  auto rnd = [&](int deg) {
    MultiPoly f = P("z").pow(deg);
    for (int i = 0; i < deg; ++i)
      for (int j = 0; j < 2; ++j) f.add_term({ex(rng), ex(rng), i}, Coeff(co(rng)));
    return f;
  };
  for (int k = 0; k < 60; ++k) {
    MultiPoly g = rnd(1 + k % 3);
    MultiPoly f = k % 2 ? g * rnd(1 + k % 2) : rnd(2 + k % 3);
    MultiPoly q;
    bool zero = div_test(low(f), low(g), "z", &q).is_zero();
    auto dd = dense_divide(f, g, "z");
    CHECK(zero == dd.remainder.is_zero());
    if (k % 2) CHECK(zero);
    if (zero) CHECK(q.with_vars(dd.quotient.vars()) == dd.quotient);
  }
}

TEST_CASE("divides_monic examples") {
  CHECK(divides_monic(P("z - 1 - T"), P("(z - 1 - T)*(z + 1)")));
  CHECK(!divides_monic(P("z - 1 - 1/2*T"), P("z^2 - 1 - T")));
  // The dense remainder of that pair is T^2/4.
  CHECK(dense_divide(P("z^2 - 1 - T"), P("z - 1 - 1/2*T"), "z").remainder == P("1/4*T^2"));
  CHECK(divides_monic(P("z^2 - 1 - T"), P("z^2 - 1 - T")));
  CHECK_THROWS_AS(divides_monic(P("2*z - 1"), P("z^2 - 1")), NotMonic);
  CHECK(!divides_monic(P("z^3 - 1"), P("z^2 - 1")));
}

TEST_CASE("irreducibility_certificate examples") {
  auto a = irreducibility_certificate(P("z^2 - 1 - T"), Scalar(1, 3));
  CHECK(a.verdict == Verdict::Irreducible);
  CHECK(a.order == 2);
  CHECK(a.subsets_tested == 2);
  auto b = irreducibility_certificate(P("(z - 1 - T)*(z + 1)"), Scalar(1, 3));
  REQUIRE(b.verdict == Verdict::Reducible);
  CHECK(b.subset == std::vector<int>{0});
  CHECK(b.witness.with_vars({"T", "x", "z"}) == P("z - 1 - T"));
  CHECK(irreducibility_certificate(P("z - T"), Scalar(1, 3)).verdict == Verdict::Irreducible);
  CHECK_THROWS_AS(irreducibility_certificate(P("z^2 - x"), Scalar(1, 3)), HypothesisViolated);
  CHECK_THROWS_AS(irreducibility_certificate(P("z^2"), Scalar(1, 3)), HypothesisViolated);
  CertifyOptions small;
  small.dz_cap = 1;
  auto c = irreducibility_certificate(P("z^2 - 1 - T"), Scalar(1, 3), small);
  CHECK(c.verdict == Verdict::Infeasible);
  // An irreducible class of degree 2 next to a linear one.
  auto d = irreducibility_certificate(P("(z^2 - 2 - T*x)*(z - 1 + T)"), Scalar(1, 3));
  REQUIRE(d.verdict == Verdict::Reducible);
  CHECK(divides_monic(d.witness, P("(z^2 - 2 - T*x)*(z - 1 + T)")));
}

TEST_CASE("certificate agrees with the dense oracle") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> co(-2, 2), ex(0, 1), roll(0, 3);
  // Monic in z and regularized: x only together with T.
  auto rnd = [&](int deg) {
    MultiPoly f = P("z").pow(deg);
    for (int i = 0; i < deg; ++i) {
      f.add_term({0, 0, i}, Coeff(co(rng)));
      int tx = ex(rng);
      f.add_term({1 + ex(rng) * tx, tx, i}, Coeff(co(rng)));
    }
    return f;
  };
  int tested = 0, reducible = 0;
  for (int k = 0; k < 80 && tested < 40; ++k) {
    MultiPoly p = roll(rng) ? rnd(1 + k % 3) * rnd(1 + k % 2) : rnd(2 + k % 3);
    QPoly base;
    for (const auto& [e, c] : p.terms())
      if (e[0] == 0) {
        if (static_cast<int>(base.size()) <= e[2]) base.resize(e[2] + 1);
        base[e[2]] += c.rational();
      }
    qpoly::trim(base);
    if (qpoly::degree(qpoly::gcd(base, qpoly::derivative(base))) > 0) continue;
    ++tested;
    auto cert = irreducibility_certificate(p, Scalar(1, 3));
    auto oracle = dense_factor_all(p);
    bool irr = oracle.factors.size() == 1 && oracle.factors[0].second == 1;
    CHECK(cert.verdict == (irr ? Verdict::Irreducible : Verdict::Reducible));
    if (!irr) ++reducible;
  }
  CHECK(tested >= 30);
  CHECK(reducible >= 5);
}

TEST_CASE("verify_factorization") {
  Circuit c = circuit_from_poly(parse_poly("(x+y)^2*(x-y)", {"x", "y"}));
  auto r = factor_all(c);
  CHECK(verify_factorization(c, r));
  auto bad = r;
  for (auto& f : bad.factors) f.multiplicity = 1;
  CHECK(!verify_factorization(c, bad));
  auto tampered = r;
  tampered.factors[0].circuit = circuit_from_poly(parse_poly("x + 2*y", {"x", "y"}));
  tampered.factors[0].dense.reset();
  auto rep = verify_factorization_report(c, tampered);
  CHECK(!rep.ok);
  CHECK(rep.stage == "grid");
  // Unit mismatch.
  auto scaled = r;
  scaled.unit = 2;
  CHECK(!verify_factorization(c, scaled));
  // Larger inputs go through the fixed point set.
  Circuit big = circuit_from_poly(parse_poly("(a*b + c*d - e*f)*(a + b + c + d + e + f + 1)^2"));
  auto rb = factor_all(big);
  auto rep2 = verify_factorization_report(big, rb);
  CHECK(rep2.ok);
  CHECK(rep2.points == 200);
}
