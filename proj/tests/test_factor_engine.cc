#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "circfactor/factor_engine.hh"

using namespace circfactor;

static MultiPoly P(const std::string& s, std::vector<std::string> vars = {}) { return parse_poly(s, vars); }
static Circuit C(const std::string& s, std::vector<std::string> vars = {}) { return circuit_from_poly(P(s, vars)); }

static std::vector<std::string> texts(const FactorizationResult& r) {
  std::vector<std::string> out;
  for (const auto& f : r.factors) out.push_back(f.dense->to_string() + "^" + std::to_string(f.multiplicity));
  std::sort(out.begin(), out.end());
  return out;
}

static std::vector<std::string> oracle_texts(const MultiPoly& p) {
  std::vector<std::string> out;
  for (const auto& [g, m] : dense_factor_all(p).factors) out.push_back(g.to_string() + "^" + std::to_string(m));
  std::sort(out.begin(), out.end());
  return out;
}

TEST_CASE("factor_all examples") {
  FactorStats st;
  auto a = factor_all(C("x^2 - y^2"), {}, &st);
  CHECK(a.factors.size() == 2);
  CHECK(a.unit == 1);
  CHECK(factor_all(C("x^2 + y^2 + 1")).factors.size() == 1);
  auto b = factor_all(C("(x+y+1)*(x*y-1)*(x-y)"));
  CHECK(b.factors.size() == 3);
  auto c = factor_all(C("(x+y)^2*(x-y)", {"x", "y"}));
  REQUIRE(c.factors.size() == 2);
  std::map<std::string, int> mult;
  for (const auto& f : c.factors) mult[f.dense->to_string()] = f.multiplicity;
  CHECK(mult["x + y"] == 2);
  CHECK(mult["x - y"] == 1);
  auto k = factor_all(Circuit::constant_circuit(5));
  CHECK(k.factors.empty());
  CHECK(k.unit == 5);
  CHECK_THROWS_AS(factor_all(Circuit::constant_circuit(0)), DegenerateInput);
  auto u = factor_all(C("3*x^2 - 3"));
  CHECK(u.unit == 3);
  CHECK(u.factors.size() == 2);
}

TEST_CASE("factor_squarefree agrees with the dense oracle") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> co(-3, 3), ex(0, 2);
  std::vector<std::string> vars{"x", "y", "z"};
  FactorStats st;
  for (int t = 0; t < 12; ++t) {
    MultiPoly f = MultiPoly::constant(Coeff(1), vars);
    for (int i = 0; i < 1 + t % 3; ++i) {
      MultiPoly h(vars);
      for (int j = 0; j < 3; ++j) h.add_term({ex(rng) % 2, ex(rng) % 2, ex(rng)}, Coeff(co(rng)));
      if (h.is_constant()) continue;
      f *= h.pow(1 + (i + t) % 2);
    }
    if (f.is_constant()) continue;
    auto r = factor_all(circuit_from_poly(f), {}, &st);
    CHECK(texts(r) == oracle_texts(f));
  }
  CHECK(st.ki_runs > 0);
}

TEST_CASE("preprocess gives a monic regularized polynomial") {
  Circuit c = C("x*y + x^2 - 1");
  auto pre = preprocess(c);
  MultiPoly t = dense_from_circuit(pre.tilde);
  CHECK(t.degree("z") == 2);
  CHECK(check_regularized(t));
  CHECK(pre.info.degree == 2);
  // Leading z-coefficient is exactly 1.
  CHECK(coefficients_in(t, "z")[2].is_constant());
  CHECK(coefficients_in(t, "z")[2].constant_term() == Coeff(1));
}

TEST_CASE("minimal_poly_from_root examples") {
  KIMap ki = ki_for(1, Scalar(1, 3), "esym");
  // z^2 - 1 - T with D = 1, Dz = 2: root 1 + T/2 - ...
  MultiPoly p = P("z^2 - 1 - T", {"T", "z"});
  auto r = newton_lift_quadratic(p, Coeff(1), 5).first;
  for (auto path : {MinPolyPathway::Symbolic, MinPolyPathway::Circuit}) {
    Circuit g = minimal_poly_from_root(r, 1, 2, ki, path);
    CHECK(dense_from_circuit(g).with_vars({"T", "z"}) == p);
  }
  // (z - 1 - T)(z + 1): the root at 1 has minimal polynomial z - 1 - T.
  MultiPoly q = P("(z - 1 - T)*(z + 1)", {"T", "z"});
  auto rq = newton_lift_quadratic(q, Coeff(1), 3).first;
  for (auto path : {MinPolyPathway::Symbolic, MinPolyPathway::Circuit}) {
    Circuit g = minimal_poly_from_root(rq, 1, 1, ki, path);
    CHECK(dense_from_circuit(g).with_vars({"T", "z"}) == P("z - 1 - T", {"T", "z"}));
  }
  // Over K = Q(sqrt 2): z^2 - 2 - T*x, root sqrt2 + ...
  const NumberField* K = number_field({Scalar(-2), Scalar(0), Scalar(1)});
  MultiPoly s = P("z^2 - 2 - T*x", {"T", "x", "z"});
  auto rs = newton_lift_quadratic(s, Coeff::generator(K), 5).first;
  for (auto path : {MinPolyPathway::Symbolic, MinPolyPathway::Circuit}) {
    Circuit g = minimal_poly_from_root(rs, 1, 2, ki, path);
    CHECK(dense_from_circuit(g).with_vars({"T", "x", "z"}) == s);
  }
  CHECK_THROWS_AS(minimal_poly_from_root(rq, 2, 2, ki), HypothesisViolated);
}

TEST_CASE("fallback off and JSON round trip") {
  FactorOptions opt;
  opt.fallback = false;
  auto r = factor_all(C("(x^2 + y)*(x - y + 2)"), opt);
  CHECK(r.factors.size() == 2);
  std::string js = result_to_json(r);
  auto back = result_from_json(js);
  REQUIRE(back.factors.size() == 2);
  CHECK(back.unit == r.unit);
  for (size_t i = 0; i < 2; ++i) {
    CHECK(*back.factors[i].dense == *r.factors[i].dense);
    CHECK(back.factors[i].multiplicity == r.factors[i].multiplicity);
    CHECK(dense_from_circuit(back.factors[i].circuit) == *r.factors[i].dense);
  }
  CHECK_THROWS_AS(result_from_json("{\"schema\": 2}"), ParseError);
  CHECK_THROWS_AS(result_from_json("not json"), ParseError);
}
