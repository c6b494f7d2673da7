#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <json.hpp>

#include "circfactor/kigen.hh"

using namespace circfactor;

static MultiPoly P(const std::string& s, std::vector<std::string> vars = {}) { return parse_poly(s, vars); }

// Oracle: brute-force pairwise intersection sizes.
static int max_intersection(const Design& d) {
  int best = 0;
  for (size_t i = 0; i < d.sets.size(); ++i)
    for (size_t j = i + 1; j < d.sets.size(); ++j) {
      int c = 0;
      for (int a : d.sets[i])
        for (int b : d.sets[j]) c += (a == b);
      best = std::max(best, c);
    }
  return best;
}

TEST_CASE("prime powers") {
  std::vector<int> pp;
  for (int q = 1; q <= 32; ++q)
    if (is_prime_power(q)) pp.push_back(q);
  CHECK(pp == std::vector<int>{2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32});
  CHECK(next_prime_power(6) == 7);
  CHECK(next_prime_power(1) == 2);
}

TEST_CASE("build_design examples") {
  Design d = build_design(4, 2, 2);
  CHECK(d.sigma == 2);
  CHECK(d.mu == 4);
  CHECK(d.sets.size() == 4);
  CHECK(max_intersection(d) <= 1);
  CHECK(check_design(d));
  Design disjoint = build_design(3, 3, 1);
  CHECK(max_intersection(disjoint) == 0);
  Design d9 = build_design(9, 3, 2);
  CHECK(max_intersection(d9) < 2);
  CHECK(check_design(d9));
  CHECK_THROWS_AS(build_design(5, 2, 2), InfeasibleParameters);
  CHECK_THROWS_AS(build_design(4, 2, 3), InfeasibleParameters);
  // Deterministic and JSON-serializable.
  CHECK(design_to_json(build_design(9, 3, 2)) == design_to_json(d9));
  auto j = nlohmann::json::parse(design_to_json(d));
  CHECK(j["mu"] == 4);
  CHECK(j["sets"].size() == 4);
}

TEST_CASE("designs are valid for n <= 200") {
  for (int n = 1; n <= 200; n += 7)
    for (int q : {2, 3, 4, 5, 7, 8, 9, 11, 16}) {
      for (int rho = 1; rho <= std::min(q, 3); ++rho) {
        double cap = 1;
        for (int i = 0; i < rho; ++i) cap *= q;
        if (cap < n) continue;
        Design d = build_design(n, q, rho);
        CHECK(d.sigma == q);
        CHECK(max_intersection(d) < rho);
        CHECK(check_design(d));
      }
    }
}

TEST_CASE("default_hard_poly") {
  CHECK(default_hard_poly(4) == P("w1*w2 + w1*w3 + w1*w4 + w2*w3 + w2*w4 + w3*w4", {"w1", "w2", "w3", "w4"}));
  CHECK(default_hard_poly(2) == P("w1*w2", {"w1", "w2"}));
  CHECK(default_hard_degree(16) == 3);
  CHECK(default_hard_degree(17) == 4);
  for (int s = 2; s <= (1 << 16); s = s * 3 / 2 + 1) {
    // ceil(log2 log2 s) + 1, computed with floating point as an oracle.
    int oracle = std::max(2, static_cast<int>(std::ceil(std::log2(std::log2(s)) - 1e-12)) + 1);
    CHECK(default_hard_degree(s) == std::min(s, oracle));
  }
  for (const auto& name : hard_family_names()) {
    const auto& f = hard_family(name);
    MultiPoly g = f.make(5, "v");
    CHECK(g.nvars() == 5);
    CHECK(g.total_degree() == f.degree(5));
  }
}

TEST_CASE("build_ki_map") {
  Design d{2, 2, 4, 1, {{0, 1}, {2, 3}}};
  KIMap k = build_ki_map(P("w1*w2"), d);
  REQUIRE(k.images.size() == 2);
  CHECK(k.images[0] == P("w1*w2", k.w));
  CHECK(k.images[1] == P("w3*w4", k.w));
  Circuit x = circuit_from_poly(P("x1 + x2"));
  Circuit comp = substitute(x, k.substitution({"x1", "x2"}));
  CHECK(dense_from_circuit(comp).with_vars(k.w) == P("w1*w2 + w3*w4", k.w));
  KIMap kc = build_ki_map(P("7", {"a", "b"}), d);
  for (const auto& img : kc.images) CHECK(img == P("7", kc.w));
  CHECK_THROWS_AS(build_ki_map(P("a*b*c"), d), ArityMismatch);
}

TEST_CASE("KI composition commutes with evaluation") {
  KIMap k = ki_for(6, Scalar(1, 3), "esym");
  CHECK(check_design(k.design));
  std::vector<std::string> xs{"x1", "x2", "x3", "x4", "x5", "x6"};
  MultiPoly p = P("x1*x2 - x3^2 + x4*x5*x6 + 2", xs);
  Circuit comp = substitute(circuit_from_poly(p), k.substitution(xs));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> dist(-3, 3);
  for (int t = 0; t < 20; ++t) {
    std::vector<Coeff> w;
    std::map<std::string, Coeff> wm;
    for (const auto& v : k.w) {
      w.push_back(Coeff(dist(rng)));
      wm[v] = w.back();
    }
    CHECK(eval_circuit1(comp, wm) == evaluate(p, k.apply(w)));
  }
}

TEST_CASE("epsilon parameter mapping") {
  // n = 64, eps = 1/3: ceil(64^(1/3)) = 4, rho = 6 capped at 4.
  KIParams a = ki_parameters(64, Scalar(1, 3));
  CHECK(a.sigma == 4);
  CHECK(a.rho == 4);
  CHECK(a.mu == 16);
  // n = 6: q = 2 cannot host 6 sets with rho <= 2, so q moves to 3.
  KIParams b = ki_parameters(6, Scalar(1, 3));
  CHECK(b.sigma == 3);
  CHECK(b.rho == 3);
  KIParams c = ki_parameters(1, Scalar(1, 3));
  CHECK(c.rho == 1);
  for (int n = 1; n <= 60; ++n) {
    KIParams p = ki_parameters(n, Scalar(1, 4));
    CHECK(check_design(build_design(n, p.sigma, p.rho)));
  }
  CHECK(ki_to_json(ki_for(3, Scalar(1, 3), "nw")) == ki_to_json(ki_for(3, Scalar(1, 3), "nw")));
}
