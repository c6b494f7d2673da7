#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "circfactor/polyring.hh"

using namespace circfactor;

static MultiPoly P(const std::string& s, std::vector<std::string> vars = {}) { return parse_poly(s, vars); }

TEST_CASE("canonical text round trip") {
  MultiPoly p = P("3/2*x1^2*z - T + 1", {"T", "x1", "z"});
  CHECK(p.to_string() == "3/2*x1^2*z - T + 1");
  CHECK(P(p.to_string(), {"T", "x1", "z"}) == p);
  CHECK(P("(x+y)^2 - 2*x*y").to_string() == "x^2 + y^2");
  CHECK(P("x/2 - x/2").is_zero());
  CHECK_THROWS_AS(P("2x"), ParseError);
  CHECK_THROWS_AS(P("x +"), ParseError);
}

TEST_CASE("poly_trunc") {
  MultiPoly q = P("1 + T + T^3");
  CHECK(poly_trunc(q, {"T"}, 2) == P("1 + T"));
  CHECK(poly_trunc(poly_trunc(q, {"T"}, 2), {"T"}, 2) == poly_trunc(q, {"T"}, 2));
  CHECK(poly_trunc(P("x^2 + x*y + y + 1"), {"x", "y"}, 2) == P("y + 1"));
}

TEST_CASE("hom_component") {
  MultiPoly q = P("x^2 + x*y + 3");
  CHECK(hom_component(q, {"x", "y"}, 2) == P("x^2 + x*y"));
  CHECK(hom_component(q, {"x", "y"}, 0) == P("3"));
  MultiPoly sum;
  for (int i = 0; i <= 2; ++i) sum += hom_component(q, {"x", "y"}, i);
  CHECK(sum == q);
}

TEST_CASE("esym / psym") {
  // Oracle: power sums straight from the roots {1,2,3}.
  std::vector<Scalar> roots{1, 2, 3};
  std::vector<Scalar> p_oracle(3);
  for (int k = 1; k <= 3; ++k)
    for (auto r : roots) {
      Scalar t = 1;
      for (int i = 0; i < k; ++i) t *= r;
      p_oracle[k - 1] += t;
    }
  std::vector<Scalar> e{6, 11, 6};
  CHECK(esym_to_psym(e) == p_oracle);
  CHECK(p_oracle == std::vector<Scalar>{6, 14, 36});
  CHECK(esym_to_psym(std::vector<Scalar>(4)) == std::vector<Scalar>(4));
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> num(-20, 20), den(1, 9), len(0, 12);
  for (int t = 0; t < 200; ++t) {
    std::vector<Scalar> v(len(rng));
    for (auto& x : v) x = make_scalar(num(rng), den(rng));
    CHECK(psym_to_esym(esym_to_psym(v)) == v);
    CHECK(esym_to_psym(psym_to_esym(v)) == v);
  }
}

TEST_CASE("sylvester_resultant") {
  CHECK(sylvester_resultant(P("z^2 - 1"), P("z - 1"), "z").is_zero());
  // Oracle: the 2x2 Sylvester determinant det[[1,-2],[1,-3]].
  Scalar det = Scalar(1) * -3 - Scalar(-2) * 1;
  CHECK(sylvester_resultant(P("z - 2"), P("z - 3"), "z") == MultiPoly::constant(Coeff(det)));
  CHECK(det == -1);
  // Oracle: for monic linear g = z - y, Res(f, g) = (-1)^deg(f) f(y).
  MultiPoly f = P("z^2 - x", {"z", "x", "y"});
  MultiPoly f_at_y = substitute(f, "z", P("y"));
  CHECK(sylvester_resultant(f, P("z - y"), "z") == f_at_y);
  CHECK(f_at_y == P("y^2 - x"));
  CHECK_THROWS_AS(sylvester_resultant(P("x + 1"), P("z - 1"), "z"), DegenerateInput);
}

TEST_CASE("discriminant") {
  // Oracle: cofactor expansion of the 3x3 Sylvester matrix of (z^2-1, 2z).
  Scalar m[3][3] = {{1, 0, -1}, {2, 0, 0}, {0, 2, 0}};
  Scalar det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  CHECK(discriminant(P("z^2 - 1"), "z") == MultiPoly::constant(Coeff(det)));
  CHECK(det == -4);
  CHECK(discriminant(P("(z - 1)^2"), "z").is_zero());
  // Quadratic-formula oracle: repeated root iff b^2 - 4c = 0.
  MultiPoly d = discriminant(P("z^2 + b*z + c", {"z", "b", "c"}), "z");
  for (int b = -4; b <= 4; ++b)
    for (int c = -4; c <= 4; ++c) {
      Coeff v = evaluate(d.with_vars({"z", "b", "c"}), {Coeff(0), Coeff(b), Coeff(c)});
      CHECK(v.is_zero() == (b * b - 4 * c == 0));
    }
}

TEST_CASE("squarefree_decompose examples") {
  auto s1 = squarefree_decompose(P("x^2*(x+1)"));
  REQUIRE(s1.parts.size() == 2);
  CHECK(s1.parts[0] == P("x + 1"));
  CHECK(s1.parts[1] == P("x"));
  auto s2 = squarefree_decompose(P("x^2 + y^2 + 1"));
  REQUIRE(s2.parts.size() == 1);
  MultiPoly in = P("(x+y)^3*(x-y)");
  auto s3 = squarefree_decompose(in);
  REQUIRE(s3.parts.size() == 3);
  CHECK(s3.parts[0] == P("x - y"));
  CHECK(s3.parts[1].is_constant());
  CHECK(s3.parts[2] == P("x + y"));
  MultiPoly back = MultiPoly::constant(s3.unit);
  for (size_t i = 0; i < s3.parts.size(); ++i) back *= s3.parts[i].pow(static_cast<int>(i) + 1);
  CHECK(back == in);
}

TEST_CASE("dense_divide") {
  auto r1 = dense_divide(P("z^2 - 1"), P("z - 1"), "z");
  CHECK(r1.quotient == P("z + 1"));
  CHECK(r1.remainder.is_zero());
  // Oracle: remainder theorem, A(1 + T/2).
  MultiPoly A = P("z^2 - 1 - T", {"T", "z"});
  MultiPoly rem_oracle = substitute(A, "z", P("1 + T/2", {"T", "z"}));
  auto r2 = dense_divide(A, P("z - 1 - T/2"), "z");
  CHECK(r2.remainder == rem_oracle);
  CHECK(rem_oracle == P("T^2/4"));
  auto r3 = dense_divide(A, A, "z");
  CHECK(r3.quotient == P("1"));
  CHECK(r3.remainder.is_zero());
  CHECK_THROWS_AS(dense_divide(A, P("x*z - 1"), "z"), NotMonic);
}

// Random helpers for the properties below.
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(uint64_t seed) : rng(seed) {}
  int uni(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }
  MultiPoly poly(const std::vector<std::string>& vars, int deg, int terms) {
    MultiPoly p(vars);
    for (int t = 0; t < terms; ++t) {
      Exponent e(vars.size(), 0);
      int budget = uni(0, deg);
      for (int k = 0; k < budget; ++k) e[uni(0, static_cast<int>(vars.size()) - 1)]++;
      p.add_term(e, Coeff(uni(-3, 3)));
    }
    return p;
  }
  // Monic in z with coefficients in x-variables, total degree <= deg.
  MultiPoly monic_z(const std::vector<std::string>& xs, int dz, int deg) {
    std::vector<std::string> vars(xs);
    vars.push_back("z");
    MultiPoly p = MultiPoly::variable("z", vars).pow(dz);
    for (int i = 0; i < dz; ++i) {
      MultiPoly c = poly(vars, std::max(0, deg - dz), 2);
      c = c.is_zero() ? c : coefficients_in(c, "z")[0];
      p += c * MultiPoly::variable("z", vars).pow(i);
    }
    return p;
  }
};

TEST_CASE("resultant vanishes iff nontrivial gcd") {
  Gen g(17);
  std::vector<std::string> xs{"x1", "x2"};
  int shared = 0;
  for (int t = 0; t < 60; ++t) {
    MultiPoly a = g.monic_z(xs, g.uni(1, 2), 4);
    MultiPoly b = g.monic_z(xs, g.uni(1, 2), 4);
    if (t % 3 == 0) {
      MultiPoly c = g.monic_z(xs, 1, 2);
      a *= c;
      b *= c;
    }
    MultiPoly res = sylvester_resultant(a, b, "z");
    // Oracle: Euclid over Q(x)[z] via content-cleared pseudo-remainders.
    MultiPoly gcd = poly_gcd(a, b);
    bool nontrivial = gcd.degree("z") >= 1;
    shared += nontrivial;
    CHECK(res.is_zero() == nontrivial);
  }
  CHECK(shared >= 20);
}

TEST_CASE("squarefree round trip") {
  Gen g(5);
  std::vector<std::string> vars{"x", "y", "z"};
  for (int t = 0; t < 25; ++t) {
    MultiPoly f = MultiPoly::constant(Coeff(g.uni(1, 5)), vars);
    int k = g.uni(1, 3);
    for (int i = 0; i < k; ++i) {
      MultiPoly h = g.poly(vars, 2, 3);
      if (h.is_constant()) continue;
      f *= h.pow(g.uni(1, 3));
    }
    auto s = squarefree_decompose(f);
    MultiPoly back = MultiPoly::constant(s.unit, vars);
    for (size_t i = 0; i < s.parts.size(); ++i) back *= s.parts[i].pow(static_cast<int>(i) + 1);
    CHECK(back == f);
    for (size_t i = 0; i < s.parts.size(); ++i) {
      if (s.parts[i].is_constant()) continue;
      // Squarefree iff coprime to all of its partial derivatives.
      MultiPoly gall = s.parts[i];
      for (const auto& v : vars) gall = poly_gcd(gall, derivative(s.parts[i], v));
      CHECK(gall.is_constant());
      for (size_t j = i + 1; j < s.parts.size(); ++j) CHECK(poly_gcd(s.parts[i], s.parts[j]).is_constant());
    }
  }
}

TEST_CASE("truncation equals sum of homogeneous parts") {
  Gen g(9);
  for (int t = 0; t < 30; ++t) {
    MultiPoly q = g.poly({"a", "b", "c"}, 5, 6);
    for (int k = 1; k <= 6; ++k) {
      MultiPoly s({"a", "b", "c"});
      for (int i = 0; i < k; ++i) s += hom_component(q, {"a", "b"}, i);
      CHECK(poly_trunc(q, {"a", "b"}, k) == s);
    }
  }
}

TEST_CASE("exact division and gcd") {
  MultiPoly a = P("(x+y+1)*(x*y-1)");
  CHECK(exact_divide(a, P("x*y - 1")) == P("x + y + 1"));
  CHECK_THROWS_AS(exact_divide(a, P("x - y")), InexactDivision);
  CHECK(poly_gcd(P("(x+y)^2*(x-1)"), P("(x+y)*(y+2)")) == P("x + y"));
}

TEST_CASE("fraction_free_solve") {
  // Planted solutions over Q[x]: m * b = rhs with extra consistent rows.
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> co(-3, 3), ex(0, 2);
  std::vector<std::string> xv{"x"};
  for (int t = 0; t < 15; ++t) {
    int n = 1 + t % 4, rows = n + t % 3;
    std::vector<std::vector<MultiPoly>> m(rows, std::vector<MultiPoly>(n, MultiPoly(xv)));
    for (auto& row : m)
      for (auto& e : row)
        for (int k = 0; k < 2; ++k) e.add_term({ex(rng)}, Coeff(co(rng)));
    std::vector<MultiPoly> b(n, MultiPoly(xv));
    for (auto& e : b) e.add_term({ex(rng)}, Coeff(co(rng)));
    std::vector<MultiPoly> rhs(rows, MultiPoly(xv));
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < n; ++j) rhs[i] += m[i][j] * b[j];
    LinearSolution s;
    try {
      s = fraction_free_solve(m, rhs);
    } catch (const SingularSystem&) {
      continue;
    }
    REQUIRE(!s.denominator.is_zero());
    for (int j = 0; j < n; ++j) CHECK(s.numerators[j] == b[j] * s.denominator);
  }
  std::vector<std::vector<MultiPoly>> m{{P("x")}, {P("1", {"x"})}};
  CHECK_THROWS_AS(fraction_free_solve(m, {P("x"), P("2", {"x"})}), HypothesisViolated);
  std::vector<std::vector<MultiPoly>> sing{{P("x"), P("x")}, {P("1", {"x"}), P("1", {"x"})}};
  CHECK_THROWS_AS(fraction_free_solve(sing, {P("x"), P("1", {"x"})}), SingularSystem);
}
