#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "circfactor/polyring.hh"
#include "circfactor/scalars.hh"

using namespace circfactor;

static QPoly Q(std::initializer_list<long> c) {
  QPoly p;
  for (long x : c) p.push_back(Scalar(x));
  return p;
}

TEST_CASE("rational normalization and text") {
  CHECK(to_string(make_scalar(6, -4)) == "-3/2");
  CHECK(to_string(make_scalar(0, 7)) == "0");
  CHECK(to_string(parse_scalar("10/5")) == "2");
  CHECK(parse_scalar("-3/2") == make_scalar(-3, 2));
  CHECK_THROWS_AS(parse_scalar("1/0"), ParseError);
  CHECK_THROWS_AS(parse_scalar("abc"), ParseError);
  Scalar a = make_scalar(2, 4), b = make_scalar(1, 2);
  CHECK(a.get_num() == b.get_num());
  CHECK(a.get_den() == b.get_den());
}

TEST_CASE("nf_reduce") {
  auto K = number_field(Q({-2, 0, 1}));
  CHECK(nf_reduce(Q({0, 0, 1}), K) == Coeff(2));
  CHECK(nf_reduce(Q({3}), K) == Coeff(3));
  auto K3 = number_field(Q({-1, -1, 0, 1}));
  CHECK(nf_reduce(Q({0, 0, 0, 1}), K3) == Coeff::in(K3, Q({1, 1})));
  CHECK(number_field(Q({-2, 0, 1})) == K);
}

TEST_CASE("nf_inverse") {
  auto K = number_field(Q({-2, 0, 1}));
  Coeff u = Coeff::generator(K);
  // Extended Euclid on (u, u^2-2): u * (u/2) = 1.
  CHECK(nf_inverse(u) == Coeff::in(K, {Scalar(0), Scalar(1, 2)}));
  CHECK(nf_inverse(Coeff(1).with_field(K)) == Coeff(1));
  auto Ki = number_field(Q({1, 0, 1}));
  Coeff a = Coeff::in(Ki, Q({1, 1}));
  CHECK(nf_inverse(a) == Coeff::in(Ki, {Scalar(1, 2), Scalar(-1, 2)}));
  CHECK_THROWS_AS(nf_inverse(Coeff().with_field(K)), ZeroInverse);
  CHECK(Coeff::in(K, Q({1, 2})).to_string() == "1,2");
}

TEST_CASE("mixed fields rejected") {
  auto K1 = number_field(Q({-2, 0, 1}));
  auto K2 = number_field(Q({-3, 0, 1}));
  CHECK_THROWS_AS(Coeff::generator(K1) + Coeff::generator(K2), FieldMismatch);
  CHECK_NOTHROW(Coeff::generator(K1) * Coeff(3));
}

TEST_CASE("nf_coeff_decompose") {
  auto K = number_field(Q({-2, 0, 1}));
  MultiPoly u = MultiPoly::constant(Coeff::generator(K), {"x"});
  MultiPoly x = MultiPoly::variable("x", {"x"});
  auto d = nf_coeff_decompose(MultiPoly::constant(Coeff(3), {"x"}) + u * x, K);
  REQUIRE(d.size() == 2);
  CHECK(d[0].to_string() == "3");
  CHECK(d[1].to_string() == "x");
  auto z = nf_coeff_decompose(MultiPoly({"x"}, K), K);
  CHECK(z[0].is_zero());
  CHECK(z[1].is_zero());
  auto w = nf_coeff_decompose(u * u * x, K);
  CHECK(w[0].to_string() == "2*x");
  CHECK(w[1].is_zero());
}

TEST_CASE("field axioms on random elements") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dist(-5, 5);
  auto K = number_field(Q({-1, -1, 0, 1}));
  auto rnd = [&] { return Coeff::in(K, Q({dist(rng), dist(rng), dist(rng)})); };
  for (int t = 0; t < 200; ++t) {
    Coeff a = rnd(), b = rnd(), c = rnd();
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    if (!a.is_zero()) CHECK(a * nf_inverse(a) == Coeff(1));
  }
}

TEST_CASE("decompose is zero exactly for zero") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dist(-2, 2);
  auto K = number_field(Q({-2, 0, 1}));
  for (int t = 0; t < 50; ++t) {
    MultiPoly c({"x", "y"}, K);
    for (int i = 0; i < 3; ++i) c.add_term({dist(rng) + 2, dist(rng) + 2}, Coeff::in(K, Q({dist(rng), dist(rng)})));
    auto parts = nf_coeff_decompose(c, K);
    bool all_zero = parts[0].is_zero() && parts[1].is_zero();
    CHECK(all_zero == c.is_zero());
    MultiPoly back = parts[0] + parts[1] * Coeff::generator(K);
    CHECK(back == c);
  }
}
