#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "circfactor/pit.hh"

using namespace circfactor;

static Circuit C(const std::string& s, std::vector<std::string> vars = {}) {
  return circuit_from_poly(parse_poly(s, vars));
}

TEST_CASE("grid_pit examples") {
  PitVerdict v = grid_pit(C("x1*x2 - x1"), 2);
  REQUIRE(!v.is_zero);
  CHECK(*v.witness == std::vector<Coeff>{Coeff(1), Coeff(0)});
  CHECK(!eval_at(C("x1*x2 - x1"), *v.witness).is_zero());

  Circuit z({"x"});
  z.set_output(z.sub(z.input("x"), z.input("x")));
  CHECK(grid_pit(z, 1).is_zero);

  // Zeros of x1*x2 on {0,1,2}^2 against the bound d*|S|^(n-1) = 6.
  int zeros = 0;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b) zeros += (a * b == 0);
  CHECK(zeros == 5);
  CHECK(zeros <= 2 * 3);

  Circuit big({"a", "b", "c"});
  int abc = big.mul({big.input("a"), big.input("b"), big.input("c")});
  big.set_output(big.sub(abc, abc));
  CHECK_THROWS_AS(grid_pit(big, 200, 1000), CapExceeded);
}

TEST_CASE("ki_pit examples") {
  Circuit sum = C("x1 + x2 + x3 + x4 + x5 + x6 + x7 + x8");
  PitVerdict v = ki_pit(sum, Scalar(1, 3));
  REQUIRE(!v.is_zero);
  CHECK(!eval_at(sum, *v.witness).is_zero());
  CHECK(v.stage == "ki:esym");

  // (x+y)^2 - x^2 - 2xy - y^2 with the cancellation hidden in the circuit.
  Circuit z({"x", "y"});
  int s = z.add({z.input("x"), z.input("y")});
  int sq = z.mul({s, s});
  int rest = z.add({z.mul({z.input("x"), z.input("x")}), z.scale(2, z.mul({z.input("x"), z.input("y")})),
                    z.mul({z.input("y"), z.input("y")})});
  z.set_output(z.sub(sq, rest));
  std::vector<std::string> log;
  PitOptions opt;
  opt.log = &log;
  PitVerdict zv = ki_pit(z, Scalar(1, 3), opt);
  CHECK(zv.is_zero);
  CHECK(zv.stage == "grid");
  CHECK(log.size() == 3);

  opt.fallback = false;
  PitVerdict zk = ki_pit(z, Scalar(1, 3), opt);
  CHECK(zk.is_zero);
  CHECK(zk.stage == "ki:esym");

  // Products of differences at n = 6 against the direct grid.
  Circuit prod = C("(x1-x2)*(x2-x3)*(x3-x4)*(x4-x5)*(x5-x6)");
  PitVerdict kp = ki_pit(prod, Scalar(1, 3));
  PitVerdict gp = grid_pit(prod, 5);
  CHECK(kp.is_zero == gp.is_zero);
  CHECK(!kp.is_zero);
  CHECK(!eval_at(prod, *kp.witness).is_zero());
}

// Random circuit with total degree <= maxdeg over n inputs.
static Circuit random_circuit(std::mt19937_64& rng, int n, int maxdeg) {
  std::vector<std::string> vars;
  for (int i = 1; i <= n; ++i) vars.push_back("x" + std::to_string(i));
  Circuit c(vars);
  std::vector<std::pair<int, int>> pool;  // gate, degree
  for (const auto& v : vars) pool.push_back({c.input(v), 1});
  std::uniform_int_distribution<int> co(-3, 3);
  pool.push_back({c.constant(co(rng)), 0});
  for (int k = 0; k < 10; ++k) {
    auto a = pool[rng() % pool.size()], b = pool[rng() % pool.size()];
    if (rng() % 2 && a.second + b.second <= maxdeg) pool.push_back({c.mul({a.first, b.first}), a.second + b.second});
    else pool.push_back({c.add({a.first, b.first, c.constant(co(rng))}), std::max(a.second, b.second)});
  }
  c.set_output(pool.back().first);
  return c;
}

TEST_CASE("ki_pit agrees with grid_pit") {
  std::mt19937_64 rng(33);
  int zeros = 0;
  for (int t = 0; t < 100; ++t) {
    int n = 1 + static_cast<int>(rng() % 8);
    Circuit c = random_circuit(rng, n, 6);
    if (t % 5 == 0 && n <= 3) {
      // Planted zero: the circuit minus its own dense expansion.
      Circuit e = circuit_from_poly(dense_from_circuit(c));
      Circuit zc(c.variables());
      zc.set_output(zc.sub(zc.import(c, c.output()), zc.import(e, e.output())));
      c = zc;
    }
    int d = degree_bound(c).total;
    PitVerdict g = grid_pit(c, d);
    PitVerdict k = ki_pit(c, Scalar(1, 3));
    CHECK(g.is_zero == k.is_zero);
    CHECK(g.is_zero == dense_from_circuit(c).is_zero());
    zeros += g.is_zero;
    if (!k.is_zero) CHECK(!eval_at(c, *k.witness).is_zero());
  }
  CHECK(zeros >= 3);
}

TEST_CASE("ki_search finds a point for nonzero predicates") {
  Circuit c = C("x1*x2*x3 - 1");
  auto x = ki_search(3, 3, Scalar(1, 3), [&](const std::vector<Coeff>& p) { return !eval_at(c, p).is_zero(); });
  CHECK(!eval_at(c, x).is_zero());
  PitOptions opt;
  opt.fallback = false;
  CHECK_THROWS_AS(ki_search(2, 1, Scalar(1, 3), [](const std::vector<Coeff>&) { return false; }, opt),
                  FallbackExhausted);
}
