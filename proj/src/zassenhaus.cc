#include <algorithm>
#include <random>

#include "circfactor/factor_engine.hh"

namespace circfactor {

namespace {

using ZPoly = std::vector<mpz_class>;
using FpPoly = std::vector<long>;

// --- arithmetic mod a small prime -----------------------------------------

long modp(long a, long p) {
  a %= p;
  return a < 0 ? a + p : a;
}

long inv_mod(long a, long p) {
  long r = 1, b = modp(a, p), e = p - 2;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

void trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int deg(const FpPoly& a) { return static_cast<int>(a.size()) - 1; }

FpPoly fp_sub(const FpPoly& a, const FpPoly& b, long p) {
  FpPoly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = modp(r[i] - b[i], p);
  trim(r);
  return r;
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, long p) {
  if (a.empty() || b.empty()) return {};
  FpPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  trim(r);
  return r;
}

void fp_divmod(const FpPoly& a, const FpPoly& b, long p, FpPoly* q, FpPoly* r) {
  FpPoly rem = a;
  int db = deg(b);
  long inv = inv_mod(b.back(), p);
  FpPoly quo(std::max(0, deg(a) - db + 1), 0);
  for (int i = deg(rem); i >= db; --i) {
    long c = rem[i] * inv % p;
    if (c == 0) continue;
    quo[i - db] = c;
    for (int j = 0; j <= db; ++j) rem[i - db + j] = modp(rem[i - db + j] - c * b[j], p);
  }
  trim(rem);
  trim(quo);
  if (q) *q = quo;
  if (r) *r = rem;
}

FpPoly fp_rem(const FpPoly& a, const FpPoly& b, long p) {
  FpPoly r;
  fp_divmod(a, b, p, nullptr, &r);
  return r;
}

FpPoly fp_quo(const FpPoly& a, const FpPoly& b, long p) {
  FpPoly q;
  fp_divmod(a, b, p, &q, nullptr);
  return q;
}

FpPoly fp_monic(FpPoly a, long p) {
  if (a.empty()) return a;
  long inv = inv_mod(a.back(), p);
  for (auto& c : a) c = c * inv % p;
  return a;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, long p) {
  while (!b.empty()) {
    FpPoly r = fp_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return fp_monic(a, p);
}

// s with s*a = g mod b, where g = gcd(a, b).
FpPoly fp_inverse_mod(const FpPoly& a, const FpPoly& m, long p) {
  FpPoly r0 = m, r1 = fp_rem(a, m, p), s0 = {}, s1 = {1};
  while (!r1.empty()) {
    FpPoly q, r;
    fp_divmod(r0, r1, p, &q, &r);
    FpPoly s2 = fp_sub(s0, fp_mul(q, s1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  // r0 is a nonzero constant when a and m are coprime.
  long inv = inv_mod(r0[0], p);
  for (auto& c : s0) c = c * inv % p;
  return fp_rem(s0, m, p);
}

FpPoly fp_powmod(FpPoly base, mpz_class e, const FpPoly& m, long p) {
  FpPoly r{1};
  base = fp_rem(base, m, p);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = fp_rem(fp_mul(r, base, p), m, p);
    base = fp_rem(fp_mul(base, base, p), m, p);
    e >>= 1;
  }
  return r;
}

FpPoly fp_derivative(const FpPoly& a, long p) {
  FpPoly r;
  for (size_t i = 1; i < a.size(); ++i) r.push_back(static_cast<long>(i) % p * a[i] % p);
  trim(r);
  return r;
}

FpPoly reduce(const ZPoly& a, long p) {
  FpPoly r;
  for (const auto& c : a) {
    mpz_class m = c % p;
    r.push_back(modp(m.get_si(), p));
  }
  trim(r);
  return r;
}

// Distinct-degree then equal-degree splitting of a monic squarefree f.
std::vector<FpPoly> factor_mod_p(FpPoly f, long p) {
  std::vector<std::pair<FpPoly, int>> ddf;
  FpPoly x{0, 1}, h = x;
  for (int i = 1; 2 * i <= deg(f); ++i) {
    h = fp_powmod(h, p, f, p);
    FpPoly g = fp_gcd(f, fp_sub(h, x, p), p);
    if (deg(g) > 0) {
      ddf.push_back({g, i});
      f = fp_quo(f, g, p);
      h = fp_rem(h, f, p);
    }
  }
  if (deg(f) > 0) ddf.push_back({f, deg(f)});

  std::mt19937_64 rng(0x7a55);
  std::vector<FpPoly> out;
  for (auto& [g, d] : ddf) {
    std::vector<FpPoly> todo{g};
    while (!todo.empty()) {
      FpPoly cur = todo.back();
      todo.pop_back();
      if (deg(cur) == d) {
        out.push_back(cur);
        continue;
      }
      while (true) {
        FpPoly a(deg(cur));
        for (auto& c : a) c = static_cast<long>(rng() % static_cast<unsigned long>(p));
        trim(a);
        if (a.empty()) continue;
        FpPoly b;
        if (p == 2) {
          // Trace map a + a^2 + ... + a^(2^(d-1)).
          FpPoly t = a, acc = a;
          for (int j = 1; j < d; ++j) {
            t = fp_rem(fp_mul(t, t, p), cur, p);
            acc = fp_sub(acc, fp_sub(FpPoly{}, t, p), p);
          }
          b = acc;
        } else {
          mpz_class e;
          mpz_ui_pow_ui(e.get_mpz_t(), p, d);
          e = (e - 1) / 2;
          b = fp_sub(fp_powmod(a, e, cur, p), FpPoly{1}, p);
        }
        FpPoly c = fp_gcd(cur, b, p);
        if (deg(c) > 0 && deg(c) < deg(cur)) {
          todo.push_back(c);
          todo.push_back(fp_quo(cur, c, p));
          break;
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- integer polynomials --------------------------------------------------

void ztrim(ZPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

ZPoly zmul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  ztrim(r);
  return r;
}

ZPoly from_fp(const FpPoly& a) { return ZPoly(a.begin(), a.end()); }

// Symmetric residues mod m.
ZPoly symmetric(ZPoly a, const mpz_class& m) {
  mpz_class half = m / 2;
  for (auto& c : a) {
    c %= m;
    if (c < 0) c += m;
    if (c > half) c -= m;
  }
  ztrim(a);
  return a;
}

ZPoly primitive(ZPoly a) {
  mpz_class g = 0;
  for (const auto& c : a) g = gcd(g, c);
  if (g == 0) return a;
  if (a.back() < 0) g = -g;
  for (auto& c : a) c /= g;
  return a;
}

ZPoly integral_primitive(const QPoly& f) {
  mpz_class l = 1;
  for (const auto& c : f) l = lcm(l, mpz_class(c.get_den()));
  ZPoly z;
  for (const auto& c : f) z.push_back(mpz_class(c * l));
  return primitive(z);
}

QPoly to_q(const ZPoly& a) { return QPoly(a.begin(), a.end()); }

// Exact quotient over Z, or nullopt.
std::optional<ZPoly> zdivide(const ZPoly& a, const ZPoly& b) {
  auto [q, r] = qpoly::divmod(to_q(a), to_q(b));
  if (!r.empty()) return std::nullopt;
  ZPoly out;
  for (const auto& c : q) {
    if (c.get_den() != 1) return std::nullopt;
    out.push_back(c.get_num());
  }
  return out;
}

std::vector<long> small_primes() {
  std::vector<long> ps;
  for (long n = 2; ps.size() < 200; ++n) {
    bool prime = true;
    for (long d = 2; d * d <= n; ++d)
      if (n % d == 0) prime = false;
    if (prime) ps.push_back(n);
  }
  return ps;
}

// Factors a primitive squarefree integer polynomial of degree >= 1.
std::vector<ZPoly> zassenhaus(ZPoly g, long cap) {
  int n = static_cast<int>(g.size()) - 1;
  if (n == 1) return {g};
  // Choose among the first good primes the one with fewest modular factors.
  long best_p = 0;
  std::vector<FpPoly> best;
  int good = 0;
  for (long p : small_primes()) {
    if (g.back() % p == 0) continue;
    FpPoly gp = reduce(g, p);
    if (deg(fp_gcd(gp, fp_derivative(gp, p), p)) > 0) continue;
    auto fs = factor_mod_p(fp_monic(gp, p), p);
    if (best.empty() || fs.size() < best.size()) {
      best = fs;
      best_p = p;
    }
    if (best.size() == 1 || ++good >= 3) break;
  }
  if (best.empty()) throw DegenerateInput("no good prime for univariate factorization");
  if (best.size() == 1) return {g};
  long p = best_p;

  // Coefficient bound for lc(g) times any factor.
  mpz_class norm2 = 0;
  for (const auto& c : g) norm2 += c * c;
  mpz_class norm = sqrt(norm2) + 1;
  mpz_class lc = g.back();
  mpz_class bound = abs(lc) * ((mpz_class(1) << n) * norm + abs(lc));
  mpz_class pa = p;
  int a = 1;
  while (pa <= 2 * bound) {
    pa *= p;
    ++a;
  }

  // Linear Hensel lifting: g = lc * prod f_i mod p^a, f_i monic.
  size_t r = best.size();
  std::vector<FpPoly> s(r);
  for (size_t i = 0; i < r; ++i) {
    FpPoly others{1};
    for (size_t j = 0; j < r; ++j)
      if (j != i) others = fp_mul(others, best[j], p);
    s[i] = fp_inverse_mod(others, best[i], p);
  }
  std::vector<ZPoly> f;
  for (auto& b : best) f.push_back(from_fp(b));
  long lc_inv = inv_mod(modp(mpz_class(lc % p).get_si(), p), p);
  mpz_class pk = p;
  for (int k = 1; k < a; ++k) {
    ZPoly prod{lc};
    for (auto& fi : f) prod = zmul(prod, fi);
    ZPoly e = g;
    e.resize(std::max(e.size(), prod.size()), 0);
    for (size_t i = 0; i < prod.size(); ++i) e[i] -= prod[i];
    for (auto& c : e) c /= pk;  // exact
    ztrim(e);
    FpPoly ep = reduce(e, p);
    for (auto& c : ep) c = c * lc_inv % p;
    for (size_t i = 0; i < r; ++i) {
      FpPoly d = fp_rem(fp_mul(ep, s[i], p), best[i], p);
      for (size_t j = 0; j < d.size(); ++j) f[i][j] += pk * d[j];
    }
    pk *= p;
  }

  // Recombination over subsets of increasing size.
  std::vector<ZPoly> out;
  std::vector<size_t> rest(r);
  for (size_t i = 0; i < r; ++i) rest[i] = i;
  long tested = 0;
  for (size_t size = 1; 2 * size <= rest.size();) {
    bool found = false;
    std::vector<size_t> pick(size);
    for (size_t i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      if (++tested > cap) throw RecombinationCapExceeded("too many recombination subsets");
      ZPoly cand{g.back()};
      for (size_t i : pick) cand = symmetric(zmul(cand, f[rest[i]]), pa);
      ZPoly h = primitive(cand);
      if (auto q = zdivide(g, h)) {
        out.push_back(h);
        g = *q;
        std::vector<size_t> keep;
        for (size_t i = 0; i < rest.size(); ++i)
          if (std::find(pick.begin(), pick.end(), i) == pick.end()) keep.push_back(rest[i]);
        rest = keep;
        found = true;
        break;
      }
      // Next combination.
      int i = static_cast<int>(size) - 1;
      while (i >= 0 && pick[i] == rest.size() - size + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (size_t j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
    if (!found) ++size;
  }
  if (g.size() > 1) out.push_back(primitive(g));
  return out;
}

}  // namespace

std::vector<UnivariateFactor> univariate_factor_Q(const QPoly& input, long recombination_cap) {
  QPoly f = input;
  qpoly::trim(f);
  if (qpoly::degree(f) < 1) return {};
  // Yun's squarefree decomposition.
  std::vector<UnivariateFactor> out;
  QPoly a = qpoly::monic(f);
  QPoly b = qpoly::derivative(a);
  QPoly c = qpoly::gcd(a, b);
  QPoly w = qpoly::divmod(a, c).first;
  QPoly y = qpoly::divmod(b, c).first;
  int mult = 1;
  while (qpoly::degree(w) > 0) {
    QPoly zz = qpoly::sub(y, qpoly::derivative(w));
    QPoly g = qpoly::gcd(w, zz);
    if (qpoly::degree(g) > 0)
      for (const auto& h : zassenhaus(integral_primitive(g), recombination_cap))
        out.push_back({qpoly::monic(to_q(h)), mult});
    w = qpoly::divmod(w, g).first;
    y = qpoly::divmod(zz, g).first;
    ++mult;
  }
  std::sort(out.begin(), out.end(), [](const UnivariateFactor& x, const UnivariateFactor& y) {
    if (x.factor.size() != y.factor.size()) return x.factor.size() < y.factor.size();
    return qpoly::lex_less(x.factor, y.factor);
  });
  return out;
}

}  // namespace circfactor
