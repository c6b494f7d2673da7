#include "circfactor/kigen.hh"

#include <gmpxx.h>

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

namespace circfactor {

namespace {

// GF(p^e) with elements encoded as base-p digit strings.
class GaloisField {
 public:
  explicit GaloisField(int q) : q_(q) {
    for (p_ = 2; q % p_ != 0; ++p_) {
    }
    e_ = 0;
    for (int t = q; t > 1; t /= p_) ++e_;
    modulus_ = find_irreducible();
  }
  int size() const { return q_; }
  int add(int a, int b) const {
    int r = 0, scale = 1;
    for (int i = 0; i < e_; ++i) {
      r += ((a % p_ + b % p_) % p_) * scale;
      a /= p_;
      b /= p_;
      scale *= p_;
    }
    return r;
  }
  int mul(int a, int b) const {
    auto da = digits(a), db = digits(b);
    std::vector<int> prod(2 * e_, 0);
    for (int i = 0; i < e_; ++i)
      for (int j = 0; j < e_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
    reduce(prod, modulus_);
    return encode(prod);
  }

 private:
  std::vector<int> digits(int a) const {
    std::vector<int> d(e_);
    for (int i = 0; i < e_; ++i, a /= p_) d[i] = a % p_;
    return d;
  }
  int encode(const std::vector<int>& d) const {
    int r = 0;
    for (int i = e_; i-- > 0;) r = r * p_ + d[i];
    return r;
  }
  // prod mod monic m (coefficients low first), in place; keeps deg < deg m.
  void reduce(std::vector<int>& a, const std::vector<int>& m) const {
    int dm = static_cast<int>(m.size()) - 1;
    for (int i = static_cast<int>(a.size()) - 1; i >= dm; --i) {
      int c = a[i];
      if (c == 0) continue;
      for (int j = 0; j <= dm; ++j) a[i - dm + j] = ((a[i - dm + j] - c * m[j]) % p_ + p_) % p_;
    }
    a.resize(std::max(dm, 0));
  }
  bool divides(const std::vector<int>& d, std::vector<int> a) const {
    reduce(a, d);
    return std::all_of(a.begin(), a.end(), [](int x) { return x == 0; });
  }
  std::vector<int> find_irreducible() const {
    if (e_ == 1) return {0, 1};
    int count = 1;
    for (int i = 0; i < e_; ++i) count *= p_;
    for (int low = 0; low < count; ++low) {
      std::vector<int> cand(e_ + 1, 0);
      for (int i = 0, t = low; i < e_; ++i, t /= p_) cand[i] = t % p_;
      cand[e_] = 1;
      bool irreducible = true;
      for (int dd = 1; dd <= e_ / 2 && irreducible; ++dd) {
        int cnt = 1;
        for (int i = 0; i < dd; ++i) cnt *= p_;
        for (int l = 0; l < cnt && irreducible; ++l) {
          std::vector<int> div(dd + 1, 0);
          for (int i = 0, t = l; i < dd; ++i, t /= p_) div[i] = t % p_;
          div[dd] = 1;
          if (divides(div, cand)) irreducible = false;
        }
      }
      if (irreducible) return cand;
    }
    throw InfeasibleParameters("no irreducible polynomial found");
  }

  int q_, p_, e_;
  std::vector<int> modulus_;
};

int ceil_log2(int n) {
  int k = 0;
  while ((1L << k) < n) ++k;
  return k;
}

std::string var(const std::string& prefix, int i) { return prefix + std::to_string(i + 1); }

std::vector<std::string> var_list(const std::string& prefix, int count) {
  std::vector<std::string> v;
  for (int i = 0; i < count; ++i) v.push_back(var(prefix, i));
  return v;
}

MultiPoly esym_poly(int sigma, int d, const std::string& prefix) {
  auto vars = var_list(prefix, sigma);
  // Dynamic programming over variables: e[k] of the first i variables.
  std::vector<MultiPoly> e(d + 1, MultiPoly(vars));
  e[0] = MultiPoly::constant(Coeff(1), vars);
  for (int i = 0; i < sigma; ++i) {
    MultiPoly w = MultiPoly::variable(vars[i], vars);
    for (int k = std::min(d, i + 1); k >= 1; --k) e[k] += w * e[k - 1];
  }
  return e[d];
}

int esym_degree(int sigma) { return default_hard_degree(sigma); }
MultiPoly esym_make(int sigma, const std::string& prefix) {
  return esym_poly(sigma, default_hard_degree(sigma), prefix);
}

// Sum over the distinct cyclic windows of length d (a small design with
// pairwise overlaps < d) plus the pure powers.
MultiPoly nw_make(int sigma, const std::string& prefix) {
  int d = default_hard_degree(sigma);
  auto vars = var_list(prefix, sigma);
  std::set<std::vector<int>> windows;
  for (int t = 0; t < sigma; ++t) {
    std::vector<int> w;
    for (int j = 0; j < d; ++j) w.push_back((t + j) % sigma);
    std::sort(w.begin(), w.end());
    windows.insert(w);
  }
  MultiPoly g(vars);
  for (const auto& w : windows) {
    Exponent e(sigma, 0);
    for (int i : w) e[i]++;
    g.add_term(e, Coeff(1));
  }
  for (int i = 0; i < sigma; ++i) {
    Exponent e(sigma, 0);
    e[i] = d;
    g.add_term(e, Coeff(1));
  }
  return g;
}

// Sum over consecutive blocks of prod (w_i + 1); a trailing short block is
// padded cyclically so every product has degree d.
MultiPoly isp_make(int sigma, const std::string& prefix) {
  int d = default_hard_degree(sigma);
  auto vars = var_list(prefix, sigma);
  MultiPoly g(vars);
  MultiPoly one = MultiPoly::constant(Coeff(1), vars);
  for (int start = 0; start < sigma; start += d) {
    MultiPoly prod = one;
    for (int j = 0; j < d; ++j) prod *= MultiPoly::variable(vars[(start + j) % sigma], vars) + one;
    g += prod;
  }
  return g;
}

const std::vector<HardFamilySpec>& families() {
  static const std::vector<HardFamilySpec> f{
      {"esym", esym_degree, esym_make},
      {"nw", esym_degree, nw_make},
      {"isp", esym_degree, isp_make},
  };
  return f;
}

}  // namespace

bool is_prime_power(int q) {
  if (q < 2) return false;
  int p = 2;
  while (q % p != 0) ++p;
  while (q % p == 0) q /= p;
  return q == 1;
}

int next_prime_power(int x) {
  int q = std::max(2, x);
  while (!is_prime_power(q)) ++q;
  return q;
}

Design build_design(int n, int sigma, int rho) {
  if (n < 1) throw InfeasibleParameters("n must be at least 1");
  if (sigma < 1) throw InfeasibleParameters("sigma must be at least 1");
  if (rho < 1) throw InfeasibleParameters("rho must be at least 1");
  int q = next_prime_power(sigma);
  if (rho > q) throw InfeasibleParameters("rho <= q violated");
  mpz_class cap;
  mpz_ui_pow_ui(cap.get_mpz_t(), q, rho);
  if (cap < n) throw InfeasibleParameters("n <= q^rho violated");
  GaloisField F(q);
  Design d{n, q, q * q, rho, {}};
  for (int t = 0; t < n; ++t) {
    // Coefficients of f are the base-q digits of t.
    std::vector<int> coef(rho);
    for (int i = 0, v = t; i < rho; ++i, v /= q) coef[i] = v % q;
    std::vector<int> s;
    for (int a = 0; a < q; ++a) {
      int val = 0;
      for (int i = rho; i-- > 0;) val = F.add(F.mul(val, a), coef[i]);
      s.push_back(a * q + val);
    }
    std::sort(s.begin(), s.end());
    d.sets.push_back(std::move(s));
  }
  return d;
}

bool check_design(const Design& d) {
  if (static_cast<int>(d.sets.size()) != d.n) return false;
  std::vector<std::set<int>> sets;
  for (const auto& s : d.sets) {
    std::set<int> u(s.begin(), s.end());
    if (static_cast<int>(u.size()) != d.sigma || static_cast<int>(s.size()) != d.sigma) return false;
    for (int i : s)
      if (i < 0 || i >= d.mu) return false;
    sets.push_back(u);
  }
  for (size_t i = 0; i < sets.size(); ++i)
    for (size_t j = i + 1; j < sets.size(); ++j) {
      int common = 0;
      for (int x : sets[i]) common += sets[j].count(x);
      if (common >= d.rho) return false;
    }
  return true;
}

const HardFamilySpec& hard_family(const std::string& name) {
  for (const auto& f : families())
    if (f.name == name) return f;
  throw DegenerateInput("unknown hard family '" + name + "'");
}

const std::vector<std::string>& hard_family_names() {
  static const std::vector<std::string> names{"esym", "nw", "isp"};
  return names;
}

int default_hard_degree(int sigma) {
  // Least k with 2^(2^k) >= sigma is ceil(log2 log2 sigma).
  int k = 0;
  while (k < 5 && (1L << std::min(62, 1 << k)) < sigma) ++k;
  return std::min(sigma, std::max(2, k + 1));
}

MultiPoly default_hard_poly(int sigma, const std::string& prefix) { return esym_make(sigma, prefix); }

std::map<std::string, Circuit> KIMap::substitution(const std::vector<std::string>& xs) const {
  if (xs.size() > image_circuits.size()) throw ArityMismatch("more variables than design sets");
  std::map<std::string, Circuit> m;
  for (size_t i = 0; i < xs.size(); ++i) m[xs[i]] = image_circuits[i];
  return m;
}

std::vector<Coeff> KIMap::apply(const std::vector<Coeff>& wpoint) const {
  if (static_cast<int>(wpoint.size()) != design.mu) throw DimensionMismatch("point must have mu coordinates");
  std::vector<Coeff> x;
  for (const auto& img : images) x.push_back(evaluate(img, wpoint));
  return x;
}

KIMap build_ki_map(const MultiPoly& g, const Design& design, const std::string& prefix) {
  if (g.nvars() != design.sigma) throw ArityMismatch("g must have exactly sigma variables");
  KIMap k;
  k.design = design;
  k.g = g;
  k.w = var_list(prefix, design.mu);
  for (const auto& s : design.sets) {
    std::map<std::string, MultiPoly> sub;
    for (int i = 0; i < design.sigma; ++i) sub[g.vars()[i]] = MultiPoly::variable(k.w[s[i]], k.w);
    MultiPoly img = substitute(g, sub).with_vars(k.w);
    k.images.push_back(img);
    k.image_circuits.push_back(circuit_from_poly(img));
  }
  return k;
}

KIParams ki_parameters(int n, const Scalar& epsilon) {
  if (n < 1) throw InfeasibleParameters("n must be at least 1");
  // ceil(n^eps) with eps = a/b: least t with t^b >= n^a.
  mpz_class a = epsilon.get_num(), b = epsilon.get_den();
  mpz_class target;
  mpz_pow_ui(target.get_mpz_t(), mpz_class(n).get_mpz_t(), a.get_ui());
  int t = 1;
  while (true) {
    mpz_class tp;
    mpz_pow_ui(tp.get_mpz_t(), mpz_class(t).get_mpz_t(), b.get_ui());
    if (tp >= target) break;
    ++t;
  }
  int q = next_prime_power(t);
  while (true) {
    int rho = std::max(1, std::min(ceil_log2(n), q));
    mpz_class cap;
    mpz_ui_pow_ui(cap.get_mpz_t(), q, rho);
    if (cap >= n) return {q, q * q, rho};
    q = next_prime_power(q + 1);
  }
}

KIMap ki_for(int n, const Scalar& epsilon, const std::string& family, int bump, const std::string& prefix) {
  KIParams p = ki_parameters(n, epsilon);
  int q = p.sigma;
  for (int i = 0; i < bump; ++i) q = next_prime_power(q + 1);
  int rho = std::max(1, std::min(ceil_log2(n), q));
  Design d = build_design(n, q, rho);
  const HardFamilySpec& f = hard_family(family);
  return build_ki_map(f.make(d.sigma, prefix + "_g"), d, prefix);
}

std::string design_to_json(const Design& d) {
  nlohmann::json j;
  j["n"] = d.n;
  j["sigma"] = d.sigma;
  j["mu"] = d.mu;
  j["rho"] = d.rho;
  j["sets"] = d.sets;
  return j.dump();
}

std::string ki_to_json(const KIMap& k) {
  nlohmann::json j;
  j["design"] = nlohmann::json::parse(design_to_json(k.design));
  j["g"] = k.g.to_string();
  return j.dump();
}

}  // namespace circfactor
