#include <algorithm>

#include "circfactor/factor_engine.hh"

namespace circfactor {

namespace {

using Series = std::vector<MultiPoly>;  // index = weighted degree

struct Grading {
  std::vector<int> w;  // per variable
  int y = -1;
  int of(const Exponent& e) const {
    int d = 0;
    for (size_t i = 0; i < e.size(); ++i) d += w[i] * e[i];
    return d;
  }
};

QPoly to_qpoly(const MultiPoly& p, int y) {
  QPoly q;
  for (const auto& [e, c] : p.terms()) {
    if (!c.is_rational()) throw FieldMismatch("dense factorization works over Q");
    if (static_cast<int>(q.size()) <= e[y]) q.resize(e[y] + 1);
    q[e[y]] += c.rational();
  }
  qpoly::trim(q);
  return q;
}

MultiPoly from_qpoly(const QPoly& q, int y, const std::vector<std::string>& vars) {
  MultiPoly p(vars);
  for (size_t i = 0; i < q.size(); ++i) {
    if (q[i] == 0) continue;
    Exponent e(vars.size(), 0);
    e[y] = static_cast<int>(i);
    p.add_term(e, Coeff(q[i]));
  }
  return p;
}

// Applies f to the y-coefficient polynomial attached to every monomial in the
// other variables.
template <class F>
MultiPoly y_apply(const MultiPoly& p, int y, F f) {
  std::map<Exponent, QPoly> groups;
  for (const auto& [e, c] : p.terms()) {
    Exponent key = e;
    key[y] = 0;
    QPoly& q = groups[key];
    if (static_cast<int>(q.size()) <= e[y]) q.resize(e[y] + 1);
    q[e[y]] += c.rational();
  }
  MultiPoly out(p.vars());
  for (auto& [key, q] : groups) {
    QPoly r = f(q);
    for (size_t i = 0; i < r.size(); ++i) {
      if (r[i] == 0) continue;
      Exponent e = key;
      e[y] = static_cast<int>(i);
      out.add_term(e, Coeff(r[i]));
    }
  }
  return out;
}

// s, t with s*a + t*b = 1 (a, b coprime).
std::pair<QPoly, QPoly> ext_gcd(const QPoly& a, const QPoly& b) {
  QPoly r0 = a, r1 = b, s0{Scalar(1)}, s1{}, t0{}, t1{Scalar(1)};
  while (qpoly::degree(r1) >= 0) {
    auto [q, r] = qpoly::divmod(r0, r1);
    QPoly s2 = qpoly::sub(s0, qpoly::mul(q, s1)), t2 = qpoly::sub(t0, qpoly::mul(q, t1));
    r0 = r1;
    r1 = r;
    s0 = s1;
    s1 = s2;
    t0 = t1;
    t1 = t2;
  }
  Scalar inv = 1 / r0[0];
  return {qpoly::scale(s0, inv), qpoly::scale(t0, inv)};
}

Series split(const MultiPoly& p, const Grading& g, int N) {
  Series s(N, MultiPoly(p.vars()));
  for (const auto& [e, c] : p.terms()) {
    int d = g.of(e);
    if (d < N) s[d].add_term(e, c);
  }
  return s;
}

MultiPoly join(const Series& s) {
  MultiPoly out(s[0].vars());
  for (const auto& c : s) out += c;
  return out;
}

Series mul_series(const Series& a, const Series& b) {
  int N = static_cast<int>(a.size());
  Series c(N, MultiPoly(a[0].vars()));
  for (int i = 0; i < N; ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; i + j < N; ++j)
      if (!b[j].is_zero()) c[i + j] += a[i] * b[j];
  }
  return c;
}

// F = G * H to weighted precision N, with G(0) = g0, H(0) = h0.
std::pair<Series, Series> lift_pair(const Series& F, const QPoly& g0, const QPoly& h0, int y) {
  int N = static_cast<int>(F.size());
  const auto& vars = F[0].vars();
  auto [s, t] = ext_gcd(g0, h0);
  Series G(N, MultiPoly(vars)), H(N, MultiPoly(vars));
  G[0] = from_qpoly(g0, y, vars);
  H[0] = from_qpoly(h0, y, vars);
  for (int k = 1; k < N; ++k) {
    MultiPoly e = F[k];
    for (int i = 1; i < k; ++i)
      if (!G[i].is_zero() && !H[k - i].is_zero()) e -= G[i] * H[k - i];
    if (e.is_zero()) continue;
    G[k] = y_apply(e, y, [&](const QPoly& q) { return qpoly::rem(qpoly::mul(q, t), g0); });
    H[k] = y_apply(e, y, [&](const QPoly& q) { return qpoly::rem(qpoly::mul(q, s), h0); });
  }
  return {G, H};
}

// p with every variable except y fixed to vals[i]; univariate in y.
QPoly eval_except(const MultiPoly& p, int y, const std::vector<Scalar>& vals) {
  QPoly out;
  for (const auto& [e, c] : p.terms()) {
    Scalar v = c.rational();
    for (size_t i = 0; i < e.size(); ++i)
      if (static_cast<int>(i) != y && e[i] != 0) {
        Scalar t;
        mpz_pow_ui(t.get_num_mpz_t(), vals[i].get_num_mpz_t(), e[i]);
        v *= t;
      }
    if (static_cast<int>(out.size()) <= e[y]) out.resize(e[y] + 1);
    out[e[y]] += v;
  }
  qpoly::trim(out);
  return out;
}

}  // namespace

namespace {

struct Setup {
  Grading g;
  int wdeg = 0;
  QPoly p0;  // weight-0 part
};

Setup setup(const MultiPoly& p, const std::string& yname, const std::map<std::string, int>& weight) {
  Setup st;
  int y = p.require_var(yname);
  const auto& vars = p.vars();
  st.g.y = y;
  for (size_t i = 0; i < vars.size(); ++i) {
    auto it = weight.find(vars[i]);
    st.g.w.push_back(static_cast<int>(i) == y ? 0 : (it == weight.end() ? 1 : it->second));
  }
  auto coef = coefficients_in(p, yname);
  if (coef.empty() || !coef.back().is_constant() || !(coef.back().constant_term() == Coeff(1)))
    throw HypothesisViolated("polynomial is not monic in " + yname);
  MultiPoly base(vars);
  for (const auto& [e, c] : p.terms()) {
    int d = st.g.of(e);
    st.wdeg = std::max(st.wdeg, d);
    if (d == 0) {
      for (size_t i = 0; i < e.size(); ++i)
        if (static_cast<int>(i) != y && e[i] != 0)
          throw HypothesisViolated("weight-0 part is not univariate in " + yname);
      base.add_term(e, c);
    }
  }
  st.p0 = to_qpoly(base, y);
  if (qpoly::degree(qpoly::gcd(st.p0, qpoly::derivative(st.p0))) > 0)
    throw HypothesisViolated("projection is not squarefree");
  return st;
}

std::vector<Series> lift_all(const MultiPoly& p, const Setup& st, const std::vector<QPoly>& bases) {
  int N = st.wdeg + 1;
  Series cur = split(p, st.g, N);
  std::vector<Series> lifted;
  for (size_t i = 0; i + 1 < bases.size(); ++i) {
    QPoly rest{Scalar(1)};
    for (size_t j = i + 1; j < bases.size(); ++j) rest = qpoly::mul(rest, bases[j]);
    auto [G, H] = lift_pair(cur, bases[i], rest, st.g.y);
    lifted.push_back(G);
    cur = H;
  }
  lifted.push_back(cur);
  return lifted;
}

}  // namespace

std::vector<MultiPoly> hensel_lift(const MultiPoly& p, const std::string& y, const std::map<std::string, int>& weight,
                                   const std::vector<QPoly>& bases) {
  Setup st = setup(p, y, weight);
  QPoly prod{Scalar(1)};
  for (const auto& b : bases) {
    if (qpoly::degree(b) < 1 || b.back() != 1) throw HypothesisViolated("lift bases must be monic and nonconstant");
    prod = qpoly::mul(prod, b);
  }
  if (prod != st.p0) throw HypothesisViolated("lift bases do not multiply to the projection");
  std::vector<MultiPoly> out;
  for (const auto& s : lift_all(p, st, bases)) out.push_back(join(s));
  return out;
}

std::vector<MultiPoly> hensel_factor(const MultiPoly& p, const std::string& yname, const std::map<std::string, int>& weight,
                                     long recombination_cap) {
  Setup st = setup(p, yname, weight);
  int y = st.g.y;
  const auto& vars = p.vars();
  auto uni = univariate_factor_Q(st.p0, recombination_cap);
  if (uni.size() <= 1) return {p};
  std::vector<QPoly> bases;
  for (const auto& u : uni) bases.push_back(u.factor);
  std::vector<Series> lifted = lift_all(p, st, bases);

  // Candidates must first divide at a fixed integer point.
  std::vector<Scalar> probe(vars.size());
  for (size_t i = 0; i < vars.size(); ++i) probe[i] = Scalar(static_cast<long>(3 + 2 * i));
  bool rational = p.field() == nullptr;
  std::vector<MultiPoly> out;
  MultiPoly remaining = p;
  QPoly remaining_at = rational ? eval_except(p, y, probe) : QPoly{};
  std::vector<size_t> rest(lifted.size());
  for (size_t i = 0; i < rest.size(); ++i) rest[i] = i;
  long tested = 0;
  for (size_t size = 1; 2 * size <= rest.size();) {
    bool found = false;
    std::vector<size_t> pick(size);
    for (size_t i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      if (++tested > recombination_cap) throw RecombinationCapExceeded("too many recombination subsets");
      Series prod = lifted[rest[pick[0]]];
      for (size_t i = 1; i < size; ++i) prod = mul_series(prod, lifted[rest[pick[i]]]);
      MultiPoly cand = join(prod);
      bool pass = !rational || qpoly::rem(remaining_at, eval_except(cand, y, probe)).empty();
      DivResult dr;
      if (pass) dr = dense_divide(remaining, cand, yname);
      if (pass && dr.remainder.is_zero()) {
        out.push_back(cand);
        remaining = dr.quotient;
        if (rational) remaining_at = eval_except(remaining, y, probe);
        std::vector<size_t> keep;
        for (size_t i = 0; i < rest.size(); ++i)
          if (std::find(pick.begin(), pick.end(), i) == pick.end()) keep.push_back(rest[i]);
        rest = keep;
        found = true;
        break;
      }
      int i = static_cast<int>(size) - 1;
      while (i >= 0 && pick[i] == rest.size() - size + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (size_t j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
    if (!found) ++size;
  }
  if (!rest.empty()) out.push_back(remaining);
  return out;
}

std::vector<MultiPoly> dense_multivariate_factor(const MultiPoly& p, const std::string& y) {
  return hensel_factor(p, y);
}

namespace {

// Irreducible factors of a squarefree nonconstant polynomial, grlex-monic.
std::vector<MultiPoly> factor_squarefree_dense(const MultiPoly& f) {
  auto used = f.used_vars();
  MultiPoly g = f.with_vars(used);
  if (used.size() == 1) {
    std::vector<MultiPoly> out;
    for (const auto& u : univariate_factor_Q(to_qpoly(g, 0))) out.push_back(make_monic(from_qpoly(u.factor, 0, used)));
    return out;
  }
  int n = static_cast<int>(used.size());
  const std::string& y = used.back();
  int D = g.total_degree();
  MultiPoly top = hom_component(g, used, D);
  // x_i -> x_i + a_i y for i < n-1 makes the y^D coefficient Hom_D(a, 1).
  std::vector<Coeff> pt(n, Coeff(0));
  pt[n - 1] = Coeff(1);
  std::vector<int> idx(n - 1, 0);
  while (evaluate(top, pt).is_zero()) {
    int k = n - 2;
    while (k >= 0 && ++idx[k] > D) idx[k--] = 0;
    if (k < 0) throw DegenerateInput("no monic shift found");
    for (int i = 0; i < n - 1; ++i) pt[i] = Coeff(idx[i]);
  }
  std::map<std::string, MultiPoly> shift_a, unshift_a;
  MultiPoly Y = MultiPoly::variable(y, used);
  for (int i = 0; i < n - 1; ++i) {
    MultiPoly X = MultiPoly::variable(used[i], used);
    shift_a[used[i]] = X + Y * pt[i];
    unshift_a[used[i]] = X - Y * pt[i];
  }
  MultiPoly h = substitute(g, shift_a).with_vars(used);
  Coeff lead = coefficients_in(h, y).back().constant_term();
  h *= lead.inverse();
  // x_i -> x_i + b_i with h(b, y) squarefree.
  std::vector<int> b(n - 1, 0);
  auto at_b = [&] {
    std::map<std::string, MultiPoly> s;
    for (int i = 0; i < n - 1; ++i) s[used[i]] = MultiPoly::constant(Coeff(b[i]), used);
    return to_qpoly(substitute(h, s).with_vars(used), n - 1);
  };
  while (true) {
    QPoly q = at_b();
    if (qpoly::degree(qpoly::gcd(q, qpoly::derivative(q))) == 0) break;
    int k = n - 2;
    while (k >= 0 && ++b[k] > 2 * D * D + 2) b[k--] = 0;
    if (k < 0) throw DegenerateInput("no squarefree projection found");
  }
  std::map<std::string, MultiPoly> shift_b, unshift_b;
  for (int i = 0; i < n - 1; ++i) {
    MultiPoly X = MultiPoly::variable(used[i], used);
    shift_b[used[i]] = X + MultiPoly::constant(Coeff(b[i]), used);
    unshift_b[used[i]] = X - MultiPoly::constant(Coeff(b[i]), used);
  }
  MultiPoly hb = substitute(h, shift_b).with_vars(used);
  std::vector<MultiPoly> out;
  for (const auto& fac : hensel_factor(hb, y)) {
    MultiPoly back = substitute(substitute(fac, unshift_b).with_vars(used), unshift_a).with_vars(used);
    out.push_back(make_monic(back));
  }
  return out;
}

}  // namespace

DenseFactorization dense_factor_all(const MultiPoly& p) {
  if (p.is_zero()) throw DegenerateInput("cannot factor the zero polynomial");
  DenseFactorization r;
  auto sq = squarefree_decompose(p);
  r.unit = sq.unit;
  for (size_t i = 0; i < sq.parts.size(); ++i) {
    if (sq.parts[i].is_constant()) continue;
    for (auto& f : factor_squarefree_dense(sq.parts[i])) r.factors.push_back({f.with_vars(p.vars()), static_cast<int>(i) + 1});
  }
  // Parts are grlex-monic, so the unit collects every scalar.
  MultiPoly prod = MultiPoly::constant(Coeff(1), p.vars());
  for (const auto& [f, m] : r.factors) prod *= f.pow(m);
  r.unit = p.leading_coefficient() * prod.leading_coefficient().inverse();
  std::sort(r.factors.begin(), r.factors.end(),
            [](const auto& a, const auto& b) { return a.first.to_string() < b.first.to_string(); });
  return r;
}

}  // namespace circfactor
