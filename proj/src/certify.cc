#include "circfactor/certify.hh"

#include <algorithm>
#include <cmath>
#include <random>

namespace circfactor {

namespace {

MultiPoly z_poly(const std::vector<MultiPoly>& low, const std::string& z, const std::vector<std::string>& vars) {
  MultiPoly out = MultiPoly::variable(z, vars).pow(static_cast<int>(low.size()));
  for (size_t i = 0; i < low.size(); ++i) out += low[i].with_vars(vars) * MultiPoly::variable(z, vars).pow(static_cast<int>(i));
  return out;
}

// Coefficients below the leading one; NotMonic unless the leading one is 1.
std::vector<MultiPoly> monic_low(const MultiPoly& p, const std::string& z) {
  auto c = coefficients_in(p, z);
  if (c.size() < 2 || !c.back().is_constant() || !(c.back().constant_term() == Coeff(1)))
    throw NotMonic("polynomial is not monic of positive degree in " + z);
  c.pop_back();
  return c;
}

std::string fresh(const std::string& base, const std::vector<std::string>& taken) {
  std::string s = base;
  while (std::find(taken.begin(), taken.end(), s) != taken.end()) s += "_";
  return s;
}

}  // namespace

MultiPoly div_test(const std::vector<MultiPoly>& f, const std::vector<MultiPoly>& g, const std::string& z,
                   MultiPoly* quotient) {
  std::vector<std::string> vars;
  for (const auto& c : f) vars = merge_vars(vars, c.vars());
  for (const auto& c : g) vars = merge_vars(vars, c.vars());
  vars = merge_vars(vars, {z});
  std::vector<MultiPoly> h;
  auto r = div_test_coeffs(f, g, &h);
  if (quotient) *quotient = z_poly(h, z, vars);
  MultiPoly out(vars);
  for (size_t i = 0; i < r.size(); ++i) out += r[i].with_vars(merge_vars(vars, r[i].vars())).with_vars(vars) * MultiPoly::variable(z, vars).pow(static_cast<int>(i));
  return out;
}

bool divides_monic(const MultiPoly& q, const MultiPoly& p, const std::string& z) {
  auto ql = monic_low(q, z), pl = monic_low(p, z);
  if (ql.size() > pl.size()) return false;
  return div_test(pl, ql, z).is_zero();
}

MultiPoly class_product(const MultiPoly& p, const QPoly& cls, int k, const std::string& T, const std::string& z) {
  int e = qpoly::degree(cls);
  std::vector<std::string> rv;
  for (const auto& v : p.vars())
    if (v != z) rv.push_back(v);
  if (std::find(rv.begin(), rv.end(), T) == rv.end()) rv.push_back(T);
  std::vector<std::string> all = merge_vars(rv, {z});
  if (e == 1) {
    ApproxRoot r = newton_lift_quadratic(p, Coeff(-cls[0] / cls[1]), k, T, z).first;
    return MultiPoly::variable(z, all) - r.phi.with_vars(all);
  }
  const NumberField* K = number_field(cls);
  ApproxRoot r = newton_lift_quadratic(p, Coeff::generator(K), k, T, z).first;
  // Tr(u^i) = power sums of the roots of cls.
  std::vector<Scalar> es;
  for (int i = 1; i <= e; ++i) es.push_back((i % 2 ? -1 : 1) * cls[e - i]);
  auto ps = esym_to_psym(es);
  std::vector<Scalar> tr(e, Scalar(e));
  for (int i = 1; i < e; ++i) tr[i] = ps[i - 1];
  MultiPoly phi = r.phi.with_vars(rv);
  std::vector<MultiPoly> psum;
  MultiPoly pw = MultiPoly::constant(Coeff(1), rv);
  for (int m = 1; m <= e; ++m) {
    pw = poly_trunc(pw * phi, {T}, k);
    MultiPoly t(rv);
    for (const auto& [ex, c] : pw.terms()) {
      Scalar s = 0;
      for (int i = 0; i < e; ++i) s += c.coefficient(i) * tr[i];
      if (s != 0) t.add_term(ex, Coeff(s));
    }
    psum.push_back(t);
  }
  auto el = psym_to_esym(psum);
  MultiPoly out = MultiPoly::variable(z, all).pow(e);
  for (int i = 1; i <= e; ++i) {
    MultiPoly term = poly_trunc(el[i - 1], {T}, k).with_vars(all) * MultiPoly::variable(z, all).pow(e - i);
    if (i % 2) out -= term;
    else out += term;
  }
  return out;
}

Certificate irreducibility_certificate(const MultiPoly& p, const Scalar& epsilon, const CertifyOptions& opt) {
  Certificate cert;
  const std::string &T = opt.T, &z = opt.z;
  monic_low(p, z);
  if (!check_regularized(p, T, z)) throw HypothesisViolated("P is not regularized in " + T);
  int t = p.var_index(T), zi = p.require_var(z);
  QPoly base;
  for (const auto& [e, c] : p.terms()) {
    if (t >= 0 && e[t] > 0) continue;
    if (static_cast<int>(base.size()) <= e[zi]) base.resize(e[zi] + 1);
    base[e[zi]] += c.rational();
  }
  qpoly::trim(base);
  if (qpoly::degree(qpoly::gcd(base, qpoly::derivative(base))) > 0)
    throw HypothesisViolated("P(0, 0, z) is not squarefree");
  int Dz = qpoly::degree(base);
  if (Dz > opt.dz_cap) {
    cert.reason = "D_z = " + std::to_string(Dz) + " exceeds the cap " + std::to_string(opt.dz_cap);
    return cert;
  }
  cert.order = (t >= 0 ? p.degree(t) : 0) + 1;
  try {
    for (const auto& u : univariate_factor_Q(base)) cert.classes.push_back(u.factor);
    int c = static_cast<int>(cert.classes.size());
    if (c == 1) {
      cert.verdict = Verdict::Irreducible;
      return cert;
    }
    std::vector<MultiPoly> cp;
    for (const auto& cls : cert.classes) cp.push_back(class_product(p, cls, cert.order, T, z));
    std::vector<int> offset(c + 1, 0);
    for (int i = 0; i < c; ++i) offset[i + 1] = offset[i] + qpoly::degree(cert.classes[i]);

    // Cross-check through the KI map when the composed polynomial is small.
    std::vector<std::string> xs;
    for (const auto& v : p.vars())
      if (v != T && v != z && p.degree(v) > 0) xs.push_back(v);
    std::optional<KIMap> ki;
    std::map<std::string, MultiPoly> sub;
    MultiPoly pk;
    if (!xs.empty()) {
      std::string prefix = "w";
      for (bool clash = true; clash;) {
        clash = false;
        for (const auto& v : p.vars())
          if (v.compare(0, prefix.size(), prefix) == 0) clash = true;
        if (clash) prefix += "w";
      }
      KIMap k = ki_for(static_cast<int>(xs.size()), epsilon, opt.family, 0, prefix);
      double cells = (cert.order + 1.0) * (Dz + 1.0);
      std::map<std::string, int> wdeg;
      for (size_t i = 0; i < xs.size(); ++i)
        for (const auto& w : k.w)
          wdeg[w] += p.degree(xs[i]) * std::max(0, k.images[i].degree(w));
      for (const auto& [w, d] : wdeg) cells *= d + 1.0;
      if (cells <= opt.ki_check_cap) {
        for (size_t i = 0; i < xs.size(); ++i) sub[xs[i]] = k.images[i];
        pk = substitute(p, sub);
        ki = k;
      }
    }
    for (long mask = 1; mask + 1 < (1L << c); ++mask) {
      ++cert.subsets_tested;
      MultiPoly q = MultiPoly::constant(Coeff(1), p.vars());
      for (int i = 0; i < c; ++i)
        if (mask >> i & 1) q = poly_trunc(q * cp[i], {T}, cert.order);
      q = q.with_vars(merge_vars(p.vars(), q.vars()));
      bool d = divides_monic(q, p, z);
      if (ki) {
        bool dk = divides_monic(substitute(q, sub), pk, z);
        if (dk != d)
          cert.log.push_back("KI composition changed divisibility for subset mask " + std::to_string(mask));
      }
      if (d) {
        cert.verdict = Verdict::Reducible;
        for (int i = 0; i < c; ++i)
          if (mask >> i & 1)
            for (int j = offset[i]; j < offset[i + 1]; ++j) cert.subset.push_back(j);
        cert.witness = q;
        return cert;
      }
    }
    cert.verdict = Verdict::Irreducible;
  } catch (const CapExceeded& e) {
    cert.verdict = Verdict::Infeasible;
    cert.reason = e.what();
  } catch (const RecombinationCapExceeded& e) {
    cert.verdict = Verdict::Infeasible;
    cert.reason = e.what();
  }
  return cert;
}

VerifyReport verify_factorization_report(const Circuit& p, const FactorizationResult& r, double cap) {
  VerifyReport rep;
  try {
    if (r.unit == 0) {
      rep.stage = "unit";
      return rep;
    }
    std::vector<std::string> vars = used_variables(p);
    int d = degree_bound(p).total, dr = 0;
    for (const auto& f : r.factors) {
      if (f.multiplicity < 1) {
        rep.stage = "multiplicity";
        return rep;
      }
      vars = merge_vars(vars, used_variables(f.circuit));
      dr += f.multiplicity * degree_bound(f.circuit).total;
    }
    d = std::max(d, dr);
    auto full = [&](const Circuit& c, std::map<std::string, Coeff> m) {
      for (const auto& v : c.variables())
        if (!m.count(v)) m[v] = Coeff(0);
      return m;
    };
    auto agree = [&](const std::map<std::string, Coeff>& pt) {
      ++rep.points;
      Coeff lhs(r.unit);
      for (const auto& f : r.factors) {
        Coeff v = eval_circuit1(f.circuit, full(f.circuit, pt)), acc(1);
        for (int i = 0; i < f.multiplicity; ++i) acc *= v;
        lhs *= acc;
      }
      return lhs == eval_circuit1(p, full(p, pt));
    };
    int n = static_cast<int>(vars.size());
    if (std::pow(d + 1.0, n) <= 1e4) {
      rep.stage = "grid";
      std::vector<int> idx(n, 0);
      while (true) {
        std::map<std::string, Coeff> pt;
        for (int i = 0; i < n; ++i) pt[vars[i]] = Coeff(idx[i]);
        if (!agree(pt)) return rep;
        int k = n - 1;
        while (k >= 0 && ++idx[k] > d) idx[k--] = 0;
        if (k < 0) break;
      }
    } else {
      rep.stage = "points";
      std::mt19937 rng(0x5eed);
      std::uniform_int_distribution<int> num(-1000, 1000), den(1, 97);
      for (int t = 0; t < 200; ++t) {
        std::map<std::string, Coeff> pt;
        for (const auto& v : vars) {
          Scalar q(num(rng), den(rng));
          q.canonicalize();
          pt[v] = Coeff(q);
        }
        if (!agree(pt)) return rep;
      }
    }
    // Divisibility against the squarefree parts, after a generic shift that
    // makes both sides monic in a fresh variable.
    rep.stage = "divides";
    MultiPoly P;
    try {
      P = dense_from_circuit(p, cap).with_vars(vars);
    } catch (const CapExceeded&) {
      rep.stage.clear();
      rep.ok = true;
      return rep;
    }
    auto sq = squarefree_decompose(P);
    std::string z = fresh("z", vars);
    std::vector<std::string> zv = merge_vars(vars, {z});
    for (const auto& f : r.factors) {
      if (f.multiplicity > static_cast<int>(sq.parts.size())) return rep;
      MultiPoly g = (f.dense ? *f.dense : dense_from_circuit(f.circuit, cap)).with_vars(vars);
      MultiPoly part = sq.parts[f.multiplicity - 1].with_vars(vars);
      int dg = g.total_degree(), dp = part.total_degree();
      if (dg < 1 || dp < dg) return rep;
      MultiPoly hg = hom_component(g, vars, dg), hp = hom_component(part, vars, dp);
      auto a = grid_search(n, dg + dp, 1e6, [&](const std::vector<Coeff>& x) {
        return !evaluate(hg, x).is_zero() && !evaluate(hp, x).is_zero();
      });
      if (!a) return rep;
      std::map<std::string, MultiPoly> shift;
      for (int i = 0; i < n; ++i)
        shift[vars[i]] = MultiPoly::variable(vars[i], zv) + MultiPoly::variable(z, zv) * (*a)[i];
      MultiPoly gs = substitute(g.with_vars(zv), shift) * evaluate(hg, *a).inverse();
      MultiPoly ps = substitute(part.with_vars(zv), shift) * evaluate(hp, *a).inverse();
      if (!divides_monic(gs, ps, z)) return rep;
    }
    rep.stage.clear();
    rep.ok = true;
  } catch (const Error&) {
    rep.ok = false;
    if (rep.stage.empty()) rep.stage = "error";
  }
  return rep;
}

bool verify_factorization(const Circuit& p, const FactorizationResult& r) { return verify_factorization_report(p, r).ok; }

}  // namespace circfactor
