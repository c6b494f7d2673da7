#include "circfactor/lift.hh"

#include <algorithm>

namespace circfactor {

namespace {

std::vector<std::string> without(const std::vector<std::string>& vars, const std::string& z) {
  std::vector<std::string> out;
  for (const auto& v : vars)
    if (v != z) out.push_back(v);
  return out;
}

// Scalar value of P(0, 0, a) and dP/dz(0, 0, a).
std::pair<Coeff, Coeff> base_values(const MultiPoly& p, const Coeff& a, const std::string& z) {
  std::vector<Coeff> pt(p.nvars(), Coeff(0));
  int zi = p.var_index(z);
  if (zi >= 0) pt[zi] = a;
  Coeff v = evaluate(p, pt);
  Coeff d = zi >= 0 ? evaluate(derivative(p, z), pt) : Coeff(0);
  return {v, d};
}

struct Setup {
  std::vector<std::string> xvars;
  Coeff beta;
};

Setup prepare(const MultiPoly& p, const Coeff& alpha, const std::string& z) {
  auto [v, d] = base_values(p, alpha, z);
  if (!v.is_zero()) throw NotARoot("P(0, 0, alpha) is nonzero");
  if (d.is_zero()) throw DegenerateRoot("dP/dz vanishes at alpha");
  return {without(p.vars(), z), d};
}

}  // namespace

MultiPoly mul_trunc(const MultiPoly& a, const MultiPoly& b, const std::string& T, int k) {
  auto vars = merge_vars(a.vars(), b.vars());
  MultiPoly x = a.with_vars(vars), y = b.with_vars(vars);
  int ti = x.var_index(T);
  if (ti < 0) return x * y;
  std::vector<std::vector<std::pair<const Exponent*, const Coeff*>>> by_t(k);
  for (const auto& [e, c] : y.terms())
    if (e[ti] < k) by_t[e[ti]].push_back({&e, &c});
  MultiPoly out(vars, x.field() ? x.field() : y.field());
  Exponent sum(vars.size());
  for (const auto& [e, c] : x.terms())
    for (int t = 0; t + e[ti] < k; ++t)
      for (const auto& [f, d] : by_t[t]) {
        for (size_t i = 0; i < vars.size(); ++i) sum[i] = e[i] + (*f)[i];
        out.add_term(sum, c * *d);
      }
  return out;
}


bool check_regularized(const MultiPoly& p, const std::string& T, const std::string& z) {
  int ti = p.var_index(T), zi = p.var_index(z);
  for (const auto& [e, c] : p.terms()) {
    int xdeg = 0;
    for (int i = 0; i < p.nvars(); ++i)
      if (i != ti && i != zi) xdeg += e[i];
    if (xdeg > 0 && (ti < 0 || e[ti] == 0)) return false;
  }
  return true;
}

MultiPoly eval_at_root_trunc(const MultiPoly& p, const MultiPoly& phi, int k, const std::string& T,
                             const std::string& z) {
  auto vars = without(merge_vars(p.vars(), phi.vars()), z);
  if (p.var_index(z) < 0) return poly_trunc(p.with_vars(vars), {T}, k);
  auto coef = coefficients_in(p, z);
  MultiPoly f = phi.with_vars(vars);
  MultiPoly acc = coef.back().with_vars(vars);
  for (size_t j = coef.size() - 1; j-- > 0;) acc = mul_trunc(acc, f, T, k) + poly_trunc(coef[j].with_vars(vars), {T}, k);
  return poly_trunc(acc, {T}, k);
}

ApproxRoot newton_lift_linear(const MultiPoly& p, const Coeff& alpha, int k, const std::string& T,
                              const std::string& z) {
  if (k < 1) throw DegenerateInput("order must be positive");
  Setup s = prepare(p, alpha, z);
  Coeff inv = s.beta.inverse();
  MultiPoly phi = MultiPoly::constant(alpha, s.xvars);
  int ti = phi.var_index(T);
  if (ti < 0 || k == 1) {
    for (int i = 1; i < k; ++i) {
      MultiPoly r = eval_at_root_trunc(p, phi, i + 1, T, z);
      phi = poly_trunc(phi - r * inv, {T}, i + 1);
    }
    return {phi, k, alpha, s.beta};
  }
  // Works on T-slices: f[j] = [T^j] phi, pw[i][j] = [T^j] phi^i, c[i][m] =
  // [T^m z^i] P. Step j only needs slice j of P(phi), which is linear in f[j].
  const auto& xv = s.xvars;
  auto slices = [&](const MultiPoly& q) {
    std::vector<MultiPoly> out(k, MultiPoly(xv));
    MultiPoly qx = q.with_vars(xv);
    for (const auto& [e, c] : qx.terms()) {
      if (e[ti] >= k) continue;
      Exponent f = e;
      f[ti] = 0;
      out[e[ti]].add_term(f, c);
    }
    return out;
  };
  std::vector<std::vector<MultiPoly>> c;
  for (const auto& ci : coefficients_in(p, z)) c.push_back(slices(ci));
  int dz = static_cast<int>(c.size()) - 1;
  std::vector<MultiPoly> f(k, MultiPoly(xv));
  f[0] = phi;
  std::vector<std::vector<MultiPoly>> pw(dz + 1, std::vector<MultiPoly>(k, MultiPoly(xv)));
  pw[0][0] = MultiPoly::constant(Coeff(1), xv);
  for (int i = 1; i <= dz; ++i) pw[i][0] = pw[i - 1][0] * f[0];
  auto power_slices = [&](int j) {
    for (int i = 1; i <= dz; ++i) {
      MultiPoly acc(xv);
      for (int l = 0; l <= j; ++l)
        if (!f[l].is_zero() && !pw[i - 1][j - l].is_zero()) acc += f[l] * pw[i - 1][j - l];
      pw[i][j] = acc;
    }
  };
  for (int j = 1; j < k; ++j) {
    power_slices(j);  // with f[j] = 0
    MultiPoly e(xv);
    for (int i = 0; i <= dz; ++i)
      for (int m = 0; m <= j; ++m)
        if (!c[i][m].is_zero() && !pw[i][j - m].is_zero()) e += c[i][m] * pw[i][j - m];
    f[j] = -(e * inv);
    if (!f[j].is_zero()) power_slices(j);
  }
  MultiPoly tv = MultiPoly::variable(T, xv);
  MultiPoly out(xv);
  for (int j = k - 1; j >= 0; --j) out = out * tv + f[j];
  return {out, k, alpha, s.beta};
}

std::pair<ApproxRoot, InverseWitness> newton_lift_quadratic(const MultiPoly& p, const Coeff& alpha, int k,
                                                            const std::string& T, const std::string& z) {
  if (k < 1) throw DegenerateInput("order must be positive");
  Setup s = prepare(p, alpha, z);
  MultiPoly dp = derivative(p, z);
  MultiPoly phi = MultiPoly::constant(alpha, s.xvars);
  MultiPoly sigma = MultiPoly::constant(s.beta.inverse(), s.xvars);
  InverseWitness w;
  w.sigma.push_back(sigma);
  MultiPoly two = MultiPoly::constant(Coeff(2), s.xvars);
  for (int m = 2; m / 2 < k; m *= 2) {
    phi = poly_trunc(phi - mul_trunc(eval_at_root_trunc(p, phi, m, T, z), sigma, T, m), {T}, m);
    MultiPoly d = eval_at_root_trunc(dp, phi, m, T, z);
    sigma = poly_trunc(two * sigma - mul_trunc(mul_trunc(sigma, sigma, T, m), d, T, m), {T}, m);
    w.sigma.push_back(sigma);
  }
  return {{poly_trunc(phi, {T}, k), k, alpha, s.beta}, w};
}

bool check_approx_root(const MultiPoly& p, const MultiPoly& phi, int k, const std::string& T,
                       const std::string& z) {
  if (k < 1) return false;
  if (phi.degree(T) >= k) return false;
  Coeff a = phi.with_vars(merge_vars(phi.vars(), {T})).constant_term();
  auto [v, beta] = base_values(p, a, z);
  if (beta.is_zero()) return false;
  return eval_at_root_trunc(p, phi, k, T, z).is_zero();
}

Circuit root_circuit(const ApproxRoot& r) { return circuit_from_poly(r.phi); }

}  // namespace circfactor
