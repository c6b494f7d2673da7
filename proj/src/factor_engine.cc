#include "circfactor/factor_engine.hh"

#include <algorithm>
#include <json.hpp>
#include <set>

namespace circfactor {

namespace {

void note(std::vector<std::string>* log, const std::string& s) {
  if (log) log->push_back(s);
}

std::string fresh_name(const std::string& base, const std::vector<std::string>& taken) {
  std::string s = base;
  while (std::find(taken.begin(), taken.end(), s) != taken.end()) s += "_";
  return s;
}

// A prefix no existing name starts with, so KI variables never collide.
std::string fresh_prefix(const std::vector<std::string>& taken) {
  std::string p = "w";
  auto clash = [&] {
    for (const auto& t : taken)
      if (t.compare(0, p.size(), p) == 0) return true;
    return false;
  };
  while (clash()) p += "w";
  return p;
}

std::string alternate_family(const std::string& fam) {
  for (const auto& name : hard_family_names())
    if (name != fam) return name;
  return fam;
}

Circuit linear_circuit(const std::vector<std::pair<Scalar, std::string>>& terms, const Scalar& c0) {
  Circuit c;
  std::vector<int> args;
  for (const auto& [k, v] : terms)
    if (k != 0) args.push_back(c.scale(k, c.input(v)));
  if (c0 != 0) args.push_back(c.constant(c0));
  c.set_output(args.empty() ? c.constant(0) : c.add(args));
  return c;
}

std::map<std::string, Coeff> point_map(const std::vector<std::string>& xs, const std::vector<Coeff>& v) {
  std::map<std::string, Coeff> m;
  for (size_t i = 0; i < xs.size(); ++i) m[xs[i]] = v[i];
  return m;
}

// Univariate z-polynomial of the T-degree-0 part; every other variable must
// be absent there.
QPoly projection(const MultiPoly& p, const std::string& T, const std::string& z) {
  int t = p.var_index(T), zi = p.require_var(z);
  QPoly q;
  for (const auto& [e, c] : p.terms()) {
    if (t >= 0 && e[t] > 0) continue;
    for (int i = 0; i < p.nvars(); ++i)
      if (i != zi && e[i] != 0) throw HypothesisViolated("projection is not univariate in " + z);
    if (!c.is_rational()) throw FieldMismatch("projection over a number field");
    if (static_cast<int>(q.size()) <= e[zi]) q.resize(e[zi] + 1);
    q[e[zi]] += c.rational();
  }
  qpoly::trim(q);
  return q;
}

// Splits p by powers of T up to `top`; the slices keep p's variables with T
// exponent zero.
std::vector<MultiPoly> t_slices(const MultiPoly& p, const std::string& T, int top) {
  std::vector<MultiPoly> out(top + 1, MultiPoly(p.vars(), p.field()));
  int t = p.var_index(T);
  for (const auto& [e, c] : p.terms()) {
    int k = t >= 0 ? e[t] : 0;
    if (k > top) continue;
    Exponent f(e);
    if (t >= 0) f[t] = 0;
    out[k].add_term(f, c);
  }
  return out;
}

MultiPoly truncated_product(const MultiPoly& a, const MultiPoly& b, const std::string& T, int k) {
  return poly_trunc(a * b, {T}, k);
}

// G(1, x - b, 0), grlex-monic.
MultiPoly undo(const MultiPoly& gt, const Preprocessing& info) {
  std::map<std::string, MultiPoly> sub;
  sub[info.T] = MultiPoly::constant(Coeff(1), info.x);
  sub[info.z] = MultiPoly::constant(Coeff(0), info.x);
  for (size_t i = 0; i < info.x.size(); ++i)
    sub[info.x[i]] = MultiPoly::variable(info.x[i], info.x) - MultiPoly::constant(Coeff(info.b[i]), info.x);
  return make_monic(substitute(gt, sub).with_vars(info.x));
}

// Divides the recovered z-monic factors out of P~ one by one.
bool divides_all(const MultiPoly& ptilde, const std::vector<MultiPoly>& gs, const std::string& z) {
  MultiPoly rest = ptilde;
  for (const auto& g : gs) {
    if (g.degree(z) < 1) return false;
    DivResult d = dense_divide(rest, g, z);
    if (!d.remainder.is_zero()) return false;
    rest = d.quotient;
  }
  return rest.is_constant() && rest.constant_term().is_one();
}

struct Context {
  Preprocessing info;
  MultiPoly ptilde;
  QPoly base;  // P~(0, 0, z)
};

std::vector<MultiPoly> ki_attempt(const Context& cx, const FactorOptions& opt, const std::string& family, int bump,
                                  std::vector<std::string>* log) {
  const auto& info = cx.info;
  int n = static_cast<int>(info.x.size());
  int D = info.degree;
  std::vector<std::string> taken = info.x;
  taken.push_back(info.T);
  taken.push_back(info.z);
  KIMap ki = ki_for(n, opt.epsilon, family, bump, fresh_prefix(taken));
  std::map<std::string, MultiPoly> sub;
  std::map<std::string, Circuit> csub;
  for (int i = 0; i < n; ++i) {
    sub[info.x[i]] = ki.images[i];
    csub[info.x[i]] = ki.image_circuits[i];
  }
  // Cap check on the composed circuit's degree bounds before expanding.
  Circuit pc = circuit_from_poly(cx.ptilde);
  DegreeBound bd = degree_bound(substitute(pc, csub));
  double cells = 1;
  for (const auto& [v, d] : bd.per_var) cells *= d + 1.0;
  if (cells > opt.monomial_cap) throw CapExceeded("composed polynomial exceeds the monomial cap");
  MultiPoly F = substitute(cx.ptilde, sub);
  std::map<std::string, int> weight;
  weight[info.T] = 1;
  for (const auto& w : ki.w) weight[w] = 0;
  auto composed = hensel_factor(F, info.z, weight, opt.recombination_cap);
  note(log, "ki(" + family + "," + std::to_string(bump) + "): composed polynomial has " +
                std::to_string(composed.size()) + " factors");
  // Each composed factor projects onto one group of univariate factors of
  // P~(0, 0, z); the groups are lifted jointly over Q[T, x].
  std::vector<QPoly> groups;
  for (const auto& h : composed) groups.push_back(projection(h, info.T, info.z));
  std::map<std::string, int> tw{{info.T, 1}};
  for (const auto& v : info.x) tw[v] = 0;
  std::vector<MultiPoly> out = hensel_lift(cx.ptilde, info.z, tw, groups);
  for (size_t k = 0; k < groups.size(); ++k) {
    int Dz = qpoly::degree(groups[k]);
    auto classes = univariate_factor_Q(groups[k], opt.recombination_cap);
    if (n > 2 || Dz == D || Dz * (D + 1) > opt.minpoly_limit || classes.size() != 1) continue;
    // Small groups go through the minimal polynomial of one lifted root.
    const QPoly& f = classes.front().factor;
    int e = qpoly::degree(f);
    Coeff alpha = e > 1 ? Coeff::generator(number_field(f)) : Coeff(-f[0] / f[1]);
    ApproxRoot r = newton_lift_quadratic(cx.ptilde, alpha, 2 * D * Dz + 1, info.T, info.z).first;
    Circuit g = minimal_poly_from_root(r, D, Dz, ki, MinPolyPathway::Symbolic, info.T, info.z);
    out[k] = dense_from_circuit(g, opt.monomial_cap).with_vars(cx.ptilde.vars());
  }
  if (!divides_all(cx.ptilde, out, info.z)) throw VerificationFailed("recovered factors do not divide P~");
  return out;
}

}  // namespace

Preprocessed preprocess(const Circuit& c, const FactorOptions& opt, std::vector<std::string>* log) {
  Preprocessed out;
  auto& info = out.info;
  info.x = used_variables(c);
  info.T = fresh_name("T", info.x);
  info.z = fresh_name("z", info.x);
  int n = static_cast<int>(info.x.size());
  if (n == 0) throw DegenerateInput("constant polynomial");
  // Drop any top degree that vanishes identically (circuit bounds may overshoot).
  PitOptions po;
  po.grid_cap = opt.grid_cap;
  po.family = opt.family;
  po.log = log;
  int D = degree_bound(c).total;
  Circuit hom;
  std::vector<Coeff> a;
  for (;; --D) {
    if (D < 1) throw DegenerateInput("constant polynomial");
    hom = hom_component_circuit(c, info.x, D);
    try {
      a = ki_search(n, D, opt.epsilon, [&](const std::vector<Coeff>& p) { return !eval_circuit1(hom, point_map(info.x, p)).is_zero(); },
                    po);
      break;
    } catch (const FallbackExhausted&) {
      note(log, "preprocess: degree " + std::to_string(D) + " component vanishes on every stage");
    }
  }
  info.degree = D;
  Scalar delta = eval_circuit1(hom, point_map(info.x, a)).rational();
  info.delta = delta;
  for (const auto& v : a) info.a.push_back(v.rational());
  // P^(x, z) = P(x + a z) / delta
  std::map<std::string, Circuit> shift;
  for (int i = 0; i < n; ++i) shift[info.x[i]] = linear_circuit({{1, info.x[i]}, {info.a[i], info.z}}, 0);
  Circuit hat = substitute(c, shift);
  hat.set_output(hat.scale(1 / delta, hat.output()));
  // Discriminant in z as a Sylvester determinant of coefficient circuits.
  Circuit disc = Circuit::constant_circuit(1);
  if (D > 1) {
    std::vector<Circuit> pc(D + 1), dc(D);
    for (int i = 0; i <= D; ++i) pc[i] = coefficient_circuit(hat, info.z, i);
    for (int i = 0; i < D; ++i) {
      dc[i] = pc[i + 1];
      dc[i].set_output(dc[i].scale(Scalar(i + 1), dc[i].output()));
    }
    int N = 2 * D - 1;
    Circuit zero = Circuit::constant_circuit(0);
    std::vector<std::vector<Circuit>> m(N, std::vector<Circuit>(N, zero));
    for (int r = 0; r < D - 1; ++r)
      for (int i = 0; i <= D; ++i) m[r][r + i] = pc[D - i];
    for (int r = 0; r < D; ++r)
      for (int i = 0; i < D; ++i) m[D - 1 + r][r + i] = dc[D - 1 - i];
    disc = determinant_circuit(m);
  }
  int ddeg = std::min(degree_bound_in(disc, info.x), (2 * D - 1) * D);
  std::vector<Coeff> b = ki_search(
      n, ddeg, opt.epsilon,
      [&](const std::vector<Coeff>& p) {
        auto m = point_map(info.x, p);
        for (const auto& v : disc.variables())
          if (!m.count(v)) m[v] = Coeff(0);
        return !eval_circuit1(disc, m).is_zero();
      },
      po);
  for (const auto& v : b) info.b.push_back(v.rational());
  std::map<std::string, Circuit> reg;
  for (int i = 0; i < n; ++i) {
    Circuit t;
    t.set_output(t.add({t.mul({t.input(info.T), t.input(info.x[i])}), t.constant(info.b[i])}));
    reg[info.x[i]] = t;
  }
  out.tilde = substitute(hat, reg);
  note(log, "preprocess: D = " + std::to_string(D));
  return out;
}

SquarefreeParts squarefree_parts_circuits(const Circuit& c, double cap) {
  MultiPoly p = dense_from_circuit(c, cap);
  if (p.is_zero()) throw DegenerateInput("the zero polynomial has no factorization");
  SquarefreeParts out;
  auto sq = squarefree_decompose(p);
  out.unit = sq.unit;
  for (const auto& part : sq.parts) out.parts.push_back(circuit_from_poly(part));
  return out;
}

Circuit minimal_poly_from_root(const ApproxRoot& phi, int D, int Dz, const KIMap& ki, MinPolyPathway pathway,
                               const std::string& T, const std::string& z) {
  int L = 2 * D * Dz;
  if (Dz < 1 || D < 1) throw DegenerateInput("degrees must be positive");
  if (phi.order < L + 1) throw HypothesisViolated("root order below 2*D*D_z + 1");
  const NumberField* K = phi.phi.field();
  int h = K ? K->degree() : 1;
  std::vector<std::string> xv;
  for (const auto& v : phi.phi.vars())
    if (v != T && v != z) xv.push_back(v);
  std::vector<std::string> pv = phi.phi.vars();
  if (std::find(pv.begin(), pv.end(), T) == pv.end()) pv.push_back(T);
  MultiPoly f = phi.phi.with_vars(pv);
  // slices[i][m] = coefficient of T^m in phi^i
  std::vector<std::vector<MultiPoly>> slices;
  MultiPoly pw = MultiPoly::constant(Coeff(1), pv).with_field(K);
  for (int i = 0; i <= Dz; ++i) {
    slices.push_back(t_slices(pw, T, L));
    pw = truncated_product(pw, f, T, L + 1);
  }
  auto rational = [&](const MultiPoly& p) {
    auto parts = nf_coeff_decompose(p, K);
    for (auto& q : parts) q = q.with_vars(xv);
    return parts;
  };
  int N = Dz * (D + 1);
  std::vector<std::vector<MultiPoly>> M;
  std::vector<MultiPoly> rhs;
  for (int l = 0; l <= L; ++l) {
    std::vector<std::vector<MultiPoly>> row(h, std::vector<MultiPoly>(N, MultiPoly(xv)));
    for (int i = 0; i < Dz; ++i)
      for (int j = 0; j <= std::min(l, D); ++j) {
        auto parts = rational(slices[i][l - j]);
        for (int r = 0; r < h; ++r) row[r][i * (D + 1) + j] = parts[r];
      }
    auto c = rational(slices[Dz][l]);
    for (int r = 0; r < h; ++r) {
      M.push_back(row[r]);
      rhs.push_back(-c[r]);
    }
  }
  std::vector<std::string> gv{T};
  for (const auto& v : xv) gv.push_back(v);
  gv.push_back(z);
  Circuit g(gv);
  std::vector<int> terms{g.pow(g.input(z), Dz)};
  if (pathway == MinPolyPathway::Symbolic) {
    LinearSolution sol = fraction_free_solve(M, rhs);
    for (int u = 0; u < N; ++u) {
      MultiPoly B = exact_divide(sol.numerators[u], sol.denominator);
      if (B.is_zero()) continue;
      int i = u / (D + 1), j = u % (D + 1);
      int bg = build_poly(g, B);
      terms.push_back(g.mul({bg, g.pow(g.input(T), j), g.pow(g.input(z), i)}));
    }
  } else {
    // Cramer on N rows of M that are independent at a KI point; that point
    // also serves as the expansion point of the division elimination.
    int maxdeg = 0;
    for (const auto& row : M)
      for (const auto& e : row) maxdeg = std::max(maxdeg, e.total_degree());
    std::vector<int> rows;
    auto pick_rows = [&](const std::vector<Coeff>& p) {
      rows.clear();
      std::vector<std::vector<Scalar>> basis;  // reduced rows, pivot first nonzero
      std::vector<int> pivots;
      for (size_t r = 0; r < M.size() && static_cast<int>(rows.size()) < N; ++r) {
        std::vector<Scalar> v(N);
        for (int u = 0; u < N; ++u)
          if (!M[r][u].is_zero()) v[u] = evaluate(M[r][u], p).rational();
        for (size_t b = 0; b < basis.size(); ++b) {
          if (v[pivots[b]] == 0) continue;
          Scalar f = v[pivots[b]] / basis[b][pivots[b]];
          for (int u = 0; u < N; ++u) v[u] -= f * basis[b][u];
        }
        int piv = 0;
        while (piv < N && v[piv] == 0) ++piv;
        if (piv == N) continue;
        basis.push_back(std::move(v));
        pivots.push_back(piv);
        rows.push_back(static_cast<int>(r));
      }
      return static_cast<int>(rows.size()) == N;
    };
    auto gamma = scan_ki_map(ki, static_cast<int>(xv.size()), N * maxdeg, 1e6, pick_rows);
    if (!gamma) throw ZeroDeterminantOnGrid("no nonsingular square subsystem on the scanned KI grid");
    pick_rows(*gamma);
    std::vector<std::vector<MultiPoly>> A;
    std::vector<MultiPoly> y;
    for (int r : rows) {
      A.push_back(M[r]);
      y.push_back(rhs[r]);
    }
    std::map<std::string, Scalar> u0;
    for (size_t i = 0; i < xv.size(); ++i) u0[xv[i]] = (*gamma)[i].rational();
    // Determinant and all numerators share one circuit so the division
    // elimination expands the entries and 1/det only once.
    Circuit q(gv);
    std::vector<std::vector<int>> Ag(N, std::vector<int>(N));
    std::vector<int> yg(N);
    for (int r = 0; r < N; ++r) {
      for (int s = 0; s < N; ++s) Ag[r][s] = build_poly(q, A[r][s]);
      yg[r] = build_poly(q, y[r]);
    }
    int det = build_determinant(q, Ag);
    q.set_output(q.div(build_determinant(q, [&] {
      auto m = Ag;
      for (int r = 0; r < N; ++r) m[r][0] = yg[r];
      return m;
    }()), det));
    for (int u = 1; u < N; ++u) {
      auto m = Ag;
      for (int r = 0; r < N; ++r) m[r][u] = yg[r];
      q.add_output(q.div(build_determinant(q, m), det));
    }
    // No grid check of the quotients: the Berkowitz numerators have degree
    // in the hundreds, which makes the check dominate. Callers compare G.
    Circuit e = eliminate_divisions(q, u0, D);
    std::vector<int> es = e.outputs();
    std::vector<int> et{e.pow(e.input(z), Dz)};
    for (int u = 0; u < N; ++u) {
      int i = u / (D + 1), j = u % (D + 1);
      et.push_back(e.mul({es[u], e.pow(e.input(T), j), e.pow(e.input(z), i)}));
    }
    e.set_output(e.add(et));
    return e;
  }
  g.set_output(g.add(terms));
  return g;
}

std::vector<Circuit> factor_squarefree(const Circuit& c, const FactorOptions& opt, FactorStats* stats) {
  std::vector<std::string>* log = stats ? &stats->log : nullptr;
  std::vector<std::string> xs = used_variables(c);
  if (xs.empty()) return {};
  MultiPoly P = dense_from_circuit(c, opt.monomial_cap).with_vars(xs);
  if (P.is_zero()) throw DegenerateInput("the zero polynomial has no factorization");
  if (P.is_constant()) return {};
  std::vector<MultiPoly> found;
  if (P.total_degree() == 1) {
    found.push_back(make_monic(P));
  } else {
    Context cx;
    cx.info = preprocess(c, opt, log).info;
    const auto& info = cx.info;
    std::vector<std::string> tv{info.T};
    for (const auto& v : xs) tv.push_back(v);
    tv.push_back(info.z);
    std::map<std::string, MultiPoly> sub;
    for (size_t i = 0; i < xs.size(); ++i)
      sub[xs[i]] = MultiPoly::variable(xs[i], tv) * MultiPoly::variable(info.T, tv) +
                   MultiPoly::constant(Coeff(info.b[i]), tv) +
                   MultiPoly::variable(info.z, tv) * Coeff(info.a[i]);
    cx.ptilde = (substitute(P.with_vars(tv), sub) * Coeff(1 / info.delta)).with_vars(tv);
    if (cx.ptilde.degree(info.z) != info.degree || !check_regularized(cx.ptilde, info.T, info.z))
      throw VerificationFailed("preprocessing did not produce a monic regularized polynomial");
    cx.base = projection(cx.ptilde, info.T, info.z);
    std::vector<std::pair<std::string, int>> attempts{{opt.family, 0}};
    if (opt.fallback) {
      attempts.push_back({alternate_family(opt.family), 0});
      attempts.push_back({opt.family, 1});
    }
    std::vector<MultiPoly> tilde;
    bool ok = false;
    for (const auto& [fam, bump] : attempts) {
      if (stats) ++stats->ki_runs;
      try {
        tilde = ki_attempt(cx, opt, fam, bump, log);
        ok = true;
        break;
      } catch (const Error& e) {
        note(log, "ki(" + fam + "," + std::to_string(bump) + ") failed: " + e.what());
      }
    }
    if (!ok) {
      if (!opt.fallback) throw VerificationFailed("KI factorization failed and fallback is off");
      note(log, "fallback: dense factorization of P~");
      if (stats) ++stats->final_densify;
      std::map<std::string, int> weight{{info.T, 1}};
      for (const auto& v : xs) weight[v] = 0;
      tilde = hensel_factor(cx.ptilde, info.z, weight, opt.recombination_cap);
      if (!divides_all(cx.ptilde, tilde, info.z)) throw VerificationFailed("dense fallback does not reproduce P~");
    }
    for (const auto& g : tilde) found.push_back(undo(g, info));
  }
  std::vector<Circuit> out;
  for (const auto& f : found) out.push_back(circuit_from_poly(f));
  std::sort(out.begin(), out.end(),
            [](const Circuit& a, const Circuit& b) { return serialize_circuit(a) < serialize_circuit(b); });
  return out;
}

FactorizationResult factor_all(const Circuit& c, const FactorOptions& opt, FactorStats* stats) {
  const auto& vars = c.variables();
  MultiPoly P = dense_from_circuit(c, opt.monomial_cap).with_vars(vars);
  if (P.is_zero()) throw DegenerateInput("the zero polynomial has no factorization");
  FactorizationResult r;
  SquarefreeParts sp = squarefree_parts_circuits(c, opt.monomial_cap);
  MultiPoly back = MultiPoly::constant(Coeff(1), vars);
  for (size_t i = 0; i < sp.parts.size(); ++i) {
    int m = static_cast<int>(i) + 1;
    for (const auto& f : factor_squarefree(sp.parts[i], opt, stats)) {
      FactorizationResult::Factor fa;
      fa.dense = dense_from_circuit(f, opt.monomial_cap).with_vars(vars);
      fa.circuit = f;
      fa.multiplicity = m;
      back *= fa.dense->pow(m);
      r.factors.push_back(std::move(fa));
      r.max_multiplicity = std::max(r.max_multiplicity, m);
    }
  }
  r.unit = P.leading_coefficient().rational() / back.leading_coefficient().rational();
  if (back * Coeff(r.unit) != P) throw VerificationFailed("factors do not multiply back to the input");
  std::sort(r.factors.begin(), r.factors.end(), [](const auto& a, const auto& b) {
    return serialize_circuit(a.circuit) < serialize_circuit(b.circuit);
  });
  return r;
}

std::string result_to_json(const FactorizationResult& r) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["unit"] = to_string(r.unit);
  j["factors"] = nlohmann::ordered_json::array();
  for (const auto& f : r.factors) {
    nlohmann::ordered_json o;
    o["circuit"] = serialize_circuit(f.circuit);
    o["multiplicity"] = f.multiplicity;
    o["dense"] = f.dense ? nlohmann::ordered_json(f.dense->to_string()) : nlohmann::ordered_json(nullptr);
    j["factors"].push_back(o);
  }
  return j.dump(2) + "\n";
}

FactorizationResult result_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("schema", 0) != 1) throw ParseError("unsupported factorization schema");
  FactorizationResult r;
  r.unit = parse_scalar(j.at("unit").get<std::string>());
  for (const auto& o : j.at("factors")) {
    FactorizationResult::Factor f;
    f.circuit = parse_circuit(o.at("circuit").get<std::string>());
    f.multiplicity = o.at("multiplicity").get<int>();
    if (f.multiplicity < 1) throw ParseError("multiplicity must be positive");
    if (o.contains("dense") && !o["dense"].is_null())
      f.dense = parse_poly(o["dense"].get<std::string>(), f.circuit.variables());
    r.max_multiplicity = std::max(r.max_multiplicity, f.multiplicity);
    r.factors.push_back(std::move(f));
  }
  return r;
}

}  // namespace circfactor
