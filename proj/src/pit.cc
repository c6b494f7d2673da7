#include "circfactor/pit.hh"

#include <algorithm>
#include <cmath>
#include <set>

namespace circfactor {

namespace {

enum class Scan { Found, Exhausted, Capped };

// Walk over {0..d}^m by shells of increasing max-coordinate s, each shell
// in lexicographic order (last coordinate fastest). Points with small
// coordinates come first, so a nonzero point is usually met early even when
// many of the coordinates must be nonzero at once.
Scan walk(int m, int d, double cap, const std::function<bool(const std::vector<Coeff>&)>& visit, long& count) {
  double total = std::pow(d + 1.0, m);
  if (m == 0) d = 0;
  for (int s = 0; s <= d; ++s) {
    std::vector<int> idx(m, 0);
    while (true) {
      if (s == 0 || *std::max_element(idx.begin(), idx.end()) == s) {
        if (count >= cap) return total > cap ? Scan::Capped : Scan::Exhausted;
        std::vector<Coeff> p;
        p.reserve(m);
        for (int x : idx) p.emplace_back(x);
        ++count;
        if (visit(p)) return Scan::Found;
      }
      int k = m - 1;
      while (k >= 0 && ++idx[k] > s) idx[k--] = 0;
      if (k < 0) break;
    }
  }
  return Scan::Exhausted;
}

struct KIScan {
  Scan status;
  std::vector<Coeff> x;
  long points = 0;
};

KIScan scan_ki(const KIMap& k, int d, double cap, const std::function<bool(const std::vector<Coeff>&)>& nonzero) {
  int dcomp = std::max(0, d) * std::max(1, k.g.total_degree());
  std::set<std::vector<Scalar>> seen;
  KIScan out;
  out.status = walk(
      k.design.mu, dcomp, cap,
      [&](const std::vector<Coeff>& w) {
        std::vector<Coeff> x = k.apply(w);
        std::vector<Scalar> key;
        for (const auto& c : x) key.push_back(c.rational());
        if (!seen.insert(key).second) return false;
        if (!nonzero(x)) return false;
        out.x = std::move(x);
        return true;
      },
      out.points);
  return out;
}

std::vector<std::string> stage_families(const std::string& first) {
  std::vector<std::string> f{first};
  for (const auto& name : hard_family_names())
    if (name != first) {
      f.push_back(name);
      break;
    }
  return f;
}

void note(const PitOptions& opt, const std::string& s) {
  if (opt.log) opt.log->push_back(s);
}

}  // namespace

std::optional<std::vector<Coeff>> scan_ki_map(const KIMap& k, int nvars, int d, double cap,
                                              const std::function<bool(const std::vector<Coeff>&)>& nonzero) {
  if (nvars > k.design.n) throw ArityMismatch("KI map has fewer images than variables");
  std::set<std::vector<Scalar>> seen;
  std::vector<Coeff> found;
  long count = 0;
  Scan s = walk(
      k.design.mu, d, cap,
      [&](const std::vector<Coeff>& w) {
        std::vector<Coeff> x = k.apply(w);
        x.resize(nvars);
        std::vector<Scalar> key;
        for (const auto& c : x) key.push_back(c.rational());
        if (!seen.insert(key).second || !nonzero(x)) return false;
        found = std::move(x);
        return true;
      },
      count);
  if (s == Scan::Found) return found;
  return std::nullopt;
}

std::vector<std::string> used_variables(const Circuit& c) {
  auto live = c.reachable();
  std::vector<bool> used(c.variables().size(), false);
  for (size_t g = 0; g < c.gates().size(); ++g)
    if (live[g] && c.gate(static_cast<int>(g)).op == Op::Input) used[c.gate(static_cast<int>(g)).var] = true;
  std::vector<std::string> out;
  for (size_t i = 0; i < used.size(); ++i)
    if (used[i]) out.push_back(c.variables()[i]);
  return out;
}

std::optional<std::vector<Coeff>> grid_search(int m, int d, double cap,
                                              const std::function<bool(const std::vector<Coeff>&)>& nonzero,
                                              long* evaluated) {
  long count = 0;
  std::vector<Coeff> found;
  Scan s = walk(
      m, d, cap,
      [&](const std::vector<Coeff>& p) {
        if (!nonzero(p)) return false;
        found = p;
        return true;
      },
      count);
  if (evaluated) *evaluated = count;
  if (s == Scan::Found) return found;
  if (s == Scan::Capped) throw CapExceeded("grid {0.." + std::to_string(d) + "}^" + std::to_string(m) +
                                           " exceeds the cap without a witness");
  return std::nullopt;
}

namespace {
// Maps a point on the used variables back onto all declared variables.
struct UsedView {
  const Circuit& c;
  std::vector<std::string> used;
  std::vector<int> pos;
  explicit UsedView(const Circuit& circ) : c(circ), used(used_variables(circ)) {
    for (const auto& u : used)
      for (size_t i = 0; i < c.variables().size(); ++i)
        if (c.variables()[i] == u) pos.push_back(static_cast<int>(i));
  }
  std::vector<Coeff> full(const std::vector<Coeff>& x) const {
    std::vector<Coeff> p(c.variables().size(), Coeff(0));
    for (size_t i = 0; i < pos.size(); ++i) p[pos[i]] = x[i];
    return p;
  }
  bool nonzero(const std::vector<Coeff>& x) const { return !eval_at(c, full(x)).is_zero(); }
};
}  // namespace

PitVerdict grid_pit(const Circuit& c, int d, double cap) {
  UsedView v(c);
  PitVerdict r;
  r.stage = "grid";
  auto w = grid_search(static_cast<int>(v.used.size()), d, cap, [&](const std::vector<Coeff>& x) { return v.nonzero(x); },
                       &r.points);
  if (w) {
    r.is_zero = false;
    r.witness = v.full(*w);
  }
  return r;
}

PitVerdict ki_pit(const Circuit& c, const Scalar& epsilon, const PitOptions& opt) {
  UsedView v(c);
  int n = static_cast<int>(v.used.size());
  int d = degree_bound(c).total;
  PitVerdict r;
  if (n == 0) {
    r.stage = "grid";
    r.points = 1;
    if (v.nonzero({})) {
      r.is_zero = false;
      r.witness = v.full({});
    }
    return r;
  }
  auto pred = [&](const std::vector<Coeff>& x) { return v.nonzero(x); };
  bool assumption_zero = false;
  for (const auto& fam : stage_families(opt.family)) {
    KIMap k = ki_for(n, epsilon, fam);
    KIScan s = scan_ki(k, d, opt.grid_cap, pred);
    r.points += s.points;
    if (s.status == Scan::Found) {
      r.is_zero = false;
      r.witness = v.full(s.x);
      r.stage = "ki:" + fam;
      if (!v.nonzero(s.x)) throw VerificationFailed("KI witness does not re-evaluate nonzero");
      return r;
    }
    if (s.status == Scan::Exhausted) {
      assumption_zero = true;
      note(opt, "ki_pit: family " + fam + " reports zero");
      if (!opt.fallback) {
        r.stage = "ki:" + fam;
        return r;
      }
    } else {
      note(opt, "ki_pit: family " + fam + " hit the grid cap");
      if (!opt.fallback) throw CapExceeded("KI grid exceeds the cap");
    }
  }
  if (std::pow(d + 1.0, n) <= opt.grid_cap) {
    note(opt, "ki_pit: direct grid on the original variables");
    PitVerdict g = grid_pit(c, d, opt.grid_cap);
    g.points += r.points;
    return g;
  }
  if (assumption_zero) throw FallbackExhausted("zero verdict rests on the hardness assumption and the grid is too large");
  throw CapExceeded("every PIT stage exceeds the cap");
}

std::vector<Coeff> ki_search(int n, int d, const Scalar& epsilon,
                             const std::function<bool(const std::vector<Coeff>&)>& nonzero, const PitOptions& opt) {
  if (n == 0) {
    if (nonzero({})) return {};
    throw FallbackExhausted("constant predicate is zero");
  }
  for (const auto& fam : stage_families(opt.family)) {
    KIScan s = scan_ki(ki_for(n, epsilon, fam), d, opt.grid_cap, nonzero);
    if (s.status == Scan::Found) return s.x;
    note(opt, "ki_search: family " + fam + " found no witness");
    if (!opt.fallback) throw FallbackExhausted("KI search failed and fallback is off");
  }
  note(opt, "ki_search: direct grid");
  try {
    auto w = grid_search(n, d, opt.grid_cap, nonzero);
    if (w) return *w;
  } catch (const CapExceeded&) {
  }
  throw FallbackExhausted("no nonzero point found by any stage");
}

}  // namespace circfactor
