#include "circfactor/polyring.hh"

#include <optional>

#include <algorithm>
#include <cctype>
#include <functional>

namespace circfactor {

bool GrlexGreater::operator()(const Exponent& a, const Exponent& b) const {
  int da = 0, db = 0;
  for (int x : a) da += x;
  for (int x : b) db += x;
  if (da != db) return da > db;
  return b < a;
}

int total_degree(const Exponent& e) {
  int d = 0;
  for (int x : e) d += x;
  return d;
}

std::shared_ptr<const std::vector<std::string>> MultiPoly::empty_vars() {
  static const auto empty = std::make_shared<const std::vector<std::string>>();
  return empty;
}

MultiPoly::MultiPoly(std::vector<std::string> vars, const NumberField* K)
    : vars_(std::make_shared<const std::vector<std::string>>(std::move(vars))), K_(K) {}

MultiPoly MultiPoly::constant(const Coeff& c, std::vector<std::string> vars) {
  MultiPoly p(std::move(vars), c.field());
  if (!c.is_zero()) p.terms_.emplace(Exponent(p.nvars(), 0), c);
  return p;
}

MultiPoly MultiPoly::variable(const std::string& name, std::vector<std::string> vars) {
  if (std::find(vars.begin(), vars.end(), name) == vars.end()) vars.push_back(name);
  MultiPoly p(std::move(vars));
  Exponent e(p.nvars(), 0);
  e[p.var_index(name)] = 1;
  p.terms_.emplace(e, Coeff(1));
  return p;
}

MultiPoly MultiPoly::monomial(const Coeff& c, const Exponent& e, std::vector<std::string> vars) {
  MultiPoly p(std::move(vars), c.field());
  if (static_cast<int>(e.size()) != p.nvars()) throw DimensionMismatch("exponent length");
  if (!c.is_zero()) p.terms_.emplace(e, c);
  return p;
}

int MultiPoly::var_index(const std::string& name) const {
  const auto& v = *vars_;
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] == name) return static_cast<int>(i);
  return -1;
}

int MultiPoly::require_var(const std::string& name) const {
  int i = var_index(name);
  if (i < 0) throw UnknownVariable(name);
  return i;
}

bool MultiPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && circfactor::total_degree(terms_.begin()->first) == 0);
}

Coeff MultiPoly::constant_term() const { return coefficient(Exponent(nvars(), 0)); }

Coeff MultiPoly::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  if (it == terms_.end()) return Coeff();
  return it->second;
}

void MultiPoly::absorb_field(const NumberField* K) {
  if (K == nullptr || K == K_) return;
  if (K_ != nullptr) throw FieldMismatch("polynomials over different number fields");
  K_ = K;
}

void MultiPoly::add_term(const Exponent& e, const Coeff& c) {
  if (c.is_zero()) return;
  absorb_field(c.field());
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

const Exponent& MultiPoly::leading_exponent() const {
  if (terms_.empty()) throw DegenerateInput("leading term of zero polynomial");
  return terms_.begin()->first;
}

const Coeff& MultiPoly::leading_coefficient() const {
  if (terms_.empty()) throw DegenerateInput("leading term of zero polynomial");
  return terms_.begin()->second;
}

int MultiPoly::degree(int var) const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

int MultiPoly::degree(const std::string& name) const {
  int i = var_index(name);
  if (i < 0) return terms_.empty() ? -1 : 0;
  return degree(i);
}

int MultiPoly::total_degree() const {
  if (terms_.empty()) return -1;
  return circfactor::total_degree(terms_.begin()->first);
}

int MultiPoly::degree_in(const std::vector<int>& idx) const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int i : idx) s += e[i];
    d = std::max(d, s);
  }
  return d;
}

std::vector<std::string> MultiPoly::used_vars() const {
  std::vector<std::string> out;
  for (int i = 0; i < nvars(); ++i)
    if (degree(i) > 0) out.push_back((*vars_)[i]);
  return out;
}

std::vector<std::string> merge_vars(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out(a);
  for (const auto& v : b)
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  return out;
}

MultiPoly MultiPoly::with_vars(const std::vector<std::string>& vars) const {
  if (vars == *vars_) return *this;
  MultiPoly out(vars, K_);
  std::vector<int> map(nvars());
  for (int i = 0; i < nvars(); ++i) {
    auto it = std::find(vars.begin(), vars.end(), (*vars_)[i]);
    map[i] = it == vars.end() ? -1 : static_cast<int>(it - vars.begin());
  }
  for (const auto& [e, c] : terms_) {
    Exponent f(vars.size(), 0);
    for (int i = 0; i < nvars(); ++i) {
      if (e[i] == 0) continue;
      if (map[i] < 0) throw UnknownVariable("variable " + (*vars_)[i] + " dropped while in use");
      f[map[i]] = e[i];
    }
    out.terms_.emplace(std::move(f), c);
  }
  return out;
}

MultiPoly MultiPoly::with_field(const NumberField* K) const {
  MultiPoly out(*this);
  out.absorb_field(K);
  for (auto& [e, c] : out.terms_) c = c.with_field(K);
  return out;
}

namespace {
// Brings two polynomials into a common variable list.
void unify(MultiPoly& a, MultiPoly& b) {
  if (a.vars() == b.vars()) return;
  auto merged = merge_vars(a.vars(), b.vars());
  a = a.with_vars(merged);
  b = b.with_vars(merged);
}
}  // namespace

MultiPoly MultiPoly::operator-() const {
  MultiPoly r(*this);
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& b) {
  if (b.vars() != vars()) {
    MultiPoly bb(b);
    unify(*this, bb);
    return *this += bb;
  }
  absorb_field(b.K_);
  for (const auto& [e, c] : b.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& b) {
  if (b.vars() != vars()) {
    MultiPoly bb(b);
    unify(*this, bb);
    return *this -= bb;
  }
  absorb_field(b.K_);
  for (const auto& [e, c] : b.terms_) add_term(e, -c);
  return *this;
}

MultiPoly operator*(const MultiPoly& a0, const MultiPoly& b0) {
  if (a0.vars() != b0.vars()) {
    MultiPoly a(a0), b(b0);
    unify(a, b);
    return a * b;
  }
  MultiPoly r(a0);
  r.terms_.clear();
  r.absorb_field(b0.K_);
  if (a0.is_zero() || b0.is_zero()) return r;
  int n = a0.nvars();
  Exponent e(n);
  for (const auto& [ea, ca] : a0.terms_) {
    for (const auto& [eb, cb] : b0.terms_) {
      for (int i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
      Coeff prod = ca * cb;
      auto [it, inserted] = r.terms_.try_emplace(e, prod);
      if (!inserted) it->second += prod;
    }
  }
  for (auto it = r.terms_.begin(); it != r.terms_.end();) {
    if (it->second.is_zero()) it = r.terms_.erase(it);
    else ++it;
  }
  return r;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& b) {
  *this = *this * b;
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Coeff& c) {
  absorb_field(c.field());
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, x] : terms_) x *= c;
  return *this;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
  if (a.vars() == b.vars()) return a.terms_ == b.terms_;
  MultiPoly x(a), y(b);
  unify(x, y);
  return x.terms_ == y.terms_;
}

MultiPoly MultiPoly::pow(int e) const {
  if (e < 0) throw DegenerateInput("negative power");
  MultiPoly result = constant(Coeff(1), vars());
  MultiPoly base(*this);
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [e, c] : terms_) {
    std::string mono;
    for (int i = 0; i < nvars(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += (*vars_)[i];
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    bool neg = false;
    std::string coeff;
    if (c.is_rational()) {
      Scalar q = c.rational();
      if (q < 0) {
        neg = true;
        q = -q;
      }
      if (q != 1 || mono.empty()) coeff = circfactor::to_string(q);
    } else {
      coeff = "(" + c.to_string() + ")";
    }
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    out += coeff;
    if (!coeff.empty() && !mono.empty()) out += "*";
    out += mono;
  }
  return out;
}

// --- parser --------------------------------------------------------------

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view text, std::vector<std::string> vars, const NumberField* K)
      : s_(text), vars_(std::move(vars)), K_(K) {}

  MultiPoly run() {
    collect_identifiers();
    pos_ = 0;
    MultiPoly p = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  void collect_identifiers() {
    size_t i = 0;
    while (i < s_.size()) {
      if (ident_start(s_[i])) {
        size_t j = i;
        while (j < s_.size() && ident_char(s_[j])) ++j;
        std::string id(s_.substr(i, j - i));
        if (std::find(vars_.begin(), vars_.end(), id) == vars_.end()) vars_.push_back(id);
        i = j;
      } else if (std::isdigit(static_cast<unsigned char>(s_[i]))) {
        while (i < s_.size() && ident_char(s_[i])) ++i;
      } else {
        ++i;
      }
    }
  }

  MultiPoly constant(const Coeff& c) { return MultiPoly::constant(c, vars_); }

  MultiPoly expr() {
    bool neg = false;
    if (peek('+')) ++pos_;
    else if (peek('-')) {
      ++pos_;
      neg = true;
    }
    MultiPoly acc = term();
    if (neg) acc = -acc;
    while (true) {
      if (peek('+')) {
        ++pos_;
        acc += term();
      } else if (peek('-')) {
        ++pos_;
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  MultiPoly term() {
    MultiPoly acc = factor();
    while (true) {
      if (peek('*')) {
        ++pos_;
        acc = acc * factor();
      } else if (peek('/')) {
        ++pos_;
        MultiPoly d = factor();
        if (!d.is_constant() || d.is_zero()) fail("division only by nonzero constants");
        acc *= d.constant_term().inverse();
      } else {
        return acc;
      }
    }
  }

  MultiPoly factor() {
    MultiPoly base = primary();
    if (peek('^')) {
      ++pos_;
      skip_ws();
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      base = base.pow(std::stoi(std::string(s_.substr(start, pos_ - start))));
    }
    return base;
  }

  MultiPoly primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      MultiPoly first = expr();
      if (peek(',')) {
        if (K_ == nullptr) fail("number-field tuple without a field");
        QPoly residue;
        auto push = [&](const MultiPoly& p) {
          if (!p.is_constant() || !p.constant_term().is_rational()) fail("tuple entries must be rational");
          residue.push_back(p.constant_term().rational());
        };
        push(first);
        while (peek(',')) {
          ++pos_;
          push(expr());
        }
        if (!peek(')')) fail("expected ')'");
        ++pos_;
        return constant(Coeff::in(K_, residue));
      }
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return first;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return constant(Coeff(Scalar(Integer(std::string(s_.substr(start, pos_ - start)), 10))));
    }
    if (ident_start(c)) {
      size_t start = pos_;
      while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
      return MultiPoly::variable(std::string(s_.substr(start, pos_ - start)), vars_);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view s_;
  size_t pos_ = 0;
  std::vector<std::string> vars_;
  const NumberField* K_;
};

}  // namespace

MultiPoly parse_poly(std::string_view text, std::vector<std::string> vars, const NumberField* K) {
  return PolyParser(text, std::move(vars), K).run();
}

// --- structure -----------------------------------------------------------

MultiPoly derivative(const MultiPoly& p, const std::string& var) {
  MultiPoly r(p.vars(), p.field());
  int v = p.var_index(var);
  if (v < 0) return r;
  for (const auto& [e, c] : p.terms()) {
    if (e[v] == 0) continue;
    Exponent f(e);
    f[v] -= 1;
    r.add_term(f, c * Coeff(Scalar(e[v])));
  }
  return r;
}

std::vector<MultiPoly> coefficients_in(const MultiPoly& p, const std::string& var) {
  int v = p.var_index(var);
  if (v < 0) return {p};
  int d = p.degree(v);
  std::vector<MultiPoly> out(std::max(d + 1, 0), MultiPoly(p.vars(), p.field()));
  for (const auto& [e, c] : p.terms()) {
    Exponent f(e);
    f[v] = 0;
    out[e[v]].add_term(f, c);
  }
  return out;
}

MultiPoly from_coefficients(const std::vector<MultiPoly>& c, const std::string& var,
                            const std::vector<std::string>& vars) {
  auto all = merge_vars(vars, {var});
  for (const auto& ci : c) all = merge_vars(all, ci.vars());
  MultiPoly out(all);
  int v = out.var_index(var);
  for (size_t i = 0; i < c.size(); ++i) {
    MultiPoly ci = c[i].with_vars(all);
    for (const auto& [e, x] : ci.terms()) {
      if (e[v] != 0) throw DegenerateInput("coefficient depends on the main variable");
      Exponent f(e);
      f[v] = static_cast<int>(i);
      out.add_term(f, x);
    }
  }
  return out;
}

MultiPoly substitute(const MultiPoly& p, const std::string& var, const MultiPoly& value) {
  return substitute(p, std::map<std::string, MultiPoly>{{var, value}});
}

MultiPoly substitute(const MultiPoly& p, const std::map<std::string, MultiPoly>& values) {
  std::vector<std::string> all = p.vars();
  for (const auto& [v, val] : values) all = merge_vars(all, val.vars());
  MultiPoly src = p.with_vars(all);
  int n = src.nvars();
  std::vector<const MultiPoly*> sub(n, nullptr);
  std::vector<MultiPoly> vals;
  vals.reserve(values.size());
  for (const auto& [v, val] : values) {
    int i = src.var_index(v);
    if (i < 0) continue;
    vals.push_back(val.with_vars(all));
    sub[i] = &vals.back();
  }
  std::vector<std::vector<MultiPoly>> powers(n);
  auto power = [&](int i, int k) -> const MultiPoly& {
    auto& pw = powers[i];
    if (pw.empty()) pw.push_back(MultiPoly::constant(Coeff(1), all));
    while (static_cast<int>(pw.size()) <= k) pw.push_back(pw.back() * *sub[i]);
    return pw[k];
  };
  MultiPoly out(all, p.field());
  for (const auto& [e, c] : src.terms()) {
    Exponent rest(e);
    MultiPoly term = MultiPoly::monomial(Coeff(1), Exponent(n, 0), all);
    for (int i = 0; i < n; ++i) {
      if (sub[i] == nullptr || e[i] == 0) continue;
      rest[i] = 0;
      term *= power(i, e[i]);
    }
    MultiPoly mono = MultiPoly::monomial(c, rest, all);
    out += term * mono;
  }
  return out;
}

Coeff evaluate(const MultiPoly& p, const std::vector<Coeff>& point) {
  int n = p.nvars();
  if (static_cast<int>(point.size()) != n) throw DimensionMismatch("evaluation point length");
  std::vector<std::vector<Coeff>> powers(n);
  Coeff acc;
  for (const auto& [e, c] : p.terms()) {
    Coeff t = c;
    for (int i = 0; i < n; ++i) {
      if (e[i] == 0) continue;
      auto& pw = powers[i];
      if (pw.empty()) pw.push_back(Coeff(1));
      while (static_cast<int>(pw.size()) <= e[i]) pw.push_back(pw.back() * point[i]);
      t *= pw[e[i]];
    }
    acc += t;
  }
  return acc;
}

MultiPoly make_monic(const MultiPoly& p) {
  if (p.is_zero()) return p;
  if (p.leading_coefficient().is_one()) return p;
  return p * p.leading_coefficient().inverse();
}

// --- truncation ----------------------------------------------------------

namespace {
std::vector<int> indices_of(const MultiPoly& q, const std::vector<std::string>& vars) {
  std::vector<int> idx;
  for (const auto& v : vars) {
    int i = q.var_index(v);
    if (i >= 0) idx.push_back(i);
  }
  return idx;
}
}  // namespace

MultiPoly poly_trunc(const MultiPoly& q, const std::vector<std::string>& vars, int k) {
  if (k < 1) throw DegenerateInput("truncation order must be positive");
  auto idx = indices_of(q, vars);
  MultiPoly r(q.vars(), q.field());
  for (const auto& [e, c] : q.terms()) {
    int d = 0;
    for (int i : idx) d += e[i];
    if (d < k) r.add_term(e, c);
  }
  return r;
}

MultiPoly hom_component(const MultiPoly& q, const std::vector<std::string>& vars, int deg) {
  auto idx = indices_of(q, vars);
  MultiPoly r(q.vars(), q.field());
  for (const auto& [e, c] : q.terms()) {
    int d = 0;
    for (int i : idx) d += e[i];
    if (d == deg) r.add_term(e, c);
  }
  return r;
}

// --- division ------------------------------------------------------------

namespace {
bool divides_exponent(const Exponent& b, const Exponent& a) {
  for (size_t i = 0; i < a.size(); ++i)
    if (b[i] > a[i]) return false;
  return true;
}

// r -= c * x^shift * b, in place.
void sub_shifted(MultiPoly::TermMap& r, const MultiPoly& b, const Exponent& shift, const Coeff& c) {
  Exponent e(shift.size());
  for (const auto& [eb, cb] : b.terms()) {
    for (size_t i = 0; i < e.size(); ++i) e[i] = eb[i] + shift[i];
    Coeff t = c * cb;
    auto [it, inserted] = r.try_emplace(e, -t);
    if (!inserted) {
      it->second -= t;
      if (it->second.is_zero()) r.erase(it);
    }
  }
}
}  // namespace

bool divides(const MultiPoly& b0, const MultiPoly& a0, MultiPoly* quotient) {
  if (b0.is_zero()) throw ZeroInverse("division by zero polynomial");
  MultiPoly a(a0), b(b0);
  if (a.vars() != b.vars()) {
    auto merged = merge_vars(a.vars(), b.vars());
    a = a.with_vars(merged);
    b = b.with_vars(merged);
  }
  MultiPoly q(a.vars(), a.field());
  if (b.field()) q = q.with_field(b.field());
  MultiPoly::TermMap r = a.terms();
  const Exponent& lb = b.leading_exponent();
  Coeff inv = b.leading_coefficient().inverse();
  int n = a.nvars();
  Exponent shift(n);
  while (!r.empty()) {
    const Exponent& lr = r.begin()->first;
    if (!divides_exponent(lb, lr)) return false;
    for (int i = 0; i < n; ++i) shift[i] = lr[i] - lb[i];
    Coeff c = r.begin()->second * inv;
    q.add_term(shift, c);
    sub_shifted(r, b, shift, c);
  }
  if (quotient) *quotient = q;
  return true;
}

MultiPoly exact_divide(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly q;
  if (!divides(b, a, &q)) throw InexactDivision(a.to_string() + " by " + b.to_string());
  return q;
}

DivResult dense_divide(const MultiPoly& a0, const MultiPoly& b0, const std::string& var) {
  auto merged = merge_vars(merge_vars(a0.vars(), b0.vars()), {var});
  MultiPoly a = a0.with_vars(merged), b = b0.with_vars(merged);
  auto bc = coefficients_in(b, var);
  if (bc.empty() || !bc.back().is_constant() || bc.back().is_zero())
    throw NotMonic("divisor leading coefficient in " + var + " is not a nonzero scalar");
  Coeff inv = bc.back().constant_term().inverse();
  int db = static_cast<int>(bc.size()) - 1;
  auto rc = coefficients_in(a, var);
  int da = static_cast<int>(rc.size()) - 1;
  std::vector<MultiPoly> qc(std::max(da - db + 1, 0), MultiPoly(merged));
  for (int i = da; i >= db; --i) {
    if (rc[i].is_zero()) continue;
    MultiPoly c = rc[i] * inv;
    qc[i - db] = c;
    for (int j = 0; j <= db; ++j) rc[i - db + j] -= c * bc[j];
  }
  rc.resize(std::max(std::min(da + 1, db), 0), MultiPoly(merged));
  return {from_coefficients(qc, var, merged), from_coefficients(rc, var, merged)};
}

// --- gcd -----------------------------------------------------------------

namespace {

// Pseudo-remainder of a by b as polynomials in var (coefficient vectors).
std::vector<MultiPoly> prem(std::vector<MultiPoly> a, const std::vector<MultiPoly>& b) {
  int db = static_cast<int>(b.size()) - 1;
  const MultiPoly& lb = b.back();
  while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
    int da = static_cast<int>(a.size()) - 1;
    MultiPoly la = a.back();
    for (auto& c : a) c = c * lb;
    for (int j = 0; j <= db; ++j) a[da - db + j] -= la * b[j];
    while (!a.empty() && a.back().is_zero()) a.pop_back();
  }
  return a;
}

MultiPoly gcd_rec(const MultiPoly& a, const MultiPoly& b);

MultiPoly content_rec(const std::vector<MultiPoly>& coeffs) {
  MultiPoly g;
  bool first = true;
  for (const auto& c : coeffs) {
    if (c.is_zero()) continue;
    if (first) {
      g = make_monic(c);
      first = false;
    } else {
      g = gcd_rec(g, c);
    }
    if (g.is_constant()) break;
  }
  return g;
}

// Heuristic gcd over Z: evaluate one variable at a large integer, recurse,
// rebuild the candidate from its xi-adic digits and keep it only if it
// divides both inputs. Returns nullopt when the tries run out.
namespace heu {

Integer max_norm(const MultiPoly& p) {
  Integer m = 0;
  for (const auto& [e, c] : p.terms()) {
    Integer v = abs(c.rational().get_num());
    if (v > m) m = v;
  }
  return m;
}

Integer int_content(const MultiPoly& p) {
  Integer g = 0;
  for (const auto& [e, c] : p.terms()) g = gcd(g, Integer(c.rational().get_num()));
  return g;
}

MultiPoly divide_int(const MultiPoly& p, const Integer& d) {
  MultiPoly out(p.vars());
  Scalar inv(Integer(1), d);
  for (const auto& [e, c] : p.terms()) out.add_term(e, Coeff(c.rational() * inv));
  return out;
}

MultiPoly eval_var(const MultiPoly& p, int v, const Integer& xi) {
  MultiPoly out(p.vars());
  std::vector<Integer> pw{Integer(1)};
  for (const auto& [e, c] : p.terms()) {
    while (static_cast<int>(pw.size()) <= e[v]) pw.push_back(pw.back() * xi);
    Exponent f(e);
    f[v] = 0;
    out.add_term(f, Coeff(c.rational() * Scalar(pw[e[v]])));
  }
  return out;
}

Integer symmetric_mod(const Integer& c, const Integer& m) {
  Integer r = c % m;
  if (r < 0) r += m;
  if (2 * r > m) r -= m;
  return r;
}

MultiPoly interpolate(MultiPoly h, int v, const Integer& xi) {
  MultiPoly out(h.vars());
  int k = 0;
  while (!h.is_zero()) {
    MultiPoly g(h.vars());
    for (const auto& [e, c] : h.terms()) {
      Integer r = symmetric_mod(Integer(c.rational().get_num()), xi);
      if (r != 0) g.add_term(e, Coeff(Scalar(r)));
    }
    for (const auto& [e, c] : g.terms()) {
      Exponent f(e);
      f[v] = k;
      out.add_term(f, c);
    }
    h = divide_int(h - g, xi);
    ++k;
  }
  return out;
}

std::optional<MultiPoly> gcd_int(const MultiPoly& f0, const MultiPoly& g0) {
  Integer cf = int_content(f0), cg = int_content(g0);
  Integer c = gcd(cf, cg);
  MultiPoly f = divide_int(f0, cf), g = divide_int(g0, cg);
  int v = -1;
  for (int i = 0; i < f.nvars() && v < 0; ++i)
    if (f.degree(i) > 0 || g.degree(i) > 0) v = i;
  if (v < 0 || f.is_constant() || g.is_constant()) return MultiPoly::constant(Coeff(Scalar(c)), f.vars());
  Integer nf = max_norm(f), ng = max_norm(g);
  Integer B = 2 * std::min(nf, ng) + 29;
  Integer lf = abs(f.leading_coefficient().rational().get_num());
  Integer lg = abs(g.leading_coefficient().rational().get_num());
  Integer s = sqrt(Integer(B));
  Integer xi = std::max(std::min(B, Integer(99 * s)), Integer(2 * std::min(Integer(nf / lf), Integer(ng / lg)) + 2));
  for (int attempt = 0; attempt < 6; ++attempt) {
    MultiPoly ff = eval_var(f, v, xi), gg = eval_var(g, v, xi);
    if (!ff.is_zero() && !gg.is_zero()) {
      auto h = gcd_int(ff, gg);
      if (h) {
        MultiPoly H = interpolate(*h, v, xi);
        if (!H.is_zero()) {
          H = divide_int(H, int_content(H));
          if (divides(H, f) && divides(H, g)) return H * Coeff(Scalar(c));
        }
      }
    }
    xi = xi * 73794 * sqrt(Integer(sqrt(xi))) / 27011;
  }
  return std::nullopt;
}

// Rational input scaled to a primitive integer polynomial.
MultiPoly integral(const MultiPoly& p) {
  Integer l = 1;
  for (const auto& [e, c] : p.terms()) l = lcm(l, Integer(c.rational().get_den()));
  MultiPoly out(p.vars());
  for (const auto& [e, c] : p.terms()) out.add_term(e, Coeff(c.rational() * Scalar(l)));
  return divide_int(out, int_content(out));
}

}  // namespace heu

MultiPoly prs_gcd(const MultiPoly& a0, const MultiPoly& b0);

MultiPoly gcd_rec(const MultiPoly& a0, const MultiPoly& b0) {
  if (a0.field() == nullptr && b0.field() == nullptr && !a0.is_zero() && !b0.is_zero() && !a0.is_constant() &&
      !b0.is_constant()) {
    auto merged = merge_vars(a0.vars(), b0.vars());
    auto h = heu::gcd_int(heu::integral(a0.with_vars(merged)), heu::integral(b0.with_vars(merged)));
    if (h) return make_monic(*h);
  }
  return prs_gcd(a0, b0);
}

MultiPoly prs_gcd(const MultiPoly& a0, const MultiPoly& b0) {
  MultiPoly a(a0), b(b0);
  if (a.vars() != b.vars()) {
    auto merged = merge_vars(a.vars(), b.vars());
    a = a.with_vars(merged);
    b = b.with_vars(merged);
  }
  if (a.is_zero()) return make_monic(b);
  if (b.is_zero()) return make_monic(a);
  if (a.is_constant() || b.is_constant()) return MultiPoly::constant(Coeff(1), a.vars()).with_field(a.field() ? a.field() : b.field());
  // Pick the first variable occurring in either.
  int v = -1;
  for (int i = 0; i < a.nvars() && v < 0; ++i)
    if (a.degree(i) > 0 || b.degree(i) > 0) v = i;
  const std::string& var = a.vars()[v];
  auto ac = coefficients_in(a, var);
  auto bc = coefficients_in(b, var);
  if (ac.size() == 1) return gcd_rec(a, content_rec(bc));
  if (bc.size() == 1) return gcd_rec(content_rec(ac), b);
  MultiPoly ca = content_rec(ac), cb = content_rec(bc);
  for (auto& c : ac) c = exact_divide(c, ca);
  for (auto& c : bc) c = exact_divide(c, cb);
  if (ac.size() < bc.size()) std::swap(ac, bc);
  while (!bc.empty()) {
    auto r = prem(ac, bc);
    ac = std::move(bc);
    if (r.empty()) {
      bc.clear();
      break;
    }
    MultiPoly cr = content_rec(r);
    for (auto& c : r) c = exact_divide(c, cr);
    // Keep scalar sizes in check.
    Coeff inv = r.back().leading_coefficient().inverse();
    for (auto& c : r) c *= inv;
    bc = std::move(r);
    if (bc.size() == 1) {
      // Constant in var after removing content: gcd in var is trivial.
      ac = {MultiPoly::constant(Coeff(1), a.vars())};
      bc.clear();
    }
  }
  MultiPoly g = from_coefficients(ac, var, a.vars());
  return make_monic(g * gcd_rec(ca, cb));
}

}  // namespace

MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b) { return gcd_rec(a, b); }

MultiPoly content_in(const MultiPoly& p, const std::string& var) {
  auto c = coefficients_in(p, var);
  MultiPoly g = content_rec(c);
  return g.with_vars(merge_vars(p.vars(), g.vars()));
}

// --- resultants ----------------------------------------------------------

MultiPoly bareiss_determinant(std::vector<std::vector<MultiPoly>> m) {
  size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw DimensionMismatch("determinant of a non-square matrix");
  if (n == 0) return MultiPoly::constant(Coeff(1));
  bool negate = false;
  MultiPoly prev = MultiPoly::constant(Coeff(1));
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      size_t p = k + 1;
      while (p < n && m[p][k].is_zero()) ++p;
      if (p == n) return MultiPoly();
      std::swap(m[k], m[p]);
      negate = !negate;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        MultiPoly t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        m[i][j] = prev.is_constant() ? t * prev.constant_term().inverse() : exact_divide(t, prev);
      }
      m[i][k] = MultiPoly();
    }
    prev = m[k][k];
  }
  MultiPoly d = m[n - 1][n - 1];
  return negate ? -d : d;
}

LinearSolution fraction_free_solve(std::vector<std::vector<MultiPoly>> m, const std::vector<MultiPoly>& rhs) {
  size_t rows = m.size();
  if (rhs.size() != rows) throw DimensionMismatch("right-hand side length differs from the row count");
  size_t n = rows ? m[0].size() : 0;
  for (size_t i = 0; i < rows; ++i) {
    if (m[i].size() != n) throw DimensionMismatch("ragged matrix");
    m[i].push_back(rhs[i]);
  }
  if (rows < n) throw SingularSystem("fewer equations than unknowns");
  // Fraction-free Gauss-Jordan: after step k every entry is a (k+1)-minor,
  // so the division by the previous pivot is exact and all pivots end equal.
  MultiPoly prev = MultiPoly::constant(Coeff(1));
  for (size_t k = 0; k < n; ++k) {
    size_t p = rows;
    for (size_t i = k; i < rows; ++i)
      if (!m[i][k].is_zero() && (p == rows || m[i][k].size() < m[p][k].size())) p = i;
    if (p == rows) throw SingularSystem("columns are linearly dependent");
    std::swap(m[k], m[p]);
    const MultiPoly piv = m[k][k];
    for (size_t i = 0; i < rows; ++i) {
      if (i == k) continue;
      MultiPoly a = m[i][k];
      for (size_t j = k + 1; j <= n; ++j) {
        MultiPoly t = m[i][j] * piv;
        if (!a.is_zero() && !m[k][j].is_zero()) t -= a * m[k][j];
        m[i][j] = prev.is_constant() ? t * prev.constant_term().inverse() : exact_divide(t, prev);
      }
      m[i][k] = MultiPoly();
    }
    prev = piv;
  }
  for (size_t i = n; i < rows; ++i)
    if (!m[i][n].is_zero()) throw HypothesisViolated("the linear system is inconsistent");
  LinearSolution out;
  out.denominator = prev;
  for (size_t k = 0; k < n; ++k) out.numerators.push_back(m[k][n]);
  return out;
}

MultiPoly sylvester_resultant(const MultiPoly& p0, const MultiPoly& q0, const std::string& var) {
  auto merged = merge_vars(merge_vars(p0.vars(), q0.vars()), {var});
  MultiPoly p = p0.with_vars(merged), q = q0.with_vars(merged);
  auto pc = coefficients_in(p, var), qc = coefficients_in(q, var);
  int m = static_cast<int>(pc.size()) - 1, n = static_cast<int>(qc.size()) - 1;
  if (m < 1 || n < 1) throw DegenerateInput("resultant needs positive degree in " + var);
  int size = m + n;
  MultiPoly zero(merged);
  std::vector<std::vector<MultiPoly>> s(size, std::vector<MultiPoly>(size, zero));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) s[i][i + j] = pc[m - j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) s[n + i][i + j] = qc[n - j];
  return bareiss_determinant(std::move(s)).with_vars(merged);
}

MultiPoly discriminant(const MultiPoly& p, const std::string& var) {
  return sylvester_resultant(p, derivative(p, var), var);
}

// --- squarefree ----------------------------------------------------------

std::string main_variable(const MultiPoly& f) {
  int best = -1, bd = 0;
  for (int i = 0; i < f.nvars(); ++i) {
    int d = f.degree(i);
    if (d > bd) {
      bd = d;
      best = i;
    }
  }
  if (best < 0) throw DegenerateInput("constant polynomial has no main variable");
  return f.vars()[best];
}

SquarefreeDecomposition squarefree_decompose(const MultiPoly& f) {
  if (f.is_zero()) throw DegenerateInput("squarefree decomposition of zero");
  SquarefreeDecomposition out;
  out.unit = f.leading_coefficient();
  if (f.is_constant()) return out;
  std::string v = main_variable(f);
  MultiPoly c = content_in(f, v);
  MultiPoly p = make_monic(exact_divide(f, c));
  // Yun's algorithm on the primitive part.
  MultiPoly dp = derivative(p, v);
  MultiPoly a = poly_gcd(p, dp);
  MultiPoly b = exact_divide(p, a);
  MultiPoly cc = exact_divide(dp, a);
  MultiPoly d = cc - derivative(b, v);
  std::vector<MultiPoly> parts;
  while (!b.is_constant()) {
    a = poly_gcd(b, d);
    parts.push_back(make_monic(a));
    b = exact_divide(b, a);
    cc = exact_divide(d, a);
    d = cc - derivative(b, v);
  }
  if (!c.is_constant()) {
    auto sub = squarefree_decompose(c);
    if (sub.parts.size() > parts.size()) parts.resize(sub.parts.size(), MultiPoly::constant(Coeff(1), f.vars()));
    for (size_t i = 0; i < sub.parts.size(); ++i) parts[i] = make_monic(parts[i] * sub.parts[i]);
  }
  for (auto& part : parts) part = part.with_vars(merge_vars(f.vars(), part.vars()));
  while (!parts.empty() && parts.back().is_constant()) parts.pop_back();
  out.parts = std::move(parts);
  return out;
}

std::vector<MultiPoly> nf_coeff_decompose(const MultiPoly& c, const NumberField* K) {
  int h = K ? K->degree() : 1;
  std::vector<MultiPoly> out(h, MultiPoly(c.vars()));
  for (const auto& [e, x] : c.terms()) {
    QPoly r = x.residue();
    for (int i = 0; i < static_cast<int>(r.size()) && i < h; ++i)
      if (r[i] != 0) out[i].add_term(e, Coeff(r[i]));
  }
  return out;
}

}  // namespace circfactor
