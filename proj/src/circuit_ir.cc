#include "circfactor/circuit_ir.hh"

#include <algorithm>
#include <cctype>
#include <functional>
#include <random>
#include <sstream>

namespace circfactor {

// --- construction --------------------------------------------------------

Circuit::Circuit(std::vector<std::string> variables) {
  for (auto& v : variables) declare(v);
}

Circuit Circuit::constant_circuit(const Scalar& c, std::vector<std::string> variables) {
  Circuit r(std::move(variables));
  r.set_output(r.constant(c));
  return r;
}

int Circuit::declare(const std::string& var) {
  auto it = std::find(vars_.begin(), vars_.end(), var);
  if (it != vars_.end()) return static_cast<int>(it - vars_.begin());
  vars_.push_back(var);
  return static_cast<int>(vars_.size()) - 1;
}

int Circuit::push(Gate g) {
  gates_.push_back(std::move(g));
  return static_cast<int>(gates_.size()) - 1;
}

int Circuit::input(const std::string& var) {
  int v = declare(var);
  auto it = input_gate_.find(v);
  if (it != input_gate_.end()) return it->second;
  Gate g{Op::Input, v, Scalar(0), {}};
  int id = push(std::move(g));
  input_gate_[v] = id;
  return id;
}

int Circuit::constant(const Scalar& c) {
  auto it = const_gate_.find(c);
  if (it != const_gate_.end()) return it->second;
  int id = push(Gate{Op::Const, -1, c, {}});
  const_gate_[c] = id;
  return id;
}

// Constant arguments are folded. A single constant argument is already the
// canonical gate for its value, so it is reused without arithmetic.
int Circuit::add(std::vector<int> args) {
  int nconst = 0, one = -1;
  for (int a : args)
    if (gates_[a].op == Op::Const) ++nconst, one = a;
  std::vector<int> rest;
  if (nconst == 0) {
    rest = std::move(args);
  } else {
    for (int a : args)
      if (gates_[a].op != Op::Const) rest.push_back(a);
    int c = one;
    if (nconst > 1) {
      Scalar folded = 0;
      for (int a : args)
        if (gates_[a].op == Op::Const) folded += gates_[a].value;
      c = constant(folded);
    }
    if (rest.empty()) return c;
    if (gates_[c].value != 0) rest.push_back(c);
  }
  if (rest.size() == 1) return rest[0];
  std::sort(rest.begin(), rest.end());
  auto key = std::make_pair(static_cast<int>(Op::Add), std::move(rest));
  auto it = op_gate_.find(key);
  if (it != op_gate_.end()) return it->second;
  int id = push(Gate{Op::Add, -1, Scalar(0), key.second});
  op_gate_.emplace(std::move(key), id);
  return id;
}

int Circuit::mul(std::vector<int> args) {
  int nconst = 0, one = -1;
  for (int a : args)
    if (gates_[a].op == Op::Const) ++nconst, one = a;
  std::vector<int> rest;
  if (nconst == 0) {
    rest = std::move(args);
  } else {
    int c = one;
    if (nconst > 1) {
      Scalar folded = 1;
      for (int a : args)
        if (gates_[a].op == Op::Const) folded *= gates_[a].value;
      c = constant(folded);
    }
    const Scalar& v = gates_[c].value;
    if (v == 0) return c;
    for (int a : args)
      if (gates_[a].op != Op::Const) rest.push_back(a);
    if (rest.empty()) return c;
    if (v != 1) rest.push_back(c);
  }
  if (rest.size() == 1) return rest[0];
  std::sort(rest.begin(), rest.end());
  auto key = std::make_pair(static_cast<int>(Op::Mul), std::move(rest));
  auto it = op_gate_.find(key);
  if (it != op_gate_.end()) return it->second;
  int id = push(Gate{Op::Mul, -1, Scalar(0), key.second});
  op_gate_.emplace(std::move(key), id);
  return id;
}

int Circuit::sub(int a, int b) { return add({a, neg(b)}); }
int Circuit::neg(int a) { return scale(Scalar(-1), a); }
int Circuit::scale(const Scalar& c, int a) { return mul({constant(c), a}); }

int Circuit::pow(int a, int e) {
  if (e == 0) return constant(1);
  return mul(std::vector<int>(e, a));
}

int Circuit::div(int a, int b) {
  if (gates_[b].op == Op::Const) {
    if (gates_[b].value == 0) throw ZeroDivisorAtPoint("division by constant zero");
    return scale(1 / gates_[b].value, a);
  }
  auto key = std::make_pair(static_cast<int>(Op::Div), std::vector<int>{a, b});
  auto it = op_gate_.find(key);
  if (it != op_gate_.end()) return it->second;
  int id = push(Gate{Op::Div, -1, Scalar(0), {a, b}});
  op_gate_[key] = id;
  return id;
}

namespace {

int rebuild(Circuit& c, const Circuit& other, const Gate& gt, const std::vector<int>& args) {
  switch (gt.op) {
    case Op::Input: return c.input(other.variables()[gt.var]);
    case Op::Const: return c.constant(gt.value);
    case Op::Add: return c.add(args);
    case Op::Mul: return c.mul(args);
    case Op::Div: return c.div(args[0], args[1]);
  }
  return -1;
}

}  // namespace

int Circuit::import(const Circuit& other, int root) {
  // Gates are topologically ordered, so one backward sweep marks the
  // subgraph and one forward sweep copies it.
  std::vector<char> need(root + 1, 0);
  need[root] = 1;
  for (int g = root; g >= 0; --g)
    if (need[g])
      for (int a : other.gates_[g].args) need[a] = 1;
  std::vector<int> memo(root + 1, -1), args;
  for (int g = 0; g <= root; ++g) {
    if (!need[g]) continue;
    const Gate& gt = other.gates_[g];
    args.clear();
    for (int a : gt.args) args.push_back(memo[a]);
    memo[g] = rebuild(*this, other, gt, args);
  }
  return memo[root];
}

int Circuit::import(const Circuit& other, int root, std::map<int, int>& memo) {
  // Iterative post-order to survive deep circuits.
  std::vector<std::pair<int, bool>> stack{{root, false}};
  while (!stack.empty()) {
    auto [g, expanded] = stack.back();
    stack.pop_back();
    if (memo.count(g)) continue;
    const Gate& gt = other.gates_[g];
    if (!expanded && !gt.args.empty()) {
      stack.push_back({g, true});
      for (int a : gt.args)
        if (!memo.count(a)) stack.push_back({a, false});
      continue;
    }
    std::vector<int> args;
    for (int a : gt.args) args.push_back(memo.at(a));
    memo[g] = rebuild(*this, other, gt, args);
  }
  return memo.at(root);
}

int Circuit::output() const {
  if (outputs_.empty()) throw DegenerateInput("circuit has no output");
  return outputs_[0];
}

std::vector<bool> Circuit::reachable() const {
  std::vector<bool> live(gates_.size(), false);
  for (int o : outputs_) live[o] = true;
  for (size_t g = gates_.size(); g-- > 0;)
    if (live[g])
      for (int a : gates_[g].args) live[a] = true;
  return live;
}

bool Circuit::has_division() const {
  auto live = reachable();
  for (size_t g = 0; g < gates_.size(); ++g)
    if (live[g] && gates_[g].op == Op::Div) return true;
  return false;
}

long Circuit::size() const {
  auto live = reachable();
  long edges = 0;
  for (size_t g = 0; g < gates_.size(); ++g)
    if (live[g]) edges += static_cast<long>(gates_[g].args.size());
  return edges;
}

int Circuit::depth() const {
  std::vector<int> d(gates_.size(), 0);
  for (size_t g = 0; g < gates_.size(); ++g)
    for (int a : gates_[g].args) d[g] = std::max(d[g], d[a] + 1);
  int best = 0;
  for (int o : outputs_) best = std::max(best, d[o]);
  return best;
}

// --- text format ---------------------------------------------------------

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct Ref {
  std::string name;  // empty for inline constants
  Scalar value;
  int col = 0;
};

struct Stmt {
  enum Kind { Input, Node, Output } kind;
  int line = 0;
  std::string name;
  int name_col = 0;
  std::string op;  // add, mul, const
  std::vector<Ref> refs;
};

class LineLexer {
 public:
  LineLexer(const std::string& text, int line) : s_(text), line_(line) {}
  void ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool done() {
    ws();
    return pos_ >= s_.size();
  }
  int col() const { return static_cast<int>(pos_) + 1; }
  [[noreturn]] void fail(const std::string& msg) { throw SyntaxError(line_, col(), msg); }
  std::string ident() {
    ws();
    if (pos_ >= s_.size() || !is_ident_start(s_[pos_])) fail("expected identifier");
    size_t start = pos_;
    while (pos_ < s_.size() && is_ident_char(s_[pos_])) ++pos_;
    return s_.substr(start, pos_ - start);
  }
  void expect(char c) {
    ws();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  bool at_const() {
    ws();
    return pos_ + 1 < s_.size() && s_[pos_] == 'c' && s_[pos_ + 1] == '(';
  }
  Scalar constant() {
    ws();
    pos_ += 2;  // "c("
    ws();
    size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ')') ++pos_;
    if (pos_ >= s_.size()) fail("unterminated constant");
    std::string body = s_.substr(start, pos_ - start);
    while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.pop_back();
    Scalar v;
    try {
      v = parse_scalar(body);
    } catch (const ParseError&) {
      pos_ = start;
      fail("bad rational '" + body + "'");
    }
    ++pos_;
    return v;
  }
  Ref ref() {
    ws();
    Ref r;
    r.col = col();
    if (at_const()) r.value = constant();
    else r.name = ident();
    return r;
  }

 private:
  std::string s_;
  size_t pos_ = 0;
  int line_;
};

}  // namespace

Circuit parse_circuit(const std::string& text) {
  std::vector<Stmt> stmts;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    LineLexer lx(raw, line);
    if (lx.done()) continue;
    {
      size_t first = raw.find_first_not_of(" \t");
      if (raw[first] == '#') continue;
    }
    Stmt st;
    st.line = line;
    std::string kw = lx.ident();
    if (kw == "input") {
      st.kind = Stmt::Input;
      lx.ws();
      st.name_col = lx.col();
      st.name = lx.ident();
    } else if (kw == "output") {
      st.kind = Stmt::Output;
      st.refs.push_back(lx.ref());
    } else if (kw == "node") {
      st.kind = Stmt::Node;
      lx.ws();
      st.name_col = lx.col();
      st.name = lx.ident();
      lx.expect('=');
      if (lx.at_const()) {
        st.op = "const";
        Ref r;
        r.col = lx.col();
        r.value = lx.constant();
        st.refs.push_back(r);
      } else {
        lx.ws();
        int op_col = lx.col();
        st.op = lx.ident();
        if (st.op != "add" && st.op != "mul") throw SyntaxError(line, op_col, "unknown operation '" + st.op + "'");
        while (!lx.done()) st.refs.push_back(lx.ref());
        if (st.refs.empty()) lx.fail("operation needs at least one argument");
      }
    } else {
      throw SyntaxError(line, 1, "unknown statement '" + kw + "'");
    }
    if (!lx.done()) lx.fail("trailing characters");
    stmts.push_back(std::move(st));
  }

  Circuit c;
  std::map<std::string, int> node_stmt;
  std::map<std::string, bool> is_input;
  for (size_t i = 0; i < stmts.size(); ++i) {
    const Stmt& st = stmts[i];
    if (st.kind == Stmt::Output) continue;
    if (node_stmt.count(st.name) || is_input.count(st.name))
      throw SyntaxError(st.line, st.name_col, "duplicate name '" + st.name + "'");
    if (st.kind == Stmt::Input) {
      is_input[st.name] = true;
      c.declare(st.name);
    } else {
      node_stmt[st.name] = static_cast<int>(i);
    }
  }

  std::map<std::string, int> gate_of;
  std::map<std::string, int> state;  // 1 = in progress, 2 = done
  std::function<int(const Ref&, int)> resolve;
  auto build_node = [&](const std::string& name) {
    // Iterative DFS with explicit cycle detection.
    std::vector<std::string> stack{name};
    while (!stack.empty()) {
      std::string cur = stack.back();
      if (state[cur] == 2) {
        stack.pop_back();
        continue;
      }
      const Stmt& st = stmts[node_stmt.at(cur)];
      state[cur] = 1;
      bool ready = true;
      for (const Ref& r : st.refs) {
        if (r.name.empty() || is_input.count(r.name)) continue;
        if (!node_stmt.count(r.name))
          throw UnknownIdentifier("'" + r.name + "' at line " + std::to_string(st.line) + ", column " +
                                  std::to_string(r.col));
        int s = state[r.name];
        if (s == 1) throw CycleError("node '" + cur + "' depends on itself through '" + r.name + "' (line " +
                                     std::to_string(st.line) + ")");
        if (s == 0) {
          stack.push_back(r.name);
          ready = false;
        }
      }
      if (!ready) continue;
      std::vector<int> args;
      for (const Ref& r : st.refs) {
        if (r.name.empty()) args.push_back(c.constant(r.value));
        else if (is_input.count(r.name)) args.push_back(c.input(r.name));
        else args.push_back(gate_of.at(r.name));
      }
      int g;
      if (st.op == "const") g = args[0];
      else if (st.op == "add") g = c.add(args);
      else g = c.mul(args);
      gate_of[cur] = g;
      state[cur] = 2;
      stack.pop_back();
    }
    return gate_of.at(name);
  };
  for (const auto& [name, idx] : node_stmt) build_node(name);

  for (const Stmt& st : stmts) {
    if (st.kind != Stmt::Output) continue;
    const Ref& r = st.refs[0];
    int g;
    if (r.name.empty()) g = c.constant(r.value);
    else if (is_input.count(r.name)) g = c.input(r.name);
    else if (gate_of.count(r.name)) g = gate_of.at(r.name);
    else
      throw UnknownIdentifier("'" + r.name + "' at line " + std::to_string(st.line) + ", column " +
                              std::to_string(r.col));
    c.add_output(g);
  }
  if (c.outputs().empty()) throw SyntaxError(line + 1, 1, "circuit declares no output");
  return c;
}

std::string serialize_circuit(const Circuit& c) {
  if (c.has_division()) throw DegenerateInput("division gates cannot be serialized");
  std::ostringstream out;
  for (const auto& v : c.variables()) out << "input " << v << "\n";
  auto live = c.reachable();
  std::map<int, std::string> name;
  int counter = 0;
  auto fresh = [&] {
    while (true) {
      std::string n = "n" + std::to_string(++counter);
      if (std::find(c.variables().begin(), c.variables().end(), n) == c.variables().end()) return n;
    }
  };
  auto ref = [&](int g) -> std::string {
    const Gate& gt = c.gate(g);
    if (gt.op == Op::Input) return c.variables()[gt.var];
    if (gt.op == Op::Const) return "c(" + to_string(gt.value) + ")";
    return name.at(g);
  };
  for (size_t g = 0; g < c.gates().size(); ++g) {
    if (!live[g]) continue;
    const Gate& gt = c.gate(static_cast<int>(g));
    if (gt.op != Op::Add && gt.op != Op::Mul) continue;
    name[static_cast<int>(g)] = fresh();
    out << "node " << name[static_cast<int>(g)] << " = " << (gt.op == Op::Add ? "add" : "mul");
    for (int a : gt.args) out << " " << ref(a);
    out << "\n";
  }
  for (int o : c.outputs()) out << "output " << ref(o) << "\n";
  return out.str();
}

// --- evaluation ----------------------------------------------------------

namespace {
template <class R>
std::vector<R> positional(const Circuit& c, const std::map<std::string, R>& point) {
  std::vector<R> pt;
  auto live = c.reachable();
  std::vector<bool> used(c.variables().size(), false);
  for (size_t g = 0; g < c.gates().size(); ++g)
    if (live[g] && c.gate(static_cast<int>(g)).op == Op::Input) used[c.gate(static_cast<int>(g)).var] = true;
  for (size_t i = 0; i < c.variables().size(); ++i) {
    auto it = point.find(c.variables()[i]);
    if (it == point.end()) {
      if (used[i]) throw MissingAssignment(c.variables()[i]);
      pt.push_back(R());
    } else {
      pt.push_back(it->second);
    }
  }
  return pt;
}

Coeff divide_coeff(const Coeff& a, const Coeff& b) {
  if (b.is_zero()) throw ZeroDivisorAtPoint("division gate evaluates to zero");
  return a * b.inverse();
}
}  // namespace

std::vector<Coeff> eval_circuit(const Circuit& c, const std::map<std::string, Coeff>& point) {
  return eval_generic<Coeff>(c, positional(c, point), [](const Scalar& s) { return Coeff(s); }, divide_coeff);
}

Coeff eval_circuit1(const Circuit& c, const std::map<std::string, Coeff>& point) {
  return eval_circuit(c, point).at(0);
}

Coeff eval_at(const Circuit& c, const std::vector<Coeff>& point) {
  if (point.size() != c.variables().size()) throw DimensionMismatch("point length");
  return eval_generic<Coeff>(c, point, [](const Scalar& s) { return Coeff(s); }, divide_coeff).at(0);
}

std::vector<MultiPoly> eval_circuit_poly(const Circuit& c, const std::map<std::string, MultiPoly>& point) {
  std::vector<MultiPoly> pt = positional(c, point);
  std::vector<std::string> vars;
  for (const auto& p : pt) vars = merge_vars(vars, p.vars());
  for (auto& p : pt) p = p.with_vars(vars);
  return eval_generic<MultiPoly>(
      c, pt, [&](const Scalar& s) { return MultiPoly::constant(Coeff(s), vars); },
      [](const MultiPoly& a, const MultiPoly& b) { return exact_divide(a, b); });
}

// --- substitution --------------------------------------------------------

namespace {
// Copies c's output into r, replacing inputs by the given gates of r.
int import_with(Circuit& r, const Circuit& c, int root, const std::map<int, int>& input_map) {
  std::map<int, int> memo;
  const auto& gates = c.gates();
  for (size_t g = 0; g < gates.size(); ++g)
    if (gates[g].op == Op::Input) {
      auto it = input_map.find(gates[g].var);
      if (it != input_map.end()) memo[static_cast<int>(g)] = it->second;
    }
  return r.import(c, root, memo);
}

// Copy of c (output only) into r with variable `var` scaled by `factor` for
// every var in `vars`.
int import_scaled(Circuit& r, const Circuit& c, const std::vector<std::string>& vars, const Scalar& factor) {
  std::map<int, int> input_map;
  for (const auto& v : vars) {
    auto it = std::find(c.variables().begin(), c.variables().end(), v);
    if (it == c.variables().end()) continue;
    int idx = static_cast<int>(it - c.variables().begin());
    input_map[idx] = r.scale(factor, r.input(v));
  }
  return import_with(r, c, c.output(), input_map);
}

// Lagrange basis on nodes 0..d: basis[j][k] = coefficient of y^k in L_j(y).
std::vector<QPoly> lagrange_basis(int d) {
  std::vector<QPoly> basis;
  for (int j = 0; j <= d; ++j) {
    QPoly l{Scalar(1)};
    for (int m = 0; m <= d; ++m) {
      if (m == j) continue;
      l = qpoly::scale(qpoly::mul(l, QPoly{Scalar(-m), Scalar(1)}), Scalar(1) / Scalar(j - m));
    }
    l.resize(d + 1);
    basis.push_back(l);
  }
  return basis;
}
}  // namespace

Circuit substitute(const Circuit& c, const std::map<std::string, Circuit>& map) {
  Circuit r;
  for (const auto& v : c.variables())
    if (!map.count(v)) r.declare(v);
  std::map<int, int> input_map;
  for (size_t i = 0; i < c.variables().size(); ++i) {
    auto it = map.find(c.variables()[i]);
    if (it == map.end()) continue;
    input_map[static_cast<int>(i)] = r.import(it->second, it->second.output());
  }
  r.set_output(import_with(r, c, c.output(), input_map));
  return r;
}

// --- degree bounds -------------------------------------------------------

DegreeBound degree_bound(const Circuit& c) {
  size_t n = c.variables().size();
  const auto& gates = c.gates();
  std::vector<std::vector<int>> per(gates.size());
  std::vector<int> total(gates.size(), 0);
  for (size_t g = 0; g < gates.size(); ++g) {
    const Gate& gt = gates[g];
    per[g].assign(n, 0);
    switch (gt.op) {
      case Op::Input:
        per[g][gt.var] = 1;
        total[g] = 1;
        break;
      case Op::Const: break;
      case Op::Add:
        for (int a : gt.args) {
          for (size_t v = 0; v < n; ++v) per[g][v] = std::max(per[g][v], per[a][v]);
          total[g] = std::max(total[g], total[a]);
        }
        break;
      case Op::Mul:
        for (int a : gt.args) {
          for (size_t v = 0; v < n; ++v) per[g][v] += per[a][v];
          total[g] += total[a];
        }
        break;
      case Op::Div:
        per[g] = per[gt.args[0]];
        total[g] = total[gt.args[0]];
        break;
    }
  }
  DegreeBound b;
  int o = c.output();
  for (size_t v = 0; v < n; ++v) b.per_var[c.variables()[v]] = per[o][v];
  b.total = total[o];
  return b;
}

int degree_bound_in(const Circuit& c, const std::vector<std::string>& vars) {
  const auto& gates = c.gates();
  std::vector<int> d(gates.size(), 0);
  for (size_t g = 0; g < gates.size(); ++g) {
    const Gate& gt = gates[g];
    switch (gt.op) {
      case Op::Input:
        d[g] = std::find(vars.begin(), vars.end(), c.variables()[gt.var]) != vars.end() ? 1 : 0;
        break;
      case Op::Const: break;
      case Op::Add:
        for (int a : gt.args) d[g] = std::max(d[g], d[a]);
        break;
      case Op::Mul:
        for (int a : gt.args) d[g] += d[a];
        break;
      case Op::Div: d[g] = d[gt.args[0]]; break;
    }
  }
  return d[c.output()];
}

// --- interpolation-based transforms --------------------------------------

Circuit derivative_circuit(const Circuit& c, const std::string& var, int order) {
  Circuit r(c.variables());
  int d = degree_bound(c).of(var);
  if (order > d) {
    r.set_output(r.constant(0));
    return r;
  }
  if (order == 0) {
    r.set_output(r.import(c, c.output()));
    return r;
  }
  auto basis = lagrange_basis(d);
  int vi = r.declare(var);
  std::vector<int> at;
  for (int j = 0; j <= d; ++j) at.push_back(import_with(r, c, c.output(), {{vi, r.constant(j)}}));
  std::vector<int> terms;
  int y = r.input(var);
  for (int k = order; k <= d; ++k) {
    std::vector<int> parts;
    for (int j = 0; j <= d; ++j)
      if (basis[j][k] != 0) parts.push_back(r.scale(basis[j][k], at[j]));
    if (parts.empty()) continue;
    Scalar falling = 1;
    for (int t = 0; t < order; ++t) falling *= (k - t);
    int coef = r.scale(falling, r.add(parts));
    terms.push_back(r.mul({coef, r.pow(y, k - order)}));
  }
  r.set_output(terms.empty() ? r.constant(0) : r.add(terms));
  return r;
}

namespace {
Circuit combine_scaled(const Circuit& c, const std::vector<std::string>& vars, int D,
                       const std::function<Scalar(const std::vector<QPoly>&, int)>& weight) {
  auto basis = lagrange_basis(D);
  Circuit r(c.variables());
  std::vector<int> parts;
  for (int j = 0; j <= D; ++j) {
    Scalar w = weight(basis, j);
    if (w == 0) continue;
    parts.push_back(r.scale(w, import_scaled(r, c, vars, Scalar(j))));
  }
  r.set_output(parts.empty() ? r.constant(0) : r.add(parts));
  return r;
}
}  // namespace

Circuit truncate_circuit(const Circuit& c, const std::vector<std::string>& vars, int k) {
  int D = degree_bound_in(c, vars);
  if (k > D) {
    Circuit r(c.variables());
    r.set_output(r.import(c, c.output()));
    return r;
  }
  return combine_scaled(c, vars, D, [&](const std::vector<QPoly>& basis, int j) {
    Scalar w = 0;
    for (int m = 0; m < k; ++m) w += basis[j][m];
    return w;
  });
}

Circuit hom_component_circuit(const Circuit& c, const std::vector<std::string>& vars, int i) {
  int D = degree_bound_in(c, vars);
  if (i > D || i < 0) return Circuit::constant_circuit(0, c.variables());
  return combine_scaled(c, vars, D, [&](const std::vector<QPoly>& basis, int j) { return basis[j][i]; });
}

Circuit coefficient_circuit(const Circuit& c, const std::string& var, int i) {
  int D = degree_bound(c).of(var);
  Circuit r(c.variables());
  if (i > D || i < 0) {
    r.set_output(r.constant(0));
    return r;
  }
  if (D == 0) {
    r.set_output(r.import(c, c.output()));
    return r;
  }
  auto basis = lagrange_basis(D);
  int vi = r.declare(var);
  std::vector<int> parts;
  for (int j = 0; j <= D; ++j) {
    if (basis[j][i] == 0) continue;
    parts.push_back(r.scale(basis[j][i], import_with(r, c, c.output(), {{vi, r.constant(j)}})));
  }
  r.set_output(parts.empty() ? r.constant(0) : r.add(parts));
  return r;
}

// --- determinant ---------------------------------------------------------

int build_determinant(Circuit& c, const std::vector<std::vector<int>>& a) {
  size_t n = a.size();
  for (const auto& row : a)
    if (row.size() != n) throw DimensionMismatch("determinant needs a square matrix");
  if (n == 0) return c.constant(1);
  // Berkowitz: characteristic polynomial coefficients (leading first) of
  // trailing principal submatrices, extended one row/column at a time.
  std::vector<int> p{c.constant(1), c.neg(a[n - 1][n - 1])};
  for (size_t k = n - 1; k-- > 0;) {
    size_t m = n - k - 1;
    std::vector<int> col{c.constant(1), c.neg(a[k][k])};
    std::vector<int> v(m);
    for (size_t i = 0; i < m; ++i) v[i] = a[k + 1 + i][k];
    for (size_t j = 0; j < m; ++j) {
      std::vector<int> dot;
      for (size_t i = 0; i < m; ++i) dot.push_back(c.mul({a[k][k + 1 + i], v[i]}));
      col.push_back(c.neg(c.add(dot)));
      if (j + 1 < m) {
        std::vector<int> nv(m);
        for (size_t r = 0; r < m; ++r) {
          std::vector<int> s;
          for (size_t i = 0; i < m; ++i) s.push_back(c.mul({a[k + 1 + r][k + 1 + i], v[i]}));
          nv[r] = c.add(s);
        }
        v = std::move(nv);
      }
    }
    std::vector<int> np(m + 2);
    for (size_t i = 0; i < m + 2; ++i) {
      std::vector<int> s;
      for (size_t j = 0; j <= std::min(i, m); ++j) s.push_back(c.mul({col[i - j], p[j]}));
      np[i] = c.add(s);
    }
    p = std::move(np);
  }
  int det = p[n];
  return n % 2 == 0 ? det : c.neg(det);
}

Circuit determinant_circuit(const std::vector<std::vector<Circuit>>& m) {
  Circuit r;
  std::vector<std::vector<int>> g(m.size());
  for (size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != m.size()) throw DimensionMismatch("determinant needs a square matrix");
    for (const auto& e : m[i]) g[i].push_back(r.import(e, e.output()));
  }
  r.set_output(build_determinant(r, g));
  return r;
}

// --- division elimination ------------------------------------------------

Circuit eliminate_divisions(const Circuit& c, const std::map<std::string, Scalar>& u, int d) {
  std::map<std::string, Coeff> pt;
  for (const auto& v : c.variables()) {
    auto it = u.find(v);
    pt[v] = Coeff(it == u.end() ? Scalar(0) : it->second);
  }
  // Values of every gate at u give the degree-0 components.
  const auto& gates = c.gates();
  auto live = c.reachable();
  std::vector<Scalar> at(gates.size());
  for (size_t g = 0; g < gates.size(); ++g) {
    if (!live[g]) continue;
    const Gate& gt = gates[g];
    switch (gt.op) {
      case Op::Input: at[g] = pt[c.variables()[gt.var]].rational(); break;
      case Op::Const: at[g] = gt.value; break;
      case Op::Add:
        at[g] = 0;
        for (int a : gt.args) at[g] += at[a];
        break;
      case Op::Mul:
        at[g] = 1;
        for (int a : gt.args) at[g] *= at[a];
        break;
      case Op::Div:
        if (at[gt.args[1]] == 0) throw ZeroDivisorAtPoint("divisor vanishes at the chosen point");
        at[g] = at[gt.args[0]] / at[gt.args[1]];
        break;
    }
  }
  Circuit r(c.variables());
  using Comps = std::vector<int>;  // -1 marks a zero component
  auto conv = [&](const Comps& x, const Comps& y) {
    Comps z(d + 1, -1);
    for (int m = 1; m <= d; ++m) {
      std::vector<int> s;
      for (int i = 0; i <= m; ++i) {
        int j = m - i;
        if (x[i] < 0 || y[j] < 0) continue;
        s.push_back(r.mul({x[i], y[j]}));
      }
      if (!s.empty()) z[m] = r.add(s);
    }
    return z;
  };
  std::vector<Comps> comps(gates.size());
  for (size_t g = 0; g < gates.size(); ++g) {
    if (!live[g]) continue;
    const Gate& gt = gates[g];
    Comps h(d + 1, -1);
    switch (gt.op) {
      case Op::Input: {
        const std::string& v = c.variables()[gt.var];
        if (d >= 1) h[1] = r.add({r.input(v), r.constant(-at[g])});
        break;
      }
      case Op::Const: break;
      case Op::Add:
        for (int m = 1; m <= d; ++m) {
          std::vector<int> s;
          for (int a : gt.args)
            if (comps[a][m] >= 0) s.push_back(comps[a][m]);
          if (!s.empty()) h[m] = r.add(s);
        }
        break;
      case Op::Mul: {
        h = comps[gt.args[0]];
        Scalar left = at[gt.args[0]];
        for (size_t i = 1; i < gt.args.size(); ++i) {
          h = conv(h, comps[gt.args[i]]);
          left *= at[gt.args[i]];
          h[0] = r.constant(left);
        }
        break;
      }
      case Op::Div: {
        const Comps& num = comps[gt.args[0]];
        const Comps& den = comps[gt.args[1]];
        Scalar inv0 = 1 / at[gt.args[1]];
        Comps inv(d + 1, -1);
        inv[0] = r.constant(inv0);
        for (int m = 1; m <= d; ++m) {
          std::vector<int> s;
          for (int j = 1; j <= m; ++j)
            if (den[j] >= 0 && inv[m - j] >= 0) s.push_back(r.mul({den[j], inv[m - j]}));
          if (!s.empty()) inv[m] = r.scale(-inv0, r.add(s));
        }
        h = conv(num, inv);
        break;
      }
    }
    h[0] = r.constant(at[g]);
    comps[g] = std::move(h);
  }
  for (int o : c.outputs()) {
    std::vector<int> s;
    for (int m = 0; m <= d; ++m)
      if (comps[o][m] >= 0) s.push_back(comps[o][m]);
    r.add_output(r.add(s));
  }
  return r;
}

Circuit eliminate_division(const Circuit& a, const Circuit& b, const std::map<std::string, Scalar>& u, int d,
                           bool verify) {
  Circuit q;
  for (const auto& v : a.variables()) q.declare(v);
  for (const auto& v : b.variables()) q.declare(v);
  int na = q.import(a, a.output());
  int nb = q.import(b, b.output());
  {
    std::map<std::string, Coeff> pt;
    for (const auto& v : q.variables()) {
      auto it = u.find(v);
      pt[v] = Coeff(it == u.end() ? Scalar(0) : it->second);
    }
    if (eval_circuit1(b, pt).is_zero()) throw ZeroDivisorAtPoint("B vanishes at the chosen point");
  }
  q.set_output(q.div(na, nb));
  Circuit r = eliminate_divisions(q, u, d);
  if (!verify) return r;
  // Post-hoc check A = R*B on a grid, or on fixed pseudorandom points when
  // the grid is large.
  const auto& vars = r.variables();
  int D = std::max(degree_bound(a).total, d + degree_bound(b).total);
  size_t n = vars.size();
  double grid = 1;
  for (size_t i = 0; i < n; ++i) grid *= (D + 1);
  std::vector<std::vector<Coeff>> points;
  if (grid <= 4096) {
    std::vector<int> idx(n, 0);
    while (true) {
      std::vector<Coeff> p;
      for (int x : idx) p.push_back(Coeff(x));
      points.push_back(p);
      size_t k = 0;
      while (k < n && ++idx[k] > D) idx[k++] = 0;
      if (k == n) break;
    }
  } else {
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<int> dist(-50, 50);
    for (int t = 0; t < 64; ++t) {
      std::vector<Coeff> p;
      for (size_t i = 0; i < n; ++i) p.push_back(Coeff(dist(rng)));
      points.push_back(p);
    }
  }
  Circuit check(vars);
  int ra = check.import(a, a.output()), rb = check.import(b, b.output()), rr = check.import(r, r.output());
  check.set_output(check.sub(ra, check.mul({rr, rb})));
  for (const auto& p : points)
    if (!eval_at(check, p).is_zero()) throw InexactDivision("quotient check failed on the verification grid");
  return r;
}

// --- dense bridge --------------------------------------------------------

MultiPoly dense_from_circuit(const Circuit& c, const DegreeBound& bound, double cap) {
  double count = 1;
  for (const auto& v : c.variables()) count *= (bound.of(v) + 1);
  if (count > cap) throw CapExceeded("dense expansion needs up to " + std::to_string(count) + " monomials");
  std::map<std::string, MultiPoly> pt;
  for (const auto& v : c.variables()) pt[v] = MultiPoly::variable(v, c.variables());
  MultiPoly out = eval_circuit_poly(c, pt).at(0);
  return out.with_vars(merge_vars(c.variables(), out.vars()));
}

MultiPoly dense_from_circuit(const Circuit& c, double cap) { return dense_from_circuit(c, degree_bound(c), cap); }

int build_poly(Circuit& c, const MultiPoly& p) {
  std::vector<int> terms;
  for (const auto& [e, coef] : p.terms()) {
    if (!coef.is_rational()) throw FieldMismatch("circuits carry rational constants only");
    std::vector<int> f{c.constant(coef.rational())};
    for (int i = 0; i < p.nvars(); ++i)
      for (int k = 0; k < e[i]; ++k) f.push_back(c.input(p.vars()[i]));
    terms.push_back(c.mul(f));
  }
  return terms.empty() ? c.constant(0) : c.add(terms);
}

Circuit circuit_from_poly(const MultiPoly& p) {
  Circuit c(p.vars());
  c.set_output(build_poly(c, p));
  return c;
}

}  // namespace circfactor
