#pragma once

#include <map>
#include <unordered_map>
#include <string>
#include <vector>

#include "circfactor/polyring.hh"

namespace circfactor {

enum class Op { Input, Const, Add, Mul, Div };

struct Gate {
  Op op;
  int var = -1;  // Input: index into variables()
  Scalar value;  // Const
  std::vector<int> args;
};

// DAG of gates stored in topological order (arguments precede their gate).
// Structurally equal gates are shared. Div gates are only produced while
// eliminating divisions and cannot be serialized.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::vector<std::string> variables);

  const std::vector<std::string>& variables() const { return vars_; }
  int declare(const std::string& var);
  int input(const std::string& var);
  int constant(const Scalar& c);
  int add(std::vector<int> args);
  int mul(std::vector<int> args);
  int sub(int a, int b);
  int neg(int a);
  int scale(const Scalar& c, int a);
  int pow(int a, int e);
  int div(int a, int b);
  // Copies the subgraph rooted at `root` of another circuit; inputs are
  // matched by variable name (declared here when missing).
  int import(const Circuit& other, int root);
  int import(const Circuit& other, int root, std::map<int, int>& memo);

  void set_output(int g) { outputs_ = {g}; }
  void add_output(int g) { outputs_.push_back(g); }
  const std::vector<int>& outputs() const { return outputs_; }
  int output() const;
  const std::vector<Gate>& gates() const { return gates_; }
  const Gate& gate(int g) const { return gates_[g]; }
  bool is_constant_gate(int g) const { return gates_[g].op == Op::Const; }
  bool has_division() const;
  // Edge count of the part reachable from the outputs.
  long size() const;
  // Longest leaf-to-output path, counted in edges.
  int depth() const;
  std::vector<bool> reachable() const;

  static Circuit constant_circuit(const Scalar& c, std::vector<std::string> variables = {});

 private:
  int push(Gate g);

  std::vector<std::string> vars_;
  std::vector<Gate> gates_;
  std::vector<int> outputs_;
  std::map<int, int> input_gate_;
  std::map<Scalar, int> const_gate_;
  struct OpKeyHash {
    size_t operator()(const std::pair<int, std::vector<int>>& k) const {
      size_t h = static_cast<size_t>(k.first) * 0x9e3779b97f4a7c15ULL;
      for (int a : k.second) h = (h ^ static_cast<size_t>(a)) * 0x100000001b3ULL;
      return h;
    }
  };
  std::unordered_map<std::pair<int, std::vector<int>>, int, OpKeyHash> op_gate_;
};

// Text format, one statement per line:
//   # comment
//   input <var>
//   node <id> = add <ref>... | mul <ref>... | c(<rational>)
//   output <ref>
// References are node ids, input variables or inline c(p/q).
Circuit parse_circuit(const std::string& text);
std::string serialize_circuit(const Circuit& c);

// Evaluation over any ring R. `embed` maps rational constants into R and
// `divide` implements Div gates.
template <class R, class Embed, class Divide>
std::vector<R> eval_generic(const Circuit& c, const std::vector<R>& point, Embed embed, Divide divide) {
  const auto& gates = c.gates();
  std::vector<bool> live = c.reachable();
  std::vector<R> val(gates.size());
  for (size_t g = 0; g < gates.size(); ++g) {
    if (!live[g]) continue;
    const Gate& gt = gates[g];
    switch (gt.op) {
      case Op::Input: val[g] = point[gt.var]; break;
      case Op::Const: val[g] = embed(gt.value); break;
      case Op::Add: {
        R acc = val[gt.args[0]];
        for (size_t i = 1; i < gt.args.size(); ++i) acc += val[gt.args[i]];
        val[g] = std::move(acc);
        break;
      }
      case Op::Mul: {
        R acc = val[gt.args[0]];
        for (size_t i = 1; i < gt.args.size(); ++i) acc *= val[gt.args[i]];
        val[g] = std::move(acc);
        break;
      }
      case Op::Div: val[g] = divide(val[gt.args[0]], val[gt.args[1]]); break;
    }
  }
  std::vector<R> out;
  for (int o : c.outputs()) out.push_back(val[o]);
  return out;
}

// Point given by variable name; every declared variable must be present
// (MissingAssignment otherwise).
std::vector<Coeff> eval_circuit(const Circuit& c, const std::map<std::string, Coeff>& point);
Coeff eval_circuit1(const Circuit& c, const std::map<std::string, Coeff>& point);
// Point given positionally, in the order of c.variables().
Coeff eval_at(const Circuit& c, const std::vector<Coeff>& point);
std::vector<MultiPoly> eval_circuit_poly(const Circuit& c, const std::map<std::string, MultiPoly>& point);

// Homomorphism: each mapped variable is replaced by the given circuit's
// output. Unmapped variables stay.
Circuit substitute(const Circuit& c, const std::map<std::string, Circuit>& map);

struct DegreeBound {
  std::map<std::string, int> per_var;
  int total = 0;
  int of(const std::string& v) const {
    auto it = per_var.find(v);
    return it == per_var.end() ? 0 : it->second;
  }
};
DegreeBound degree_bound(const Circuit& c);
// Bound on the total degree in the given subset of variables.
int degree_bound_in(const Circuit& c, const std::vector<std::string>& vars);

// Exact i-th derivative (not divided by i!) via interpolation at 0..d.
Circuit derivative_circuit(const Circuit& c, const std::string& var, int order);
// Keeps the part of total degree < k in vars (same convention as poly_trunc).
Circuit truncate_circuit(const Circuit& c, const std::vector<std::string>& vars, int k);
Circuit hom_component_circuit(const Circuit& c, const std::vector<std::string>& vars, int i);
// Coefficient of var^i, via interpolation at 0..deg.
Circuit coefficient_circuit(const Circuit& c, const std::string& var, int i);

// Division-free (Berkowitz) determinant.
Circuit determinant_circuit(const std::vector<std::vector<Circuit>>& m);
int build_determinant(Circuit& c, const std::vector<std::vector<int>>& m);

// Division-free circuit for A/B, using the expansion of 1/B around u up to
// degree d. Throws ZeroDivisorAtPoint when B(u) = 0 and InexactDivision
// when the grid check finds A != (A/B)*B.
Circuit eliminate_division(const Circuit& a, const Circuit& b, const std::map<std::string, Scalar>& u, int d,
                           bool verify = true);
// Removes every Div gate of c (every output of degree <= d); one output per
// output of c.
Circuit eliminate_divisions(const Circuit& c, const std::map<std::string, Scalar>& u, int d);

// Sparse expansion. Throws CapExceeded when prod(bound_i + 1) > cap.
MultiPoly dense_from_circuit(const Circuit& c, const DegreeBound& bound, double cap = 1e6);
MultiPoly dense_from_circuit(const Circuit& c, double cap = 1e6);
// Sum-of-monomials circuit (rational coefficients only).
Circuit circuit_from_poly(const MultiPoly& p);
int build_poly(Circuit& c, const MultiPoly& p);

}  // namespace circfactor
