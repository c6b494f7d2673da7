#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "circfactor/scalars.hh"

namespace circfactor {

using Exponent = std::vector<int>;

// Orders exponent vectors so that the graded-lex greatest comes first.
struct GrlexGreater {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

int total_degree(const Exponent& e);

// Sparse polynomial over Q or over one number field K. Binary operations on
// polynomials with different variable lists work in the merged list (left
// operand's variables first, then the right operand's new ones).
class MultiPoly {
 public:
  using TermMap = std::map<Exponent, Coeff, GrlexGreater>;

  MultiPoly() : vars_(empty_vars()) {}
  explicit MultiPoly(std::vector<std::string> vars, const NumberField* K = nullptr);
  static MultiPoly constant(const Coeff& c, std::vector<std::string> vars = {});
  // The polynomial `name`, in `vars` (name is appended when missing).
  static MultiPoly variable(const std::string& name, std::vector<std::string> vars = {});
  static MultiPoly monomial(const Coeff& c, const Exponent& e, std::vector<std::string> vars);

  const std::vector<std::string>& vars() const { return *vars_; }
  int nvars() const { return static_cast<int>(vars_->size()); }
  int var_index(const std::string& name) const;
  int require_var(const std::string& name) const;  // throws UnknownVariable
  const NumberField* field() const { return K_; }
  const TermMap& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Coeff constant_term() const;
  Coeff coefficient(const Exponent& e) const;
  // Adds c*x^e to the polynomial.
  void add_term(const Exponent& e, const Coeff& c);

  const Exponent& leading_exponent() const;
  const Coeff& leading_coefficient() const;
  int degree(int var) const;  // -1 for zero
  int degree(const std::string& name) const;
  int total_degree() const;  // -1 for zero
  int degree_in(const std::vector<int>& var_idx) const;
  // Variables that actually occur.
  std::vector<std::string> used_vars() const;

  MultiPoly with_vars(const std::vector<std::string>& vars) const;
  MultiPoly with_field(const NumberField* K) const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& b);
  MultiPoly& operator-=(const MultiPoly& b);
  MultiPoly& operator*=(const MultiPoly& b);
  MultiPoly& operator*=(const Coeff& c);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const Coeff& c) { return a *= c; }
  friend MultiPoly operator*(const Coeff& c, MultiPoly a) { return a *= c; }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b);
  friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }
  MultiPoly pow(int e) const;

  // Canonical text: terms in graded-lex order, e.g. "3/2*x1^2*z - T + 1".
  // Number-field coefficients print as "(c0,c1,...)".
  std::string to_string() const;

 private:
  friend class PolyBuilder;
  static std::shared_ptr<const std::vector<std::string>> empty_vars();
  void set_vars(std::shared_ptr<const std::vector<std::string>> v) { vars_ = std::move(v); }
  void absorb_field(const NumberField* K);

  std::shared_ptr<const std::vector<std::string>> vars_;
  const NumberField* K_ = nullptr;
  TermMap terms_;
};

// Merged variable list: a's variables, then b's variables not in a.
std::vector<std::string> merge_vars(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Parses the canonical grammar; also accepts parentheses, '^' on any primary
// and '/' by a constant. When `vars` is empty the
// variable order is the order of first appearance. Number-field tuples
// "(c0,c1,..)" require K.
MultiPoly parse_poly(std::string_view text, std::vector<std::string> vars = {},
                     const NumberField* K = nullptr);

// --- basic structure ----------------------------------------------------
MultiPoly derivative(const MultiPoly& p, const std::string& var);
// Coefficients of p viewed as a polynomial in var (index = power); the
// returned polynomials keep p's variable list with var's exponent zero.
std::vector<MultiPoly> coefficients_in(const MultiPoly& p, const std::string& var);
MultiPoly from_coefficients(const std::vector<MultiPoly>& c, const std::string& var,
                            const std::vector<std::string>& vars);
// Replace var by value (a polynomial, possibly in other variables).
MultiPoly substitute(const MultiPoly& p, const std::string& var, const MultiPoly& value);
// Simultaneous substitution of several variables.
MultiPoly substitute(const MultiPoly& p, const std::map<std::string, MultiPoly>& values);
// Evaluate at a full point (values indexed like p.vars()).
Coeff evaluate(const MultiPoly& p, const std::vector<Coeff>& point);
// Scale so that the graded-lex leading coefficient is 1.
MultiPoly make_monic(const MultiPoly& p);

// --- truncation and homogeneous parts -----------------------------------
MultiPoly poly_trunc(const MultiPoly& q, const std::vector<std::string>& vars, int k);
MultiPoly hom_component(const MultiPoly& q, const std::vector<std::string>& vars, int i);

// --- symmetric functions (Newton identities) ----------------------------
// R needs a zero default constructor, +, -, * and multiplication by Scalar.
template <class R>
std::vector<R> esym_to_psym(const std::vector<R>& e) {
  size_t n = e.size();
  std::vector<R> p(n);
  for (size_t k = 1; k <= n; ++k) {
    R acc = e[k - 1] * Scalar(static_cast<long>(k));
    if (k % 2 == 0) acc = acc * Scalar(-1);
    for (size_t i = 1; i < k; ++i) {
      R term = e[i - 1] * p[k - i - 1];
      if (i % 2 == 1) acc = acc + term;
      else acc = acc - term;
    }
    p[k - 1] = acc;
  }
  return p;
}

template <class R>
std::vector<R> psym_to_esym(const std::vector<R>& p) {
  size_t n = p.size();
  std::vector<R> e(n);
  for (size_t k = 1; k <= n; ++k) {
    R acc = p[k - 1];
    if (k % 2 == 0) acc = acc * Scalar(-1);
    for (size_t i = 1; i < k; ++i) {
      R term = e[k - i - 1] * p[i - 1];
      if (i % 2 == 1) acc = acc + term;
      else acc = acc - term;
    }
    Scalar inv_k(1);
    inv_k /= static_cast<long>(k);
    e[k - 1] = acc * inv_k;
  }
  return e;
}

// --- division, gcd ------------------------------------------------------
// Exact multivariate division; throws InexactDivision.
MultiPoly exact_divide(const MultiPoly& a, const MultiPoly& b);
// True iff b divides a; quotient stored when non-null.
bool divides(const MultiPoly& b, const MultiPoly& a, MultiPoly* quotient = nullptr);
// Graded-lex monic gcd (zero if both are zero).
MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b);
// Content with respect to var: gcd of the var-coefficients (monic).
MultiPoly content_in(const MultiPoly& p, const std::string& var);

struct DivResult {
  MultiPoly quotient, remainder;
};
// Division by B whose leading var-coefficient is a nonzero scalar.
DivResult dense_divide(const MultiPoly& a, const MultiPoly& b, const std::string& var);

// --- resultants ---------------------------------------------------------
// Determinant by fraction-free (Bareiss) elimination.
MultiPoly bareiss_determinant(std::vector<std::vector<MultiPoly>> m);

// Unique solution of an overdetermined consistent system m * x = rhs, as
// x_k = numerators[k] / denominator. SingularSystem when the columns are
// dependent, HypothesisViolated when the system is inconsistent.
struct LinearSolution {
  MultiPoly denominator;
  std::vector<MultiPoly> numerators;
};
LinearSolution fraction_free_solve(std::vector<std::vector<MultiPoly>> m, const std::vector<MultiPoly>& rhs);
MultiPoly sylvester_resultant(const MultiPoly& p, const MultiPoly& q, const std::string& var);
MultiPoly discriminant(const MultiPoly& p, const std::string& var);

// --- squarefree decomposition -------------------------------------------
struct SquarefreeDecomposition {
  Coeff unit = 1;
  std::vector<MultiPoly> parts;  // parts[i] has multiplicity i+1, monic
};
SquarefreeDecomposition squarefree_decompose(const MultiPoly& f);
// Main variable for Yun: highest degree, ties by variable order.
std::string main_variable(const MultiPoly& f);

}  // namespace circfactor
