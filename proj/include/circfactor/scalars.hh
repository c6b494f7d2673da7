#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

#include "circfactor/errors.hh"

namespace circfactor {

using Integer = mpz_class;
// mpq_class arithmetic keeps results canonical (gcd-reduced, positive
// denominator, zero as 0/1), so equality is structural.
using Scalar = mpq_class;

std::string to_string(const Scalar& q);
std::string to_string(const Integer& z);
// Accepts "p", "-p", "p/q". Throws ParseError.
Scalar parse_scalar(std::string_view text);
Scalar make_scalar(const Integer& num, const Integer& den);

// Dense univariate polynomial over Q, lowest degree first, no trailing zeros.
using QPoly = std::vector<Scalar>;

namespace qpoly {
void trim(QPoly& p);
int degree(const QPoly& p);  // -1 for zero
QPoly add(const QPoly& a, const QPoly& b);
QPoly sub(const QPoly& a, const QPoly& b);
QPoly mul(const QPoly& a, const QPoly& b);
QPoly scale(const QPoly& a, const Scalar& c);
// Division by a nonzero polynomial; returns {quotient, remainder}.
std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b);
QPoly rem(const QPoly& a, const QPoly& b);
QPoly monic(const QPoly& a);
QPoly gcd(const QPoly& a, const QPoly& b);  // monic, or zero
QPoly derivative(const QPoly& a);
Scalar eval(const QPoly& a, const Scalar& x);
QPoly pow(const QPoly& a, int e);
std::string to_string(const QPoly& p, const std::string& var);
// Lexicographic comparison of coefficient sequences (low-first), used to
// break ties deterministically.
bool lex_less(const QPoly& a, const QPoly& b);
}  // namespace qpoly

// K = Q[u]/H(u) with H monic. Irreducibility of H is the caller's
// responsibility. Fields are interned: number_field() returns the same
// pointer for the same modulus and the object lives for the whole process.
struct NumberField {
  QPoly modulus;  // monic, size degree()+1
  int degree() const { return static_cast<int>(modulus.size()) - 1; }
};

const NumberField* number_field(const QPoly& modulus);

// Element of Q (field() == nullptr) or of a number field. A rational value
// combines freely with elements of any field; combining elements of two
// different number fields throws FieldMismatch.
class NumberFieldElement {
 public:
  NumberFieldElement() = default;
  NumberFieldElement(const Scalar& q) : c0_(q) {}  // NOLINT: implicit embedding
  NumberFieldElement(long v) : c0_(v) {}           // NOLINT
  NumberFieldElement(int v) : c0_(v) {}            // NOLINT

  // The class of `residue` in K (reduced mod H).
  static NumberFieldElement in(const NumberField* K, QPoly residue);
  // The generator u of K.
  static NumberFieldElement generator(const NumberField* K);

  const NumberField* field() const { return K_; }
  bool is_rational() const { return hi_.empty(); }
  // Only meaningful when is_rational().
  const Scalar& rational() const { return c0_; }
  // Residue coefficients, lowest first, padded to the field degree (1 for Q).
  QPoly residue() const;
  Scalar coefficient(int r) const;
  bool is_zero() const { return hi_.empty() && c0_ == 0; }
  bool is_one() const { return hi_.empty() && c0_ == 1; }

  NumberFieldElement operator-() const;
  NumberFieldElement& operator+=(const NumberFieldElement& b);
  NumberFieldElement& operator-=(const NumberFieldElement& b);
  NumberFieldElement& operator*=(const NumberFieldElement& b);
  friend NumberFieldElement operator+(NumberFieldElement a, const NumberFieldElement& b) { return a += b; }
  friend NumberFieldElement operator-(NumberFieldElement a, const NumberFieldElement& b) { return a -= b; }
  friend NumberFieldElement operator*(NumberFieldElement a, const NumberFieldElement& b) { return a *= b; }
  friend bool operator==(const NumberFieldElement& a, const NumberFieldElement& b) {
    return a.c0_ == b.c0_ && a.hi_ == b.hi_;
  }
  friend bool operator!=(const NumberFieldElement& a, const NumberFieldElement& b) { return !(a == b); }

  NumberFieldElement inverse() const;
  // Rationals: "p/q". Field elements: comma-separated u-coefficients,
  // lowest degree first, padded to the field degree.
  std::string to_string() const;
  // Same value tagged with field K (a rational becomes an element of K).
  NumberFieldElement with_field(const NumberField* K) const;

 private:
  static const NumberField* join(const NumberField* a, const NumberField* b);
  void normalize();

  const NumberField* K_ = nullptr;
  Scalar c0_;
  std::vector<Scalar> hi_;  // coefficients of u^1.., trimmed
};

using Coeff = NumberFieldElement;

NumberFieldElement nf_reduce(const QPoly& p, const NumberField* K);
NumberFieldElement nf_inverse(const NumberFieldElement& a);

class MultiPoly;
// Splits c = sum_r result[r] * u^r with result[r] over Q in the same
// variables. Result has K->degree() entries.
std::vector<MultiPoly> nf_coeff_decompose(const MultiPoly& c, const NumberField* K);

}  // namespace circfactor
