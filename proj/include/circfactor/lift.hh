#pragma once

#include <string>
#include <vector>

#include "circfactor/circuit_ir.hh"

namespace circfactor {

// Truncated approximate z-root: P(T, x, phi) = 0 mod T^order.
struct ApproxRoot {
  MultiPoly phi;  // over P's variables without z
  int order = 0;
  Coeff base;           // alpha = phi(0, 0)
  Coeff deriv_at_base;  // beta = dP/dz(0, 0, alpha)
};

struct InverseWitness {
  // sigma after each round; round i satisfies sigma_i * dP/dz(phi_i) = 1 mod T^(2^i).
  std::vector<MultiPoly> sigma;
};

// Every monomial with positive degree in the non-(T, z) variables also has
// positive T-degree.
bool check_regularized(const MultiPoly& p, const std::string& T = "T", const std::string& z = "z");

// a * b mod T^k, skipping term pairs that truncation would drop.
MultiPoly mul_trunc(const MultiPoly& a, const MultiPoly& b, const std::string& T, int k);

// P(T, x, phi) mod T^k by Horner's rule with eager truncation.
MultiPoly eval_at_root_trunc(const MultiPoly& p, const MultiPoly& phi, int k, const std::string& T = "T",
                             const std::string& z = "z");

// One T-power per step. Throws NotARoot / DegenerateRoot.
ApproxRoot newton_lift_linear(const MultiPoly& p, const Coeff& alpha, int k, const std::string& T = "T",
                              const std::string& z = "z");
// Division-free doubling rounds carrying an inverse witness for dP/dz.
std::pair<ApproxRoot, InverseWitness> newton_lift_quadratic(const MultiPoly& p, const Coeff& alpha, int k,
                                                            const std::string& T = "T", const std::string& z = "z");

bool check_approx_root(const MultiPoly& p, const MultiPoly& phi, int k, const std::string& T = "T",
                       const std::string& z = "z");

// Circuit computing a lifted root with rational coefficients.
Circuit root_circuit(const ApproxRoot& r);

}  // namespace circfactor
