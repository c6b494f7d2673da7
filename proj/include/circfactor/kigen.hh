#pragma once

#include <string>
#include <vector>

#include "circfactor/circuit_ir.hh"

namespace circfactor {

// (n, sigma, mu, rho)-design: n subsets of [mu] (0-based), each of size
// sigma, pairwise intersections < rho.
struct Design {
  int n = 0, sigma = 0, mu = 0, rho = 0;
  std::vector<std::vector<int>> sets;
};

bool is_prime_power(int q);
int next_prime_power(int x);

// Reed-Solomon design over GF(q), q the least prime power >= sigma: the set of
// f with deg f < rho is {a*q + f(a) : a in GF(q)}. Throws InfeasibleParameters.
Design build_design(int n, int sigma, int rho);
bool check_design(const Design& d);

struct HardFamilySpec {
  std::string name;
  int (*degree)(int sigma);
  MultiPoly (*make)(int sigma, const std::string& prefix);
};

// Known families: "esym" (default), "nw", "isp".
const HardFamilySpec& hard_family(const std::string& name);
const std::vector<std::string>& hard_family_names();
// Degree rule of the default family: max(2, ceil(log2 log2 sigma) + 1), at
// most sigma.
int default_hard_degree(int sigma);
MultiPoly default_hard_poly(int sigma, const std::string& prefix = "w");

struct KIMap {
  Design design;
  MultiPoly g;                       // in prefix1..prefix<sigma>
  std::vector<std::string> w;        // prefix1..prefix<mu>
  std::vector<MultiPoly> images;     // g_i(w) = g(w_{S_i}), over w
  std::vector<Circuit> image_circuits;

  // x_i -> g_i(w) for the given variable names (in order).
  std::map<std::string, Circuit> substitution(const std::vector<std::string>& xs) const;
  std::vector<Coeff> apply(const std::vector<Coeff>& wpoint) const;
};

// Throws ArityMismatch unless g has exactly design.sigma variables.
KIMap build_ki_map(const MultiPoly& g, const Design& design, const std::string& prefix = "w");

struct KIParams {
  int sigma = 0, mu = 0, rho = 0;
};
// sigma = least prime power >= ceil(n^eps), rho = ceil(log2 n) capped at
// sigma (at least 1), mu = sigma^2. When n > sigma^rho the prime power is
// raised until the design exists.
KIParams ki_parameters(int n, const Scalar& epsilon);
// Design and map for n variables under the epsilon rule; `bump` raises sigma
// to further prime powers.
KIMap ki_for(int n, const Scalar& epsilon, const std::string& family, int bump = 0,
             const std::string& prefix = "w");

std::string design_to_json(const Design& d);
std::string ki_to_json(const KIMap& k);

}  // namespace circfactor
