#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "circfactor/kigen.hh"

namespace circfactor {

struct PitVerdict {
  bool is_zero = true;
  // Aligned with the circuit's variables(); present iff !is_zero.
  std::optional<std::vector<Coeff>> witness;
  // "grid", "ki:<family>" or "ki:<family>+<bump>": the stage that decided.
  std::string stage;
  long points = 0;
};

struct PitOptions {
  double grid_cap = 1e6;
  std::string family = "esym";
  // When false a KI zero verdict is returned as is (assumption-dependent).
  bool fallback = true;
  // Receives one line per escalation step.
  std::vector<std::string>* log = nullptr;
};

// Scans {0..d}^m (m = number of variables reachable from the output) in
// shell order (max-coordinate 0, 1, .., d; lexicographic inside a shell)
// and returns the first nonzero point. At most `cap`
// points are evaluated; CapExceeded when the grid is larger than the cap and
// no witness was found within it.
PitVerdict grid_pit(const Circuit& c, int d, double cap = 1e6);

// Generic form used by the searches: `nonzero` is asked about points of
// {0..d}^m in the same shell order.
std::optional<std::vector<Coeff>> grid_search(int m, int d, double cap,
                                              const std::function<bool(const std::vector<Coeff>&)>& nonzero,
                                              long* evaluated = nullptr);

// Composes with the KI map of the epsilon rule and scans the mu-variate grid
// up to the composed degree bound. Zero verdicts escalate: alternate hard
// family, then a direct grid when (d+1)^n <= cap, else FallbackExhausted.
PitVerdict ki_pit(const Circuit& c, const Scalar& epsilon, const PitOptions& opt = {});

// Same search for a predicate on points of the original variables, which is
// known to be a nonzero polynomial of degree <= d in n variables. Returns the
// first accepted KI image in the scan order; falls back to a direct grid.
std::vector<Coeff> ki_search(int n, int d, const Scalar& epsilon,
                             const std::function<bool(const std::vector<Coeff>&)>& nonzero,
                             const PitOptions& opt = {});

// Scans w in {0..d}^mu (shell order) and asks `nonzero` about the first
// `nvars` KI images of each distinct w. At most `cap` points.
std::optional<std::vector<Coeff>> scan_ki_map(const KIMap& k, int nvars, int d, double cap,
                                              const std::function<bool(const std::vector<Coeff>&)>& nonzero);

std::vector<std::string> used_variables(const Circuit& c);

}  // namespace circfactor
