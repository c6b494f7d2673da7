#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "circfactor/lift.hh"
#include "circfactor/pit.hh"

namespace circfactor {

// --- univariate over Q (Zassenhaus) ---------------------------------------

struct UnivariateFactor {
  QPoly factor;  // monic irreducible
  int multiplicity = 1;
};
// Sorted by degree, then coefficients. Constants give an empty list.
std::vector<UnivariateFactor> univariate_factor_Q(const QPoly& f, long recombination_cap = 1L << 20);

// --- dense multivariate ---------------------------------------------------

// P monic in y, squarefree, with P(0, ..., 0, y) squarefree. Every other
// variable has weight 1 unless listed in `weight`; the weight-0 part of P
// must be P(0, ..., 0, y). Lifting runs to weighted degree deg_w(P) + 1.
std::vector<MultiPoly> hensel_factor(const MultiPoly& p, const std::string& y,
                                     const std::map<std::string, int>& weight = {},
                                     long recombination_cap = 1L << 20);
// Lifts the given coprime monic factorization of the weight-0 part of P to
// weighted precision deg_w(P) + 1, without recombination.
std::vector<MultiPoly> hensel_lift(const MultiPoly& p, const std::string& y, const std::map<std::string, int>& weight,
                                   const std::vector<QPoly>& bases);
// Throws HypothesisViolated when P is not monic in y or the projection is
// not squarefree.
std::vector<MultiPoly> dense_multivariate_factor(const MultiPoly& p, const std::string& y);

// Brute-force irreducible factorization of any nonzero polynomial over Q (a
// random-free shift makes it monic with squarefree projection). Used as the
// independent oracle and as the last resort of the pipeline.
struct DenseFactorization {
  Coeff unit;
  std::vector<std::pair<MultiPoly, int>> factors;  // grlex-monic
};
DenseFactorization dense_factor_all(const MultiPoly& p);

// --- pipeline ---------------------------------------------------------------

struct FactorOptions {
  Scalar epsilon = Scalar(1, 3);
  std::string family = "esym";
  double grid_cap = 1e6;
  double monomial_cap = 1e8;
  long recombination_cap = 1L << 20;
  bool fallback = true;
  // Minimal polynomials through the linear system only while D_z * (D + 1) stays below this.
  int minpoly_limit = 8;
};

struct Preprocessing {
  std::vector<std::string> x;
  std::vector<Scalar> a;
  Scalar delta;
  std::vector<Scalar> b;
  int degree = 0;
  std::string T = "T", z = "z";
};

struct Preprocessed {
  Circuit tilde;  // P~(T, x, z) = P^(T x + b, z), P^(x, z) = P(x + a z) / delta
  Preprocessing info;
};
Preprocessed preprocess(const Circuit& c, const FactorOptions& opt = {}, std::vector<std::string>* log = nullptr);

struct SquarefreeParts {
  Coeff unit;
  std::vector<Circuit> parts;  // parts[i] has multiplicity i + 1
};
SquarefreeParts squarefree_parts_circuits(const Circuit& c, double cap = 1e8);

enum class MinPolyPathway { Symbolic, Circuit };
// G(T, x, z), the minimal polynomial of a root of order 2*D*D_z + 1 lifted over K.
// The circuit pathway scans through `ki` for a point where N rows of the
// linear system are independent, applies Cramer to those rows and removes the
// division at that point.
Circuit minimal_poly_from_root(const ApproxRoot& phi, int D, int Dz, const KIMap& ki,
                               MinPolyPathway pathway = MinPolyPathway::Symbolic, const std::string& T = "T",
                               const std::string& z = "z");

struct FactorStats {
  int final_densify = 0;  // runs that needed the direct dense factorization
  int ki_runs = 0;
  std::vector<std::string> log;
};

// One circuit per irreducible factor (grlex-monic), sorted by text.
std::vector<Circuit> factor_squarefree(const Circuit& c, const FactorOptions& opt = {}, FactorStats* stats = nullptr);

struct FactorizationResult {
  struct Factor {
    Circuit circuit;
    int multiplicity = 1;
    std::optional<MultiPoly> dense;
  };
  Scalar unit = 1;
  std::vector<Factor> factors;
  int max_multiplicity = 0;
};

FactorizationResult factor_all(const Circuit& c, const FactorOptions& opt = {}, FactorStats* stats = nullptr);

std::string result_to_json(const FactorizationResult& r);
FactorizationResult result_from_json(const std::string& text);

}  // namespace circfactor
