#pragma once

#include <string>
#include <vector>

#include "circfactor/factor_engine.hh"

namespace circfactor {

// f = z^D + f_{D-1} z^{D-1} + .. + f_0 and g likewise (t <= D); coefficients
// lowest first, without the leading 1. The pseudo-quotient h~ is the monic
// polynomial of degree D - t whose power sums are p_i(f) - p_i(g); it is the
// quotient whenever g | f. R is Scalar or MultiPoly.
template <class R>
std::vector<R> pseudo_quotient(const std::vector<R>& f, const std::vector<R>& g) {
  size_t D = f.size(), t = g.size();
  if (t > D) throw DegreeOrder("divisor degree exceeds dividend degree");
  if (t == 0) throw DegenerateInput("divisor must have positive degree");
  size_t m = D - t;
  std::vector<R> h(m);
  if (m == 0) return h;
  // e_i of the roots = (-1)^i * coefficient of z^(deg - i)
  std::vector<R> ef(m), eg(m);
  for (size_t i = 1; i <= m; ++i) {
    ef[i - 1] = i % 2 ? -f[D - i] : f[D - i];
    if (i <= t) eg[i - 1] = i % 2 ? -g[t - i] : g[t - i];
  }
  auto pf = esym_to_psym(ef), pg = esym_to_psym(eg);
  std::vector<R> ph(m);
  for (size_t i = 0; i < m; ++i) ph[i] = pf[i] - pg[i];
  auto eh = psym_to_esym(ph);
  for (size_t i = 1; i <= m; ++i) h[m - i] = i % 2 ? -eh[i - 1] : eh[i - 1];
  return h;
}

// Coefficients z^0..z^(D-1) of f - h~ g (the z^D terms cancel). All zero iff
// g | f. Throws DegreeOrder when t > D.
template <class R>
std::vector<R> div_test_coeffs(const std::vector<R>& f, const std::vector<R>& g, std::vector<R>* quotient = nullptr) {
  std::vector<R> h = pseudo_quotient(f, g);
  size_t D = f.size(), t = g.size(), m = h.size();
  std::vector<R> r(f);
  // h and g with their leading 1s.
  for (size_t i = 0; i <= m; ++i)
    for (size_t j = 0; j <= t; ++j) {
      size_t k = i + j;
      if (k >= D) continue;
      if (i == m && j == t) continue;
      if (i == m) r[k] = r[k] - g[j];
      else if (j == t) r[k] = r[k] - h[i];
      else r[k] = r[k] - h[i] * g[j];
    }
  if (quotient) *quotient = h;
  return r;
}

// The same test as a polynomial in z: f - h~ g.
MultiPoly div_test(const std::vector<MultiPoly>& f, const std::vector<MultiPoly>& g, const std::string& z = "z",
                   MultiPoly* quotient = nullptr);

// Q | P for polynomials monic in z (NotMonic otherwise).
bool divides_monic(const MultiPoly& q, const MultiPoly& p, const std::string& z = "z");

enum class Verdict { Irreducible, Reducible, Infeasible };

struct Certificate {
  Verdict verdict = Verdict::Infeasible;
  // Root classes: the irreducible factors of P(0, 0, z). Roots are numbered
  // class by class, 0-based.
  std::vector<QPoly> classes;
  std::vector<int> subset;  // Reducible: root indices of the witness
  MultiPoly witness;        // Reducible: Q_S, a proper factor of P
  int order = 0;            // lifting order deg_T(P) + 1
  long subsets_tested = 0;
  std::string reason;  // Infeasible: why
  // Divisibility of the witness candidates re-checked after composing with
  // the KI map; disagreements are hardness-assumption failures.
  std::vector<std::string> log;
};

struct CertifyOptions {
  int dz_cap = 8;
  double ki_check_cap = 2e5;  // monomial bound for the composed cross-check
  std::string family = "esym";
  std::string T = "T", z = "z";
};

// P monic in z, regularized in T, with squarefree P(0, 0, z). Enumerates the
// nonempty proper unions of root classes in increasing bitmask order (class 0
// is bit 0); the first dividing Q_S is reported.
Certificate irreducibility_certificate(const MultiPoly& p, const Scalar& epsilon, const CertifyOptions& opt = {});

// prod of (z - phi) over the roots of one class, lifted to order k.
MultiPoly class_product(const MultiPoly& p, const QPoly& cls, int k, const std::string& T = "T",
                        const std::string& z = "z");

struct VerifyReport {
  bool ok = false;
  std::string stage;  // "grid", "points", "divides" or "" on success
  long points = 0;
};

// (i) unit * prod factor^mult == P on a full grid of side deg + 1 when that
// has at most 10^4 points, else on 200 fixed pseudorandom rational points;
// (ii) when P densifies within the cap, each factor divides its squarefree
// part (checked with divides_monic after a generic monic shift).
VerifyReport verify_factorization_report(const Circuit& p, const FactorizationResult& r, double cap = 1e6);
bool verify_factorization(const Circuit& p, const FactorizationResult& r);

}  // namespace circfactor
