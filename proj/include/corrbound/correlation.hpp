#pragma once

#include <optional>
#include <string>
#include <vector>

#include "corrbound/observable.hpp"

namespace corrbound {

// Callers must state how the threshold value entering the excess was
// obtained. The bound chain is only valid when gamma_used is the product
// threshold or an upper bound of it; a see-saw value is a lower bound and
// the resulting report is a heuristic.
enum class GammaProvenance { kCertifiedUpperBound, kHeuristicEstimate };

std::string to_string(GammaProvenance p);

struct CorrelationReport {
  double expectation = 0.0;   // Tr(rho B)
  double gamma_used = 0.0;
  GammaProvenance gamma_provenance = GammaProvenance::kHeuristicEstimate;
  double excess = 0.0;        // (expectation - gamma_used)_+
  double denominator = 0.0;   // m + defect sum
  double trace_dist_lb = 0.0; // excess / sqrt(denominator)
  double itot_lb = 0.0;       // excess^2 / (2 denominator)
  std::optional<double> itot_exact;
};

// Quantum relative entropy D(rho || sigma), natural logarithm, computed
// from the two eigendecompositions with the clamp policy. Signals a
// NumericError when rho carries weight above 1e-8 on a clamped eigenvector
// of sigma (numerically infinite divergence).
double relative_entropy(const CMatrix& rho, const CMatrix& sigma);

// D(rho || product of its own marginals). Nonnegative; values in
// [-1e-9, 0) from rounding are clipped to zero.
double total_correlation(const DensityState& rho);

// (Tr(rho B) - gamma)_+ for the assembled observable.
double excess(const ObservableFamily& fam, const DensityState& rho,
              double gamma);

double trace_distance_lower_bound(double excess, double denominator);

double itot_lower_bound(double excess, double denominator);

// Full bound chain for a given threshold value.
CorrelationReport correlation_report(const ObservableFamily& fam,
                                     const DensityState& rho, double gamma,
                                     GammaProvenance provenance,
                                     const DefectReport& defects,
                                     bool compute_exact = true);

// Bound chain with the explicit per-site threshold bound prod_r sqrt(c_r).
// Precondition: the constants bound the squared l2 norm of every site
// expectation vector.
CorrelationReport explicit_itot_bound(const ObservableFamily& fam,
                                      const DensityState& rho,
                                      const std::vector<double>& c,
                                      const DefectReport& defects,
                                      bool compute_exact = true);

}  // namespace corrbound
