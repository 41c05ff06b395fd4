#include "corrbound/correlation.hpp"

#include <cmath>
#include <sstream>

#include "corrbound/threshold.hpp"

namespace corrbound {

std::string to_string(GammaProvenance p) {
  switch (p) {
    case GammaProvenance::kCertifiedUpperBound:
      return "certified-upper-bound";
    case GammaProvenance::kHeuristicEstimate:
      return "heuristic-estimate";
  }
  return "unknown";
}

double relative_entropy(const CMatrix& rho, const CMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw ValidationError("relative_entropy: dimension mismatch");
  }
  const double clamp = numeric_policy().log_clamp;
  const CMatrix rho_h = require_hermitian(rho, "relative_entropy: rho");
  const CMatrix sigma_h = require_hermitian(sigma, "relative_entropy: sigma");

  // Tr(rho log rho): eigenvalues below the clamp contribute zero
  // (0 log 0 = 0 convention).
  const auto rho_eig = hermitian_eig(rho_h);
  double tr_rho_log_rho = 0.0;
  for (Index i = 0; i < rho_eig.eigenvalues.size(); ++i) {
    const double lambda = rho_eig.eigenvalues(i);
    if (lambda >= clamp) tr_rho_log_rho += lambda * std::log(lambda);
  }

  // Tr(rho log sigma) over the clamped spectrum of sigma, with the weight
  // rho puts on each eigenvector. Weight above 1e-8 on a clamped direction
  // means the divergence is numerically infinite.
  const auto sigma_eig = hermitian_eig(sigma_h);
  double tr_rho_log_sigma = 0.0;
  for (Index i = 0; i < sigma_eig.eigenvalues.size(); ++i) {
    const double lambda = sigma_eig.eigenvalues(i);
    const auto v = sigma_eig.eigenvectors.col(i);
    const double weight = (v.adjoint() * rho_h * v)(0, 0).real();
    if (lambda >= clamp) {
      tr_rho_log_sigma += weight * std::log(lambda);
    } else if (weight > 1e-8) {
      std::ostringstream msg;
      msg << "relative_entropy: rho has weight " << weight
          << " outside the numerical support of sigma (eigenvalue " << lambda
          << "); divergence is infinite at working precision";
      throw NumericError(msg.str());
    }
  }
  return tr_rho_log_rho - tr_rho_log_sigma;
}

double total_correlation(const DensityState& rho) {
  CMatrix marginal_product = marginal_at_site(rho.matrix, rho.dims, 0);
  for (Index r = 1; r < static_cast<Index>(rho.dims.size()); ++r) {
    marginal_product = kron(marginal_product, marginal_at_site(rho.matrix, rho.dims, r));
  }
  const double value = relative_entropy(rho.matrix, marginal_product);
  if (value < -1e-9) {
    std::ostringstream msg;
    msg << "total_correlation: value " << value
        << " is negative beyond rounding tolerance";
    throw NumericError(msg.str());
  }
  return std::max(value, 0.0);
}

double excess(const ObservableFamily& fam, const DensityState& rho,
              double gamma) {
  if (fam.dims != rho.dims) {
    throw ValidationError("excess: family and state site dimensions differ");
  }
  const double expectation = real_trace_product(rho.matrix, assemble_B(fam));
  return std::max(expectation - gamma, 0.0);
}

double trace_distance_lower_bound(double excess, double denominator) {
  if (denominator <= 0.0) {
    throw ValidationError("trace_distance_lower_bound: denominator must be positive");
  }
  return excess / std::sqrt(denominator);
}

double itot_lower_bound(double excess, double denominator) {
  if (denominator <= 0.0) {
    throw ValidationError("itot_lower_bound: denominator must be positive");
  }
  return excess * excess / (2.0 * denominator);
}

CorrelationReport correlation_report(const ObservableFamily& fam,
                                     const DensityState& rho, double gamma,
                                     GammaProvenance provenance,
                                     const DefectReport& defects,
                                     bool compute_exact) {
  if (fam.dims != rho.dims) {
    throw ValidationError(
        "correlation_report: family and state site dimensions differ");
  }
  CorrelationReport report;
  report.expectation = real_trace_product(rho.matrix, assemble_B(fam));
  report.gamma_used = gamma;
  report.gamma_provenance = provenance;
  report.excess = std::max(report.expectation - gamma, 0.0);
  report.denominator = defects.denominator;
  report.trace_dist_lb = trace_distance_lower_bound(report.excess, report.denominator);
  report.itot_lb = itot_lower_bound(report.excess, report.denominator);
  if (compute_exact) {
    report.itot_exact = total_correlation(rho);
  }
  return report;
}

CorrelationReport explicit_itot_bound(const ObservableFamily& fam,
                                      const DensityState& rho,
                                      const std::vector<double>& c,
                                      const DefectReport& defects,
                                      bool compute_exact) {
  if (static_cast<Index>(c.size()) != fam.sites()) {
    throw ValidationError(
        "explicit_itot_bound: one constant per site required");
  }
  return correlation_report(fam, rho, explicit_threshold_bound(c),
                            GammaProvenance::kCertifiedUpperBound, defects,
                            compute_exact);
}

}  // namespace corrbound
