#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "corrbound/correlation.hpp"

namespace corrbound {

// Inputs for the decay, survival and integrated excess bounds: an assumed
// exponential decay rate for total correlation, the initial total
// correlation, and the defect denominator of the observable.
struct DecayParams {
  double lambda = 0.0;
  double itot0 = 0.0;
  double denominator = 0.0;
};

void validate(const DecayParams& p);

// Excess trajectory of an observable under the product depolarizing flow,
// sampled on a uniform time grid.
struct DecayTrace {
  static constexpr std::string_view csv_header = "t,expectation,excess,itot_lb";
  std::vector<double> times;
  std::vector<double> expectation;
  std::vector<double> excess;
  std::vector<double> itot_lb;
};

std::string to_csv(const DecayTrace& trace);

// Sitewise depolarizing map at time t applied to a raw operator on the
// tensor space: at each site, m -> e^{-t} m + (1 - e^{-t}) (I/d (x) tr_site m).
// The map is its own Heisenberg dual, so it serves both pictures.
CMatrix depolarize_matrix(const CMatrix& m, const std::vector<Index>& dims,
                          double t);

DensityState depolarize_state(const DensityState& rho, double t);

// True iff every local operator has zero normalized trace at its site.
bool is_centered(const ObservableFamily& fam);

// Scalar decay factor e^{-n t} of a centered observable under the product
// depolarizing flow.
double heisenberg_decay(const ObservableFamily& fam, double t);

// Times with strictly positive excess along the depolarizing flow, from the
// closed-form expectation decay.
struct PositivityWindow {
  enum class Kind { kEmpty, kBounded, kAll };
  Kind kind = Kind::kEmpty;
  double t_end = 0.0;  // exclusive endpoint, valid when kind == kBounded
};

PositivityWindow excess_positivity_window(double tr0, double gamma, int n);

// e^{-lambda t} sqrt(2 itot0) sqrt(denominator).
double decay_excess_bound(const DecayParams& p, double t);

// Smallest time after which the excess bound is at most epsilon.
double survival_time(const DecayParams& p, double epsilon);

// itot0 * denominator / lambda, bounding the time integral of the squared
// excess.
double integrated_excess_bound(const DecayParams& p);

// Evaluates the trajectory on steps uniform grid points over [0, t_max],
// each computed from rho0 directly. For centered families the dense
// expectation is cross-checked against the scalar decay formula.
DecayTrace decay_trace(const ObservableFamily& fam, const DensityState& rho0,
                       double gamma, double t_max, int steps);

// Grid indices where a sampled total-correlation trajectory violates the
// exponential envelope I(t_k) <= e^{-2 lambda t_k} I(t_0) + tol for a
// user-supplied rate. The rate is only ever checked, never estimated.
std::vector<std::size_t> itot_decay_violations(const std::vector<double>& times,
                                               const std::vector<double>& itot,
                                               double lambda,
                                               double tol = 1e-12);

}  // namespace corrbound
