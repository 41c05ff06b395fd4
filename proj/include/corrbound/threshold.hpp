#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "corrbound/observable.hpp"

namespace corrbound {

// One density matrix per site.
struct ProductState {
  std::vector<CMatrix> factors;
};

ProductState make_product_state(std::vector<CMatrix> factors);

// Best product-state value found by coordinate ascent, with the state that
// attains it. gamma is always a certified lower bound on the true product
// threshold: it equals product_value(certificate) for a feasible certificate.
struct ThresholdResult {
  double gamma = 0.0;
  ProductState certificate;
  int restarts_used = 0;
  int iterations = 0;
  bool converged = false;
  // Site updates where the top eigenvalue of the effective operator was
  // degenerate and the deterministic tie-break applied.
  int degenerate_ties = 0;
};

// Vector of local expectations Tr(sigma_r a_i^(r)), i = 0..m-1.
RVector expectation_vector(const ObservableFamily& fam, Index r,
                           const CMatrix& sigma_r);

// sum_i prod_r Tr(sigma_r a_i^(r)), evaluated without assembling the full
// tensor product.
double product_value(const ObservableFamily& fam, const ProductState& sigma);

// Uniformly random pure state factors (normalized complex Gaussian vectors).
ProductState random_pure_product_state(const std::vector<Index>& dims,
                                       std::mt19937_64& rng);

// One coordinate-ascent run from a given initial product state. Records the
// objective before the first sweep and after each sweep.
struct SeesawRun {
  ProductState state;
  double value = 0.0;
  int sweeps = 0;
  bool converged = false;
  int degenerate_ties = 0;
  std::vector<double> sweep_values;
};

SeesawRun seesaw_from(const ObservableFamily& fam, ProductState initial,
                      int max_iters, double tol);

// Multi-restart see-saw over product states. Restarts use seed-derived
// substreams; the best value wins, first restart on ties.
ThresholdResult seesaw_threshold(const ObservableFamily& fam,
                                 int restarts = 32, int max_iters = 500,
                                 double tol = 1e-10,
                                 std::uint64_t seed = 0);

// Sharp constant for the squared l2 norm of the site-r expectation vector:
// max over states sigma of sum_i Tr(sigma a_i^(r))^2. The maximum is
// attained at a pure state (the objective is convex on the state set), so
// the search iterates top-eigenvector steps from random pure starts. For
// qubit sites with traceless operators the Bloch-vector closed form is
// evaluated as well and the larger value returned.
double l2_site_constant(const ObservableFamily& fam, Index r,
                        int restarts = 32, std::uint64_t seed = 0);

// prod_r sqrt(c_r): product-threshold upper bound from per-site constants.
double explicit_threshold_bound(const std::vector<double>& c);

}  // namespace corrbound
