#include "corrbound/threshold.hpp"

#include <cmath>
#include <sstream>

namespace corrbound {

namespace {

constexpr double kTieTol = 1e-12;

// Top eigenvector projector of a Hermitian operator, with the deterministic
// tie-break (the solver lists eigenvalues ascending; take the last column).
CMatrix top_eigenvector_projector(const CMatrix& op, bool* tie) {
  const auto eig = hermitian_eig(op);
  const Index d = eig.eigenvalues.size();
  if (tie != nullptr && d >= 2) {
    const double gap = eig.eigenvalues(d - 1) - eig.eigenvalues(d - 2);
    *tie = gap <= kTieTol * std::max(1.0, std::abs(eig.eigenvalues(d - 1)));
  }
  const auto v = eig.eigenvectors.col(d - 1);
  return v * v.adjoint();
}

std::mt19937_64 substream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

CMatrix random_pure_state(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (Index k = 0; k < dim; ++k) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v(k) = Complex(re, im);
  }
  v.normalize();
  return v * v.adjoint();
}

}  // namespace

ProductState make_product_state(std::vector<CMatrix> factors) {
  if (factors.empty()) {
    throw ValidationError("product state: need at least one factor");
  }
  for (size_t r = 0; r < factors.size(); ++r) {
    std::ostringstream what;
    what << "product state: factor " << r;
    CMatrix h = require_hermitian(factors[r], what.str());
    const double trace = h.trace().real();
    if (std::abs(trace - 1.0) > 1e-12) {
      std::ostringstream msg;
      msg << what.str() << " has trace " << trace << ", expected 1";
      throw ValidationError(msg.str());
    }
    const auto eig = hermitian_eig(h);
    if (eig.eigenvalues.minCoeff() < -1e-10) {
      std::ostringstream msg;
      msg << what.str() << " is not positive semidefinite (min eigenvalue "
          << eig.eigenvalues.minCoeff() << ")";
      throw ValidationError(msg.str());
    }
    factors[r] = std::move(h);
  }
  return ProductState{std::move(factors)};
}

RVector expectation_vector(const ObservableFamily& fam, Index r,
                           const CMatrix& sigma_r) {
  if (r < 0 || r >= fam.sites()) {
    std::ostringstream msg;
    msg << "expectation_vector: site " << r << " out of range for "
        << fam.sites() << " sites";
    throw ValidationError(msg.str());
  }
  if (sigma_r.rows() != fam.dims[static_cast<size_t>(r)] ||
      sigma_r.cols() != fam.dims[static_cast<size_t>(r)]) {
    std::ostringstream msg;
    msg << "expectation_vector: state is " << sigma_r.rows() << "x"
        << sigma_r.cols() << " but site " << r << " has dimension "
        << fam.dims[static_cast<size_t>(r)];
    throw ValidationError(msg.str());
  }
  RVector x(fam.terms());
  for (Index i = 0; i < fam.terms(); ++i) {
    x(i) = real_trace_product(
        sigma_r, fam.ops[static_cast<size_t>(i)][static_cast<size_t>(r)]);
  }
  return x;
}

double product_value(const ObservableFamily& fam, const ProductState& sigma) {
  if (static_cast<Index>(sigma.factors.size()) != fam.sites()) {
    std::ostringstream msg;
    msg << "product_value: state has " << sigma.factors.size()
        << " factors but the family has " << fam.sites() << " sites";
    throw ValidationError(msg.str());
  }
  std::vector<RVector> x;
  x.reserve(sigma.factors.size());
  for (Index r = 0; r < fam.sites(); ++r) {
    x.push_back(expectation_vector(fam, r, sigma.factors[static_cast<size_t>(r)]));
  }
  double value = 0.0;
  for (Index i = 0; i < fam.terms(); ++i) {
    double term = 1.0;
    for (Index r = 0; r < fam.sites(); ++r) {
      term *= x[static_cast<size_t>(r)](i);
    }
    value += term;
  }
  return value;
}

ProductState random_pure_product_state(const std::vector<Index>& dims,
                                       std::mt19937_64& rng) {
  std::vector<CMatrix> factors;
  factors.reserve(dims.size());
  for (Index d : dims) {
    factors.push_back(random_pure_state(d, rng));
  }
  return ProductState{std::move(factors)};
}

SeesawRun seesaw_from(const ObservableFamily& fam, ProductState initial,
                      int max_iters, double tol) {
  if (static_cast<Index>(initial.factors.size()) != fam.sites()) {
    throw ValidationError("seesaw_from: factor count does not match sites");
  }
  const Index n = fam.sites();
  const Index m = fam.terms();

  SeesawRun run;
  run.state = std::move(initial);

  // Expectation table x[r](i) = Tr(sigma_r a_i^(r)), kept in sync with the
  // factors across site updates.
  std::vector<RVector> x;
  x.reserve(static_cast<size_t>(n));
  for (Index r = 0; r < n; ++r) {
    x.push_back(expectation_vector(fam, r, run.state.factors[static_cast<size_t>(r)]));
  }
  auto objective = [&]() {
    double value = 0.0;
    for (Index i = 0; i < m; ++i) {
      double term = 1.0;
      for (Index r = 0; r < n; ++r) term *= x[static_cast<size_t>(r)](i);
      value += term;
    }
    return value;
  };

  double value = objective();
  run.sweep_values.push_back(value);

  for (int sweep = 0; sweep < max_iters; ++sweep) {
    for (Index r = 0; r < n; ++r) {
      // Holding the other factors fixed, the value is Tr(sigma_r K_r) with
      // the effective local operator below; the optimal update is the top
      // eigenvector projector.
      const Index d = fam.dims[static_cast<size_t>(r)];
      CMatrix k = zero_matrix(d);
      for (Index i = 0; i < m; ++i) {
        double coeff = 1.0;
        for (Index s = 0; s < n; ++s) {
          if (s != r) coeff *= x[static_cast<size_t>(s)](i);
        }
        k += coeff * fam.ops[static_cast<size_t>(i)][static_cast<size_t>(r)];
      }
      bool tie = false;
      run.state.factors[static_cast<size_t>(r)] =
          top_eigenvector_projector(k, &tie);
      if (tie) ++run.degenerate_ties;
      x[static_cast<size_t>(r)] =
          expectation_vector(fam, r, run.state.factors[static_cast<size_t>(r)]);
    }
    const double next = objective();
    run.sweep_values.push_back(next);
    ++run.sweeps;
    const double improvement = next - value;
    value = next;
    if (improvement < tol) {
      run.converged = true;
      break;
    }
  }
  run.value = value;
  return run;
}

ThresholdResult seesaw_threshold(const ObservableFamily& fam, int restarts,
                                 int max_iters, double tol,
                                 std::uint64_t seed) {
  if (restarts < 1) {
    throw ValidationError("seesaw_threshold: restarts must be >= 1");
  }
  ThresholdResult best;
  bool have_best = false;
  for (int k = 0; k < restarts; ++k) {
    auto rng = substream_rng(seed, static_cast<std::uint64_t>(k));
    SeesawRun run =
        seesaw_from(fam, random_pure_product_state(fam.dims, rng), max_iters, tol);
    if (!have_best || run.value > best.gamma) {
      best.gamma = run.value;
      best.certificate = std::move(run.state);
      best.iterations = run.sweeps;
      best.converged = run.converged;
      best.degenerate_ties = run.degenerate_ties;
      have_best = true;
    }
  }
  best.restarts_used = restarts;
  return best;
}

double l2_site_constant(const ObservableFamily& fam, Index r, int restarts,
                        std::uint64_t seed) {
  if (r < 0 || r >= fam.sites()) {
    std::ostringstream msg;
    msg << "l2_site_constant: site " << r << " out of range for "
        << fam.sites() << " sites";
    throw ValidationError(msg.str());
  }
  if (restarts < 1) {
    throw ValidationError("l2_site_constant: restarts must be >= 1");
  }
  const Index d = fam.dims[static_cast<size_t>(r)];
  const Index m = fam.terms();

  auto objective = [](const RVector& x) { return x.squaredNorm(); };

  // Conditional-gradient ascent: the linearization of the objective at
  // sigma is 2 * Tr(sigma' M(sigma)) with M(sigma) = sum_i x_i a_i^(r),
  // maximized over states by the top eigenvector projector.
  double best = 0.0;
  constexpr int kMaxIters = 500;
  constexpr double kTol = 1e-12;
  for (int k = 0; k < restarts; ++k) {
    auto rng = substream_rng(seed, 0x10000u + static_cast<std::uint64_t>(k));
    CMatrix sigma = random_pure_state(d, rng);
    RVector x = expectation_vector(fam, r, sigma);
    double value = objective(x);
    for (int iter = 0; iter < kMaxIters; ++iter) {
      CMatrix step = zero_matrix(d);
      for (Index i = 0; i < m; ++i) {
        step += x(i) * fam.ops[static_cast<size_t>(i)][static_cast<size_t>(r)];
      }
      sigma = top_eigenvector_projector(step, nullptr);
      x = expectation_vector(fam, r, sigma);
      const double next = objective(x);
      const double improvement = next - value;
      value = next;
      if (improvement < kTol) break;
    }
    best = std::max(best, value);
  }

  // Qubit closed form: with traceless a_i = w_i . (X, Y, Z) the objective
  // is s^T (sum_i w_i w_i^T) s over Bloch vectors |s| <= 1.
  bool qubit_traceless = d == 2;
  for (Index i = 0; i < m && qubit_traceless; ++i) {
    const CMatrix& a = fam.ops[static_cast<size_t>(i)][static_cast<size_t>(r)];
    qubit_traceless = std::abs(a.trace()) <= 1e-12;
  }
  if (qubit_traceless) {
    Eigen::Matrix3d gram = Eigen::Matrix3d::Zero();
    for (Index i = 0; i < m; ++i) {
      const CMatrix& a = fam.ops[static_cast<size_t>(i)][static_cast<size_t>(r)];
      Eigen::Vector3d w;
      w(0) = a(0, 1).real();                 // X component
      w(1) = -a(0, 1).imag();                // Y component
      w(2) = a(0, 0).real();                 // Z component
      gram += w * w.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(gram);
    best = std::max(best, solver.eigenvalues().maxCoeff());
  }
  return best;
}

double explicit_threshold_bound(const std::vector<double>& c) {
  double bound = 1.0;
  for (size_t r = 0; r < c.size(); ++r) {
    if (c[r] < 0.0) {
      std::ostringstream msg;
      msg << "explicit_threshold_bound: c[" << r << "] = " << c[r]
          << " is negative";
      throw ValidationError(msg.str());
    }
    bound *= std::sqrt(c[r]);
  }
  return bound;
}

}  // namespace corrbound
