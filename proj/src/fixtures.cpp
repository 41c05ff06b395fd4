#include "corrbound/fixtures.hpp"

#include <cmath>
#include <sstream>

namespace corrbound {

namespace {

const double kSqrt2 = std::sqrt(2.0);

ProblemSpec chsh_spec() {
  const CMatrix x = pauli_x();
  const CMatrix z = pauli_z();
  const CMatrix b1 = (z + x) / kSqrt2;
  const CMatrix b2 = (z - x) / kSqrt2;
  ProblemSpec spec;
  spec.dims = {2, 2};
  spec.operators = {{z, b1}, {z, b2}, {x, b1}, {x, CMatrix(-b2)}};
  spec.state = bell_phi_plus();
  spec.gamma = kSqrt2;
  spec.gamma_certified = true;
  return spec;
}

ProblemSpec tripartite_pauli_spec() {
  const CMatrix x = pauli_x();
  const CMatrix y = pauli_y();
  const CMatrix z = pauli_z();
  ProblemSpec spec;
  spec.dims = {2, 2, 2};
  spec.operators = {{x, y, x}, {x, y, z}, {z, z, z}};
  // Demo state: projector onto the solver's top eigenvector of B.
  const auto eig = hermitian_eig(assemble_B(to_family(spec)));
  const auto v = eig.eigenvectors.col(eig.eigenvalues.size() - 1);
  spec.state = CMatrix(v * v.adjoint());
  return spec;
}

ProblemSpec pauli_site_spec(Index n) {
  ProblemSpec spec;
  spec.dims.assign(static_cast<size_t>(n), 2);
  const std::vector<CMatrix> paulis = {pauli_x(), pauli_y(), pauli_z()};
  for (const CMatrix& p : paulis) {
    spec.operators.emplace_back(static_cast<size_t>(n), p);
  }
  const auto eig = hermitian_eig(assemble_B(to_family(spec)));
  const auto v = eig.eigenvectors.col(eig.eigenvalues.size() - 1);
  spec.state = CMatrix(v * v.adjoint());
  spec.gamma = 1.0;
  spec.gamma_certified = true;
  return spec;
}

std::vector<ExpectedValue> chsh_expected() {
  const double ln2 = std::log(2.0);
  return {
      {"phi_0_1", 0.0, 1e-12},
      {"phi_0_3", 2.0, 1e-12},
      {"phi_1_2", 2.0, 1e-12},
      {"defect_sum", 4.0, 1e-12},
      {"denominator", 8.0, 1e-12},
      {"norm_b", 2.0 * kSqrt2, 1e-9},
      {"seesaw_gamma", kSqrt2, 1e-6},
      {"state_expectation", 2.0 * kSqrt2, 1e-10},
      {"excess", kSqrt2, 1e-10},
      {"trace_dist_lb", 0.5, 1e-10},
      {"itot_lb", 0.125, 1e-9},
      {"itot_exact", 2.0 * ln2, 1e-9},
  };
}

}  // namespace

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0);
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(-1, 0);
  return m;
}

CMatrix basis_projector(Index dim, Index k) {
  CMatrix m = zero_matrix(dim);
  m(k, k) = 1.0;
  return m;
}

CMatrix bell_phi_plus() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(0) = 1.0 / kSqrt2;
  v(3) = 1.0 / kSqrt2;
  return v * v.adjoint();
}

Fixture make_fixture(const std::string& name) {
  if (name == "tripartite-pauli") {
    return Fixture{
        name,
        tripartite_pauli_spec(),
        {
            {"phi_0_1", 0.0, 1e-12},
            {"phi_0_2", 0.0, 1e-12},
            {"phi_1_2", 2.0, 1e-12},
            {"defect_sum", 2.0, 1e-12},
            {"denominator", 5.0, 1e-12},
            {"exact_norm_sq", 5.0, 1e-9},
            {"bound_slack", 0.0, 1e-9},
            {"b_sq_spectrum_min", 1.0, 1e-9},
            {"b_sq_spectrum_max", 5.0, 1e-9},
            {"extended_norm", std::sqrt(5.0), 1e-9},
            {"extended_defect_sum", 2.0, 1e-12},
        }};
  }
  if (name == "chsh") {
    return Fixture{name, chsh_spec(), chsh_expected()};
  }
  if (name.rfind("pauli-site-", 0) == 0) {
    const std::string suffix = name.substr(std::string("pauli-site-").size());
    Index n = 0;
    try {
      n = static_cast<Index>(std::stol(suffix));
    } catch (const std::exception&) {
      throw ValidationError("unknown fixture: " + name);
    }
    if (n < 1 || n > 10) {
      throw ValidationError("pauli-site fixture: site count out of range");
    }
    const bool even = n % 2 == 0;
    const double denominator = even ? 9.0 : 3.0;
    std::vector<ExpectedValue> expected = {
        {"phi_0_1", even ? 2.0 : 0.0, 1e-12},
        {"denominator", denominator, 1e-12},
        {"seesaw_gamma", 1.0, 1e-6},
        {"explicit_threshold_bound", 1.0, 5e-6},
        {"itot_coefficient", 1.0 / (2.0 * denominator), 1e-12},
    };
    for (Index r = 0; r < n; ++r) {
      std::ostringstream key;
      key << "site_constant_" << r;
      expected.push_back({key.str(), 1.0, 1e-6});
    }
    return Fixture{name, pauli_site_spec(n), std::move(expected)};
  }
  if (name == "depolarizing-demo") {
    ProblemSpec spec = chsh_spec();
    spec.decay = SpecDecay{1.0, 1.0, 101};
    const double ln2 = std::log(2.0);
    const double itot0 = 2.0 * ln2;
    const double start = std::sqrt(2.0 * itot0) * std::sqrt(8.0);
    return Fixture{
        name,
        std::move(spec),
        {
            {"window_t_end", 0.5 * ln2, 1e-12},
            {"window_grid_gap", 0.0, 0.01 + 1e-12},
            {"duality_factor_t0p3", std::exp(-0.6), 1e-10},
            {"semigroup_defect", 0.0, 1e-12},
            {"decay_excess_bound_t1", start / std::exp(1.0), 1e-9},
            {"survival_time_eps1", std::log(start), 1e-9},
            {"integrated_bound", itot0 * 8.0, 1e-9},
        }};
  }
  throw ValidationError("unknown fixture: " + name);
}

std::vector<std::string> fixture_names() {
  return {"tripartite-pauli", "chsh", "pauli-site-3", "pauli-site-4",
          "depolarizing-demo"};
}

double measure_fixture_value(const Fixture& fixture, const std::string& key,
                             const Flags& flags) {
  const ObservableFamily fam = to_family(fixture.spec);

  auto parse_indices = [&](const std::string& prefix) {
    std::vector<Index> indices;
    std::istringstream in(key.substr(prefix.size()));
    std::string part;
    while (std::getline(in, part, '_')) {
      indices.push_back(static_cast<Index>(std::stol(part)));
    }
    return indices;
  };

  if (key.rfind("phi_", 0) == 0) {
    const auto ij = parse_indices("phi_");
    return defect_weight(fam, ij.at(0), ij.at(1));
  }
  if (key == "defect_sum") return defect_report(fam).defect_sum;
  if (key == "denominator") return defect_report(fam).denominator;
  if (key == "exact_norm_sq") return *defect_report(fam, true).exact_norm_sq;
  if (key == "bound_slack") {
    const auto report = defect_report(fam, true);
    return report.denominator - *report.exact_norm_sq;
  }
  if (key == "norm_b") return operator_norm(assemble_B(fam));
  if (key == "b_sq_spectrum_min" || key == "b_sq_spectrum_max") {
    const CMatrix b = assemble_B(fam);
    const auto eig = hermitian_eig(CMatrix(b * b));
    return key == "b_sq_spectrum_min" ? eig.eigenvalues.minCoeff()
                                      : eig.eigenvalues.maxCoeff();
  }
  if (key == "extended_norm") {
    return operator_norm(assemble_B(extend_observable(fam, {2})));
  }
  if (key == "extended_defect_sum") {
    return defect_report(extend_observable(fam, {2})).defect_sum;
  }
  if (key == "seesaw_gamma") {
    return seesaw_threshold(fam, flags.restarts, flags.max_iters, flags.tol,
                            flags.seed)
        .gamma;
  }
  if (key.rfind("site_constant_", 0) == 0) {
    const auto r = parse_indices("site_constant_");
    return l2_site_constant(fam, r.at(0), flags.restarts, flags.seed);
  }
  if (key == "explicit_threshold_bound") {
    std::vector<double> c;
    for (Index r = 0; r < fam.sites(); ++r) {
      c.push_back(l2_site_constant(fam, r, flags.restarts, flags.seed));
    }
    return explicit_threshold_bound(c);
  }
  if (key == "itot_coefficient") {
    return 1.0 / (2.0 * defect_report(fam).denominator);
  }

  // The remaining keys need the fixture state (and threshold / decay data).
  const DensityState rho = to_state(fixture.spec);
  if (key == "state_expectation") {
    return real_trace_product(rho.matrix, assemble_B(fam));
  }
  if (key == "itot_exact") return total_correlation(rho);

  const double gamma = fixture.spec.gamma.value_or(0.0);
  if (key == "excess") return excess(fam, rho, gamma);
  if (key == "trace_dist_lb" || key == "itot_lb") {
    const double ex = excess(fam, rho, gamma);
    const double denominator = defect_report(fam).denominator;
    return key == "trace_dist_lb" ? trace_distance_lower_bound(ex, denominator)
                                  : itot_lower_bound(ex, denominator);
  }

  const double tr0 = real_trace_product(rho.matrix, assemble_B(fam));
  if (key == "window_t_end") {
    const auto window = excess_positivity_window(
        tr0, gamma, static_cast<int>(fam.sites()));
    if (window.kind != PositivityWindow::Kind::kBounded) {
      throw NumericError("measure: positivity window is not bounded");
    }
    return window.t_end;
  }
  if (key == "window_grid_gap") {
    const double t_max = fixture.spec.decay ? fixture.spec.decay->t_max.value_or(1.0) : 1.0;
    const int steps = fixture.spec.decay ? fixture.spec.decay->steps.value_or(101) : 101;
    const DecayTrace trace = decay_trace(fam, rho, gamma, t_max, steps);
    const auto window = excess_positivity_window(
        tr0, gamma, static_cast<int>(fam.sites()));
    double first_zero = t_max;
    for (size_t k = 0; k < trace.times.size(); ++k) {
      if (trace.excess[k] == 0.0) {
        first_zero = trace.times[k];
        break;
      }
    }
    return std::abs(first_zero - window.t_end);
  }
  if (key == "duality_factor_t0p3") {
    const DensityState rho_t = depolarize_state(rho, 0.3);
    return real_trace_product(rho_t.matrix, assemble_B(fam)) / tr0;
  }
  if (key == "semigroup_defect") {
    const DensityState two_step = depolarize_state(depolarize_state(rho, 0.3), 0.4);
    const DensityState one_step = depolarize_state(rho, 0.7);
    return (two_step.matrix - one_step.matrix).cwiseAbs().maxCoeff();
  }

  const double lambda = fixture.spec.decay ? fixture.spec.decay->lambda : 1.0;
  const DecayParams params{lambda, total_correlation(rho),
                           defect_report(fam).denominator};
  if (key == "decay_excess_bound_t1") return decay_excess_bound(params, 1.0);
  if (key == "survival_time_eps1") return survival_time(params, 1.0);
  if (key == "integrated_bound") return integrated_excess_bound(params);

  throw ValidationError("unknown fixture key: " + key);
}

}  // namespace corrbound
