#include "corrbound/dynamics.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace corrbound {

void validate(const DecayParams& p) {
  if (!(std::isfinite(p.lambda) && p.lambda > 0.0)) {
    throw ValidationError("decay params: lambda must be positive and finite");
  }
  if (!(std::isfinite(p.itot0) && p.itot0 >= 0.0)) {
    throw ValidationError("decay params: itot0 must be nonnegative and finite");
  }
  if (!(std::isfinite(p.denominator) && p.denominator > 0.0)) {
    throw ValidationError(
        "decay params: denominator must be positive and finite");
  }
}

std::string to_csv(const DecayTrace& trace) {
  std::ostringstream out;
  out << DecayTrace::csv_header << '\n';
  out << std::setprecision(17);
  for (size_t k = 0; k < trace.times.size(); ++k) {
    out << trace.times[k] << ',' << trace.expectation[k] << ','
        << trace.excess[k] << ',' << trace.itot_lb[k] << '\n';
  }
  return out.str();
}

CMatrix depolarize_matrix(const CMatrix& m, const std::vector<Index>& dims,
                          double t) {
  if (t < 0.0 || !std::isfinite(t)) {
    throw ValidationError("depolarize: time must be nonnegative and finite");
  }
  const double keep = std::exp(-t);
  const double mix = 1.0 - keep;
  CMatrix out = m;
  // Local depolarizers at different sites commute; the ascending order here
  // is fixed for reproducibility.
  for (Index r = 0; r < static_cast<Index>(dims.size()); ++r) {
    const Index d = dims[static_cast<size_t>(r)];
    const CMatrix rest = trace_out_site(out, dims, r);
    CMatrix next = keep * out;
    // (I_r / d (x) rest), with the identity slotted back at site r.
    Index left = 1;
    Index right = 1;
    for (Index s = 0; s < static_cast<Index>(dims.size()); ++s) {
      if (s < r) left *= dims[static_cast<size_t>(s)];
      if (s > r) right *= dims[static_cast<size_t>(s)];
    }
    const double weight = mix / static_cast<double>(d);
    for (Index la = 0; la < left; ++la) {
      for (Index ra = 0; ra < right; ++ra) {
        for (Index lb = 0; lb < left; ++lb) {
          for (Index rb = 0; rb < right; ++rb) {
            const Complex value =
                weight * rest(la * right + ra, lb * right + rb);
            for (Index a = 0; a < d; ++a) {
              next((la * d + a) * right + ra, (lb * d + a) * right + rb) +=
                  value;
            }
          }
        }
      }
    }
    out = std::move(next);
  }
  return out;
}

DensityState depolarize_state(const DensityState& rho, double t) {
  CMatrix evolved = depolarize_matrix(rho.matrix, rho.dims, t);
  return make_density_state(rho.dims, std::move(evolved));
}

bool is_centered(const ObservableFamily& fam) {
  for (Index i = 0; i < fam.terms(); ++i) {
    for (Index r = 0; r < fam.sites(); ++r) {
      const CMatrix& a = fam.ops[static_cast<size_t>(i)][static_cast<size_t>(r)];
      const double normalized_trace =
          std::abs(a.trace()) / static_cast<double>(fam.dims[static_cast<size_t>(r)]);
      if (normalized_trace > 1e-12) return false;
    }
  }
  return true;
}

double heisenberg_decay(const ObservableFamily& fam, double t) {
  if (t < 0.0 || !std::isfinite(t)) {
    throw ValidationError("heisenberg_decay: time must be nonnegative");
  }
  if (!is_centered(fam)) {
    throw ValidationError(
        "heisenberg_decay: family is not centered; the scalar decay formula "
        "does not apply");
  }
  return std::exp(-static_cast<double>(fam.sites()) * t);
}

PositivityWindow excess_positivity_window(double tr0, double gamma, int n) {
  if (n < 1) {
    throw ValidationError("excess_positivity_window: n must be >= 1");
  }
  PositivityWindow window;
  if (tr0 <= gamma) {
    window.kind = PositivityWindow::Kind::kEmpty;
  } else if (gamma <= 0.0) {
    window.kind = PositivityWindow::Kind::kAll;
  } else {
    window.kind = PositivityWindow::Kind::kBounded;
    window.t_end = std::log(tr0 / gamma) / static_cast<double>(n);
  }
  return window;
}

double decay_excess_bound(const DecayParams& p, double t) {
  validate(p);
  if (t < 0.0) {
    throw ValidationError("decay_excess_bound: time must be nonnegative");
  }
  return std::exp(-p.lambda * t) * std::sqrt(2.0 * p.itot0) *
         std::sqrt(p.denominator);
}

double survival_time(const DecayParams& p, double epsilon) {
  validate(p);
  if (!(epsilon > 0.0)) {
    throw ValidationError("survival_time: epsilon must be positive");
  }
  const double initial = std::sqrt(2.0 * p.itot0) * std::sqrt(p.denominator);
  if (initial <= epsilon) return 0.0;
  return std::log(initial / epsilon) / p.lambda;
}

double integrated_excess_bound(const DecayParams& p) {
  validate(p);
  return p.itot0 * p.denominator / p.lambda;
}

DecayTrace decay_trace(const ObservableFamily& fam, const DensityState& rho0,
                       double gamma, double t_max, int steps) {
  if (fam.dims != rho0.dims) {
    throw ValidationError("decay_trace: family and state site dimensions differ");
  }
  if (steps < 2) {
    throw ValidationError("decay_trace: need at least 2 grid points");
  }
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw ValidationError("decay_trace: t_max must be positive and finite");
  }
  const CMatrix b = assemble_B(fam);
  const double tr0 = real_trace_product(rho0.matrix, b);
  const bool centered = is_centered(fam);
  const double denominator = defect_report(fam, false).denominator;
  const double dt = t_max / static_cast<double>(steps - 1);

  DecayTrace trace;
  trace.times.reserve(static_cast<size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    const double t = k == steps - 1 ? t_max : static_cast<double>(k) * dt;
    const DensityState rho_t = depolarize_state(rho0, t);
    const double expectation = real_trace_product(rho_t.matrix, b);
    if (centered) {
      const double closed_form = heisenberg_decay(fam, t) * tr0;
      if (std::abs(expectation - closed_form) > 1e-10) {
        std::ostringstream msg;
        msg << "decay_trace: dense expectation " << expectation << " at t=" << t
            << " disagrees with the scalar decay value " << closed_form;
        throw NumericError(msg.str());
      }
    }
    const double ex = std::max(expectation - gamma, 0.0);
    trace.times.push_back(t);
    trace.expectation.push_back(expectation);
    trace.excess.push_back(ex);
    trace.itot_lb.push_back(itot_lower_bound(ex, denominator));
  }
  return trace;
}

std::vector<std::size_t> itot_decay_violations(const std::vector<double>& times,
                                               const std::vector<double>& itot,
                                               double lambda, double tol) {
  if (times.size() != itot.size() || times.empty()) {
    throw ValidationError(
        "itot_decay_violations: times and itot must be nonempty and of equal "
        "length");
  }
  if (!(std::isfinite(lambda) && lambda > 0.0)) {
    throw ValidationError("itot_decay_violations: lambda must be positive");
  }
  std::vector<std::size_t> violations;
  const double initial = itot.front();
  const double t0 = times.front();
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double envelope =
        std::exp(-2.0 * lambda * (times[k] - t0)) * initial;
    if (itot[k] > envelope + tol) violations.push_back(k);
  }
  return violations;
}

}  // namespace corrbound
