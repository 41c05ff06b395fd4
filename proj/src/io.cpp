#include "corrbound/io.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "corrbound/fixtures.hpp"
#include "json.hpp"

namespace corrbound {

namespace {

using nlohmann::json;

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double finite_number(const json& value, const std::string& what) {
  if (!value.is_number()) {
    throw ValidationError(what + ": expected a number");
  }
  const double x = value.get<double>();
  if (!std::isfinite(x)) {
    throw ValidationError(what + ": value is not finite");
  }
  return x;
}

CMatrix matrix_from_json(const json& value, Index dim,
                         const std::string& what) {
  if (!value.is_array() || static_cast<Index>(value.size()) != dim) {
    std::ostringstream msg;
    msg << what << ": expected " << dim << " rows";
    throw ValidationError(msg.str());
  }
  CMatrix m(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    const json& row = value[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != dim) {
      std::ostringstream msg;
      msg << what << ": row " << i << " must have " << dim << " entries";
      throw ValidationError(msg.str());
    }
    for (Index j = 0; j < dim; ++j) {
      const json& entry = row[static_cast<size_t>(j)];
      if (!entry.is_array() || entry.size() != 2) {
        std::ostringstream msg;
        msg << what << ": entry (" << i << ", " << j
            << ") must be a [re, im] pair";
        throw ValidationError(msg.str());
      }
      std::ostringstream where;
      where << what << ": entry (" << i << ", " << j << ")";
      m(i, j) = Complex(finite_number(entry[0], where.str()),
                        finite_number(entry[1], where.str()));
    }
  }
  return m;
}

json defects_to_json(const ObservableFamily& fam, const DefectReport& report) {
  json j;
  j["schema"] = 1;
  j["report"] = "defects";
  j["n"] = fam.sites();
  j["m"] = fam.terms();
  json dims = json::array();
  for (Index d : fam.dims) dims.push_back(d);
  j["dims"] = std::move(dims);
  json phi = json::array();
  for (Index i = 0; i < report.phi.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < report.phi.cols(); ++k) {
      row.push_back(report.phi(i, k));
    }
    phi.push_back(std::move(row));
  }
  j["phi"] = std::move(phi);
  j["defect_sum"] = report.defect_sum;
  j["denominator"] = report.denominator;
  j["norm_upper_bound"] = std::sqrt(report.denominator);
  if (report.exact_norm_sq) {
    j["exact_norm_sq"] = *report.exact_norm_sq;
    j["exact_norm"] = std::sqrt(*report.exact_norm_sq);
    j["bound_satisfied"] = *report.bound_satisfied;
    j["slack"] = report.denominator - *report.exact_norm_sq;
  }
  return j;
}

json correlation_to_json(const CorrelationReport& report,
                         const std::string& gamma_source) {
  json j;
  j["schema"] = 1;
  j["report"] = "bound";
  j["expectation"] = report.expectation;
  j["gamma_used"] = report.gamma_used;
  j["gamma_provenance"] = to_string(report.gamma_provenance);
  j["gamma_source"] = gamma_source;
  j["excess"] = report.excess;
  j["denominator"] = report.denominator;
  j["trace_dist_lb"] = report.trace_dist_lb;
  j["itot_lb"] = report.itot_lb;
  if (report.itot_exact) {
    j["itot_exact"] = *report.itot_exact;
  }
  return j;
}

// Threshold value to use in the excess, in order of precedence:
// computed site constants, document constants, --gamma, document gamma,
// see-saw estimate.
struct ResolvedGamma {
  double value = 0.0;
  GammaProvenance provenance = GammaProvenance::kHeuristicEstimate;
  std::string source;
  std::optional<std::vector<double>> constants;
};

ResolvedGamma resolve_gamma(const ObservableFamily& fam,
                            const ProblemSpec& spec, const Flags& flags) {
  ResolvedGamma out;
  if (flags.site_constants) {
    std::vector<double> c;
    for (Index r = 0; r < fam.sites(); ++r) {
      c.push_back(l2_site_constant(fam, r, flags.restarts, flags.seed));
    }
    out.value = explicit_threshold_bound(c);
    out.provenance = GammaProvenance::kCertifiedUpperBound;
    out.source = "computed-site-constants";
    out.constants = std::move(c);
    return out;
  }
  if (spec.c_constants) {
    out.value = explicit_threshold_bound(*spec.c_constants);
    out.provenance = GammaProvenance::kCertifiedUpperBound;
    out.source = "document-constants";
    out.constants = *spec.c_constants;
    return out;
  }
  if (flags.gamma) {
    out.value = *flags.gamma;
    out.provenance = GammaProvenance::kHeuristicEstimate;
    out.source = "flag";
    return out;
  }
  if (spec.gamma) {
    out.value = *spec.gamma;
    out.provenance = spec.gamma_certified
                         ? GammaProvenance::kCertifiedUpperBound
                         : GammaProvenance::kHeuristicEstimate;
    out.source = "document";
    return out;
  }
  out.value = seesaw_threshold(fam, flags.restarts, flags.max_iters, flags.tol,
                               flags.seed)
                  .gamma;
  out.provenance = GammaProvenance::kHeuristicEstimate;
  out.source = "seesaw";
  return out;
}

RunResult run_verify(const Flags& flags) {
  std::ostringstream out;
  out << std::left << std::setw(20) << "fixture" << std::setw(26) << "check"
      << std::setw(22) << "expected" << std::setw(22) << "measured"
      << std::setw(10) << "tol"
      << "status\n";
  int failures = 0;
  int checks = 0;
  for (const std::string& name : fixture_names()) {
    const Fixture fixture = make_fixture(name);
    for (const ExpectedValue& entry : fixture.expected) {
      const double measured = measure_fixture_value(fixture, entry.key, flags);
      const bool pass = std::abs(measured - entry.value) <= entry.tol;
      ++checks;
      if (!pass) ++failures;
      out << std::left << std::setw(20) << name << std::setw(26) << entry.key
          << std::setw(22) << std::setprecision(12) << entry.value
          << std::setw(22) << std::setprecision(12) << measured
          << std::setw(10) << std::setprecision(1) << entry.tol
          << (pass ? "PASS" : "FAIL") << '\n';
    }
  }
  out << (failures == 0 ? "OK" : "FAILED") << ": " << (checks - failures)
      << "/" << checks << " fixture checks passed\n";
  return RunResult{failures == 0 ? 0 : 1, out.str()};
}

}  // namespace

ProblemSpec parse_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ParseError(std::string("problem document: ") + err.what());
  }
  if (!doc.is_object()) {
    throw ValidationError("problem document: top level must be an object");
  }
  if (doc.contains("schema") && doc["schema"] != 1) {
    throw ValidationError("problem document: unsupported schema version");
  }
  if (!doc.contains("sites") || !doc["sites"].is_array() ||
      doc["sites"].empty()) {
    throw ValidationError(
        "problem document: 'sites' must be a nonempty array of {dim}");
  }

  ProblemSpec spec;
  for (size_t r = 0; r < doc["sites"].size(); ++r) {
    const json& site = doc["sites"][r];
    if (!site.is_object() || !site.contains("dim") ||
        !site["dim"].is_number_integer() || site["dim"].get<Index>() < 1) {
      std::ostringstream msg;
      msg << "problem document: sites[" << r << "] must be {\"dim\": d >= 1}";
      throw ValidationError(msg.str());
    }
    spec.dims.push_back(site["dim"].get<Index>());
  }
  const size_t n = spec.dims.size();

  if (!doc.contains("operators") || !doc["operators"].is_array() ||
      doc["operators"].empty()) {
    throw ValidationError(
        "problem document: 'operators' must be a nonempty array of terms");
  }
  const size_t m = doc["operators"].size();
  if (doc.contains("m") &&
      (!doc["m"].is_number_integer() || doc["m"].get<size_t>() != m)) {
    std::ostringstream msg;
    msg << "problem document: 'm' is " << doc["m"]
        << " but 'operators' has " << m << " terms";
    throw ValidationError(msg.str());
  }
  for (size_t i = 0; i < m; ++i) {
    const json& term = doc["operators"][i];
    if (!term.is_array() || term.size() != n) {
      std::ostringstream msg;
      msg << "problem document: operators[" << i << "] must list one matrix "
          << "per site (" << n << ")";
      throw ValidationError(msg.str());
    }
    std::vector<CMatrix> row;
    for (size_t r = 0; r < n; ++r) {
      std::ostringstream what;
      what << "problem document: operators[" << i << "][" << r << "]";
      row.push_back(matrix_from_json(term[r], spec.dims[r], what.str()));
    }
    spec.operators.push_back(std::move(row));
  }

  if (doc.contains("state")) {
    Index product = 1;
    for (Index d : spec.dims) product *= d;
    spec.state =
        matrix_from_json(doc["state"], product, "problem document: state");
  }
  if (doc.contains("gamma")) {
    spec.gamma = finite_number(doc["gamma"], "problem document: gamma");
  }
  if (doc.contains("gamma_certified")) {
    if (!doc["gamma_certified"].is_boolean()) {
      throw ValidationError(
          "problem document: gamma_certified must be a boolean");
    }
    spec.gamma_certified = doc["gamma_certified"].get<bool>();
  }
  if (doc.contains("c_constants")) {
    const json& c = doc["c_constants"];
    if (!c.is_array() || c.size() != n) {
      throw ValidationError(
          "problem document: c_constants must list one value per site");
    }
    std::vector<double> values;
    for (size_t r = 0; r < n; ++r) {
      std::ostringstream what;
      what << "problem document: c_constants[" << r << "]";
      values.push_back(finite_number(c[r], what.str()));
    }
    spec.c_constants = std::move(values);
  }
  if (doc.contains("decay")) {
    const json& block = doc["decay"];
    if (!block.is_object()) {
      throw ValidationError("problem document: decay must be an object");
    }
    SpecDecay decay;
    if (block.contains("lambda")) {
      decay.lambda = finite_number(block["lambda"], "problem document: decay.lambda");
    }
    if (block.contains("t_max")) {
      decay.t_max = finite_number(block["t_max"], "problem document: decay.t_max");
    }
    if (block.contains("steps")) {
      if (!block["steps"].is_number_integer()) {
        throw ValidationError("problem document: decay.steps must be an integer");
      }
      decay.steps = block["steps"].get<int>();
    }
    spec.decay = decay;
  }

  // Full validation: the family and state invariants must hold.
  const ObservableFamily fam = to_family(spec);
  if (spec.state) {
    make_density_state(fam.dims, *spec.state);
  }
  return spec;
}

std::string serialize_spec(const ProblemSpec& spec) {
  json doc;
  doc["schema"] = 1;
  json sites = json::array();
  for (Index d : spec.dims) sites.push_back(json{{"dim", d}});
  doc["sites"] = std::move(sites);
  doc["m"] = spec.operators.size();
  json operators = json::array();
  for (const auto& term : spec.operators) {
    json row = json::array();
    for (const CMatrix& a : term) row.push_back(matrix_to_json(a));
    operators.push_back(std::move(row));
  }
  doc["operators"] = std::move(operators);
  if (spec.state) doc["state"] = matrix_to_json(*spec.state);
  if (spec.gamma) doc["gamma"] = *spec.gamma;
  if (spec.gamma_certified) doc["gamma_certified"] = true;
  if (spec.c_constants) doc["c_constants"] = *spec.c_constants;
  if (spec.decay) {
    json block;
    block["lambda"] = spec.decay->lambda;
    if (spec.decay->t_max) block["t_max"] = *spec.decay->t_max;
    if (spec.decay->steps) block["steps"] = *spec.decay->steps;
    doc["decay"] = std::move(block);
  }
  return doc.dump(2);
}

ObservableFamily to_family(const ProblemSpec& spec) {
  return make_observable_family(spec.dims, spec.operators);
}

DensityState to_state(const ProblemSpec& spec) {
  if (!spec.state) {
    throw UsageError("this operation needs a state in the problem document");
  }
  return make_density_state(spec.dims, *spec.state);
}

RunResult run_subcommand(const std::string& name,
                         const std::optional<ProblemSpec>& spec,
                         const Flags& flags) {
  if (name == "verify") {
    return run_verify(flags);
  }
  if (!spec) {
    throw UsageError("subcommand '" + name +
                     "' needs a problem document (file or --fixture)");
  }
  const ObservableFamily fam = to_family(*spec);

  if (name == "defects" || name == "norm") {
    const bool exact = name == "norm" || flags.exact;
    const DefectReport report = defect_report(fam, exact);
    return RunResult{0, defects_to_json(fam, report).dump(2) + "\n"};
  }

  if (name == "threshold") {
    const ThresholdResult result = seesaw_threshold(
        fam, flags.restarts, flags.max_iters, flags.tol, flags.seed);
    json j;
    j["schema"] = 1;
    j["report"] = "threshold";
    j["gamma"] = result.gamma;
    j["restarts_used"] = result.restarts_used;
    j["iterations"] = result.iterations;
    j["converged"] = result.converged;
    j["degenerate_ties"] = result.degenerate_ties;
    json certificate = json::array();
    for (const CMatrix& factor : result.certificate.factors) {
      certificate.push_back(matrix_to_json(factor));
    }
    j["certificate"] = std::move(certificate);
    if (flags.site_constants) {
      std::vector<double> c;
      for (Index r = 0; r < fam.sites(); ++r) {
        c.push_back(l2_site_constant(fam, r, flags.restarts, flags.seed));
      }
      j["site_constants"] = c;
      j["explicit_threshold_bound"] = explicit_threshold_bound(c);
    }
    return RunResult{0, j.dump(2) + "\n"};
  }

  if (name == "bound") {
    const DensityState rho = to_state(*spec);
    const DefectReport defects = defect_report(fam, flags.exact);
    const ResolvedGamma gamma = resolve_gamma(fam, *spec, flags);
    const CorrelationReport report = correlation_report(
        fam, rho, gamma.value, gamma.provenance, defects, true);
    json j = correlation_to_json(report, gamma.source);
    if (gamma.constants) j["site_constants"] = *gamma.constants;
    return RunResult{0, j.dump(2) + "\n"};
  }

  if (name == "decay") {
    const DensityState rho = to_state(*spec);
    double t_max = 2.0;
    int steps = 101;
    if (spec->decay) {
      t_max = spec->decay->t_max.value_or(t_max);
      steps = spec->decay->steps.value_or(steps);
    }
    if (flags.t_max) t_max = *flags.t_max;
    if (flags.steps) steps = *flags.steps;
    if (!(t_max > 0.0)) {
      throw UsageError("decay: t_max must be positive");
    }
    if (steps < 2) {
      throw UsageError("decay: need at least 2 grid points");
    }
    const ResolvedGamma gamma = resolve_gamma(fam, *spec, flags);
    const DecayTrace trace = decay_trace(fam, rho, gamma.value, t_max, steps);
    return RunResult{0, to_csv(trace)};
  }

  throw UsageError("unknown subcommand: " + name);
}

}  // namespace corrbound
