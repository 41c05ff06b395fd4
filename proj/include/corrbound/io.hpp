#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corrbound/correlation.hpp"
#include "corrbound/dynamics.hpp"
#include "corrbound/threshold.hpp"

namespace corrbound {

// Bad command line: unknown subcommand, missing required inputs.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Optional decay block of a problem document.
struct SpecDecay {
  double lambda = 1.0;
  std::optional<double> t_max;
  std::optional<int> steps;
};

// In-memory form of a problem document: the observable family as raw
// matrices, plus optional state, threshold and decay data. Matrices are
// stored as parsed; validation and symmetrization happen in to_family and
// to_state.
struct ProblemSpec {
  std::vector<Index> dims;
  std::vector<std::vector<CMatrix>> operators;  // [term][site]
  std::optional<CMatrix> state;
  std::optional<double> gamma;
  bool gamma_certified = false;
  std::optional<std::vector<double>> c_constants;
  std::optional<SpecDecay> decay;
};

// Parses and fully validates a problem document (shape, hermiticity,
// contraction and state invariants).
ProblemSpec parse_spec(const std::string& text);

std::string serialize_spec(const ProblemSpec& spec);

ObservableFamily to_family(const ProblemSpec& spec);

// Throws UsageError when the document has no state.
DensityState to_state(const ProblemSpec& spec);

struct Flags {
  std::uint64_t seed = 0;
  int restarts = 32;
  int max_iters = 500;
  double tol = 1e-10;
  std::string out;  // empty means stdout
  bool exact = false;
  bool site_constants = false;
  std::optional<double> gamma;
  std::optional<double> t_max;
  std::optional<int> steps;
};

struct RunResult {
  int exit_code = 0;
  std::string output;
};

// Dispatches one of: defects, norm, threshold, bound, decay, verify.
// verify ignores the problem document and runs the built-in fixtures.
RunResult run_subcommand(const std::string& name,
                         const std::optional<ProblemSpec>& spec,
                         const Flags& flags);

}  // namespace corrbound
