#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "corrbound/fixtures.hpp"
#include "corrbound/io.hpp"

namespace {

struct CliOptions {
  std::string spec_path;
  std::string fixture;
  corrbound::Flags flags;
  double gamma = 0.0;
  bool gamma_set = false;
  double t_max = 0.0;
  bool t_max_set = false;
  int steps = 0;
  bool steps_set = false;
  corrbound::Index max_dim = 4096;
};

void add_common_options(CLI::App* cmd, CliOptions& opts, bool needs_input) {
  if (needs_input) {
    cmd->add_option("spec", opts.spec_path,
                    "problem document (JSON file, '-' for stdin)");
    cmd->add_option("--fixture", opts.fixture,
                    "use a built-in fixture instead of a file")
        ->check(CLI::IsMember(corrbound::fixture_names()));
  }
  cmd->add_option("--seed", opts.flags.seed, "RNG seed for randomized steps");
  cmd->add_option("--restarts", opts.flags.restarts, "see-saw restarts")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", opts.flags.max_iters,
                  "see-saw sweep limit per restart")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol", opts.flags.tol, "see-saw convergence tolerance");
  cmd->add_option("--max-dim", opts.max_dim,
                  "cap on the full tensor-space dimension")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", opts.flags.out, "write output to a file");
  cmd->add_flag("--exact", opts.flags.exact,
                "compute the dense operator norm in defect reports");
  cmd->add_flag("--site-constants", opts.flags.site_constants,
                "compute per-site l2 constants and the explicit threshold "
                "bound");
  cmd->add_option("--gamma", opts.gamma, "threshold value for the excess")
      ->each([&opts](const std::string&) { opts.gamma_set = true; });
  cmd->add_option("--t-max", opts.t_max, "decay trace horizon")
      ->each([&opts](const std::string&) { opts.t_max_set = true; });
  cmd->add_option("--steps", opts.steps, "decay trace grid points")
      ->each([&opts](const std::string&) { opts.steps_set = true; });
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream in(path);
  if (!in) {
    throw corrbound::UsageError("cannot open problem document: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int run(const std::string& name, CliOptions& opts, bool needs_input) {
  corrbound::numeric_policy().max_dim = opts.max_dim;
  if (opts.gamma_set) opts.flags.gamma = opts.gamma;
  if (opts.t_max_set) opts.flags.t_max = opts.t_max;
  if (opts.steps_set) opts.flags.steps = opts.steps;

  std::optional<corrbound::ProblemSpec> spec;
  if (needs_input) {
    if (!opts.fixture.empty() && !opts.spec_path.empty()) {
      throw corrbound::UsageError("give either a file or --fixture, not both");
    }
    if (!opts.fixture.empty()) {
      spec = corrbound::make_fixture(opts.fixture).spec;
    } else if (!opts.spec_path.empty()) {
      spec = corrbound::parse_spec(read_input(opts.spec_path));
    }
  }

  const corrbound::RunResult result =
      corrbound::run_subcommand(name, spec, opts.flags);
  if (opts.flags.out.empty()) {
    std::cout << result.output;
  } else {
    std::ofstream out(opts.flags.out);
    if (!out) {
      throw corrbound::UsageError("cannot write output file: " + opts.flags.out);
    }
    out << result.output;
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Parity-defect norm bounds, product-state thresholds and total "
      "correlation lower bounds for multipartite observables"};
  app.require_subcommand(1);

  struct Entry {
    const char* name;
    const char* help;
    bool needs_input;
  };
  const Entry entries[] = {
      {"defects", "pairwise defect weights and the norm-bound denominator", true},
      {"norm", "defect report including the dense operator norm", true},
      {"threshold", "product threshold by multi-restart see-saw", true},
      {"bound", "excess and total-correlation lower bound for a state", true},
      {"decay", "CSV excess trace under product depolarizing noise", true},
      {"verify", "check all built-in fixtures against expected values", false},
  };

  CliOptions opts;
  for (const Entry& entry : entries) {
    CLI::App* cmd = app.add_subcommand(entry.name, entry.help);
    add_common_options(cmd, opts, entry.needs_input);
    cmd->callback([&opts, &entry]() {
      const int code = run(entry.name, opts, entry.needs_input);
      if (code != 0) {
        throw CLI::RuntimeError(code);
      }
    });
  }

  try {
    CLI11_PARSE(app, argc, argv);
  } catch (const corrbound::UsageError& err) {
    std::cerr << "usage error: " << err.what() << '\n';
    return 2;
  } catch (const corrbound::ParseError& err) {
    std::cerr << "parse error: " << err.what() << '\n';
    return 1;
  } catch (const corrbound::Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
