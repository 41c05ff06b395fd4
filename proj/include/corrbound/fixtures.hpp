#pragma once

#include <string>
#include <vector>

#include "corrbound/io.hpp"

namespace corrbound {

CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

// |k><k| on a dim-dimensional space.
CMatrix basis_projector(Index dim, Index k);

// Two-qubit maximally entangled state (|00> + |11>)/sqrt(2) as a density
// matrix.
CMatrix bell_phi_plus();

struct ExpectedValue {
  std::string key;
  double value;
  double tol;
};

// Built-in problem with its table of expected values. The names are
// tripartite-pauli, chsh, pauli-site-<n> and depolarizing-demo.
struct Fixture {
  std::string name;
  ProblemSpec spec;
  std::vector<ExpectedValue> expected;
};

Fixture make_fixture(const std::string& name);

// Fixtures exercised by the verify subcommand.
std::vector<std::string> fixture_names();

// Computes the quantity behind a table key for the given fixture.
double measure_fixture_value(const Fixture& fixture, const std::string& key,
                             const Flags& flags);

}  // namespace corrbound
