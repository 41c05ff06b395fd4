#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "corrbound/fixtures.hpp"
#include "corrbound/threshold.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace corrbound;

namespace {

const double kSqrt2 = std::sqrt(2.0);

ObservableFamily chsh_family() { return to_family(make_fixture("chsh").spec); }

ObservableFamily pauli_site_family(Index n) {
  std::ostringstream name;
  name << "pauli-site-" << n;
  return to_family(make_fixture(name.str()).spec);
}

// Grid maximum for a single-term two-qubit family: the value factorizes as
// x * y, so the maximum over the grid is attained at per-site extremes.
double single_term_grid_max(const ObservableFamily& fam, double step_degrees) {
  const double step = step_degrees * std::numbers::pi / 180.0;
  double lo[2], hi[2];
  for (Index r = 0; r < 2; ++r) {
    lo[r] = std::numeric_limits<double>::infinity();
    hi[r] = -std::numeric_limits<double>::infinity();
    for (double theta = 0.0; theta <= std::numbers::pi + 1e-12; theta += step) {
      for (double phi = 0.0; phi < 2.0 * std::numbers::pi - 1e-12;
           phi += step) {
        const double x = real_trace_product(oracles::bloch_state(theta, phi),
                                            fam.ops[0][static_cast<size_t>(r)]);
        lo[r] = std::min(lo[r], x);
        hi[r] = std::max(hi[r], x);
      }
    }
  }
  return std::max({hi[0] * hi[1], hi[0] * lo[1], lo[0] * hi[1], lo[0] * lo[1]});
}

}  // namespace

TEST_CASE("expectation_vector on known states") {
  const ObservableFamily pauli = pauli_site_family(3);
  const RVector x = expectation_vector(pauli, 0, basis_projector(2, 0));
  CHECK(std::abs(x(0)) <= 1e-12);
  CHECK(std::abs(x(1)) <= 1e-12);
  CHECK(x(2) == doctest::Approx(1.0).epsilon(1e-12));

  const RVector mixed =
      expectation_vector(pauli, 1, CMatrix(0.5 * identity_matrix(2)));
  CHECK(mixed.cwiseAbs().maxCoeff() <= 1e-12);

  const ObservableFamily chsh = chsh_family();
  const RVector y = expectation_vector(chsh, 1, basis_projector(2, 0));
  CHECK(y(0) == doctest::Approx(1.0 / kSqrt2).epsilon(1e-12));
  CHECK(y(1) == doctest::Approx(1.0 / kSqrt2).epsilon(1e-12));
  CHECK(y(2) == doctest::Approx(1.0 / kSqrt2).epsilon(1e-12));
  CHECK(y(3) == doctest::Approx(-1.0 / kSqrt2).epsilon(1e-12));

  CHECK_THROWS_AS(expectation_vector(chsh, 0, identity_matrix(3)),
                  ValidationError);
  CHECK_THROWS_AS(expectation_vector(chsh, 2, basis_projector(2, 0)),
                  ValidationError);
}

TEST_CASE("product_value on aligned Bloch vectors") {
  const ObservableFamily chsh = chsh_family();
  // Both Bloch vectors along x: unit vectors, parallel in the x-z plane.
  const CMatrix plus = oracles::bloch_state(std::numbers::pi / 2.0, 0.0);
  const ProductState sigma = make_product_state({plus, plus});
  CHECK(product_value(chsh, sigma) == doctest::Approx(kSqrt2).epsilon(1e-12));

  const ObservableFamily pauli = pauli_site_family(3);
  const ProductState zeros = make_product_state(
      {basis_projector(2, 0), basis_projector(2, 0), basis_projector(2, 0)});
  CHECK(product_value(pauli, zeros) == doctest::Approx(1.0).epsilon(1e-12));

  const CMatrix half = 0.5 * identity_matrix(2);
  const ProductState mixed = make_product_state({half, half, half});
  CHECK(std::abs(product_value(pauli, mixed)) <= 1e-12);
}

TEST_CASE("product_value agrees with the dense trace") {
  std::mt19937_64 rng(211);
  for (int trial = 0; trial < 20; ++trial) {
    const ObservableFamily fam = oracles::random_family(rng);
    ProductState sigma;
    {
      auto state_rng = rng;
      sigma = random_pure_product_state(fam.dims, state_rng);
      rng.discard(64);
    }
    const double fast = product_value(fam, sigma);
    const double dense =
        real_trace_product(oracles::dense_product(sigma), assemble_B(fam));
    CHECK(fast == doctest::Approx(dense).epsilon(1e-10));
  }
}

TEST_CASE("see-saw finds the paper thresholds") {
  const ThresholdResult chsh = seesaw_threshold(chsh_family());
  CHECK(chsh.gamma == doctest::Approx(kSqrt2).epsilon(1e-6));
  CHECK(chsh.converged);

  const ThresholdResult pauli = seesaw_threshold(pauli_site_family(3));
  CHECK(pauli.gamma == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("see-saw matches the Bloch grid on a single product term") {
  const ObservableFamily fam =
      make_observable_family({2, 2}, {{pauli_x(), pauli_x()}});
  const ThresholdResult result = seesaw_threshold(fam);
  CHECK(result.gamma == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(result.gamma >= single_term_grid_max(fam, 1.0) - 1e-3);
}

TEST_CASE("see-saw sweeps are monotone and certificates are feasible") {
  std::mt19937_64 rng(223);
  for (int trial = 0; trial < 10; ++trial) {
    const ObservableFamily fam = oracles::random_family(rng, 3, 2, 3);
    auto init_rng = rng;
    const SeesawRun run =
        seesaw_from(fam, random_pure_product_state(fam.dims, init_rng), 200,
                    1e-10);
    rng.discard(64);
    for (size_t k = 1; k < run.sweep_values.size(); ++k) {
      CHECK(run.sweep_values[k] >= run.sweep_values[k - 1] - 1e-12);
    }
    CHECK(run.value == doctest::Approx(product_value(fam, run.state))
                           .epsilon(1e-10));
    CHECK_NOTHROW(make_product_state(run.state.factors));
  }
}

TEST_CASE("see-saw is deterministic in the seed") {
  const ObservableFamily fam = chsh_family();
  const ThresholdResult a = seesaw_threshold(fam, 8, 200, 1e-10, 42);
  const ThresholdResult b = seesaw_threshold(fam, 8, 200, 1e-10, 42);
  CHECK(a.gamma == b.gamma);
  CHECK(a.iterations == b.iterations);
  CHECK(a.converged == b.converged);
  for (size_t r = 0; r < a.certificate.factors.size(); ++r) {
    CHECK((a.certificate.factors[r] - b.certificate.factors[r])
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
}

TEST_CASE("l2_site_constant on Pauli and degenerate families") {
  const ObservableFamily pauli = pauli_site_family(3);
  for (Index r = 0; r < 3; ++r) {
    CHECK(l2_site_constant(pauli, r) == doctest::Approx(1.0).epsilon(1e-9));
  }

  const ObservableFamily single = make_observable_family({2}, {{pauli_x()}});
  CHECK(l2_site_constant(single, 0) == doctest::Approx(1.0).epsilon(1e-9));

  const ObservableFamily doubled =
      make_observable_family({2}, {{pauli_x()}, {pauli_x()}});
  CHECK(l2_site_constant(doubled, 0) == doctest::Approx(2.0).epsilon(1e-9));

  CHECK_THROWS_AS(l2_site_constant(pauli, 3), ValidationError);
}

TEST_CASE("explicit_threshold_bound arithmetic") {
  CHECK(explicit_threshold_bound({1.0, 1.0, 1.0}) == 1.0);
  CHECK(explicit_threshold_bound({4.0, 9.0}) ==
        doctest::Approx(6.0).epsilon(1e-12));
  CHECK(explicit_threshold_bound({4.0, 0.0, 9.0}) == 0.0);
  CHECK_THROWS_AS(explicit_threshold_bound({1.0, -0.5}), ValidationError);
}

TEST_CASE("see-saw value sits under the explicit threshold bound") {
  for (const char* name : {"chsh", "pauli-site-3", "pauli-site-4"}) {
    const ObservableFamily fam = to_family(make_fixture(name).spec);
    std::vector<double> c;
    for (Index r = 0; r < fam.sites(); ++r) {
      c.push_back(l2_site_constant(fam, r));
    }
    const double gamma = seesaw_threshold(fam).gamma;
    CHECK(gamma <= explicit_threshold_bound(c) + 1e-9);
  }
}

TEST_CASE("see-saw beats the 2 degree Bloch grid on random two-qubit families") {
  std::mt19937_64 rng(227);
  for (int trial = 0; trial < 2; ++trial) {
    std::vector<std::vector<CMatrix>> ops;
    for (int i = 0; i < 3; ++i) {
      ops.push_back({oracles::random_hermitian_contraction(2, rng),
                     oracles::random_hermitian_contraction(2, rng)});
    }
    const ObservableFamily fam = make_observable_family({2, 2}, std::move(ops));
    const double gamma = seesaw_threshold(fam).gamma;
    CHECK(gamma >= oracles::bloch_grid_max(fam, 2.0) - 1e-3);
    std::vector<double> c = {l2_site_constant(fam, 0), l2_site_constant(fam, 1)};
    CHECK(gamma <= explicit_threshold_bound(c) + 1e-9);
  }
}
