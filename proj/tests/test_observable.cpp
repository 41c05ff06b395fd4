#include <cmath>
#include <random>

#include "corrbound/fixtures.hpp"
#include "corrbound/observable.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace corrbound;

namespace {

ObservableFamily tripartite_family() {
  return to_family(make_fixture("tripartite-pauli").spec);
}

ObservableFamily chsh_family() { return to_family(make_fixture("chsh").spec); }

}  // namespace

TEST_CASE("assemble_B on single-term and fixture families") {
  const ObservableFamily single =
      make_observable_family({2}, {{pauli_z()}});
  CHECK((assemble_B(single) - pauli_z()).cwiseAbs().maxCoeff() == 0.0);

  const double tri_norm = operator_norm(assemble_B(tripartite_family()));
  CHECK(tri_norm * tri_norm == doctest::Approx(5.0).epsilon(1e-9));

  CHECK(operator_norm(assemble_B(chsh_family())) ==
        doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("B squared of the tripartite family has spectrum {1, 5}") {
  const CMatrix b = assemble_B(tripartite_family());
  const auto eig = hermitian_eig(CMatrix(b * b));
  for (Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double lambda = eig.eigenvalues(i);
    CHECK((std::abs(lambda - 1.0) <= 1e-9 || std::abs(lambda - 5.0) <= 1e-9));
  }
  CHECK(eig.eigenvalues.minCoeff() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(eig.eigenvalues.maxCoeff() == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("defect weights of the tripartite family") {
  const ObservableFamily fam = tripartite_family();
  CHECK(std::abs(defect_weight(fam, 0, 1)) <= 1e-12);
  CHECK(std::abs(defect_weight(fam, 0, 2)) <= 1e-12);
  CHECK(defect_weight(fam, 1, 2) == doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(defect_weight(fam, 1, 1), ValidationError);
  CHECK_THROWS_AS(defect_weight(fam, 0, 3), ValidationError);
  CHECK_THROWS_AS(defect_weight(fam, -1, 1), ValidationError);
}

TEST_CASE("defect weights of the CHSH family") {
  const ObservableFamily fam = chsh_family();
  CHECK(defect_weight(fam, 0, 3) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(defect_weight(fam, 1, 2) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(defect_weight(fam, 0, 1)) <= 1e-12);
  CHECK(std::abs(defect_weight(fam, 0, 2)) <= 1e-12);
  CHECK(std::abs(defect_weight(fam, 1, 3)) <= 1e-12);
  CHECK(std::abs(defect_weight(fam, 2, 3)) <= 1e-12);
}

TEST_CASE("defect_report on the paper families") {
  const DefectReport tri = defect_report(tripartite_family(), true);
  CHECK(tri.denominator == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(*tri.exact_norm_sq == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(*tri.bound_satisfied);
  CHECK(tri.denominator ==
        doctest::Approx(3.0 + tri.defect_sum).epsilon(1e-12));

  CHECK(defect_report(chsh_family()).denominator ==
        doctest::Approx(8.0).epsilon(1e-12));

  CHECK(defect_report(to_family(make_fixture("pauli-site-3").spec)).denominator ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK(defect_report(to_family(make_fixture("pauli-site-4").spec)).denominator ==
        doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("mixed term parity expansion matches the direct product") {
  const ObservableFamily fam = tripartite_family();
  const CMatrix u1 = kron(kron(pauli_x(), pauli_y()), pauli_x());
  const CMatrix u2 = kron(kron(pauli_x(), pauli_y()), pauli_z());
  const CMatrix u3 = kron(kron(pauli_z(), pauli_z()), pauli_z());

  CHECK(mixed_term_parity_expansion(fam, 0, 1).cwiseAbs().maxCoeff() <= 1e-12);

  const CMatrix pair23 = mixed_term_parity_expansion(fam, 1, 2);
  CHECK((pair23 - 2.0 * u2 * u3).cwiseAbs().maxCoeff() <= 1e-12);

  const CMatrix direct = u1 * u2 + u2 * u1;
  CHECK(operator_norm(CMatrix(mixed_term_parity_expansion(fam, 0, 1) - direct)) <=
        1e-12 * (1.0 + operator_norm(CMatrix(u1 * u2))));
}

TEST_CASE("parity identity and norm bound on random families") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const ObservableFamily fam = oracles::random_family(rng);
    std::vector<CMatrix> terms;
    for (Index i = 0; i < fam.terms(); ++i) {
      CMatrix u = fam.ops[static_cast<size_t>(i)][0];
      for (Index r = 1; r < fam.sites(); ++r) {
        u = kron(u, fam.ops[static_cast<size_t>(i)][static_cast<size_t>(r)]);
      }
      terms.push_back(std::move(u));
    }
    for (Index i = 0; i < fam.terms(); ++i) {
      for (Index j = i + 1; j < fam.terms(); ++j) {
        const CMatrix direct = terms[static_cast<size_t>(i)] *
                                   terms[static_cast<size_t>(j)] +
                               terms[static_cast<size_t>(j)] *
                                   terms[static_cast<size_t>(i)];
        const CMatrix expansion = mixed_term_parity_expansion(fam, i, j);
        const double scale =
            1.0 + operator_norm(CMatrix(terms[static_cast<size_t>(i)] *
                                        terms[static_cast<size_t>(j)]));
        CHECK(operator_norm(CMatrix(expansion - direct)) <= 1e-12 * scale);
      }
    }
    const DefectReport report = defect_report(fam, true);
    CHECK(*report.exact_norm_sq <= report.denominator + 1e-9);
  }
}

TEST_CASE("defect_weight agrees with the parity DP oracle") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 40; ++trial) {
    const ObservableFamily fam = oracles::random_family(rng);
    for (Index i = 0; i < fam.terms(); ++i) {
      for (Index j = i + 1; j < fam.terms(); ++j) {
        CHECK(defect_weight(fam, i, j) ==
              doctest::Approx(oracles::defect_weight(fam, i, j))
                  .epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("defect_weight is symmetric under swapping the pair roles") {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 10; ++trial) {
    ObservableFamily fam = oracles::random_family(rng, 3, 2, 3);
    if (fam.terms() < 2) continue;
    const double original = defect_weight(fam, 0, 1);
    std::swap(fam.ops[0], fam.ops[1]);
    CHECK(defect_weight(fam, 0, 1) == doctest::Approx(original).epsilon(1e-12));
  }
}

TEST_CASE("a locally annihilating pair has vanishing defect weight") {
  // At site 0 the pair multiplies to zero in both orders, so every even
  // subset term carries a zero factor.
  CMatrix a = zero_matrix(2);
  a(0, 0) = 1.0;
  CMatrix b = zero_matrix(2);
  b(1, 1) = 1.0;
  const ObservableFamily fam = make_observable_family(
      {2, 2}, {{a, pauli_x()}, {b, pauli_z()}});
  CHECK(defect_weight(fam, 0, 1) == 0.0);
  CHECK(oracles::defect_weight(fam, 0, 1) == 0.0);
}

TEST_CASE("extend_observable preserves defect data and norm") {
  const ObservableFamily chsh = chsh_family();
  const ObservableFamily extended = extend_observable(chsh, {2});
  CHECK(defect_report(extended).defect_sum ==
        doctest::Approx(4.0).epsilon(1e-12));

  const ObservableFamily trivial = extend_observable(chsh, {1});
  CHECK(defect_report(trivial).defect_sum ==
        doctest::Approx(4.0).epsilon(1e-12));

  const ObservableFamily tri = extend_observable(tripartite_family(), {2});
  CHECK(operator_norm(assemble_B(tri)) ==
        doctest::Approx(std::sqrt(5.0)).epsilon(1e-9));

  CHECK_THROWS_AS(extend_observable(chsh, {}), ValidationError);
  CHECK_THROWS_AS(extend_observable(chsh, {0}), ValidationError);
}

TEST_CASE("dense assembly respects the dimension cap") {
  const ObservableFamily fam = tripartite_family();
  struct ScopedCap {
    Index saved = numeric_policy().max_dim;
    ~ScopedCap() { numeric_policy().max_dim = saved; }
  } guard;
  numeric_policy().max_dim = 4;
  CHECK_THROWS_AS(assemble_B(fam), CapacityError);
  CHECK_THROWS_AS(defect_report(fam, true), CapacityError);
  CHECK_THROWS_AS(mixed_term_parity_expansion(fam, 0, 1), CapacityError);
  // The cheap report never assembles the tensor space.
  CHECK_NOTHROW(defect_report(fam, false));
}

TEST_CASE("family validation names the offending operator") {
  const CMatrix too_big = 1.5 * pauli_x();
  try {
    make_observable_family({2, 2}, {{pauli_z(), too_big}});
    FAIL("expected a validation error");
  } catch (const ValidationError& err) {
    const std::string message = err.what();
    CHECK(message.find("ops[0][1]") != std::string::npos);
    CHECK(message.find("1.5") != std::string::npos);
  }

  CMatrix skew(2, 2);
  skew << Complex(0, 0), Complex(1, 0), Complex(0, 0), Complex(0, 0);
  CHECK_THROWS_AS(make_observable_family({2}, {{skew}}), ValidationError);
}
