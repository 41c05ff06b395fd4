#pragma once

#include <optional>
#include <vector>

#include "corrbound/types.hpp"

namespace corrbound {

// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and the
// matching unitary of column eigenvectors.
struct HermitianEigenResult {
  RVector eigenvalues;
  CMatrix eigenvectors;
};

// Density matrix on a tensor product space, together with the site
// dimension vector (matrix dim equals the product of dims).
struct DensityState {
  std::vector<Index> dims;
  CMatrix matrix;
};

CMatrix identity_matrix(Index dim);
CMatrix zero_matrix(Index dim);

// Largest entrywise deviation from self-adjointness, max |a - a*|.
double hermiticity_defect(const CMatrix& a);
bool is_hermitian(const CMatrix& a, double tol);
CMatrix symmetrize(const CMatrix& a);

// Throws ValidationError unless a is Hermitian within the policy tolerance;
// returns the symmetrized matrix.
CMatrix require_hermitian(const CMatrix& a, const std::string& what);

// Re Tr(a b); exact value is real whenever both arguments are Hermitian.
double real_trace_product(const CMatrix& a, const CMatrix& b);

// Kronecker product. Block (p,q) of the result equals a(p,q) * b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

HermitianEigenResult hermitian_eig(const CMatrix& a);

// Operator norm: max |eigenvalue| on the Hermitian fast path, otherwise the
// largest singular value via a* a.
double operator_norm(const CMatrix& a);

// Sum of singular values.
double trace_norm(const CMatrix& a);

// Validates the state invariants (Hermitian, PSD to -1e-10, trace 1) and
// symmetrizes the matrix.
DensityState make_density_state(std::vector<Index> dims, CMatrix matrix);

// Marginal of rho at the given site (all other sites traced out).
CMatrix partial_trace(const DensityState& rho, Index site);

// Helpers over a raw matrix on the tensor space with the given site dims.
CMatrix marginal_at_site(const CMatrix& m, const std::vector<Index>& dims,
                         Index site);
CMatrix trace_out_site(const CMatrix& m, const std::vector<Index>& dims,
                       Index site);

// Spectral logarithm of a Hermitian PSD matrix with eigenvalues clamped
// from below; clamp defaults to the policy value.
CMatrix matrix_log_psd(const CMatrix& a,
                       std::optional<double> clamp = std::nullopt);

CMatrix commutator(const CMatrix& a, const CMatrix& b);
CMatrix anticommutator(const CMatrix& a, const CMatrix& b);

}  // namespace corrbound
