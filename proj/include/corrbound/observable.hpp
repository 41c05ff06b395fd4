#pragma once

#include <optional>
#include <vector>

#include "corrbound/linalg.hpp"

namespace corrbound {

// Family of local self-adjoint contractions a_i^(r): m terms over n sites.
// Term i of the assembled observable is the tensor product over sites of
// ops[i][r].
struct ObservableFamily {
  std::vector<Index> dims;
  std::vector<std::vector<CMatrix>> ops;  // ops[i][r], m x n

  Index sites() const { return static_cast<Index>(dims.size()); }
  Index terms() const { return static_cast<Index>(ops.size()); }
  Index product_dim() const;
};

// Validates shape, hermiticity and the contraction bound for every local
// operator; stores the symmetrized operators.
ObservableFamily make_observable_family(std::vector<Index> dims,
                                        std::vector<std::vector<CMatrix>> ops);

// Pairwise parity defect weights and the resulting norm bound data.
// denominator = m + sum of phi; when the exact norm is computed,
// bound_satisfied records ||B||^2 <= denominator + 1e-9.
struct DefectReport {
  Eigen::MatrixXd phi;  // strictly upper triangular, m x m
  double defect_sum = 0.0;
  double denominator = 0.0;
  std::optional<double> exact_norm_sq;
  std::optional<bool> bound_satisfied;
};

// Dense sum of the m tensor-product terms.
CMatrix assemble_B(const ObservableFamily& fam);

// Even-subset weighted product of local commutator and anticommutator
// norms for the pair (i, j), i < j. The 2n norms are computed once per
// pair; subsets are enumerated by bitmask.
double defect_weight(const ObservableFamily& fam, Index i, Index j);

DefectReport defect_report(const ObservableFamily& fam,
                           bool compute_exact = false);

// Even-parity reconstruction of the mixed term u_i u_j + u_j u_i: tensors
// the local commutator on subset sites and the anticommutator elsewhere,
// summed over even-cardinality subsets with weight 2^(1-n).
CMatrix mixed_term_parity_expansion(const ObservableFamily& fam, Index i,
                                    Index j);

// Appends identity factors at new sites for every term. Defect weights are
// unchanged: identities commute and have anticommutator norm 2, which
// cancels against the 2^(1-n) rescaling.
ObservableFamily extend_observable(const ObservableFamily& fam,
                                   const std::vector<Index>& extra_dims);

}  // namespace corrbound
