#include "corrbound/observable.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace corrbound {

namespace {

void require_pair(const ObservableFamily& fam, Index i, Index j,
                  const std::string& what) {
  if (i < 0 || j <= i || j >= fam.terms()) {
    std::ostringstream msg;
    msg << what << ": need 0 <= i < j < " << fam.terms() << ", got (" << i
        << ", " << j << ")";
    throw ValidationError(msg.str());
  }
}

// Tensor product of one local operator per site for term i.
CMatrix term_product(const ObservableFamily& fam, Index i) {
  CMatrix u = fam.ops[static_cast<size_t>(i)][0];
  for (Index r = 1; r < fam.sites(); ++r) {
    u = kron(u, fam.ops[static_cast<size_t>(i)][static_cast<size_t>(r)]);
  }
  return u;
}

}  // namespace

Index ObservableFamily::product_dim() const {
  Index product = 1;
  for (Index d : dims) product *= d;
  return product;
}

ObservableFamily make_observable_family(
    std::vector<Index> dims, std::vector<std::vector<CMatrix>> ops) {
  if (dims.empty()) {
    throw ValidationError("observable family: need at least one site");
  }
  for (Index d : dims) {
    if (d < 1) {
      throw ValidationError("observable family: site dimensions must be >= 1");
    }
  }
  if (ops.empty()) {
    throw ValidationError("observable family: need at least one term");
  }
  const size_t n = dims.size();
  for (size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].size() != n) {
      std::ostringstream msg;
      msg << "observable family: term " << i << " has " << ops[i].size()
          << " operators, expected one per site (" << n << ")";
      throw ValidationError(msg.str());
    }
    for (size_t r = 0; r < n; ++r) {
      const CMatrix& a = ops[i][r];
      if (a.rows() != dims[r] || a.cols() != dims[r]) {
        std::ostringstream msg;
        msg << "observable family: ops[" << i << "][" << r << "] is "
            << a.rows() << "x" << a.cols() << ", expected " << dims[r] << "x"
            << dims[r];
        throw ValidationError(msg.str());
      }
      std::ostringstream what;
      what << "observable family: ops[" << i << "][" << r << "]";
      ops[i][r] = require_hermitian(a, what.str());
      const double norm = operator_norm(ops[i][r]);
      if (norm > 1.0 + 1e-9) {
        std::ostringstream msg;
        msg << what.str() << " is not a contraction: operator norm " << norm
            << " exceeds 1";
        throw ValidationError(msg.str());
      }
    }
  }
  return ObservableFamily{std::move(dims), std::move(ops)};
}

CMatrix assemble_B(const ObservableFamily& fam) {
  CMatrix b = term_product(fam, 0);
  for (Index i = 1; i < fam.terms(); ++i) {
    b += term_product(fam, i);
  }
  return b;
}

double defect_weight(const ObservableFamily& fam, Index i, Index j) {
  require_pair(fam, i, j, "defect_weight");
  const Index n = fam.sites();
  if (n > 30) {
    throw CapacityError("defect_weight: subset enumeration limited to 30 sites");
  }
  // The 2n local norms dominate the cost; compute them once per pair and
  // reuse across the 2^n subset combinations.
  std::vector<double> comm_norm(static_cast<size_t>(n));
  std::vector<double> anti_norm(static_cast<size_t>(n));
  for (Index r = 0; r < n; ++r) {
    const CMatrix& ai = fam.ops[static_cast<size_t>(i)][static_cast<size_t>(r)];
    const CMatrix& aj = fam.ops[static_cast<size_t>(j)][static_cast<size_t>(r)];
    comm_norm[static_cast<size_t>(r)] = operator_norm(commutator(ai, aj));
    anti_norm[static_cast<size_t>(r)] = operator_norm(anticommutator(ai, aj));
  }
  double sum = 0.0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    if (std::popcount(mask) % 2 != 0) continue;
    double product = 1.0;
    for (Index r = 0; r < n; ++r) {
      product *= (mask >> r) & 1 ? comm_norm[static_cast<size_t>(r)]
                                 : anti_norm[static_cast<size_t>(r)];
    }
    sum += product;
  }
  return std::ldexp(sum, static_cast<int>(1 - n));
}

DefectReport defect_report(const ObservableFamily& fam, bool compute_exact) {
  const Index m = fam.terms();
  DefectReport report;
  report.phi = Eigen::MatrixXd::Zero(m, m);
  // Pair weights land in a preallocated triangular table; the sum below
  // runs in fixed index order so results do not depend on scheduling.
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      report.phi(i, j) = defect_weight(fam, i, j);
    }
  }
  double sum = 0.0;
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      sum += report.phi(i, j);
    }
  }
  report.defect_sum = sum;
  report.denominator = static_cast<double>(m) + sum;
  if (compute_exact) {
    const double norm = operator_norm(assemble_B(fam));
    report.exact_norm_sq = norm * norm;
    report.bound_satisfied = *report.exact_norm_sq <= report.denominator + 1e-9;
  }
  return report;
}

CMatrix mixed_term_parity_expansion(const ObservableFamily& fam, Index i,
                                    Index j) {
  require_pair(fam, i, j, "mixed_term_parity_expansion");
  const Index n = fam.sites();
  if (n > 30) {
    throw CapacityError(
        "mixed_term_parity_expansion: subset enumeration limited to 30 sites");
  }
  std::vector<CMatrix> comm(static_cast<size_t>(n));
  std::vector<CMatrix> anti(static_cast<size_t>(n));
  for (Index r = 0; r < n; ++r) {
    const CMatrix& ai = fam.ops[static_cast<size_t>(i)][static_cast<size_t>(r)];
    const CMatrix& aj = fam.ops[static_cast<size_t>(j)][static_cast<size_t>(r)];
    comm[static_cast<size_t>(r)] = commutator(ai, aj);
    anti[static_cast<size_t>(r)] = anticommutator(ai, aj);
  }
  CMatrix sum = zero_matrix(fam.product_dim());
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    if (std::popcount(mask) % 2 != 0) continue;
    CMatrix t = (mask & 1) ? comm[0] : anti[0];
    for (Index r = 1; r < n; ++r) {
      t = kron(t, (mask >> r) & 1 ? comm[static_cast<size_t>(r)]
                                  : anti[static_cast<size_t>(r)]);
    }
    sum += t;
  }
  return std::ldexp(1.0, static_cast<int>(1 - n)) * sum;
}

ObservableFamily extend_observable(const ObservableFamily& fam,
                                   const std::vector<Index>& extra_dims) {
  if (extra_dims.empty()) {
    throw ValidationError("extend_observable: extra_dims must be nonempty");
  }
  for (Index d : extra_dims) {
    if (d < 1) {
      throw ValidationError("extend_observable: site dimensions must be >= 1");
    }
  }
  std::vector<Index> dims = fam.dims;
  dims.insert(dims.end(), extra_dims.begin(), extra_dims.end());
  std::vector<std::vector<CMatrix>> ops = fam.ops;
  for (auto& term : ops) {
    for (Index d : extra_dims) {
      term.push_back(identity_matrix(d));
    }
  }
  return ObservableFamily{std::move(dims), std::move(ops)};
}

}  // namespace corrbound
