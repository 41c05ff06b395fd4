#include "corrbound/linalg.hpp"

#include <cmath>
#include <sstream>

namespace corrbound {

NumericPolicy& numeric_policy() {
  static NumericPolicy policy;
  return policy;
}

namespace {

void require_square(const CMatrix& a, const std::string& what) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    std::ostringstream msg;
    msg << what << ": expected a nonempty square matrix, got " << a.rows()
        << "x" << a.cols();
    throw ValidationError(msg.str());
  }
}

void require_finite(const CMatrix& a, const std::string& what) {
  if (!a.allFinite()) {
    throw ValidationError(what + ": matrix contains non-finite entries");
  }
}

Index checked_product_dim(const std::vector<Index>& dims,
                          const std::string& what) {
  if (dims.empty()) {
    throw ValidationError(what + ": empty site dimension vector");
  }
  Index product = 1;
  for (Index d : dims) {
    if (d < 1) {
      throw ValidationError(what + ": site dimensions must be >= 1");
    }
    if (product > numeric_policy().max_dim / d) {
      std::ostringstream msg;
      msg << what << ": tensor space dimension exceeds the cap of "
          << numeric_policy().max_dim;
      throw CapacityError(msg.str());
    }
    product *= d;
  }
  return product;
}

// Splits a tensor index at site r into (left, site, right) strides.
struct SiteStrides {
  Index left;   // number of index blocks before the site
  Index d;      // site dimension
  Index right;  // joint dimension of the sites after r
};

SiteStrides site_strides(const CMatrix& m, const std::vector<Index>& dims,
                         Index site, const std::string& what) {
  if (site < 0 || site >= static_cast<Index>(dims.size())) {
    std::ostringstream msg;
    msg << what << ": site " << site << " out of range for " << dims.size()
        << " sites";
    throw ValidationError(msg.str());
  }
  SiteStrides s{1, dims[static_cast<size_t>(site)], 1};
  Index product = 1;
  for (Index r = 0; r < static_cast<Index>(dims.size()); ++r) {
    if (r < site) s.left *= dims[static_cast<size_t>(r)];
    if (r > site) s.right *= dims[static_cast<size_t>(r)];
    product *= dims[static_cast<size_t>(r)];
  }
  if (m.rows() != product || m.cols() != product) {
    std::ostringstream msg;
    msg << what << ": matrix is " << m.rows() << "x" << m.cols()
        << " but the site dimensions give " << product;
    throw ValidationError(msg.str());
  }
  return s;
}

}  // namespace

CMatrix identity_matrix(Index dim) { return CMatrix::Identity(dim, dim); }

CMatrix zero_matrix(Index dim) { return CMatrix::Zero(dim, dim); }

double hermiticity_defect(const CMatrix& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMatrix& a, double tol) {
  return a.rows() == a.cols() && hermiticity_defect(a) <= tol;
}

CMatrix symmetrize(const CMatrix& a) { return 0.5 * (a + a.adjoint().eval()); }

CMatrix require_hermitian(const CMatrix& a, const std::string& what) {
  require_square(a, what);
  require_finite(a, what);
  const double defect = hermiticity_defect(a);
  if (defect > numeric_policy().hermiticity_tol) {
    std::ostringstream msg;
    msg << what << ": matrix is not Hermitian (entrywise defect " << defect
        << " exceeds " << numeric_policy().hermiticity_tol << ")";
    throw ValidationError(msg.str());
  }
  return symmetrize(a);
}

double real_trace_product(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("real_trace_product: dimension mismatch");
  }
  return (a * b).trace().real();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  require_square(a, "kron");
  require_square(b, "kron");
  if (a.rows() > numeric_policy().max_dim / b.rows()) {
    std::ostringstream msg;
    msg << "kron: result dimension " << a.rows() << "*" << b.rows()
        << " exceeds the cap of " << numeric_policy().max_dim;
    throw CapacityError(msg.str());
  }
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index p = 0; p < a.rows(); ++p) {
    for (Index q = 0; q < a.cols(); ++q) {
      out.block(p * b.rows(), q * b.cols(), b.rows(), b.cols()) = a(p, q) * b;
    }
  }
  return out;
}

HermitianEigenResult hermitian_eig(const CMatrix& a) {
  const CMatrix h = require_hermitian(a, "hermitian_eig");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    // Eigen's self-adjoint solver iterates at most 30 sweeps per eigenvalue.
    throw NumericError(
        "hermitian_eig: eigensolver failed to converge within 30 sweeps");
  }
  return HermitianEigenResult{solver.eigenvalues(), solver.eigenvectors()};
}

double operator_norm(const CMatrix& a) {
  require_square(a, "operator_norm");
  require_finite(a, "operator_norm");
  if (is_hermitian(a, numeric_policy().hermiticity_tol)) {
    const auto eig = hermitian_eig(a);
    return eig.eigenvalues.cwiseAbs().maxCoeff();
  }
  const CMatrix gram = a.adjoint() * a;
  const auto eig = hermitian_eig(gram);
  return std::sqrt(std::max(0.0, eig.eigenvalues.maxCoeff()));
}

double trace_norm(const CMatrix& a) {
  require_square(a, "trace_norm");
  require_finite(a, "trace_norm");
  if (is_hermitian(a, numeric_policy().hermiticity_tol)) {
    const auto eig = hermitian_eig(a);
    return eig.eigenvalues.cwiseAbs().sum();
  }
  const CMatrix gram = a.adjoint() * a;
  const auto eig = hermitian_eig(gram);
  double sum = 0.0;
  for (Index i = 0; i < eig.eigenvalues.size(); ++i) {
    sum += std::sqrt(std::max(0.0, eig.eigenvalues(i)));
  }
  return sum;
}

DensityState make_density_state(std::vector<Index> dims, CMatrix matrix) {
  const Index product = checked_product_dim(dims, "make_density_state");
  if (matrix.rows() != product || matrix.cols() != product) {
    std::ostringstream msg;
    msg << "make_density_state: matrix is " << matrix.rows() << "x"
        << matrix.cols() << " but the site dimensions give " << product;
    throw ValidationError(msg.str());
  }
  CMatrix h = require_hermitian(matrix, "make_density_state");
  const double trace = h.trace().real();
  if (std::abs(trace - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "make_density_state: trace is " << trace << ", expected 1";
    throw ValidationError(msg.str());
  }
  const auto eig = hermitian_eig(h);
  if (eig.eigenvalues.minCoeff() < -1e-10) {
    std::ostringstream msg;
    msg << "make_density_state: matrix is not positive semidefinite "
        << "(min eigenvalue " << eig.eigenvalues.minCoeff() << ")";
    throw ValidationError(msg.str());
  }
  return DensityState{std::move(dims), std::move(h)};
}

CMatrix marginal_at_site(const CMatrix& m, const std::vector<Index>& dims,
                         Index site) {
  const auto s = site_strides(m, dims, site, "marginal_at_site");
  CMatrix out = CMatrix::Zero(s.d, s.d);
  for (Index a = 0; a < s.d; ++a) {
    for (Index b = 0; b < s.d; ++b) {
      Complex sum = 0.0;
      for (Index left = 0; left < s.left; ++left) {
        for (Index right = 0; right < s.right; ++right) {
          const Index row = (left * s.d + a) * s.right + right;
          const Index col = (left * s.d + b) * s.right + right;
          sum += m(row, col);
        }
      }
      out(a, b) = sum;
    }
  }
  return out;
}

CMatrix trace_out_site(const CMatrix& m, const std::vector<Index>& dims,
                       Index site) {
  const auto s = site_strides(m, dims, site, "trace_out_site");
  const Index rest = s.left * s.right;
  CMatrix out = CMatrix::Zero(rest, rest);
  for (Index la = 0; la < s.left; ++la) {
    for (Index ra = 0; ra < s.right; ++ra) {
      for (Index lb = 0; lb < s.left; ++lb) {
        for (Index rb = 0; rb < s.right; ++rb) {
          Complex sum = 0.0;
          for (Index c = 0; c < s.d; ++c) {
            sum += m((la * s.d + c) * s.right + ra, (lb * s.d + c) * s.right + rb);
          }
          out(la * s.right + ra, lb * s.right + rb) = sum;
        }
      }
    }
  }
  return out;
}

CMatrix partial_trace(const DensityState& rho, Index site) {
  return marginal_at_site(rho.matrix, rho.dims, site);
}

CMatrix matrix_log_psd(const CMatrix& a, std::optional<double> clamp) {
  const double floor = clamp.value_or(numeric_policy().log_clamp);
  const auto eig = hermitian_eig(require_hermitian(a, "matrix_log_psd"));
  if (eig.eigenvalues.minCoeff() < -1e-10) {
    std::ostringstream msg;
    msg << "matrix_log_psd: matrix is not positive semidefinite "
        << "(min eigenvalue " << eig.eigenvalues.minCoeff() << ")";
    throw ValidationError(msg.str());
  }
  RVector logs(eig.eigenvalues.size());
  for (Index i = 0; i < logs.size(); ++i) {
    logs(i) = std::log(std::max(eig.eigenvalues(i), floor));
  }
  return eig.eigenvectors * logs.asDiagonal() * eig.eigenvectors.adjoint();
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("commutator: dimension mismatch");
  }
  return a * b - b * a;
}

CMatrix anticommutator(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("anticommutator: dimension mismatch");
  }
  return a * b + b * a;
}

}  // namespace corrbound
