#include "chiraltop/numkernel.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "chiraltop/error.hpp"

namespace chiraltop {

namespace {

void require_square(const CMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": expected a non-empty square matrix");
}

// Orthonormal basis of the range of the projector q, taken from q e_0, q e_1, ... in
// index order. Candidates whose residual norm is below the threshold are skipped.
CMatrix canonical_span(const CMatrix& q, Eigen::Index k) {
  const Eigen::Index n = q.rows();
  for (double threshold : {1e-1, 1e-3, 1e-6}) {
    CMatrix basis(n, k);
    Eigen::Index found = 0;
    for (Eigen::Index e = 0; e < n && found < k; ++e) {
      CVector v = q.col(e);
      for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index j = 0; j < found; ++j) v -= basis.col(j) * basis.col(j).dot(v);
      const double norm = v.norm();
      if (norm < threshold) continue;
      basis.col(found++) = v / norm;
    }
    if (found == k) return basis;
  }
  throw Error(ErrorKind::NoConvergence, "herm_eig: could not span a degenerate eigenspace");
}

}  // namespace

void require_finite(const CMatrix& a, const char* what) {
  if (!a.allFinite()) throw Error(ErrorKind::NonFinite, std::string(what) + ": non-finite matrix entry");
}

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double unitarity_residual(const CMatrix& u) {
  return max_abs(u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols()));
}

double min_singular_value(const CMatrix& a) {
  if (a.size() == 1) return std::abs(a(0, 0));
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues().minCoeff();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

void fix_column_phases(CMatrix& v, double threshold) {
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      const double mag = std::abs(v(i, j));
      if (mag > threshold) {
        v.col(j) *= std::conj(v(i, j)) / mag;
        v(i, j) = mag;
        break;
      }
    }
  }
}

HermitianEig herm_eig(const CMatrix& a, const NumericPolicy& policy) {
  require_square(a, "herm_eig");
  require_finite(a, "herm_eig");
  const double scale = std::max(1.0, max_abs(a));
  const double asym = max_abs(a - a.adjoint());
  if (asym > policy.tol_herm * scale) throw Error(ErrorKind::NonHermitian, "herm_eig: input is not hermitian", asym);

  const CMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::NoConvergence, "herm_eig: eigensolver failed");

  HermitianEig out{solver.eigenvalues(), solver.eigenvectors()};
  const Eigen::Index n = a.rows();
  const double deg_tol = policy.degeneracy_tol * std::max(1.0, out.eigenvalues.cwiseAbs().maxCoeff());
  for (Eigen::Index start = 0; start < n;) {
    Eigen::Index end = start + 1;
    while (end < n && out.eigenvalues(end) - out.eigenvalues(end - 1) <= deg_tol) ++end;
    const Eigen::Index k = end - start;
    if (k > 1) {
      const CMatrix block = out.eigenvectors.middleCols(start, k);
      out.eigenvectors.middleCols(start, k) = canonical_span(block * block.adjoint(), k);
    }
    start = end;
  }
  fix_column_phases(out.eigenvectors);
  return out;
}

CMatrix polar_unitary(const CMatrix& a, const NumericPolicy& policy) {
  require_square(a, "polar_unitary");
  require_finite(a, "polar_unitary");
  if (a.rows() == 1) {
    const double mag = std::abs(a(0, 0));
    if (mag < policy.sigma_min) throw Error(ErrorKind::NearSingular, "polar_unitary: singular value below sigma_min", mag);
    return CMatrix::Constant(1, 1, a(0, 0) / mag);
  }
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double smin = svd.singularValues().minCoeff();
  if (smin < policy.sigma_min) throw Error(ErrorKind::NearSingular, "polar_unitary: singular value below sigma_min", smin);
  return svd.matrixU() * svd.matrixV().adjoint();
}

CMatrix unitary_log(const CMatrix& u, const NumericPolicy& policy) {
  require_square(u, "unitary_log");
  require_finite(u, "unitary_log");
  const double res = unitarity_residual(u);
  if (res > policy.tol_unitary) throw Error(ErrorKind::NonUnitary, "unitary_log: input is not unitary", res);
  const double limit = std::numbers::pi - policy.angle_margin;

  if (u.rows() == 1) {
    const double theta = std::arg(u(0, 0));
    if (std::abs(theta) > limit) throw Error(ErrorKind::BranchCut, "unitary_log: eigenphase near pi", theta);
    return CMatrix::Constant(1, 1, cplx(0.0, theta));
  }
  Eigen::ComplexSchur<CMatrix> schur(u);
  if (schur.info() != Eigen::Success) throw Error(ErrorKind::NoConvergence, "unitary_log: Schur decomposition failed");
  const CMatrix& q = schur.matrixU();
  const CMatrix& t = schur.matrixT();
  CVector phases(u.rows());
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double theta = std::arg(t(i, i));
    if (std::abs(theta) > limit) throw Error(ErrorKind::BranchCut, "unitary_log: eigenphase near pi", theta);
    phases(i) = cplx(0.0, theta);
  }
  CMatrix l = q * phases.asDiagonal() * q.adjoint();
  return 0.5 * (l - l.adjoint());
}

cplx det_phase(const CMatrix& a, const NumericPolicy& policy) {
  require_square(a, "det_phase");
  const cplx d = a.rows() == 1 ? a(0, 0) : a.determinant();
  const double mag = std::abs(d);
  if (!(mag >= policy.det_min)) throw Error(ErrorKind::NearSingular, "det_phase: determinant below det_min", mag);
  return d / mag;
}

CMatrix antihermitian_exp(const CMatrix& l) {
  require_square(l, "antihermitian_exp");
  const CMatrix h = cplx(0.0, -0.5) * (l - l.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  CVector phases(l.rows());
  for (Eigen::Index i = 0; i < l.rows(); ++i) phases(i) = std::polar(1.0, solver.eigenvalues()(i));
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace chiraltop
