#pragma once

#include <complex>

#include <Eigen/Dense>

#include "chiraltop/policy.hpp"

namespace chiraltop {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct HermitianEig {
  Eigen::VectorXd eigenvalues;  // ascending
  CMatrix eigenvectors;         // orthonormal columns
};

// Eigendecomposition with deterministic gauge: degenerate clusters are re-spanned by
// Gram-Schmidt of the cluster projector applied to e_0, e_1, ... and every column has
// its first significant component real positive.
HermitianEig herm_eig(const CMatrix& a, const NumericPolicy& policy = {});

// Unitary factor U of A = U * P with P positive.
CMatrix polar_unitary(const CMatrix& a, const NumericPolicy& policy = {});

// Principal logarithm of a unitary, eigenphases in (-pi, pi).
CMatrix unitary_log(const CMatrix& u, const NumericPolicy& policy = {});

// det(A) / |det(A)|.
cplx det_phase(const CMatrix& a, const NumericPolicy& policy = {});

// exp of an anti-hermitian matrix through the hermitian eigendecomposition of -iL.
CMatrix antihermitian_exp(const CMatrix& l);

void require_finite(const CMatrix& a, const char* what);
double max_abs(const CMatrix& a);
double unitarity_residual(const CMatrix& u);
double min_singular_value(const CMatrix& a);
CMatrix kron(const CMatrix& a, const CMatrix& b);
// Multiplies each column by a phase so its first component above `threshold` is real positive.
void fix_column_phases(CMatrix& v, double threshold = 1e-6);

}  // namespace chiraltop
