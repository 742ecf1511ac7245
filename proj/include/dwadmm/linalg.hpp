#pragma once

#include <Eigen/Dense>

namespace dwadmm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Eigendecomposition of a symmetric matrix: M = V diag(values) V^T.
/// Eigenvalues ascending, eigenvectors orthonormal columns.
struct SymmetricEigen {
    Vector values;
    Matrix vectors;
};

/// Frobenius inner product sum_ij a_ij * b_ij. Throws on shape mismatch.
double frobenius_inner(const Matrix& a, const Matrix& b);

/// Weighted squared norm <a, weight * a> for symmetric PSD weight.
/// Tiny negative round-off is clamped to zero.
double weighted_norm_sq(const Matrix& a, const Matrix& weight);

/// Full eigendecomposition; input must be symmetric within tolerance.
SymmetricEigen symmetric_eigen(const Matrix& m);

/// Principal square root S of a symmetric PSD matrix, S * S == m.
/// Eigenvalues slightly below zero (round-off) are clamped; genuinely
/// negative spectra are rejected.
Matrix principal_sqrt(const Matrix& m);

/// Moore-Penrose inverse of a symmetric PSD matrix via its spectrum.
Matrix symmetric_pseudo_inverse(const Matrix& m);

/// Solve m * x = rhs for symmetric positive definite m. Vector right-hand
/// sides pass through as single-column matrices.
Matrix solve_spd(const Matrix& m, const Matrix& rhs);

}  // namespace dwadmm
