#include "dwadmm/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dwadmm {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* where) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                    " vs " + std::to_string(b.rows()) + "x" +
                                    std::to_string(b.cols()) + ")");
    }
}

void require_symmetric(const Matrix& m, const char* where) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument(std::string(where) + ": matrix must be square");
    }
    const double residual = (m - m.transpose()).norm();
    if (residual > 1e-9 * std::max(1.0, m.norm())) {
        throw std::invalid_argument(std::string(where) + ": matrix is not symmetric (residual " +
                                    std::to_string(residual) + ")");
    }
}

void require_finite(const Matrix& m, const char* where) {
    if (!m.allFinite()) {
        throw std::runtime_error(std::string(where) + ": result has non-finite entries");
    }
}

}  // namespace

double frobenius_inner(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "frobenius_inner");
    return (a.array() * b.array()).sum();
}

double weighted_norm_sq(const Matrix& a, const Matrix& weight) {
    require_symmetric(weight, "weighted_norm_sq");
    if (weight.cols() != a.rows()) {
        throw std::invalid_argument("weighted_norm_sq: weight is " + std::to_string(weight.rows()) +
                                    "x" + std::to_string(weight.cols()) + " but operand has " +
                                    std::to_string(a.rows()) + " rows");
    }
    double value = frobenius_inner(a, weight * a);
    if (value < 0.0) {
        const double slack = 1e-12 * std::max(1.0, weight.norm() * a.squaredNorm());
        if (value >= -slack) value = 0.0;
    }
    return value;
}

SymmetricEigen symmetric_eigen(const Matrix& m) {
    require_symmetric(m, "symmetric_eigen");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.transpose()));
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("symmetric_eigen: eigendecomposition did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix principal_sqrt(const Matrix& m) {
    const SymmetricEigen eigen = symmetric_eigen(m);
    const double scale = std::max(1.0, m.norm());
    if (eigen.values.size() > 0 && eigen.values.minCoeff() < -1e-10 * scale) {
        throw std::invalid_argument("principal_sqrt: matrix is not positive semidefinite (min "
                                    "eigenvalue " + std::to_string(eigen.values.minCoeff()) + ")");
    }
    // Eigenvalues that are zero up to round-off must map to exactly zero:
    // sqrt would amplify a 1e-14 rounding artifact into a 1e-7 spurious
    // spectral direction.
    const double cutoff = 1e-12 * scale;
    Vector roots = Vector::Zero(eigen.values.size());
    for (Eigen::Index i = 0; i < eigen.values.size(); ++i) {
        if (eigen.values(i) > cutoff) roots(i) = std::sqrt(eigen.values(i));
    }
    Matrix s = eigen.vectors * roots.asDiagonal() * eigen.vectors.transpose();
    s = 0.5 * (s + s.transpose()).eval();
    require_finite(s, "principal_sqrt");
    return s;
}

Matrix symmetric_pseudo_inverse(const Matrix& m) {
    const SymmetricEigen eigen = symmetric_eigen(m);
    const double cutoff = 1e-10 * std::max(1.0, m.norm());
    Vector inverted = Vector::Zero(eigen.values.size());
    for (Eigen::Index i = 0; i < eigen.values.size(); ++i) {
        if (eigen.values(i) > cutoff) inverted(i) = 1.0 / eigen.values(i);
    }
    Matrix p = eigen.vectors * inverted.asDiagonal() * eigen.vectors.transpose();
    return 0.5 * (p + p.transpose()).eval();
}

Matrix solve_spd(const Matrix& m, const Matrix& rhs) {
    require_symmetric(m, "solve_spd");
    if (m.cols() != rhs.rows()) {
        throw std::invalid_argument("solve_spd: rhs has " + std::to_string(rhs.rows()) +
                                    " rows, expected " + std::to_string(m.cols()));
    }
    Eigen::LLT<Matrix> llt(0.5 * (m + m.transpose()));
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("solve_spd: matrix is not positive definite");
    }
    Matrix x = llt.solve(rhs);
    const double tolerance = 1e-9 * std::max(1.0, rhs.norm());
    // Iterative refinement; LLT alone can miss the tolerance on
    // ill-conditioned systems.
    for (int pass = 0; pass < 3; ++pass) {
        const Matrix residual = rhs - m * x;
        if (residual.norm() <= tolerance) break;
        x += llt.solve(residual);
    }
    require_finite(x, "solve_spd");
    if ((m * x - rhs).norm() > tolerance) {
        throw std::runtime_error("solve_spd: residual tolerance not reached, matrix is likely "
                                 "singular or severely ill-conditioned");
    }
    return x;
}

}  // namespace dwadmm
