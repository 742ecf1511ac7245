#include "dwadmm/diagnostics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dwadmm {

namespace {

Matrix select_square(const Matrix& m, const std::vector<int>& include) {
    Matrix out(include.size(), include.size());
    for (std::size_t r = 0; r < include.size(); ++r) {
        for (std::size_t c = 0; c < include.size(); ++c) {
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                m(include[r], include[c]);
        }
    }
    return out;
}

}  // namespace

Matrix select_rows(const Matrix& m, const std::vector<int>& include) {
    Matrix out(include.size(), m.cols());
    for (std::size_t r = 0; r < include.size(); ++r) {
        out.row(static_cast<Eigen::Index>(r)) = m.row(include[r]);
    }
    return out;
}

double lemma2_residual(const Matrix& z_prev, const Matrix& z_next, const Matrix& error_next,
                       const Matrix& lambda_next, const Matrix& grad_next,
                       const LaplacianPair& laps) {
    const Matrix residual = laps.unsigned_laplacian * (z_next - z_prev) -
                            2.0 * laps.degree * error_next + lambda_next + grad_next;
    return residual.norm();
}

std::pair<double, double> optimality_residuals(const Matrix& x, const Matrix& lambda,
                                               const ObjectiveSet& objectives,
                                               const Matrix& base_signed_laplacian) {
    if (x.rows() != lambda.rows() || x.cols() != lambda.cols() ||
        base_signed_laplacian.cols() != x.rows()) {
        throw std::invalid_argument("optimality_residuals: dimension mismatch");
    }
    const double stationarity = (grad_matrix(objectives, x) + lambda).norm();
    const double consensus = (base_signed_laplacian * x).norm();
    return {stationarity, consensus};
}

double lyapunov_energy(const Matrix& x, const Matrix& y, const Matrix& x_star,
                       const Matrix& y_star, const Matrix& unsigned_laplacian_k,
                       double cumulative_scale) {
    if (!(cumulative_scale > 0.0)) {
        throw std::invalid_argument("lyapunov_energy: cumulative scale must be positive");
    }
    const Matrix y_diff = y - y_star;
    const Matrix x_diff = x - x_star;
    return y_diff.squaredNorm() / cumulative_scale + weighted_norm_sq(x_diff, unsigned_laplacian_k);
}

double error_coupling_term(const Matrix& error_next, const Matrix& z_prev, const Matrix& z_next,
                           const Matrix& x_next, const Matrix& lambda_next,
                           const Matrix& x_star_rows, const Matrix& lambda_star,
                           const LaplacianPair& laps, const std::vector<int>& include) {
    if (include.empty()) {
        const Matrix coupled = laps.unsigned_laplacian * (z_next - z_prev) +
                               (lambda_next - lambda_star) +
                               2.0 * laps.degree * (x_next - x_star_rows);
        return frobenius_inner(error_next, coupled);
    }
    const Matrix l_plus = select_square(laps.unsigned_laplacian, include);
    const Matrix degree = select_square(laps.degree, include);
    const Matrix coupled =
        l_plus * (select_rows(z_next, include) - select_rows(z_prev, include)) +
        (select_rows(lambda_next, include) - select_rows(lambda_star, include)) +
        2.0 * degree * (select_rows(x_next, include) - select_rows(x_star_rows, include));
    return frobenius_inner(select_rows(error_next, include), coupled);
}

double column_space_residual(const Matrix& m, const SymmetricEigen& decomposition) {
    if (decomposition.vectors.rows() != m.rows()) {
        throw std::invalid_argument("column_space_residual: dimension mismatch");
    }
    const double cutoff =
        1e-10 * std::max(1.0, std::abs(decomposition.values.cwiseAbs().maxCoeff()));
    double out_of_space = 0.0;
    for (Eigen::Index i = 0; i < decomposition.values.size(); ++i) {
        if (std::abs(decomposition.values(i)) <= cutoff) {
            out_of_space += (decomposition.vectors.col(i).transpose() * m).squaredNorm();
        }
    }
    return std::sqrt(out_of_space);
}

Matrix restricted_base_laplacian(const WeightedGraph& g, const std::vector<int>& include) {
    std::vector<int> position(static_cast<std::size_t>(g.node_count()), -1);
    for (std::size_t r = 0; r < include.size(); ++r) {
        position[static_cast<std::size_t>(include[r])] = static_cast<int>(r);
    }
    Matrix laplacian = Matrix::Zero(include.size(), include.size());
    for (const Edge& e : g.edges()) {
        const int pi = position[static_cast<std::size_t>(e.i)];
        const int pj = position[static_cast<std::size_t>(e.j)];
        if (pi < 0 || pj < 0) continue;
        laplacian(pi, pj) -= e.base_weight;
        laplacian(pj, pi) -= e.base_weight;
        laplacian(pi, pi) += e.base_weight;
        laplacian(pj, pj) += e.base_weight;
    }
    return laplacian;
}

double restricted_consensus_residual(const Matrix& x, const WeightedGraph& g,
                                     const std::vector<int>& include) {
    if (include.empty()) return 0.0;
    return (restricted_base_laplacian(g, include) * select_rows(x, include)).norm();
}

}  // namespace dwadmm
