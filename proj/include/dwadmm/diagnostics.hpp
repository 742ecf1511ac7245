#pragma once

#include "dwadmm/graph.hpp"
#include "dwadmm/linalg.hpp"
#include "dwadmm/objective.hpp"

#include <utility>
#include <vector>

namespace dwadmm {

/// One iteration's worth of run metrics. Fields that are undefined for the
/// active weight policy hold NaN and serialize as empty CSV cells.
struct MetricRow {
    int iteration = 0;
    double primal_residual = 0.0;           // |X^k - X^{k-1}|_F
    double consensus_residual = 0.0;        // |L-^0 X^k|_F
    double consensus_residual_honest = 0.0;  // same, restricted to honest nodes
    double dual_residual = 0.0;             // |Lambda^k - Lambda^{k-1}|_F
    double dist_to_opt = 0.0;               // |X^k - X*|_F
    double dist_to_honest_opt = 0.0;        // honest rows vs honest-subset optimum
    double lemma2_residual = 0.0;           // update-identity residual, see below
    double dual_equiv_residual = 0.0;       // |Lambda^k - N Y^k|_F (uniform-scalar only)
    double lyapunov_energy = 0.0;           // |Q^k - Q*|^2_{G^k} (scalar policies only)
    double min_trust = 1.0;
    int isolated_count = 0;
    double error_norm = 0.0;  // |E^k|_F
};

/// Residual of the coupled update identity
///   L+^k (Z^{k+1} - Z^k) - 2 D^k E^{k+1} + Lambda^{k+1} + grad f(X^{k+1}) = 0,
/// which exact primal/dual updates satisfy by construction. `laps` must be
/// the Laplacians the step actually used (weights of iteration k).
double lemma2_residual(const Matrix& z_prev, const Matrix& z_next, const Matrix& error_next,
                       const Matrix& lambda_next, const Matrix& grad_next,
                       const LaplacianPair& laps);

/// First-order optimality residuals at (x, lambda):
/// stationarity |grad f(x) + lambda|_F and consensus |L-^0 x|_F.
std::pair<double, double> optimality_residuals(const Matrix& x, const Matrix& lambda,
                                               const ObjectiveSet& objectives,
                                               const Matrix& base_signed_laplacian);

/// Energy |Q^k - Q*|^2_{G^k} with Q = (Y; X) and
/// G^k = blockdiag(scale^-1 I, L+^k), where scale is the cumulative scalar
/// weight factor. Defined only when the reweighting is a scalar multiple
/// of identity.
double lyapunov_energy(const Matrix& x, const Matrix& y, const Matrix& x_star,
                       const Matrix& y_star, const Matrix& unsigned_laplacian_k,
                       double cumulative_scale);

/// Error-coupling inner product
///   <E^{k+1}, L+^k (Z^{k+1} - Z^k) + (Lambda^{k+1} - Lambda*) + 2 D^k (X^{k+1} - X*)>.
/// Zero whenever E^{k+1} is zero. `include` restricts every term to the
/// given node rows (and Laplacian rows/columns); empty means all nodes.
double error_coupling_term(const Matrix& error_next, const Matrix& z_prev, const Matrix& z_next,
                           const Matrix& x_next, const Matrix& lambda_next,
                           const Matrix& x_star_rows, const Matrix& lambda_star,
                           const LaplacianPair& laps, const std::vector<int>& include = {});

/// Norm of the component of m outside the column space of the decomposed
/// symmetric PSD matrix (eigenvalues below tolerance span the complement).
double column_space_residual(const Matrix& m, const SymmetricEigen& decomposition);

/// Signed Laplacian of the base-weight subgraph induced on `include`
/// (degrees recomputed from surviving edges, so row sums stay zero).
Matrix restricted_base_laplacian(const WeightedGraph& g, const std::vector<int>& include);

/// |L x|_F over the induced base-weight subgraph; zero exactly when the
/// included rows agree.
double restricted_consensus_residual(const Matrix& x, const WeightedGraph& g,
                                     const std::vector<int>& include);

/// Rows of m listed in `include`, in order.
Matrix select_rows(const Matrix& m, const std::vector<int>& include);

}  // namespace dwadmm
