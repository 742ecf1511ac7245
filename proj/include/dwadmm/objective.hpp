#pragma once

#include "dwadmm/linalg.hpp"

#include <functional>
#include <vector>

namespace dwadmm {

/// One node's convex objective. Either an explicit quadratic
/// f(x) = 0.5 x'Qx - l'x + offset (closed-form solves) or a general
/// smooth convex function given by callables (Newton solves).
class LocalObjective {
public:
    using ValueFn = std::function<double(const Vector&)>;
    using GradFn = std::function<Vector(const Vector&)>;
    using HessFn = std::function<Matrix(const Vector&)>;

    static LocalObjective quadratic(Matrix quad, Vector linear, double offset = 0.0);

    /// 0.5 * (x - center)^2 in one dimension.
    static LocalObjective scalar_quadratic(double center);

    /// General smooth convex objective. hess may be empty; solvers then
    /// fall back to central differences of the gradient.
    static LocalObjective smooth(int dim, ValueFn value, GradFn grad, HessFn hess = nullptr);

    /// l2-regularized logistic loss over rows of features with +/-1 labels.
    static LocalObjective logistic(Matrix features, Vector labels, double ridge);

    int dim() const { return dim_; }
    bool is_quadratic() const { return is_quadratic_; }

    double value(const Vector& x) const;
    Vector gradient(const Vector& x) const;
    Matrix hessian(const Vector& x) const;

    const Matrix& quad() const;
    const Vector& linear() const;
    double offset() const { return offset_; }

private:
    LocalObjective() = default;

    int dim_ = 0;
    bool is_quadratic_ = false;
    Matrix quad_;
    Vector linear_;
    double offset_ = 0.0;
    ValueFn value_;
    GradFn grad_;
    HessFn hess_;
};

/// One objective per node, all over the same decision dimension.
class ObjectiveSet {
public:
    explicit ObjectiveSet(std::vector<LocalObjective> objectives);

    int node_count() const { return static_cast<int>(objectives_.size()); }
    int dim() const { return dim_; }
    const LocalObjective& at(int node) const;
    bool all_quadratic() const;

    double total_value(const Vector& x, const std::vector<int>& subset) const;

private:
    std::vector<LocalObjective> objectives_;
    int dim_ = 0;
};

/// Row i of the result is the gradient of objective i at row i of x.
Matrix grad_matrix(const ObjectiveSet& objectives, const Matrix& x);

/// Solves grad f(x) + 2 * degree * x = rhs for one node. Closed form for
/// quadratics, damped Newton otherwise. degree = 0 is the isolated-node
/// case and requires a strictly convex objective.
Vector solve_primal(const LocalObjective& objective, double degree, const Vector& rhs);

/// Minimizer of the sum of the subset's objectives; exact for quadratics,
/// Newton to gradient norm <= 1e-10 otherwise.
Vector centralized_optimum(const ObjectiveSet& objectives, const std::vector<int>& subset);

}  // namespace dwadmm
