#include "dwadmm/objective.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace dwadmm {

namespace {

// log(1 + exp(u)) without overflow for large |u|.
double log1p_exp(double u) {
    if (u > 0.0) return u + std::log1p(std::exp(-u));
    return std::log1p(std::exp(u));
}

Matrix finite_difference_hessian(const LocalObjective::GradFn& grad, const Vector& x) {
    const Eigen::Index n = x.size();
    Matrix h(n, n);
    const double step = 1e-6 * std::max(1.0, x.norm());
    for (Eigen::Index c = 0; c < n; ++c) {
        Vector lo = x, hi = x;
        lo(c) -= step;
        hi(c) += step;
        h.col(c) = (grad(hi) - grad(lo)) / (2.0 * step);
    }
    return 0.5 * (h + h.transpose()).eval();
}

// Damped Newton iteration on residual(x) = 0 with jacobian(x) SPD up to a
// Levenberg shift. Returns the root to |residual| <= tolerance.
Vector damped_newton(const std::function<Vector(const Vector&)>& residual,
                     const std::function<Matrix(const Vector&)>& jacobian, Vector x,
                     double tolerance, int max_iterations, const char* where) {
    double best_norm = residual(x).norm();
    for (int iter = 0; iter < max_iterations; ++iter) {
        const Vector r = residual(x);
        const double r_norm = r.norm();
        if (r_norm <= tolerance) return x;
        if (x.norm() > 1e10 && r_norm > 0.5 * best_norm) {
            throw std::runtime_error(std::string(where) +
                                     ": iterates diverging, problem appears unbounded below");
        }
        best_norm = std::min(best_norm, r_norm);

        Matrix jac = jacobian(x);
        double shift = 0.0;
        Vector direction;
        for (;;) {
            Eigen::LLT<Matrix> llt(jac + shift * Matrix::Identity(jac.rows(), jac.cols()));
            if (llt.info() == Eigen::Success) {
                direction = llt.solve(-r);
                break;
            }
            shift = (shift == 0.0) ? 1e-10 * std::max(1.0, jac.norm()) : 10.0 * shift;
            if (!std::isfinite(shift) || shift > 1e12) {
                throw std::runtime_error(std::string(where) + ": singular Newton system");
            }
        }

        double t = 1.0;
        while (t > 1e-12 && residual(x + t * direction).norm() > (1.0 - 0.25 * t) * r_norm) {
            t *= 0.5;
        }
        x += t * direction;
    }
    if (residual(x).norm() <= tolerance) return x;
    throw std::runtime_error(std::string(where) + ": no convergence within " +
                             std::to_string(max_iterations) + " iterations");
}

}  // namespace

LocalObjective LocalObjective::quadratic(Matrix quad, Vector linear, double offset) {
    if (quad.rows() != quad.cols() || quad.rows() != linear.size()) {
        throw std::invalid_argument("objective: quadratic term must be square and match the "
                                    "linear term");
    }
    if ((quad - quad.transpose()).norm() > 1e-9 * std::max(1.0, quad.norm())) {
        throw std::invalid_argument("objective: quadratic term must be symmetric");
    }
    const SymmetricEigen eigen = symmetric_eigen(quad);
    if (eigen.values.size() > 0 &&
        eigen.values.minCoeff() < -1e-10 * std::max(1.0, quad.norm())) {
        throw std::invalid_argument("objective: quadratic term must be positive semidefinite");
    }
    LocalObjective obj;
    obj.dim_ = static_cast<int>(quad.rows());
    obj.is_quadratic_ = true;
    obj.quad_ = std::move(quad);
    obj.linear_ = std::move(linear);
    obj.offset_ = offset;
    return obj;
}

LocalObjective LocalObjective::scalar_quadratic(double center) {
    Matrix quad(1, 1);
    quad(0, 0) = 1.0;
    Vector linear(1);
    linear(0) = center;
    return quadratic(std::move(quad), std::move(linear), 0.5 * center * center);
}

LocalObjective LocalObjective::smooth(int dim, ValueFn value, GradFn grad, HessFn hess) {
    if (dim <= 0 || !value || !grad) {
        throw std::invalid_argument("objective: smooth objective needs dim, value and gradient");
    }
    LocalObjective obj;
    obj.dim_ = dim;
    obj.is_quadratic_ = false;
    obj.value_ = std::move(value);
    obj.grad_ = std::move(grad);
    obj.hess_ = std::move(hess);
    return obj;
}

LocalObjective LocalObjective::logistic(Matrix features, Vector labels, double ridge) {
    if (features.rows() != labels.size() || features.rows() == 0) {
        throw std::invalid_argument("objective: logistic needs one label per feature row");
    }
    if (!(ridge >= 0.0)) {
        throw std::invalid_argument("objective: logistic ridge must be nonnegative");
    }
    for (Eigen::Index r = 0; r < labels.size(); ++r) {
        if (labels(r) != 1.0 && labels(r) != -1.0) {
            throw std::invalid_argument("objective: logistic labels must be +1 or -1");
        }
    }
    const int dim = static_cast<int>(features.cols());
    auto value = [features, labels, ridge](const Vector& x) {
        double total = 0.5 * ridge * x.squaredNorm();
        for (Eigen::Index r = 0; r < features.rows(); ++r) {
            total += log1p_exp(-labels(r) * features.row(r).dot(x));
        }
        return total;
    };
    auto grad = [features, labels, ridge](const Vector& x) {
        Vector g = ridge * x;
        for (Eigen::Index r = 0; r < features.rows(); ++r) {
            const double margin = labels(r) * features.row(r).dot(x);
            const double p = 1.0 / (1.0 + std::exp(margin));  // sigmoid(-margin)
            g -= labels(r) * p * features.row(r).transpose();
        }
        return g;
    };
    auto hess = [features, labels, ridge, dim](const Vector& x) {
        Matrix h = ridge * Matrix::Identity(dim, dim);
        for (Eigen::Index r = 0; r < features.rows(); ++r) {
            const double margin = labels(r) * features.row(r).dot(x);
            const double p = 1.0 / (1.0 + std::exp(margin));
            h += p * (1.0 - p) * features.row(r).transpose() * features.row(r);
        }
        return h;
    };
    return smooth(dim, std::move(value), std::move(grad), std::move(hess));
}

double LocalObjective::value(const Vector& x) const {
    if (x.size() != dim_) throw std::invalid_argument("objective: point has wrong dimension");
    if (is_quadratic_) {
        return 0.5 * x.dot(quad_ * x) - linear_.dot(x) + offset_;
    }
    return value_(x);
}

Vector LocalObjective::gradient(const Vector& x) const {
    if (x.size() != dim_) throw std::invalid_argument("objective: point has wrong dimension");
    if (is_quadratic_) return quad_ * x - linear_;
    return grad_(x);
}

Matrix LocalObjective::hessian(const Vector& x) const {
    if (x.size() != dim_) throw std::invalid_argument("objective: point has wrong dimension");
    if (is_quadratic_) return quad_;
    if (hess_) return hess_(x);
    return finite_difference_hessian(grad_, x);
}

const Matrix& LocalObjective::quad() const {
    if (!is_quadratic_) throw std::logic_error("objective: not a quadratic");
    return quad_;
}

const Vector& LocalObjective::linear() const {
    if (!is_quadratic_) throw std::logic_error("objective: not a quadratic");
    return linear_;
}

ObjectiveSet::ObjectiveSet(std::vector<LocalObjective> objectives)
    : objectives_(std::move(objectives)) {
    if (objectives_.empty()) {
        throw std::invalid_argument("objective set: need at least one objective");
    }
    dim_ = objectives_.front().dim();
    for (const LocalObjective& obj : objectives_) {
        if (obj.dim() != dim_) {
            throw std::invalid_argument("objective set: all objectives must share one dimension");
        }
    }
}

const LocalObjective& ObjectiveSet::at(int node) const {
    if (node < 0 || node >= node_count()) {
        throw std::invalid_argument("objective set: node " + std::to_string(node) +
                                    " out of range");
    }
    return objectives_[static_cast<std::size_t>(node)];
}

bool ObjectiveSet::all_quadratic() const {
    return std::all_of(objectives_.begin(), objectives_.end(),
                       [](const LocalObjective& o) { return o.is_quadratic(); });
}

double ObjectiveSet::total_value(const Vector& x, const std::vector<int>& subset) const {
    double total = 0.0;
    for (int node : subset) total += at(node).value(x);
    return total;
}

Matrix grad_matrix(const ObjectiveSet& objectives, const Matrix& x) {
    if (x.rows() != objectives.node_count() || x.cols() != objectives.dim()) {
        throw std::invalid_argument("grad_matrix: state must be node_count x dim");
    }
    Matrix g(x.rows(), x.cols());
    for (int node = 0; node < objectives.node_count(); ++node) {
        g.row(node) = objectives.at(node).gradient(x.row(node).transpose()).transpose();
    }
    return g;
}

Vector solve_primal(const LocalObjective& objective, double degree, const Vector& rhs) {
    if (!(degree >= 0.0) || !std::isfinite(degree)) {
        throw std::invalid_argument("solve_primal: degree must be finite and nonnegative");
    }
    if (rhs.size() != objective.dim()) {
        throw std::invalid_argument("solve_primal: rhs has wrong dimension");
    }
    const double tolerance = 1e-9 * std::max(1.0, rhs.norm());

    if (objective.is_quadratic()) {
        const Matrix system =
            objective.quad() + 2.0 * degree * Matrix::Identity(objective.dim(), objective.dim());
        Vector x = Vector(solve_spd(system, Matrix(rhs + objective.linear())));
        // solve_spd enforces its own tolerance relative to the shifted rhs;
        // refine once more if the contract against the raw rhs is looser.
        for (int pass = 0; pass < 3; ++pass) {
            const Vector residual = rhs - (objective.gradient(x) + 2.0 * degree * x);
            if (residual.norm() <= tolerance) return x;
            x += Vector(solve_spd(system, Matrix(residual)));
        }
        throw std::runtime_error("solve_primal: quadratic solve missed the residual tolerance");
    }

    auto residual = [&](const Vector& x) -> Vector {
        return objective.gradient(x) + 2.0 * degree * x - rhs;
    };
    auto jacobian = [&](const Vector& x) -> Matrix {
        return objective.hessian(x) +
               2.0 * degree * Matrix::Identity(objective.dim(), objective.dim());
    };
    return damped_newton(residual, jacobian, Vector::Zero(objective.dim()), tolerance, 100,
                         "solve_primal");
}

Vector centralized_optimum(const ObjectiveSet& objectives, const std::vector<int>& subset) {
    if (subset.empty()) {
        throw std::invalid_argument("centralized_optimum: subset must be nonempty");
    }
    std::set<int> unique;
    for (int node : subset) {
        if (node < 0 || node >= objectives.node_count()) {
            throw std::invalid_argument("centralized_optimum: node " + std::to_string(node) +
                                        " out of range");
        }
        unique.insert(node);
    }
    const int n = objectives.dim();

    bool quadratic = true;
    for (int node : unique) quadratic = quadratic && objectives.at(node).is_quadratic();

    if (quadratic) {
        Matrix quad_sum = Matrix::Zero(n, n);
        Vector linear_sum = Vector::Zero(n);
        for (int node : unique) {
            quad_sum += objectives.at(node).quad();
            linear_sum += objectives.at(node).linear();
        }
        try {
            return Vector(solve_spd(quad_sum, Matrix(linear_sum)));
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string("centralized_optimum: subset problem is "
                                                 "degenerate or unbounded (") +
                                     e.what() + ")");
        }
    }

    auto residual = [&](const Vector& x) -> Vector {
        Vector g = Vector::Zero(n);
        for (int node : unique) g += objectives.at(node).gradient(x);
        return g;
    };
    auto jacobian = [&](const Vector& x) -> Matrix {
        Matrix h = Matrix::Zero(n, n);
        for (int node : unique) h += objectives.at(node).hessian(x);
        return h;
    };
    return damped_newton(residual, jacobian, Vector::Zero(n), 1e-10, 200, "centralized_optimum");
}

}  // namespace dwadmm
