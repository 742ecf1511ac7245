#include "dwadmm/objective.hpp"

#include <doctest.h>

#include <random>

using namespace dwadmm;

namespace {

Matrix random_psd(int n, std::mt19937_64& rng, double ridge) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix a(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) a(r, c) = gauss(rng);
    }
    return Matrix(a.transpose() * a + ridge * Matrix::Identity(n, n));
}

// Independent oracle: central differences of the objective value.
Vector finite_difference_gradient(const LocalObjective& obj, const Vector& x) {
    Vector g(x.size());
    const double step = 1e-6 * std::max(1.0, x.norm());
    for (Eigen::Index c = 0; c < x.size(); ++c) {
        Vector lo = x, hi = x;
        lo(c) -= step;
        hi(c) += step;
        g(c) = (obj.value(hi) - obj.value(lo)) / (2.0 * step);
    }
    return g;
}

// Independent oracle for the primal subproblem: plain Newton with its own
// stopping rule, no shared code with solve_primal.
Vector brute_force_primal(const LocalObjective& obj, double degree, const Vector& rhs) {
    Vector x = Vector::Zero(obj.dim());
    for (int iter = 0; iter < 500; ++iter) {
        const Vector g = obj.gradient(x) + 2.0 * degree * x - rhs;
        if (g.norm() <= 1e-12 * std::max(1.0, rhs.norm())) break;
        const Matrix h =
            obj.hessian(x) + 2.0 * degree * Matrix::Identity(obj.dim(), obj.dim());
        x -= h.fullPivLu().solve(g);
    }
    return x;
}

LocalObjective tiny_logistic() {
    Matrix features(4, 2);
    features << 1.0, 0.5, -0.8, 1.2, 0.3, -1.0, -1.1, -0.4;
    Vector labels(4);
    labels << 1, -1, 1, -1;
    return LocalObjective::logistic(features, labels, 0.1);
}

}  // namespace

TEST_SUITE_BEGIN("objective");

TEST_CASE("gradient matrix basics") {
    std::vector<LocalObjective> locals;
    Vector centers(3);
    centers << 1.0, 2.0, 3.0;
    for (int i = 0; i < 3; ++i) locals.push_back(LocalObjective::scalar_quadratic(centers(i)));
    const ObjectiveSet set(std::move(locals));

    // Gradient vanishes at the per-node minimizers.
    CHECK(grad_matrix(set, Matrix(centers)).norm() == doctest::Approx(0.0));

    // f(x) = x^2/2 has identity gradient.
    std::vector<LocalObjective> pure;
    for (int i = 0; i < 3; ++i) {
        pure.push_back(LocalObjective::quadratic(Matrix::Identity(1, 1), Vector::Zero(1)));
    }
    const ObjectiveSet pure_set(std::move(pure));
    Matrix x(3, 1);
    x << -1.0, 0.5, 7.0;
    CHECK((grad_matrix(pure_set, x) - x).norm() == doctest::Approx(0.0));

    CHECK_THROWS_AS(grad_matrix(set, Matrix::Zero(2, 1)), std::invalid_argument);
}

TEST_CASE("logistic gradient matches central finite differences") {
    const LocalObjective obj = tiny_logistic();
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int probe = 0; probe < 20; ++probe) {
        Vector x(2);
        x << gauss(rng), gauss(rng);
        const Vector analytic = obj.gradient(x);
        const Vector numeric = finite_difference_gradient(obj, x);
        CHECK((analytic - numeric).norm() <= 1e-5 * std::max(1.0, analytic.norm()));
    }
}

TEST_CASE("primal subproblem on analytically forced cases") {
    const LocalObjective obj = LocalObjective::scalar_quadratic(3.0);
    Vector rhs(1);

    rhs << 0.0;  // (x - 3) + 2x = 0  =>  x = 1
    CHECK(solve_primal(obj, 1.0, rhs)(0) == doctest::Approx(1.0));

    rhs << 3.0;  // (x - 3) + 2x = 3  =>  x = 2
    CHECK(solve_primal(obj, 1.0, rhs)(0) == doctest::Approx(2.0));

    rhs << 0.0;  // isolated node: plain local minimizer
    CHECK(solve_primal(obj, 0.0, rhs)(0) == doctest::Approx(3.0));

    CHECK_THROWS_AS(solve_primal(obj, -1.0, rhs), std::invalid_argument);
    CHECK_THROWS_AS(solve_primal(obj, 1.0, Vector::Zero(2)), std::invalid_argument);
}

TEST_CASE("primal residual contract over random quadratics") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> degree_dist(0.0, 10.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 10);
        const Matrix quad = random_psd(n, rng, 0.5);
        Vector linear(n), rhs(n);
        for (int c = 0; c < n; ++c) {
            linear(c) = 3.0 * gauss(rng);
            rhs(c) = 3.0 * gauss(rng);
        }
        const LocalObjective obj = LocalObjective::quadratic(quad, linear);
        const double degree = degree_dist(rng);
        const Vector x = solve_primal(obj, degree, rhs);
        const double residual = (obj.gradient(x) + 2.0 * degree * x - rhs).norm();
        CHECK(residual <= 1e-9 * std::max(1.0, rhs.norm()));
    }
}

TEST_CASE("primal solver agrees with an independent Newton oracle") {
    std::mt19937_64 rng(19);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const Matrix quad = random_psd(n, rng, 0.3);
        Vector linear(n), rhs(n);
        for (int c = 0; c < n; ++c) {
            linear(c) = gauss(rng);
            rhs(c) = gauss(rng);
        }
        const LocalObjective obj = LocalObjective::quadratic(quad, linear);
        const double degree = 0.5 * (trial % 5);
        CHECK((solve_primal(obj, degree, rhs) - brute_force_primal(obj, degree, rhs)).norm() <=
              1e-8);
    }

    // Newton path (logistic) against the same oracle.
    const LocalObjective logistic = tiny_logistic();
    Vector rhs(2);
    rhs << 0.4, -0.7;
    CHECK((solve_primal(logistic, 1.5, rhs) - brute_force_primal(logistic, 1.5, rhs)).norm() <=
          1e-8);
    CHECK((solve_primal(logistic, 0.0, rhs) - brute_force_primal(logistic, 0.0, rhs)).norm() <=
          1e-8);
}

TEST_CASE("centralized optimum on scalar quadratics is the mean") {
    std::vector<LocalObjective> locals;
    for (double c : {1.0, 2.0, 3.0}) locals.push_back(LocalObjective::scalar_quadratic(c));
    const ObjectiveSet set(std::move(locals));
    CHECK(centralized_optimum(set, {0, 1, 2})(0) == doctest::Approx(2.0));
    CHECK(centralized_optimum(set, {2})(0) == doctest::Approx(3.0));
    CHECK_THROWS_AS(centralized_optimum(set, {}), std::invalid_argument);
}

TEST_CASE("centralized optimum satisfies the gradient-norm oracle") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 5);
        const int nodes = 2 + static_cast<int>(rng() % 6);
        std::vector<LocalObjective> locals;
        for (int node = 0; node < nodes; ++node) {
            Vector linear(n);
            for (int c = 0; c < n; ++c) linear(c) = 2.0 * gauss(rng);
            locals.push_back(LocalObjective::quadratic(random_psd(n, rng, 0.4), linear));
        }
        const ObjectiveSet set(std::move(locals));
        std::vector<int> subset;
        for (int node = 0; node < nodes; ++node) subset.push_back(node);
        const Vector x_star = centralized_optimum(set, subset);
        Vector total = Vector::Zero(n);
        for (int node : subset) total += set.at(node).gradient(x_star);
        CHECK(total.norm() <= 1e-10 * std::max(1.0, x_star.norm()));
    }
}

TEST_CASE("centralized optimum is consensual ground truth") {
    std::vector<LocalObjective> locals;
    for (double c : {-1.0, 4.0, 6.0}) locals.push_back(LocalObjective::scalar_quadratic(c));
    const ObjectiveSet set(std::move(locals));
    const Vector x_star = centralized_optimum(set, {0, 1, 2});
    const Matrix replicated = Matrix::Ones(3, 1) * x_star.transpose();
    const Matrix grads = grad_matrix(set, replicated);
    CHECK((Matrix::Ones(1, 3) * grads).norm() <= 1e-9);
}

TEST_CASE("unbounded problems are detected") {
    // Linear objective: gradient never vanishes, iterates run away.
    auto value = [](const Vector& x) { return -x(0); };
    auto grad = [](const Vector&) {
        Vector g(1);
        g << -1.0;
        return g;
    };
    std::vector<LocalObjective> locals;
    locals.push_back(LocalObjective::smooth(1, value, grad));
    const ObjectiveSet set(std::move(locals));
    CHECK_THROWS(centralized_optimum(set, {0}));
}

TEST_SUITE_END();
