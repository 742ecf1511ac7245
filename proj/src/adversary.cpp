#include "dwadmm/adversary.hpp"

#include <random>
#include <stdexcept>
#include <string>

namespace dwadmm {

namespace {

std::uint64_t splitmix64(std::uint64_t state) {
    state += 0x9E3779B97F4A7C15ULL;
    state = (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9ULL;
    state = (state ^ (state >> 27)) * 0x94D049BB133111EBULL;
    return state ^ (state >> 31);
}

void require_param_dim(const Vector& v, Eigen::Index cols, const char* name) {
    if (v.size() != cols) {
        throw std::invalid_argument(std::string("corrupt: ") + name + " has dimension " +
                                    std::to_string(v.size()) + ", state has " +
                                    std::to_string(cols) + " columns");
    }
}

}  // namespace

Corruption corrupt(const AttackSpec& spec, const Matrix& x_next, int iteration,
                   const std::deque<Matrix>& history) {
    const Eigen::Index rows = x_next.rows();
    const Eigen::Index cols = x_next.cols();
    for (int node : spec.byzantine) {
        if (node < 0 || node >= rows) {
            throw std::invalid_argument("corrupt: byzantine node " + std::to_string(node) +
                                        " out of range");
        }
    }

    Corruption result;
    result.error = Matrix::Zero(rows, cols);

    const bool active = spec.model != AttackModel::None && !spec.byzantine.empty() &&
                        iteration >= spec.start_iteration;
    if (active) {
        switch (spec.model) {
            case AttackModel::ConstantBias: {
                require_param_dim(spec.bias, cols, "bias");
                for (int node : spec.byzantine) result.error.row(node) = spec.bias.transpose();
                break;
            }
            case AttackModel::GaussianNoise: {
                // Seed depends only on (spec seed, iteration); nodes are
                // filled in ascending order, so reruns are bit-identical.
                std::mt19937_64 rng(splitmix64(spec.seed ^ splitmix64(
                                                   static_cast<std::uint64_t>(iteration) + 1)));
                std::normal_distribution<double> noise(0.0, spec.sigma);
                for (int node : spec.byzantine) {
                    for (Eigen::Index c = 0; c < cols; ++c) result.error(node, c) = noise(rng);
                }
                break;
            }
            case AttackModel::SignFlip: {
                for (int node : spec.byzantine) result.error.row(node) = -2.0 * x_next.row(node);
                break;
            }
            case AttackModel::Collusion: {
                require_param_dim(spec.target, cols, "target");
                for (int node : spec.byzantine) {
                    result.error.row(node) = spec.target.transpose() - x_next.row(node);
                }
                break;
            }
            case AttackModel::Replay: {
                if (spec.delay < 1) {
                    throw std::invalid_argument("corrupt: replay delay must be >= 1");
                }
                if (history.size() < static_cast<std::size_t>(spec.delay)) {
                    throw std::runtime_error("corrupt: replay needs " +
                                             std::to_string(spec.delay) +
                                             " past broadcasts, only " +
                                             std::to_string(history.size()) + " available");
                }
                const Matrix& past = history[history.size() - static_cast<std::size_t>(spec.delay)];
                if (past.rows() != rows || past.cols() != cols) {
                    throw std::invalid_argument("corrupt: replayed broadcast has wrong shape");
                }
                for (int node : spec.byzantine) {
                    result.error.row(node) = past.row(node) - x_next.row(node);
                }
                break;
            }
            case AttackModel::None:
                break;
        }
    }

    result.broadcast = x_next + result.error;
    return result;
}

}  // namespace dwadmm
