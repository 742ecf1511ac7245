#pragma once

#include "dwadmm/linalg.hpp"

#include <cstdint>
#include <deque>
#include <set>

namespace dwadmm {

enum class AttackModel {
    None,
    ConstantBias,   // adds a fixed vector to each Byzantine broadcast
    GaussianNoise,  // adds seeded N(0, sigma^2) noise per entry
    SignFlip,       // broadcasts the negated local value
    Collusion,      // all Byzantine nodes broadcast one shared target
    Replay          // re-broadcasts the node's value from `delay` iterations ago
};

/// Which nodes are Byzantine and how they corrupt their broadcasts.
/// Honest rows of the injected error are always exactly zero.
struct AttackSpec {
    std::set<int> byzantine;
    AttackModel model = AttackModel::None;
    Vector bias;
    double sigma = 1.0;
    Vector target;
    int delay = 1;
    int start_iteration = 0;
    std::uint64_t seed = 0;
};

struct Corruption {
    Matrix error;      // E, zero outside Byzantine rows
    Matrix broadcast;  // Z = X + E
};

/// Applies the attack to the freshly computed local values. `iteration` is
/// the index of the broadcast being produced; nothing is corrupted before
/// start_iteration. `history` holds prior broadcasts, oldest first, and
/// must reach back `delay` entries for Replay.
Corruption corrupt(const AttackSpec& spec, const Matrix& x_next, int iteration,
                   const std::deque<Matrix>& history);

}  // namespace dwadmm
