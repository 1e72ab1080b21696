#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "dxsens/compiled.hpp"

namespace dxsens {

// Index drawn from a probability row by inverse CDF. Zero-probability states
// are never returned.
template <std::uniform_random_bit_generator Gen>
std::size_t sample_state(std::span<const double> row, Gen& gen) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = unit(gen);
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i] <= 0.0) continue;
        last_positive = i;
        cumulative += row[i];
        if (u < cumulative) return i;
    }
    // u landed in the rounding gap above the accumulated mass.
    return last_positive;
}

// Complete assignment (state index per variable), drawn in topological order.
template <std::uniform_random_bit_generator Gen>
std::vector<int> forward_sample(const CompiledNetwork& net, Gen& gen) {
    std::vector<int> assignment(net.size(), Observation::kUnobserved);
    for (std::size_t v : net.topological_order()) {
        const auto& row = net.table(v).rows[net.row_index(v, assignment)];
        assignment[v] = static_cast<int>(sample_state(std::span<const double>(row), gen));
    }
    return assignment;
}

// Derived stream for a sub-task: identical inputs always give the same stream,
// distinct tuples give independent-looking streams.
inline std::mt19937_64 derive_stream(std::uint64_t master_seed, std::initializer_list<std::uint32_t> path) {
    std::vector<std::uint32_t> words{static_cast<std::uint32_t>(master_seed),
                                     static_cast<std::uint32_t>(master_seed >> 32)};
    words.insert(words.end(), path.begin(), path.end());
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

}  // namespace dxsens
