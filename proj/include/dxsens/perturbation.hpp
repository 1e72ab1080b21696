#pragma once
// Parameter variants of a network: additive noise on conditional tables,
// fully random conditional tables, and prior substitution. Every operation
// returns a fresh network and leaves structure and (except for
// set_uniform_priors) the hypothesis prior untouched.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dxsens/network.hpp"

namespace dxsens {

enum class NoiseKind { normal, uniform };

inline constexpr double kDefaultUniformHalfWidth = 0.5;

struct NoiseSpec {
    NoiseKind kind = NoiseKind::normal;
    double sigma = 0.0;       // normal: standard deviation
    double half_width = 0.0;  // uniform: draws lie in [-half_width, +half_width]
    double mu = 0.0;          // fixed

    static NoiseSpec normal(double sigma) { return {NoiseKind::normal, sigma, 0.0, 0.0}; }
    static NoiseSpec uniform(double half_width = kDefaultUniformHalfWidth) {
        return {NoiseKind::uniform, 0.0, half_width, 0.0};
    }

    bool is_zero() const { return kind == NoiseKind::normal ? sigma == 0.0 : half_width == 0.0; }

    void check() const {
        if (!(sigma >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");
        if (!(half_width >= 0.0)) throw std::invalid_argument("noise half-width must be >= 0");
        if (mu != 0.0) throw std::invalid_argument("noise mean is fixed at 0");
    }
};

// Stateful source of pre-clamp perturbations for one NoiseSpec.
class NoiseSource {
public:
    explicit NoiseSource(const NoiseSpec& spec)
        : spec_((spec.check(), spec)),
          normal_(0.0, spec.sigma > 0.0 ? spec.sigma : 1.0),
          uniform_(-spec.half_width, spec.half_width) {}

    template <std::uniform_random_bit_generator Gen>
    double operator()(Gen& gen) {
        if (spec_.is_zero()) return 0.0;
        return spec_.kind == NoiseKind::normal ? normal_(gen) : uniform_(gen);
    }

private:
    NoiseSpec spec_;
    std::normal_distribution<double> normal_;
    std::uniform_real_distribution<double> uniform_;
};

enum class RandomDistribution { uniform, normal };

// Generator for replacement rows. uniform: each entry ~ U(lower, upper);
// normal: each entry ~ N(1/k, normal_sd) for a k-state row. Entries are then
// clamped to [0, 1] and the row renormalized.
struct RandomizationSpec {
    RandomDistribution distribution = RandomDistribution::uniform;
    double lower = 0.0;
    double upper = 1.0;
    double normal_sd = 0.15;

    void check() const {
        if (distribution == RandomDistribution::uniform && !(lower <= upper))
            throw std::invalid_argument("randomization bounds must satisfy lower <= upper");
        if (distribution == RandomDistribution::normal && !(normal_sd > 0.0))
            throw std::invalid_argument("randomization normal_sd must be > 0");
    }
};

inline double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

// row / sum(row); the uniform vector when the sum is zero.
inline std::vector<double> renormalize(std::span<const double> row) {
    if (row.empty()) throw std::invalid_argument("renormalize: empty row");
    const double total = std::accumulate(row.begin(), row.end(), 0.0);
    std::vector<double> out(row.begin(), row.end());
    if (!(total > 0.0)) {
        std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(out.size()));
        return out;
    }
    for (double& p : out) p /= total;
    return out;
}

inline std::vector<double> renormalize(const std::vector<double>& row) {
    return renormalize(std::span<const double>(row));
}

namespace detail {

inline bool is_finding_table(const Network& net, const ConditionalTable& t) {
    const Variable* owner = net.find_variable(t.variable);
    return owner != nullptr && owner->kind == VariableKind::finding;
}

// Rewrites every entry of every finding row as clamp(draw(entry)), then
// renormalizes. Visits tables, rows, and entries in stored order.
template <class EntryMap>
Network map_finding_entries(const Network& input, EntryMap&& draw) {
    Network out = input;
    for (auto& table : out.tables) {
        if (!is_finding_table(out, table)) continue;
        for (auto& row : table.rows) {
            for (double& p : row) p = clamp_probability(draw(p, row.size()));
            row = renormalize(row);
        }
    }
    return out;
}

}  // namespace detail

template <std::uniform_random_bit_generator Gen>
Network add_noise(const Network& net, const NoiseSpec& spec, Gen& gen) {
    spec.check();
    if (spec.is_zero()) return net;
    NoiseSource noise(spec);
    return detail::map_finding_entries(net, [&](double p, std::size_t) { return p + noise(gen); });
}

template <std::uniform_random_bit_generator Gen>
Network add_normal_noise(const Network& net, double sigma, Gen& gen) {
    return add_noise(net, NoiseSpec::normal(sigma), gen);
}

template <std::uniform_random_bit_generator Gen>
Network add_uniform_noise(const Network& net, double half_width, Gen& gen) {
    return add_noise(net, NoiseSpec::uniform(half_width), gen);
}

template <std::uniform_random_bit_generator Gen>
Network randomize_parameters(const Network& net, const RandomizationSpec& spec, Gen& gen) {
    spec.check();
    if (spec.distribution == RandomDistribution::uniform) {
        std::uniform_real_distribution<double> entry(spec.lower, spec.upper);
        return detail::map_finding_entries(net, [&](double, std::size_t) { return entry(gen); });
    }
    std::normal_distribution<double> entry(0.0, spec.normal_sd);
    return detail::map_finding_entries(
        net, [&](double, std::size_t width) { return 1.0 / static_cast<double>(width) + entry(gen); });
}

inline Network set_uniform_priors(const Network& net) {
    Network out = net;
    const Variable* hyp = out.hypothesis();
    if (hyp == nullptr) throw std::invalid_argument("set_uniform_priors: network has no hypothesis variable");
    ConditionalTable* prior = out.find_table(hyp->name);
    if (prior == nullptr || prior->rows.size() != 1)
        throw std::invalid_argument("set_uniform_priors: hypothesis prior table malformed");
    const std::size_t h = hyp->states.size();
    prior->rows.front().assign(h, 1.0 / static_cast<double>(h));
    return out;
}

}  // namespace dxsens
