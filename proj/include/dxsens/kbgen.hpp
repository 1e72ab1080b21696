#pragma once
// Synthetic diagnostic knowledge bases and sampled case sets.
//
// Layout of a generated network:
//   "disease"          hypothesis, states d0..d{H-1}
//   "f0".."f{F-1}"     regular findings, parents [disease] plus optional
//                      earlier findings (arcs only go from lower to higher index)
//   "marker_d<k>"      one dedicated finding per singleton disease
//
// The last `singleton_diseases` diseases are singletons. On every regular
// finding they copy the rows of a twin (non-singleton) disease, so the only
// thing separating a singleton from its twin is its marker.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dxsens/compiled.hpp"
#include "dxsens/harness.hpp"
#include "dxsens/network.hpp"
#include "dxsens/perturbation.hpp"
#include "dxsens/sampling.hpp"

namespace dxsens {

struct GenSpec {
    std::size_t n_diseases = 20;
    std::size_t n_findings = 40;
    std::size_t finding_arity = 2;
    double symptom_arc_density = 0.0;
    double prior_skew = 0.0;
    double discriminative_sharpness = 0.9;  // in [0, 1]; 1 is fully deterministic
    std::size_t singleton_diseases = 0;

    void check() const {
        if (n_diseases < 2) throw std::invalid_argument("GenSpec: need at least 2 diseases");
        if (n_findings < 1) throw std::invalid_argument("GenSpec: need at least 1 finding");
        if (finding_arity < 2) throw std::invalid_argument("GenSpec: finding arity must be >= 2");
        if (!(symptom_arc_density >= 0.0 && symptom_arc_density <= 1.0))
            throw std::invalid_argument("GenSpec: arc density must lie in [0, 1]");
        if (!(prior_skew >= 0.0) || !std::isfinite(prior_skew))
            throw std::invalid_argument("GenSpec: prior skew must be >= 0");
        if (!(discriminative_sharpness >= 0.0 && discriminative_sharpness <= 1.0))
            throw std::invalid_argument("GenSpec: sharpness must lie in [0, 1]");
        if (singleton_diseases >= n_diseases)
            throw std::invalid_argument("GenSpec: at least one disease must not be a singleton");
    }

    std::size_t first_singleton() const { return n_diseases - singleton_diseases; }
    std::size_t twin_of(std::size_t disease) const { return (disease - first_singleton()) % first_singleton(); }
};

inline constexpr const char* kHypothesisName = "disease";

inline std::string disease_label(std::size_t d) { return "d" + std::to_string(d); }

inline std::vector<std::string> finding_states(std::size_t arity) {
    if (arity == 2) return {"present", "absent"};
    std::vector<std::string> out;
    for (std::size_t i = 0; i < arity; ++i) out.push_back("s" + std::to_string(i));
    return out;
}

namespace detail {

template <std::uniform_random_bit_generator Gen>
std::vector<double> random_simplex_row(std::size_t width, Gen& gen) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> row(width);
    for (double& x : row) x = unit(gen);
    return renormalize(row);
}

// (1 - s) * row + s * onehot(argmax row)
inline std::vector<double> sharpen(std::vector<double> row, double s) {
    const auto peak = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = (1.0 - s) * row[i] + (i == peak ? s : 0.0);
    return renormalize(row);
}

// Marker row: `hit` on state 0 ("present"), the rest shared equally.
inline std::vector<double> marker_row(std::size_t width, double hit) {
    std::vector<double> row(width, (1.0 - hit) / static_cast<double>(width - 1));
    row[0] = hit;
    return row;
}

}  // namespace detail

template <std::uniform_random_bit_generator Gen>
Network generate_network(const GenSpec& spec, Gen& gen) {
    spec.check();
    Network net;
    const std::size_t H = spec.n_diseases;

    Variable hyp{kHypothesisName, VariableKind::hypothesis, {}};
    for (std::size_t d = 0; d < H; ++d) hyp.states.push_back(disease_label(d));
    net.variables.push_back(std::move(hyp));

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> prior(H);
    for (double& p : prior) p = std::pow(unit(gen), spec.prior_skew);
    net.tables.push_back({kHypothesisName, {}, {renormalize(prior)}});

    const auto states = finding_states(spec.finding_arity);
    std::bernoulli_distribution extra_arc(spec.symptom_arc_density);
    for (std::size_t f = 0; f < spec.n_findings; ++f) {
        const std::string name = "f" + std::to_string(f);
        net.variables.push_back({name, VariableKind::finding, states});

        ConditionalTable table{name, {kHypothesisName}, {}};
        for (std::size_t earlier = 0; earlier < f; ++earlier)
            if (extra_arc(gen)) table.parents.push_back("f" + std::to_string(earlier));

        // Each extra parent multiplies the configurations per disease.
        std::size_t configs = 1;
        for (std::size_t p = 1; p < table.parents.size(); ++p) configs *= spec.finding_arity;

        table.rows.resize(H * configs);
        for (std::size_t d = 0; d < spec.first_singleton(); ++d)
            for (std::size_t c = 0; c < configs; ++c)
                table.rows[d * configs + c] =
                    detail::sharpen(detail::random_simplex_row(spec.finding_arity, gen), spec.discriminative_sharpness);
        for (std::size_t d = spec.first_singleton(); d < H; ++d)
            for (std::size_t c = 0; c < configs; ++c)
                table.rows[d * configs + c] = table.rows[spec.twin_of(d) * configs + c];
        net.tables.push_back(std::move(table));
    }

    const double miss = 0.5 * (1.0 - spec.discriminative_sharpness);
    for (std::size_t d = spec.first_singleton(); d < H; ++d) {
        const std::string name = "marker_" + disease_label(d);
        net.variables.push_back({name, VariableKind::finding, states});
        ConditionalTable table{name, {kHypothesisName}, {}};
        for (std::size_t other = 0; other < H; ++other)
            table.rows.push_back(detail::marker_row(spec.finding_arity, other == d ? 1.0 - miss : miss));
        net.tables.push_back(std::move(table));
    }
    return net;
}

template <std::uniform_random_bit_generator Gen>
std::vector<Case> generate_cases(const Network& net, std::size_t n, double observed_fraction, Gen& gen) {
    if (n < 1) throw std::invalid_argument("generate_cases: n must be >= 1");
    if (!(observed_fraction > 0.0 && observed_fraction <= 1.0))
        throw std::invalid_argument("generate_cases: observed fraction must lie in (0, 1]");
    const CompiledNetwork compiled(net);
    const std::size_t hyp = compiled.hypothesis();
    std::bernoulli_distribution observe(observed_fraction);

    std::vector<Case> cases;
    cases.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<int> sample = forward_sample(compiled, gen);
        Case c;
        c.diagnosis = compiled.variable(hyp).states[static_cast<std::size_t>(sample[hyp])];
        for (std::size_t v = 0; v < compiled.size(); ++v) {
            if (v == hyp) continue;
            if (!observe(gen)) continue;
            const Variable& var = compiled.variable(v);
            c.evidence.assignments.emplace(var.name, var.states[static_cast<std::size_t>(sample[v])]);
        }
        cases.push_back(std::move(c));
    }
    return cases;
}

template <std::uniform_random_bit_generator Gen>
std::vector<Case> generate_cases(const Network& net, std::size_t n, Gen& gen) {
    return generate_cases(net, n, 1.0, gen);
}

struct KnowledgeBase {
    Network network;
    std::vector<Case> cases;
};

inline constexpr std::uint32_t kNetworkStreamTag = 0x4E455431;  // "NET1"
inline constexpr std::uint32_t kCaseStreamTag = 0x43415331;     // "CAS1"

// Network and cases from separate streams of one seed, so the case count
// never changes the generated network.
inline KnowledgeBase generate_knowledge_base(const GenSpec& spec, std::size_t n_cases, double observed_fraction,
                                             std::uint64_t seed) {
    auto net_stream = derive_stream(seed, {kNetworkStreamTag});
    auto case_stream = derive_stream(seed, {kCaseStreamTag});
    KnowledgeBase kb;
    kb.network = generate_network(spec, net_stream);
    kb.cases = generate_cases(kb.network, n_cases, observed_fraction, case_stream);
    return kb;
}

}  // namespace dxsens
