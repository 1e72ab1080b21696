#pragma once
// Exact posterior over the hypothesis variable by variable elimination.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "dxsens/compiled.hpp"
#include "dxsens/network.hpp"

namespace dxsens {

// The evidence has probability zero under the network.
class InconsistentEvidence : public std::runtime_error {
public:
    InconsistentEvidence() : std::runtime_error("evidence has probability zero under the network") {}
};

namespace detail {

// Dense table over `vars`, first variable most significant.
struct Factor {
    std::vector<std::size_t> vars;
    std::vector<std::size_t> cards;
    std::vector<double> values;

    bool mentions(std::size_t v) const { return std::find(vars.begin(), vars.end(), v) != vars.end(); }

    // Divide by the largest entry; returns false when every entry is zero.
    bool rescale() {
        const double peak = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
        if (!(peak > 0.0)) return false;
        for (double& x : values) x /= peak;
        return true;
    }
};

// Iterates the mixed-radix assignments of `cards` and tracks the flat offset
// into each operand factor.
inline Factor product(const std::vector<const Factor*>& operands) {
    Factor out;
    for (const Factor* f : operands)
        for (std::size_t i = 0; i < f->vars.size(); ++i)
            if (!out.mentions(f->vars[i])) {
                out.vars.push_back(f->vars[i]);
                out.cards.push_back(f->cards[i]);
            }
    const std::size_t width = out.vars.size();
    std::size_t total = 1;
    for (std::size_t c : out.cards) total *= c;

    // strides[k][i]: stride of out.vars[i] inside operand k (0 when absent).
    std::vector<std::vector<std::size_t>> strides(operands.size(), std::vector<std::size_t>(width, 0));
    for (std::size_t k = 0; k < operands.size(); ++k) {
        const Factor& f = *operands[k];
        std::size_t stride = 1;
        for (std::size_t i = f.vars.size(); i-- > 0;) {
            auto pos = std::find(out.vars.begin(), out.vars.end(), f.vars[i]) - out.vars.begin();
            strides[k][static_cast<std::size_t>(pos)] = stride;
            stride *= f.cards[i];
        }
    }

    out.values.assign(total, 0.0);
    std::vector<std::size_t> digit(width, 0);
    std::vector<std::size_t> offset(operands.size(), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        double x = 1.0;
        for (std::size_t k = 0; k < operands.size(); ++k) x *= operands[k]->values[offset[k]];
        out.values[flat] = x;
        // Advance the odometer, least significant digit last.
        for (std::size_t i = width; i-- > 0;) {
            if (++digit[i] < out.cards[i]) {
                for (std::size_t k = 0; k < operands.size(); ++k) offset[k] += strides[k][i];
                break;
            }
            for (std::size_t k = 0; k < operands.size(); ++k) offset[k] -= strides[k][i] * (out.cards[i] - 1);
            digit[i] = 0;
        }
    }
    return out;
}

inline Factor sum_out(const Factor& f, std::size_t var) {
    const auto pos = static_cast<std::size_t>(std::find(f.vars.begin(), f.vars.end(), var) - f.vars.begin());
    Factor out;
    for (std::size_t i = 0; i < f.vars.size(); ++i)
        if (i != pos) {
            out.vars.push_back(f.vars[i]);
            out.cards.push_back(f.cards[i]);
        }
    std::size_t inner = 1;
    for (std::size_t i = pos + 1; i < f.cards.size(); ++i) inner *= f.cards[i];
    const std::size_t card = f.cards[pos];
    const std::size_t outer = f.values.size() / (inner * card);
    out.values.assign(outer * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t c = 0; c < card; ++c)
            for (std::size_t i = 0; i < inner; ++i)
                out.values[o * inner + i] += f.values[(o * card + c) * inner + i];
    return out;
}

// Family factor of `var` (parents..., var) with observed variables fixed.
inline Factor family_factor(const CompiledNetwork& net, std::size_t var, const Observation& obs) {
    std::vector<std::size_t> scope = net.parents(var);
    scope.push_back(var);
    const ConditionalTable& table = net.table(var);

    Factor f;
    for (std::size_t v : scope)
        if (!obs.observed(v)) {
            f.vars.push_back(v);
            f.cards.push_back(net.cardinality(v));
        }
    std::size_t total = 1;
    for (std::size_t c : f.cards) total *= c;
    f.values.resize(total);

    std::vector<std::size_t> digit(f.vars.size(), 0);
    std::vector<int> assignment(net.size(), Observation::kUnobserved);
    for (std::size_t v : scope)
        if (obs.observed(v)) assignment[v] = obs.states[v];
    for (std::size_t flat = 0; flat < total; ++flat) {
        for (std::size_t i = 0; i < f.vars.size(); ++i) assignment[f.vars[i]] = static_cast<int>(digit[i]);
        f.values[flat] = table.rows[net.row_index(var, assignment)][static_cast<std::size_t>(assignment[var])];
        for (std::size_t i = f.vars.size(); i-- > 0;) {
            if (++digit[i] < f.cards[i]) break;
            digit[i] = 0;
        }
    }
    return f;
}

// Hypothesis, observed findings, and their ancestors. Everything else is
// barren and sums to one.
inline std::vector<bool> relevant_variables(const CompiledNetwork& net, const Observation& obs) {
    std::vector<bool> keep(net.size(), false);
    std::vector<std::size_t> frontier{net.hypothesis()};
    for (std::size_t v = 0; v < net.size(); ++v)
        if (obs.observed(v)) frontier.push_back(v);
    while (!frontier.empty()) {
        const std::size_t v = frontier.back();
        frontier.pop_back();
        if (keep[v]) continue;
        keep[v] = true;
        for (std::size_t p : net.parents(v)) frontier.push_back(p);
    }
    return keep;
}

// Greedy min-degree choice among `pending`, ties to the lowest index.
inline std::size_t pick_min_degree(const std::vector<Factor>& factors, const std::set<std::size_t>& pending) {
    std::size_t best = *pending.begin();
    std::size_t best_degree = SIZE_MAX;
    for (std::size_t v : pending) {
        std::set<std::size_t> neighbours;
        for (const Factor& f : factors)
            if (f.mentions(v))
                for (std::size_t u : f.vars)
                    if (u != v) neighbours.insert(u);
        if (neighbours.size() < best_degree) {
            best_degree = neighbours.size();
            best = v;
        }
    }
    return best;
}

}  // namespace detail

inline Distribution posterior(const CompiledNetwork& net, const Observation& obs) {
    const std::size_t hyp = net.hypothesis();
    if (obs.empty()) return {net.variable(hyp).name, net.table(hyp).rows.front()};

    const std::vector<bool> keep = detail::relevant_variables(net, obs);
    std::vector<detail::Factor> factors;
    std::set<std::size_t> pending;
    for (std::size_t v = 0; v < net.size(); ++v) {
        if (!keep[v]) continue;
        factors.push_back(detail::family_factor(net, v, obs));
        if (!factors.back().rescale()) throw InconsistentEvidence();
        if (v != hyp && !obs.observed(v)) pending.insert(v);
    }

    while (!pending.empty()) {
        const std::size_t var = detail::pick_min_degree(factors, pending);
        pending.erase(var);
        std::vector<const detail::Factor*> touching;
        std::vector<detail::Factor> rest;
        for (const auto& f : factors)
            if (f.mentions(var)) touching.push_back(&f);
        detail::Factor eliminated = detail::sum_out(detail::product(touching), var);
        if (!eliminated.rescale()) throw InconsistentEvidence();
        for (auto& f : factors)
            if (!f.mentions(var)) rest.push_back(std::move(f));
        rest.push_back(std::move(eliminated));
        factors = std::move(rest);
    }

    std::vector<const detail::Factor*> remaining;
    for (const auto& f : factors) remaining.push_back(&f);
    detail::Factor joint = detail::product(remaining);

    // Scope is now {hyp}; constant factors have already been folded in.
    const double total = std::accumulate(joint.values.begin(), joint.values.end(), 0.0);
    if (!(total > 0.0) || !std::isfinite(total)) throw InconsistentEvidence();
    Distribution out{net.variable(hyp).name, std::move(joint.values)};
    for (double& p : out.probabilities) p /= total;
    return out;
}

inline Distribution posterior(const CompiledNetwork& net, const Evidence& ev) {
    return posterior(net, net.resolve(ev));
}

inline Distribution posterior(const Network& net, const Evidence& ev) {
    return posterior(CompiledNetwork(net), ev);
}

}  // namespace dxsens
