#pragma once
// Validated, index-resolved view of a Network. Immutable once built, so all
// queries on it are safe to run concurrently.

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "dxsens/network.hpp"

namespace dxsens {

class InvalidEvidence : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Observed state index per variable, or kUnobserved.
struct Observation {
    static constexpr int kUnobserved = -1;
    std::vector<int> states;

    bool observed(std::size_t var) const { return states[var] != kUnobserved; }
    bool empty() const {
        for (int s : states)
            if (s != kUnobserved) return false;
        return true;
    }
};

class CompiledNetwork {
public:
    // Throws InvalidNetwork when validate() reports anything.
    explicit CompiledNetwork(Network net) : net_(std::make_shared<const Network>(std::move(net))) {
        ValidationReport report = validate(*net_);
        if (!report.empty()) throw InvalidNetwork(std::move(report));
        build_index();
    }

    const Network& network() const { return *net_; }
    std::size_t size() const { return cards_.size(); }
    std::size_t hypothesis() const { return hypothesis_; }
    std::size_t cardinality(std::size_t var) const { return cards_[var]; }
    const std::vector<std::size_t>& parents(std::size_t var) const { return parents_[var]; }
    const std::vector<std::size_t>& children(std::size_t var) const { return children_[var]; }
    const std::vector<std::size_t>& topological_order() const { return topo_; }
    const Variable& variable(std::size_t var) const { return net_->variables[var]; }
    const ConditionalTable& table(std::size_t var) const { return net_->tables[table_of_[var]]; }

    std::size_t index_of(const std::string& name) const {
        auto it = by_name_.find(name);
        if (it == by_name_.end()) throw InvalidEvidence("unknown variable '" + name + "'");
        return it->second;
    }

    bool contains(const std::string& name) const { return by_name_.count(name) != 0; }

    // Row of `var`'s table selected by the parent states in `assignment`.
    std::size_t row_index(std::size_t var, const std::vector<int>& assignment) const {
        std::size_t row = 0;
        for (std::size_t p : parents_[var]) row = row * cards_[p] + static_cast<std::size_t>(assignment[p]);
        return row;
    }

    Observation resolve(const Evidence& ev) const {
        Observation obs{std::vector<int>(size(), Observation::kUnobserved)};
        for (const auto& [name, label] : ev.assignments) {
            const std::size_t var = index_of(name);
            const Variable& v = variable(var);
            if (v.kind == VariableKind::hypothesis)
                throw InvalidEvidence("evidence may not assign the hypothesis variable '" + name + "'");
            auto state = v.state_index(label);
            if (!state) throw InvalidEvidence("'" + label + "' is not a state of '" + name + "'");
            obs.states[var] = static_cast<int>(*state);
        }
        return obs;
    }

    Evidence to_evidence(const Observation& obs) const {
        Evidence ev;
        for (std::size_t v = 0; v < size(); ++v)
            if (obs.observed(v))
                ev.assignments.emplace(variable(v).name, variable(v).states[static_cast<std::size_t>(obs.states[v])]);
        return ev;
    }

private:
    void build_index() {
        const auto& vars = net_->variables;
        const std::size_t n = vars.size();
        for (std::size_t i = 0; i < n; ++i) {
            by_name_.emplace(vars[i].name, i);
            cards_.push_back(vars[i].states.size());
            if (vars[i].kind == VariableKind::hypothesis) hypothesis_ = i;
        }
        table_of_.assign(n, 0);
        parents_.assign(n, {});
        children_.assign(n, {});
        for (std::size_t t = 0; t < net_->tables.size(); ++t) {
            const std::size_t owner = by_name_.at(net_->tables[t].variable);
            table_of_[owner] = t;
            for (const auto& p : net_->tables[t].parents) {
                const std::size_t pi = by_name_.at(p);
                parents_[owner].push_back(pi);
                children_[pi].push_back(owner);
            }
        }
        // Kahn's algorithm, lowest index first for a stable order.
        std::vector<std::size_t> indegree(n);
        for (std::size_t v = 0; v < n; ++v) indegree[v] = parents_[v].size();
        std::vector<std::size_t> ready;
        for (std::size_t v = n; v-- > 0;)
            if (indegree[v] == 0) ready.push_back(v);
        while (!ready.empty()) {
            auto it = std::min_element(ready.begin(), ready.end());
            const std::size_t v = *it;
            ready.erase(it);
            topo_.push_back(v);
            for (std::size_t c : children_[v])
                if (--indegree[c] == 0) ready.push_back(c);
        }
    }

    std::shared_ptr<const Network> net_;
    std::unordered_map<std::string, std::size_t> by_name_;
    std::vector<std::size_t> cards_;
    std::vector<std::size_t> table_of_;
    std::vector<std::vector<std::size_t>> parents_;
    std::vector<std::vector<std::size_t>> children_;
    std::vector<std::size_t> topo_;
    std::size_t hypothesis_ = 0;
};

}  // namespace dxsens
