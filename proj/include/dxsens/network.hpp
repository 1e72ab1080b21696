#pragma once
// Discrete diagnostic Bayesian networks: data model and structural validation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace dxsens {

inline constexpr double kRowSumTolerance = 1e-9;

enum class VariableKind { hypothesis, finding };

inline std::string_view to_string(VariableKind kind) {
    return kind == VariableKind::hypothesis ? "hypothesis" : "finding";
}

struct Variable {
    std::string name;
    VariableKind kind = VariableKind::finding;
    std::vector<std::string> states;

    std::optional<std::size_t> state_index(std::string_view label) const {
        auto it = std::find(states.begin(), states.end(), label);
        if (it == states.end()) return std::nullopt;
        return static_cast<std::size_t>(it - states.begin());
    }

    bool operator==(const Variable&) const = default;
};

// rows[i][j] = P(owner = state j | parent configuration i). The row index is
// the mixed-radix encoding of the parent states, first parent most significant.
struct ConditionalTable {
    std::string variable;
    std::vector<std::string> parents;
    std::vector<std::vector<double>> rows;

    bool operator==(const ConditionalTable&) const = default;
};

// Tables reference variables by name, so a Network can hold invalid content
// (dangling parents, missing tables, cycles) and validate() can describe it.
struct Network {
    std::vector<Variable> variables;
    std::vector<ConditionalTable> tables;

    const Variable* find_variable(std::string_view name) const {
        for (const auto& v : variables)
            if (v.name == name) return &v;
        return nullptr;
    }

    const ConditionalTable* find_table(std::string_view owner) const {
        for (const auto& t : tables)
            if (t.variable == owner) return &t;
        return nullptr;
    }

    ConditionalTable* find_table(std::string_view owner) {
        for (auto& t : tables)
            if (t.variable == owner) return &t;
        return nullptr;
    }

    const Variable* hypothesis() const {
        for (const auto& v : variables)
            if (v.kind == VariableKind::hypothesis) return &v;
        return nullptr;
    }

    bool operator==(const Network&) const = default;
};

struct Evidence {
    std::map<std::string, std::string> assignments;

    bool empty() const { return assignments.empty(); }
    std::size_t size() const { return assignments.size(); }
    bool operator==(const Evidence&) const = default;
};

struct Distribution {
    std::string over;
    std::vector<double> probabilities;

    bool operator==(const Distribution&) const = default;
};

enum class ViolationKind {
    missing_hypothesis,
    duplicate_hypothesis,
    duplicate_variable,
    too_few_states,
    duplicate_state,
    missing_table,
    duplicate_table,
    table_for_unknown_variable,
    dangling_parent,
    duplicate_parent,
    hypothesis_has_parents,
    bad_row_count,
    bad_row_width,
    entry_out_of_range,
    row_not_normalized,
    cycle,
};

inline std::string_view to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::missing_hypothesis: return "MISSING_HYPOTHESIS";
        case ViolationKind::duplicate_hypothesis: return "DUPLICATE_HYPOTHESIS";
        case ViolationKind::duplicate_variable: return "DUPLICATE_VARIABLE";
        case ViolationKind::too_few_states: return "TOO_FEW_STATES";
        case ViolationKind::duplicate_state: return "DUPLICATE_STATE";
        case ViolationKind::missing_table: return "MISSING_TABLE";
        case ViolationKind::duplicate_table: return "DUPLICATE_TABLE";
        case ViolationKind::table_for_unknown_variable: return "TABLE_FOR_UNKNOWN_VARIABLE";
        case ViolationKind::dangling_parent: return "DANGLING_PARENT";
        case ViolationKind::duplicate_parent: return "DUPLICATE_PARENT";
        case ViolationKind::hypothesis_has_parents: return "HYPOTHESIS_HAS_PARENTS";
        case ViolationKind::bad_row_count: return "BAD_ROW_COUNT";
        case ViolationKind::bad_row_width: return "BAD_ROW_WIDTH";
        case ViolationKind::entry_out_of_range: return "ENTRY_OUT_OF_RANGE";
        case ViolationKind::row_not_normalized: return "ROW_NOT_NORMALIZED";
        case ViolationKind::cycle: return "CYCLE";
    }
    return "UNKNOWN";
}

struct Violation {
    ViolationKind kind;
    std::string variable;
    std::optional<std::size_t> row;
    std::string message;
};

inline std::ostream& operator<<(std::ostream& os, const Violation& v) {
    os << to_string(v.kind);
    if (!v.variable.empty()) os << " variable=" << v.variable;
    if (v.row) os << " row=" << *v.row;
    if (!v.message.empty()) os << ": " << v.message;
    return os;
}

using ValidationReport = std::vector<Violation>;

class InvalidNetwork : public std::runtime_error {
public:
    explicit InvalidNetwork(ValidationReport report)
        : std::runtime_error(describe(report)), report_(std::move(report)) {}

    const ValidationReport& report() const noexcept { return report_; }

private:
    static std::string describe(const ValidationReport& report) {
        std::ostringstream os;
        os << "invalid network (" << report.size() << " violation"
           << (report.size() == 1 ? "" : "s") << ")";
        if (!report.empty()) os << ": " << report.front();
        return os.str();
    }

    ValidationReport report_;
};

namespace detail {

// Tarjan SCC over resolvable parent links; one entry per cyclic component.
inline std::vector<std::vector<std::size_t>> cyclic_components(
    const std::vector<std::vector<std::size_t>>& parents) {
    const std::size_t n = parents.size();
    std::vector<std::size_t> index(n, SIZE_MAX), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> out;
    std::size_t counter = 0;

    // Iterative DFS; frames hold (node, next edge position).
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != SIZE_MAX) continue;
        std::vector<std::pair<std::size_t, std::size_t>> frames{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            auto& [v, pos] = frames.back();
            if (pos < parents[v].size()) {
                const std::size_t w = parents[v][pos++];
                if (index[w] == SIZE_MAX) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::vector<std::size_t> component;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    component.push_back(w);
                } while (w != v);
                const bool self_loop =
                    std::find(parents[v].begin(), parents[v].end(), v) != parents[v].end();
                if (component.size() > 1 || self_loop) {
                    std::sort(component.begin(), component.end());
                    out.push_back(std::move(component));
                }
            }
            const std::size_t finished = v;
            frames.pop_back();
            if (!frames.empty()) {
                auto& parent_frame = frames.back();
                low[parent_frame.first] = std::min(low[parent_frame.first], low[finished]);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

// Total: never throws on malformed content, and returns an empty report iff
// every Network and ConditionalTable invariant holds.
inline ValidationReport validate(const Network& net) {
    ValidationReport report;
    auto add = [&](ViolationKind kind, std::string variable, std::optional<std::size_t> row,
                   std::string message) {
        report.push_back({kind, std::move(variable), row, std::move(message)});
    };

    std::unordered_map<std::string, std::size_t> by_name;
    std::size_t hypothesis_count = 0;
    for (std::size_t i = 0; i < net.variables.size(); ++i) {
        const auto& v = net.variables[i];
        if (!by_name.emplace(v.name, i).second)
            add(ViolationKind::duplicate_variable, v.name, std::nullopt, "variable declared more than once");
        if (v.kind == VariableKind::hypothesis) ++hypothesis_count;
        if (v.states.size() < 2)
            add(ViolationKind::too_few_states, v.name, std::nullopt,
                "needs at least 2 states, has " + std::to_string(v.states.size()));
        std::unordered_set<std::string> seen;
        for (const auto& s : v.states)
            if (!seen.insert(s).second)
                add(ViolationKind::duplicate_state, v.name, std::nullopt, "state '" + s + "' repeated");
    }
    if (hypothesis_count == 0)
        add(ViolationKind::missing_hypothesis, "", std::nullopt, "no variable has kind hypothesis");
    if (hypothesis_count > 1)
        add(ViolationKind::duplicate_hypothesis, "", std::nullopt,
            std::to_string(hypothesis_count) + " variables have kind hypothesis");

    std::vector<std::size_t> table_count(net.variables.size(), 0);
    std::vector<std::vector<std::size_t>> parent_links(net.variables.size());

    for (const auto& t : net.tables) {
        auto owner_it = by_name.find(t.variable);
        if (owner_it == by_name.end()) {
            add(ViolationKind::table_for_unknown_variable, t.variable, std::nullopt,
                "table owner is not a declared variable");
            continue;
        }
        const std::size_t owner = owner_it->second;
        const Variable& owner_var = net.variables[owner];
        if (++table_count[owner] > 1) {
            add(ViolationKind::duplicate_table, t.variable, std::nullopt, "more than one table");
            continue;
        }
        if (owner_var.kind == VariableKind::hypothesis && !t.parents.empty())
            add(ViolationKind::hypothesis_has_parents, t.variable, std::nullopt,
                "hypothesis variable must be a root");

        bool parents_resolved = true;
        std::size_t expected_rows = 1;
        std::unordered_set<std::string> seen_parents;
        for (const auto& p : t.parents) {
            if (!seen_parents.insert(p).second)
                add(ViolationKind::duplicate_parent, t.variable, std::nullopt, "parent '" + p + "' repeated");
            auto p_it = by_name.find(p);
            if (p_it == by_name.end()) {
                add(ViolationKind::dangling_parent, t.variable, std::nullopt,
                    "parent '" + p + "' is not a declared variable");
                parents_resolved = false;
                continue;
            }
            parent_links[owner].push_back(p_it->second);
            expected_rows *= std::max<std::size_t>(net.variables[p_it->second].states.size(), 1);
        }

        if (parents_resolved && t.rows.size() != expected_rows)
            add(ViolationKind::bad_row_count, t.variable, std::nullopt,
                "expected " + std::to_string(expected_rows) + " rows, found " + std::to_string(t.rows.size()));

        const std::size_t width = owner_var.states.size();
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const auto& row = t.rows[r];
            if (row.size() != width) {
                add(ViolationKind::bad_row_width, t.variable, r,
                    "expected " + std::to_string(width) + " entries, found " + std::to_string(row.size()));
                continue;
            }
            bool in_range = true;
            double sum = 0.0;
            for (double p : row) {
                if (!(p >= 0.0 && p <= 1.0)) in_range = false;
                sum += p;
            }
            if (!in_range) {
                add(ViolationKind::entry_out_of_range, t.variable, r, "entry outside [0, 1]");
                continue;
            }
            if (!(std::abs(sum - 1.0) <= kRowSumTolerance)) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "row sums to " << sum;
                add(ViolationKind::row_not_normalized, t.variable, r, msg.str());
            }
        }
    }

    for (std::size_t i = 0; i < net.variables.size(); ++i)
        if (table_count[i] == 0)
            add(ViolationKind::missing_table, net.variables[i].name, std::nullopt, "no table");

    for (const auto& component : detail::cyclic_components(parent_links)) {
        std::string members;
        for (std::size_t idx : component) {
            if (!members.empty()) members += ", ";
            members += net.variables[idx].name;
        }
        add(ViolationKind::cycle, net.variables[component.front()].name, std::nullopt,
            "directed cycle through {" + members + "}");
    }
    return report;
}

}  // namespace dxsens
