#pragma once
// JSON interchange for networks and case sets.
//
// Network: {"variables":[{"name","kind","states":[...]}],
//           "tables":[{"variable","parents":[...],"rows":[[...],...]}]}
// Cases:   [{"evidence":{variable: state, ...}, "diagnosis": state}, ...]
//
// Reading checks shape and types only; semantic checks belong to validate().

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dxsens/harness.hpp"
#include "dxsens/network.hpp"

namespace dxsens {

// Unreadable, unwritable, or malformed input.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

using nlohmann::json;

inline const json& field(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw IoError(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw IoError(path + ": missing field '" + key + "'");
    return *it;
}

inline std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw IoError(path + ": expected a string");
    return j.get<std::string>();
}

inline double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw IoError(path + ": expected a number");
    return j.get<double>();
}

inline const json& as_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw IoError(path + ": expected an array");
    return j;
}

inline std::vector<std::string> string_list(const json& j, const std::string& path) {
    std::vector<std::string> out;
    const json& arr = as_array(j, path);
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(as_string(arr[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline json parse_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // nlohmann reports "at line L, column C".
        throw IoError(source + ": " + e.what());
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError(path + ": read failed");
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << contents;
    out.flush();
    if (!out) throw IoError(path + ": write failed");
}

}  // namespace detail

inline Network network_from_json(const nlohmann::json& doc, const std::string& source = "network") {
    using detail::field;
    Network net;
    const auto& vars = detail::as_array(field(doc, "variables", source), source + ".variables");
    for (std::size_t i = 0; i < vars.size(); ++i) {
        const std::string path = source + ".variables[" + std::to_string(i) + "]";
        Variable v;
        v.name = detail::as_string(field(vars[i], "name", path), path + ".name");
        const std::string kind = detail::as_string(field(vars[i], "kind", path), path + ".kind");
        if (kind == "hypothesis")
            v.kind = VariableKind::hypothesis;
        else if (kind == "finding")
            v.kind = VariableKind::finding;
        else
            throw IoError(path + ".kind: expected \"hypothesis\" or \"finding\", got \"" + kind + "\"");
        v.states = detail::string_list(field(vars[i], "states", path), path + ".states");
        net.variables.push_back(std::move(v));
    }
    const auto& tables = detail::as_array(field(doc, "tables", source), source + ".tables");
    for (std::size_t i = 0; i < tables.size(); ++i) {
        const std::string path = source + ".tables[" + std::to_string(i) + "]";
        ConditionalTable t;
        t.variable = detail::as_string(field(tables[i], "variable", path), path + ".variable");
        t.parents = detail::string_list(field(tables[i], "parents", path), path + ".parents");
        const auto& rows = detail::as_array(field(tables[i], "rows", path), path + ".rows");
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const std::string row_path = path + ".rows[" + std::to_string(r) + "]";
            const auto& row = detail::as_array(rows[r], row_path);
            std::vector<double> values;
            for (std::size_t k = 0; k < row.size(); ++k)
                values.push_back(detail::as_number(row[k], row_path + "[" + std::to_string(k) + "]"));
            t.rows.push_back(std::move(values));
        }
        net.tables.push_back(std::move(t));
    }
    return net;
}

inline nlohmann::json network_to_json(const Network& net) {
    nlohmann::json doc;
    doc["variables"] = nlohmann::json::array();
    for (const auto& v : net.variables)
        doc["variables"].push_back({{"name", v.name}, {"kind", std::string(to_string(v.kind))}, {"states", v.states}});
    doc["tables"] = nlohmann::json::array();
    for (const auto& t : net.tables)
        doc["tables"].push_back({{"variable", t.variable}, {"parents", t.parents}, {"rows", t.rows}});
    return doc;
}

inline Network parse_network(const std::string& text, const std::string& source = "network") {
    return network_from_json(detail::parse_text(text, source), source);
}

inline std::string serialize_network(const Network& net) { return network_to_json(net).dump(2) + "\n"; }

inline Network read_network(const std::string& path) { return parse_network(detail::read_file(path), path); }

inline void write_network(const std::string& path, const Network& net) {
    detail::write_file(path, serialize_network(net));
}

inline std::vector<Case> cases_from_json(const nlohmann::json& doc, const std::string& source = "cases") {
    std::vector<Case> out;
    const auto& arr = detail::as_array(doc, source);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string path = source + "[" + std::to_string(i) + "]";
        Case c;
        const auto& ev = detail::field(arr[i], "evidence", path);
        if (!ev.is_object()) throw IoError(path + ".evidence: expected an object");
        for (auto it = ev.begin(); it != ev.end(); ++it)
            c.evidence.assignments.emplace(it.key(), detail::as_string(it.value(), path + ".evidence." + it.key()));
        c.diagnosis = detail::as_string(detail::field(arr[i], "diagnosis", path), path + ".diagnosis");
        out.push_back(std::move(c));
    }
    return out;
}

inline nlohmann::json cases_to_json(const std::vector<Case>& cases) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& c : cases) {
        nlohmann::json ev = nlohmann::json::object();
        for (const auto& [k, v] : c.evidence.assignments) ev[k] = v;
        doc.push_back({{"evidence", ev}, {"diagnosis", c.diagnosis}});
    }
    return doc;
}

inline std::vector<Case> parse_cases(const std::string& text, const std::string& source = "cases") {
    return cases_from_json(detail::parse_text(text, source), source);
}

inline std::string serialize_cases(const std::vector<Case>& cases) { return cases_to_json(cases).dump(2) + "\n"; }

inline std::vector<Case> read_cases(const std::string& path) { return parse_cases(detail::read_file(path), path); }

inline void write_cases(const std::string& path, const std::vector<Case>& cases) {
    detail::write_file(path, serialize_cases(cases));
}

}  // namespace dxsens
