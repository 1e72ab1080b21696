#include <cstdio>
#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "dxsens/io.hpp"
#include "dxsens/kbgen.hpp"
#include "test_support.hpp"

using namespace dxsens;

TEST(NetworkJson, ParsesDocumentedLayout) {
    const std::string text = R"({
      "variables": [
        {"name": "D", "kind": "hypothesis", "states": ["d1", "d2"]},
        {"name": "F", "kind": "finding", "states": ["present", "absent"]}
      ],
      "tables": [
        {"variable": "D", "parents": [], "rows": [[0.6, 0.4]]},
        {"variable": "F", "parents": ["D"], "rows": [[0.9, 0.1], [0.2, 0.8]]}
      ]
    })";
    EXPECT_EQ(parse_network(text), dxsens::testing::two_node_network());
}

TEST(NetworkJson, AcceptsSeventeenSignificantDigits) {
    const std::string text = R"({"variables":[{"name":"D","kind":"hypothesis","states":["a","b"]}],
      "tables":[{"variable":"D","parents":[],"rows":[[0.12345678901234567,0.87654321098765433]]}]})";
    const Network net = parse_network(text);
    EXPECT_EQ(net.tables[0].rows[0][0], 0.12345678901234567);
}

TEST(NetworkJson, RoundTripIsBitExact) {
    std::mt19937_64 gen(12);
    for (int i = 0; i < 50; ++i) {
        GenSpec spec;
        spec.n_diseases = 4;
        spec.n_findings = 6;
        spec.symptom_arc_density = 0.3;
        spec.singleton_diseases = 1;
        spec.prior_skew = 2.5;
        const Network net = generate_network(spec, gen);
        EXPECT_EQ(parse_network(serialize_network(net)), net);
        const Network other = dxsens::testing::random_network(gen);
        EXPECT_EQ(parse_network(serialize_network(other)), other);
        EXPECT_EQ(serialize_network(parse_network(serialize_network(other))), serialize_network(other));
    }
}

TEST(NetworkJson, DiagnosticsNameLineOrField) {
    try {
        parse_network("{\n  \"variables\": [\n    {\"name\": 1}\n  ]\n}", "net.json");
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("net.json.variables[0].name"), std::string::npos) << e.what();
    }
    try {
        parse_network("{\n  \"variables\": [\n  ,\n}", "net.json");
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
    try {
        parse_network(R"({"variables":[{"name":"D","kind":"root","states":["a","b"]}],"tables":[]})");
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find(".kind"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_network(R"({"variables":[]})"), IoError);
    EXPECT_THROW(parse_network(R"({"variables":[],"tables":[{"variable":"x","parents":[],"rows":[["a"]]}]})"),
                 IoError);
}

TEST(NetworkJson, SemanticProblemsAreLeftToValidate) {
    const Network net = parse_network(
        R"({"variables":[{"name":"D","kind":"hypothesis","states":["a","b"]}],
            "tables":[{"variable":"D","parents":["ghost"],"rows":[[0.5,0.4]]}]})");
    EXPECT_FALSE(validate(net).empty());
}

TEST(CaseJson, RoundTrip) {
    std::vector<Case> cases{{{{{"F", "present"}, {"G", "absent"}}}, "d1"}, {{}, "d2"}};
    EXPECT_EQ(parse_cases(serialize_cases(cases)), cases);
    const auto parsed = parse_cases(R"([{"evidence": {"F": "present"}, "diagnosis": "d1"}])");
    ASSERT_EQ(parsed.size(), 1u);
    EXPECT_EQ(parsed[0].evidence.assignments.at("F"), "present");
    EXPECT_THROW(parse_cases(R"([{"evidence": {"F": 3}, "diagnosis": "d1"}])"), IoError);
    EXPECT_THROW(parse_cases(R"({"evidence": {}})"), IoError);
}

TEST(Files, MissingAndUnwritablePaths) {
    EXPECT_THROW(read_network("/nonexistent/dir/net.json"), IoError);
    EXPECT_THROW(write_network("/nonexistent/dir/net.json", dxsens::testing::two_node_network()), IoError);
    const auto path = (std::filesystem::temp_directory_path() / "dxsens_io_test.json").string();
    write_network(path, dxsens::testing::two_node_network());
    EXPECT_EQ(read_network(path), dxsens::testing::two_node_network());
    std::remove(path.c_str());
}
