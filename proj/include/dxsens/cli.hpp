#pragma once
// Command-line driver: validate, generate, run.
//
// Exit status: 0 success, 1 domain failure, 2 I/O, parse, or usage failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dxsens/harness.hpp"
#include "dxsens/io.hpp"
#include "dxsens/kbgen.hpp"
#include "dxsens/network.hpp"
#include "dxsens/report.hpp"
#include "dxsens/scheme.hpp"

namespace dxsens::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitIo = 2;

struct RunConfig {
    std::string network_path;
    std::string cases_path;
    std::string schemes;
    std::size_t replicates = 5;
    std::string priors = "both";
    std::uint64_t seed = 0;
    std::string out_path;
    std::string format = "table";
    unsigned threads = 0;
};

struct GenerateConfig {
    GenSpec spec;
    std::size_t cases = 60;
    double observed_fraction = 1.0;
    std::uint64_t seed = 0;
    std::string network_out = "network.json";
    std::string cases_out = "cases.json";
};

namespace detail {

// Values from a JSON config file fill any option not given on the command line.
class ConfigOverlay {
public:
    ConfigOverlay(const CLI::App& app, const std::string& path) : app_(app) {
        if (!path.empty()) doc_ = dxsens::detail::parse_text(dxsens::detail::read_file(path), path);
        if (!doc_.is_null() && !doc_.is_object()) throw IoError(path + ": expected a JSON object");
    }

    template <class T>
    void fill(const std::string& key, T& target) const {
        if (doc_.is_null() || !doc_.contains(key) || app_.get_option("--" + key)->count() > 0) return;
        try {
            target = doc_.at(key).get<T>();
        } catch (const nlohmann::json::exception&) {
            throw IoError("config field '" + key + "' has the wrong type");
        }
    }

    // Accepts either a comma list string or an array of strings.
    void fill_list(const std::string& key, std::string& target) const {
        if (doc_.is_null() || !doc_.contains(key) || app_.get_option("--" + key)->count() > 0) return;
        const auto& j = doc_.at(key);
        if (j.is_string()) {
            target = j.get<std::string>();
            return;
        }
        if (!j.is_array()) throw IoError("config field '" + key + "' must be a string or array");
        target.clear();
        for (const auto& item : j) {
            if (!item.is_string()) throw IoError("config field '" + key + "' must contain strings");
            if (!target.empty()) target += ',';
            target += item.get<std::string>();
        }
    }

private:
    const CLI::App& app_;
    nlohmann::json doc_;
};

}  // namespace detail

inline int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
    Network net;
    try {
        net = read_network(path);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
    const ValidationReport report = validate(net);
    for (const auto& v : report) out << v << '\n';
    return report.empty() ? kExitOk : kExitDomain;
}

inline int cmd_generate(const GenerateConfig& cfg, std::ostream& err) {
    KnowledgeBase kb;
    try {
        kb = generate_knowledge_base(cfg.spec, cfg.cases, cfg.observed_fraction, cfg.seed);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
    try {
        write_network(cfg.network_out, kb.network);
        write_cases(cfg.cases_out, kb.cases);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitOk;
}

inline int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::vector<Scheme> schemes;
    std::vector<PriorRegime> regimes;
    Network net;
    std::vector<Case> cases;
    try {
        if (cfg.network_path.empty() || cfg.cases_path.empty())
            throw IoError("--network and --cases are required");
        if (cfg.format != "table" && cfg.format != "csv") throw IoError("--format must be table or csv");
        if (cfg.priors == "expert" || cfg.priors == "both") regimes.push_back(PriorRegime::expert);
        if (cfg.priors == "uniform" || cfg.priors == "both") regimes.push_back(PriorRegime::uniform);
        if (regimes.empty()) throw IoError("--priors must be expert, uniform, or both");
        if (cfg.replicates < 1) throw IoError("--replicates must be >= 1");
        schemes = parse_scheme_list(cfg.schemes.empty() ? std::string("original") : cfg.schemes);
        net = read_network(cfg.network_path);
        cases = read_cases(cfg.cases_path);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }

    std::vector<Report> reports;
    try {
        for (PriorRegime regime : regimes) {
            ExperimentConfig exp;
            exp.schemes = schemes;
            exp.replicates = cfg.replicates;
            exp.master_seed = cfg.seed;
            exp.prior_regime = regime;
            exp.threads = cfg.threads;
            reports.push_back(run_experiment(net, cases, exp));
        }
    } catch (const MismatchedCases& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const InvalidNetwork& e) {
        err << "error: " << e.what() << '\n';
        for (const auto& v : e.report()) err << "  " << v << '\n';
        return kExitDomain;
    } catch (const InvalidEvidence& e) {
        err << "error: invalid case: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }

    std::ostringstream rendered;
    if (cfg.format == "csv")
        write_csv(rendered, reports);
    else
        write_tables(rendered, reports);

    if (cfg.out_path.empty()) {
        out << rendered.str();
        return kExitOk;
    }
    try {
        dxsens::detail::write_file(cfg.out_path, rendered.str());
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitOk;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Sensitivity analysis of diagnostic Bayesian networks", "dxsens"};
    app.require_subcommand(1);

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "Check a network file against every structural invariant");
    validate_cmd->add_option("--network,network", validate_path, "Network JSON file")->required();

    GenerateConfig gen;
    std::string gen_config;
    auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic knowledge base and sampled cases");
    generate_cmd->add_option("--config", gen_config, "JSON file with defaults for any flag below");
    generate_cmd->add_option("--diseases", gen.spec.n_diseases, "Number of hypothesis states (>= 2)")->capture_default_str();
    generate_cmd->add_option("--findings", gen.spec.n_findings, "Number of regular findings")->capture_default_str();
    generate_cmd->add_option("--arity", gen.spec.finding_arity, "States per finding")->capture_default_str();
    generate_cmd->add_option("--density", gen.spec.symptom_arc_density, "Probability of each finding->finding arc")
        ->capture_default_str();
    generate_cmd->add_option("--prior-skew", gen.spec.prior_skew, "Exponent shaping the disease prior")
        ->capture_default_str();
    generate_cmd->add_option("--sharpness", gen.spec.discriminative_sharpness, "Peakedness of finding rows, [0,1]")
        ->capture_default_str();
    generate_cmd->add_option("--singletons", gen.spec.singleton_diseases, "Diseases detectable through one marker")
        ->capture_default_str();
    generate_cmd->add_option("--cases", gen.cases, "Number of sampled cases")->capture_default_str();
    generate_cmd->add_option("--observed-fraction", gen.observed_fraction, "Chance each finding is observed")
        ->capture_default_str();
    generate_cmd->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
    generate_cmd->add_option("--network-out", gen.network_out, "Output network path")->capture_default_str();
    generate_cmd->add_option("--cases-out", gen.cases_out, "Output cases path")->capture_default_str();

    RunConfig run;
    std::string run_config;
    auto* run_cmd = app.add_subcommand("run", "Run a replicated sensitivity experiment and print summary tables");
    run_cmd->add_option("--config", run_config, "JSON file with defaults for any flag below");
    run_cmd->add_option("--network", run.network_path, "Network JSON file");
    run_cmd->add_option("--cases", run.cases_path, "Cases JSON file");
    run_cmd->add_option("--schemes", run.schemes, "Comma list of scheme identifiers (default: original)");
    run_cmd->add_option("--replicates", run.replicates, "Perturbed copies per scheme")->capture_default_str();
    run_cmd->add_option("--priors", run.priors, "expert | uniform | both")->capture_default_str();
    run_cmd->add_option("--seed", run.seed, "Master seed")->capture_default_str();
    run_cmd->add_option("--out", run.out_path, "Report path (default: stdout)");
    run_cmd->add_option("--format", run.format, "table | csv")->capture_default_str();
    run_cmd->add_option("--threads", run.threads, "Worker threads (0: all cores)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitIo;
    }

    try {
        if (*validate_cmd) return cmd_validate(validate_path, out, err);

        if (*generate_cmd) {
            detail::ConfigOverlay cfg(*generate_cmd, gen_config);
            cfg.fill("diseases", gen.spec.n_diseases);
            cfg.fill("findings", gen.spec.n_findings);
            cfg.fill("arity", gen.spec.finding_arity);
            cfg.fill("density", gen.spec.symptom_arc_density);
            cfg.fill("prior-skew", gen.spec.prior_skew);
            cfg.fill("sharpness", gen.spec.discriminative_sharpness);
            cfg.fill("singletons", gen.spec.singleton_diseases);
            cfg.fill("cases", gen.cases);
            cfg.fill("observed-fraction", gen.observed_fraction);
            cfg.fill("seed", gen.seed);
            cfg.fill("network-out", gen.network_out);
            cfg.fill("cases-out", gen.cases_out);
            return cmd_generate(gen, err);
        }

        detail::ConfigOverlay cfg(*run_cmd, run_config);
        cfg.fill("network", run.network_path);
        cfg.fill("cases", run.cases_path);
        cfg.fill_list("schemes", run.schemes);
        cfg.fill("replicates", run.replicates);
        cfg.fill("priors", run.priors);
        cfg.fill("seed", run.seed);
        cfg.fill("out", run.out_path);
        cfg.fill("format", run.format);
        cfg.fill("threads", run.threads);
        return cmd_run(run, out, err);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

}  // namespace dxsens::cli
