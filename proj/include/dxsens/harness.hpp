#pragma once
// Case scoring, per-scheme summaries, and replicated sensitivity experiments.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dxsens/compiled.hpp"
#include "dxsens/inference.hpp"
#include "dxsens/network.hpp"
#include "dxsens/perturbation.hpp"
#include "dxsens/sampling.hpp"
#include "dxsens/scheme.hpp"

namespace dxsens {

struct Case {
    Evidence evidence;
    std::string diagnosis;

    bool operator==(const Case&) const = default;
};

struct CaseResult {
    Distribution posterior;
    std::size_t leading = 0;         // lowest-index maximiser
    double confidence = 0.0;         // top posterior minus runner-up
    bool correct = false;            // leading is the known diagnosis and the unique maximiser
    double correct_diag_prob = 0.0;  // posterior mass on the known diagnosis
    bool inconsistent = false;
};

class MismatchedCases : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class PriorRegime { expert, uniform };

inline std::string_view to_string(PriorRegime regime) {
    return regime == PriorRegime::expert ? "expert" : "uniform";
}

struct SummaryRow {
    std::string scheme;
    PriorRegime prior_regime = PriorRegime::expert;
    double pct_correct = 0.0;
    std::optional<double> avg_conf_correct;
    std::size_t n_correct = 0;
    std::optional<double> avg_conf_incorrect;
    std::size_t n_incorrect = 0;
    std::optional<double> pct_better;  // absent for the original scheme
    std::size_t n_inconsistent = 0;

    std::size_t data_points() const { return n_correct + n_incorrect; }
    bool operator==(const SummaryRow&) const = default;
};

struct Report {
    PriorRegime prior_regime = PriorRegime::expert;
    std::vector<SummaryRow> rows;

    bool operator==(const Report&) const = default;
};

struct ExperimentConfig {
    std::vector<Scheme> schemes;
    std::size_t replicates = 5;
    std::uint64_t master_seed = 0;
    PriorRegime prior_regime = PriorRegime::expert;
    unsigned threads = 1;  // 0: hardware concurrency

    void check() const {
        if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    }
};

// Case with evidence resolved against a specific network.
struct PreparedCase {
    Observation observation;
    std::size_t diagnosis = 0;
};

inline PreparedCase prepare_case(const CompiledNetwork& net, const Case& c) {
    const Variable& hyp = net.variable(net.hypothesis());
    auto diagnosis = hyp.state_index(c.diagnosis);
    if (!diagnosis) throw InvalidEvidence("'" + c.diagnosis + "' is not a state of '" + hyp.name + "'");
    return {net.resolve(c.evidence), *diagnosis};
}

inline CaseResult score_posterior(Distribution post, std::size_t diagnosis) {
    CaseResult r;
    const auto& p = post.probabilities;
    std::size_t top = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
        if (p[i] > p[top]) top = i;
    double runner_up = -1.0;
    bool tied = false;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i == top) continue;
        runner_up = std::max(runner_up, p[i]);
        if (p[i] == p[top]) tied = true;
    }
    r.leading = top;
    r.confidence = std::clamp(p[top] - runner_up, 0.0, 1.0);
    r.correct = !tied && top == diagnosis;
    r.correct_diag_prob = p[diagnosis];
    r.posterior = std::move(post);
    return r;
}

inline CaseResult run_case(const CompiledNetwork& net, const PreparedCase& c) {
    try {
        return score_posterior(posterior(net, c.observation), c.diagnosis);
    } catch (const InconsistentEvidence&) {
        CaseResult r;
        r.posterior.over = net.variable(net.hypothesis()).name;
        r.inconsistent = true;
        return r;
    }
}

inline CaseResult run_case(const CompiledNetwork& net, const Case& c) { return run_case(net, prepare_case(net, c)); }

inline CaseResult run_case(const Network& net, const Case& c) { return run_case(CompiledNetwork(net), c); }

using OriginalResults = std::map<std::size_t, CaseResult>;                         // keyed by case
using VariantResults = std::map<std::pair<std::size_t, std::size_t>, CaseResult>;  // keyed by (replicate, case)

namespace detail {

struct Tally {
    std::size_t n_correct = 0, n_incorrect = 0, n_inconsistent = 0;
    double conf_correct = 0.0, conf_incorrect = 0.0;

    void add(const CaseResult& r) {
        if (r.correct) {
            ++n_correct;
            conf_correct += r.confidence;
        } else {
            ++n_incorrect;
            conf_incorrect += r.confidence;
        }
        if (r.inconsistent) ++n_inconsistent;
    }

    void fill(SummaryRow& row) const {
        const std::size_t total = n_correct + n_incorrect;
        row.pct_correct = 100.0 * static_cast<double>(n_correct) / static_cast<double>(total);
        row.n_correct = n_correct;
        row.n_incorrect = n_incorrect;
        row.n_inconsistent = n_inconsistent;
        row.avg_conf_correct.reset();
        row.avg_conf_incorrect.reset();
        if (n_correct > 0) row.avg_conf_correct = conf_correct / static_cast<double>(n_correct);
        if (n_incorrect > 0) row.avg_conf_incorrect = conf_incorrect / static_cast<double>(n_incorrect);
    }
};

}  // namespace detail

// Row for the original network itself; pct_better is absent.
inline SummaryRow summarize_original(const std::string& scheme, const OriginalResults& original) {
    if (original.empty()) throw MismatchedCases("no results to summarize");
    detail::Tally tally;
    for (const auto& [key, r] : original) tally.add(r);
    SummaryRow row;
    row.scheme = scheme;
    tally.fill(row);
    return row;
}

inline SummaryRow summarize(const std::string& scheme, const OriginalResults& original,
                            const VariantResults& variant) {
    if (original.empty() || variant.empty()) throw MismatchedCases("no results to summarize");
    std::map<std::size_t, std::size_t> per_replicate;
    detail::Tally tally;
    std::size_t better = 0;
    for (const auto& [key, r] : variant) {
        const auto& [replicate, case_index] = key;
        auto base = original.find(case_index);
        if (base == original.end())
            throw MismatchedCases("variant result for case " + std::to_string(case_index) +
                                  " has no original counterpart");
        ++per_replicate[replicate];
        tally.add(r);
        if (r.correct_diag_prob > base->second.correct_diag_prob) ++better;
    }
    for (const auto& [replicate, count] : per_replicate)
        if (count != original.size())
            throw MismatchedCases("replicate " + std::to_string(replicate) + " covers " + std::to_string(count) +
                                  " of " + std::to_string(original.size()) + " cases");
    SummaryRow row;
    row.scheme = scheme;
    tally.fill(row);
    row.pct_better = 100.0 * static_cast<double>(better) / static_cast<double>(variant.size());
    return row;
}

// Per-case results for one prior regime: the original network plus
// variants[scheme][replicate][case] for every non-original scheme.
struct ExperimentResults {
    PriorRegime prior_regime = PriorRegime::expert;
    std::vector<CaseResult> original;
    std::vector<std::size_t> scheme_indices;  // position within config.schemes
    std::vector<std::vector<std::vector<CaseResult>>> variants;
};

// Tag separating experiment streams from other consumers of a master seed.
inline constexpr std::uint32_t kReplicateStreamTag = 0x52455031;  // "REP1"

namespace detail {

template <class Task>
void run_parallel(std::size_t count, unsigned threads, Task&& task) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> workers;
        for (unsigned t = 0; t < threads; ++t)
            workers.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                    try {
                        task(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
    }
    if (failure) std::rethrow_exception(failure);
}

inline std::vector<CaseResult> run_cases(const CompiledNetwork& net, const std::vector<PreparedCase>& cases) {
    std::vector<CaseResult> out;
    out.reserve(cases.size());
    for (const auto& c : cases) out.push_back(run_case(net, c));
    return out;
}

}  // namespace detail

inline ExperimentResults evaluate_experiment(const Network& net, const std::vector<Case>& cases,
                                             const ExperimentConfig& config) {
    config.check();
    if (cases.empty()) throw std::invalid_argument("experiment needs at least one case");

    const Network base = config.prior_regime == PriorRegime::uniform ? set_uniform_priors(net) : net;
    const CompiledNetwork compiled(base);
    std::vector<PreparedCase> prepared;
    prepared.reserve(cases.size());
    for (const auto& c : cases) prepared.push_back(prepare_case(compiled, c));

    ExperimentResults results;
    results.prior_regime = config.prior_regime;
    results.original = detail::run_cases(compiled, prepared);
    for (std::size_t s = 0; s < config.schemes.size(); ++s)
        if (!config.schemes[s].is_plain_original()) results.scheme_indices.push_back(s);
    results.variants.assign(results.scheme_indices.size(),
                            std::vector<std::vector<CaseResult>>(config.replicates));

    const std::size_t tasks = results.scheme_indices.size() * config.replicates;
    detail::run_parallel(tasks, config.threads, [&](std::size_t task) {
        const std::size_t slot = task / config.replicates;
        const std::size_t replicate = task % config.replicates;
        const std::size_t scheme_index = results.scheme_indices[slot];
        auto stream = derive_stream(config.master_seed, {kReplicateStreamTag, static_cast<std::uint32_t>(scheme_index),
                                                         static_cast<std::uint32_t>(replicate)});
        const CompiledNetwork variant(config.schemes[scheme_index].apply(base, stream));
        results.variants[slot][replicate] = detail::run_cases(variant, prepared);
    });
    return results;
}

inline Report summarize_experiment(const ExperimentResults& results, const ExperimentConfig& config) {
    Report report;
    report.prior_regime = results.prior_regime;

    OriginalResults original;
    for (std::size_t c = 0; c < results.original.size(); ++c) original.emplace(c, results.original[c]);
    SummaryRow first = summarize_original("original", original);
    first.prior_regime = results.prior_regime;
    report.rows.push_back(std::move(first));

    for (std::size_t slot = 0; slot < results.scheme_indices.size(); ++slot) {
        VariantResults variant;
        for (std::size_t r = 0; r < results.variants[slot].size(); ++r)
            for (std::size_t c = 0; c < results.variants[slot][r].size(); ++c)
                variant.emplace(std::pair{r, c}, results.variants[slot][r][c]);
        SummaryRow row = summarize(config.schemes[results.scheme_indices[slot]].id, original, variant);
        row.prior_regime = results.prior_regime;
        report.rows.push_back(std::move(row));
    }
    return report;
}

// First row: the original network under the configured prior regime. Then one
// row per remaining scheme, in configuration order.
inline Report run_experiment(const Network& net, const std::vector<Case>& cases, const ExperimentConfig& config) {
    return summarize_experiment(evaluate_experiment(net, cases, config), config);
}

struct DiagnosisTally {
    std::size_t correct = 0;
    std::size_t total = 0;

    double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total); }
};

// Accuracy split by known diagnosis, pooled over every replicate of one scheme.
inline std::vector<DiagnosisTally> accuracy_by_diagnosis(const std::vector<std::vector<CaseResult>>& replicates,
                                                         const std::vector<std::size_t>& diagnoses,
                                                         std::size_t n_states) {
    std::vector<DiagnosisTally> out(n_states);
    for (const auto& results : replicates) {
        if (results.size() != diagnoses.size()) throw MismatchedCases("replicate does not cover every case");
        for (std::size_t c = 0; c < results.size(); ++c) {
            auto& t = out.at(diagnoses[c]);
            ++t.total;
            if (results[c].correct) ++t.correct;
        }
    }
    return out;
}

}  // namespace dxsens
