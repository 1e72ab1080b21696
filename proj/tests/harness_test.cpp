#include <random>

#include <gtest/gtest.h>

#include "dxsens/harness.hpp"
#include "dxsens/kbgen.hpp"
#include "test_support.hpp"

using namespace dxsens;
using dxsens::testing::two_node_network;

namespace {

CaseResult result(bool correct, double confidence, double correct_diag_prob = 0.5, bool inconsistent = false) {
    CaseResult r;
    r.correct = correct;
    r.confidence = confidence;
    r.correct_diag_prob = correct_diag_prob;
    r.inconsistent = inconsistent;
    return r;
}

OriginalResults keyed(const std::vector<CaseResult>& rs) {
    OriginalResults out;
    for (std::size_t i = 0; i < rs.size(); ++i) out.emplace(i, rs[i]);
    return out;
}

VariantResults keyed_variant(const std::vector<std::vector<CaseResult>>& reps) {
    VariantResults out;
    for (std::size_t r = 0; r < reps.size(); ++r)
        for (std::size_t c = 0; c < reps[r].size(); ++c) out.emplace(std::pair{r, c}, reps[r][c]);
    return out;
}

KnowledgeBase small_kb(std::uint64_t seed, std::size_t cases = 30) {
    GenSpec spec;
    spec.n_diseases = 5;
    spec.n_findings = 8;
    spec.prior_skew = 1.0;
    spec.discriminative_sharpness = 0.7;
    return generate_knowledge_base(spec, cases, 1.0, seed);
}

ExperimentConfig config_for(std::vector<std::string> ids, std::size_t replicates, std::uint64_t seed) {
    ExperimentConfig cfg;
    for (const auto& id : ids) cfg.schemes.push_back(parse_scheme(id));
    cfg.replicates = replicates;
    cfg.master_seed = seed;
    return cfg;
}

}  // namespace

TEST(RunCase, ScoresTwoNodeExample) {
    const Case c{{{{"F", "present"}}}, "d1"};
    const CaseResult r = run_case(two_node_network(), c);
    EXPECT_EQ(r.leading, 0u);
    EXPECT_TRUE(r.correct);
    EXPECT_FALSE(r.inconsistent);
    EXPECT_NEAR(r.confidence, 23.0 / 31.0, 1e-12);  // 0.74194
    EXPECT_NEAR(r.correct_diag_prob, 27.0 / 31.0, 1e-12);

    const CaseResult wrong = run_case(two_node_network(), Case{{{{"F", "present"}}}, "d2"});
    EXPECT_FALSE(wrong.correct);
    EXPECT_EQ(wrong.leading, 0u);
    EXPECT_NEAR(wrong.correct_diag_prob, 4.0 / 31.0, 1e-12);
}

TEST(RunCase, TieCountsAsIncorrect) {
    Network net = two_node_network();
    net.tables[0].rows = {{0.5, 0.5}};
    net.tables[1].rows = {{0.3, 0.7}, {0.3, 0.7}};
    const CaseResult r = run_case(net, Case{{{{"F", "present"}}}, "d1"});
    EXPECT_FALSE(r.correct);
    EXPECT_EQ(r.leading, 0u);
    EXPECT_EQ(r.confidence, 0.0);
}

TEST(RunCase, InconsistentEvidenceIsEncoded) {
    Network net = two_node_network();
    net.tables[1].rows = {{0.0, 1.0}, {0.0, 1.0}};
    const CaseResult r = run_case(net, Case{{{{"F", "present"}}}, "d1"});
    EXPECT_TRUE(r.inconsistent);
    EXPECT_FALSE(r.correct);
    EXPECT_EQ(r.confidence, 0.0);
    EXPECT_EQ(r.correct_diag_prob, 0.0);
}

TEST(RunCase, UnknownDiagnosisRejected) {
    EXPECT_THROW(run_case(two_node_network(), Case{{}, "d9"}), InvalidEvidence);
}

TEST(Summarize, MixedFixture) {
    const auto original = keyed({result(true, 0.6), result(true, 0.8), result(false, 0.3), result(false, 0.5)});
    const SummaryRow row = summarize_original("original", original);
    EXPECT_EQ(row.pct_correct, 50.0);
    ASSERT_TRUE(row.avg_conf_correct && row.avg_conf_incorrect);
    EXPECT_DOUBLE_EQ(*row.avg_conf_correct, 0.7);
    EXPECT_DOUBLE_EQ(*row.avg_conf_incorrect, 0.4);
    EXPECT_EQ(row.n_correct, 2u);
    EXPECT_EQ(row.n_incorrect, 2u);
    EXPECT_FALSE(row.pct_better);
}

TEST(Summarize, AllCorrectLeavesIncorrectAbsent) {
    const auto original = keyed({result(true, 1.0), result(true, 1.0), result(true, 1.0)});
    const SummaryRow row = summarize_original("original", original);
    EXPECT_EQ(row.pct_correct, 100.0);
    EXPECT_EQ(*row.avg_conf_correct, 1.0);
    EXPECT_FALSE(row.avg_conf_incorrect);
    EXPECT_EQ(row.n_incorrect, 0u);
}

TEST(Summarize, PercentageBetterIsStrict) {
    const auto original = keyed({result(true, 0.5, 0.7), result(true, 0.5, 0.7), result(true, 0.5, 0.7),
                                 result(true, 0.5, 0.7)});
    const auto variant = keyed_variant(
        {{result(true, 0.5, 0.8), result(true, 0.5, 0.7), result(true, 0.5, 0.6), result(false, 0.1, 0.2)}});
    const SummaryRow row = summarize("normal:0.1", original, variant);
    ASSERT_TRUE(row.pct_better);
    EXPECT_EQ(*row.pct_better, 25.0);
    EXPECT_EQ(row.pct_correct, 75.0);
}

TEST(Summarize, MismatchedCasesRejected) {
    const auto original = keyed({result(true, 0.5), result(true, 0.5)});
    EXPECT_THROW(summarize("x", original, keyed_variant({{result(true, 0.5)}})), MismatchedCases);
    VariantResults stray = keyed_variant({{result(true, 0.5), result(true, 0.5)}});
    stray.emplace(std::pair{0u, 7u}, result(true, 0.5));
    EXPECT_THROW(summarize("x", original, stray), MismatchedCases);
    EXPECT_THROW(summarize("x", original, {}), MismatchedCases);
}

// Straightforward recomputation on random fixtures of up to 10 results.
TEST(Summarize, MatchesIndependentRecomputation) {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5)(gen);
        const std::size_t reps = std::uniform_int_distribution<std::size_t>(1, 2)(gen);
        std::vector<CaseResult> base;
        for (std::size_t i = 0; i < n; ++i) base.push_back(result(coin(gen), unit(gen), unit(gen)));
        std::vector<std::vector<CaseResult>> var(reps);
        for (auto& rep : var)
            for (std::size_t i = 0; i < n; ++i) {
                const bool inconsistent = unit(gen) < 0.2;
                rep.push_back(inconsistent ? result(false, 0.0, 0.0, true) : result(coin(gen), unit(gen), unit(gen)));
            }
        const SummaryRow row = summarize("s", keyed(base), keyed_variant(var));

        double c_sum = 0, i_sum = 0;
        int c_n = 0, i_n = 0, better = 0, incons = 0, total = 0;
        for (const auto& rep : var)
            for (std::size_t i = 0; i < n; ++i) {
                ++total;
                if (rep[i].correct) {
                    c_sum += rep[i].confidence;
                    ++c_n;
                } else {
                    i_sum += rep[i].confidence;
                    ++i_n;
                }
                if (rep[i].inconsistent) ++incons;
                if (rep[i].correct_diag_prob > base[i].correct_diag_prob) ++better;
            }
        EXPECT_DOUBLE_EQ(row.pct_correct, 100.0 * c_n / total);
        EXPECT_DOUBLE_EQ(*row.pct_better, 100.0 * better / total);
        EXPECT_EQ(row.n_correct + row.n_incorrect, static_cast<std::size_t>(total));
        EXPECT_EQ(row.n_inconsistent, static_cast<std::size_t>(incons));
        EXPECT_LE(row.n_inconsistent, row.n_incorrect);
        if (c_n) {
            EXPECT_DOUBLE_EQ(*row.avg_conf_correct, c_sum / c_n);
        }
        if (i_n) {
            EXPECT_DOUBLE_EQ(*row.avg_conf_incorrect, i_sum / i_n);
        }
        EXPECT_EQ(row.avg_conf_correct.has_value(), c_n > 0);
        EXPECT_EQ(row.avg_conf_incorrect.has_value(), i_n > 0);
    }
}

TEST(RunExperiment, NoisyRowsAggregateReplicatesTimesCases) {
    const KnowledgeBase kb = small_kb(1, 60);
    const Report report = run_experiment(kb.network, kb.cases, config_for({"original", "normal:0.05", "uniform"}, 5, 3));
    ASSERT_EQ(report.rows.size(), 3u);
    EXPECT_EQ(report.rows[0].data_points(), 60u);
    EXPECT_FALSE(report.rows[0].pct_better);
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        EXPECT_EQ(report.rows[i].data_points(), 300u);
        ASSERT_TRUE(report.rows[i].pct_better);
        EXPECT_GE(*report.rows[i].pct_better, 0.0);
        EXPECT_LE(*report.rows[i].pct_better, 100.0);
        EXPECT_LE(report.rows[i].n_inconsistent, report.rows[i].n_incorrect);
    }
}

TEST(RunExperiment, OriginalOnlyAndImplicitOriginal) {
    const KnowledgeBase kb = small_kb(2);
    const Report only = run_experiment(kb.network, kb.cases, config_for({"original"}, 5, 0));
    ASSERT_EQ(only.rows.size(), 1u);
    EXPECT_FALSE(only.rows[0].pct_better);

    const Report implicit = run_experiment(kb.network, kb.cases, config_for({"normal:0.1"}, 2, 0));
    ASSERT_EQ(implicit.rows.size(), 2u);
    EXPECT_EQ(implicit.rows[0].scheme, "original");
    EXPECT_EQ(implicit.rows[0], only.rows[0]);
}

TEST(RunExperiment, DeterministicAcrossRunsAndThreads) {
    const KnowledgeBase kb = small_kb(3);
    auto cfg = config_for({"original", "normal:0.01", "normal:0.25", "random-uniform"}, 4, 99);
    const Report a = run_experiment(kb.network, kb.cases, cfg);
    const Report b = run_experiment(kb.network, kb.cases, cfg);
    cfg.threads = 4;
    const Report c = run_experiment(kb.network, kb.cases, cfg);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
    cfg.master_seed = 100;
    EXPECT_NE(a, run_experiment(kb.network, kb.cases, cfg));
}

TEST(RunExperiment, ZeroNoiseIsNeverBetter) {
    const KnowledgeBase kb = small_kb(4);
    const Report r = run_experiment(kb.network, kb.cases, config_for({"original", "normal:0", "uniform:0"}, 3, 1));
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
        EXPECT_EQ(*r.rows[i].pct_better, 0.0);
        EXPECT_EQ(r.rows[i].pct_correct, r.rows[0].pct_correct);
    }
}

TEST(RunExperiment, ReplicateStreamsAreIsolated) {
    const KnowledgeBase kb = small_kb(5);
    const auto five = evaluate_experiment(kb.network, kb.cases, config_for({"original", "normal:0.1"}, 5, 8));
    const auto six = evaluate_experiment(kb.network, kb.cases, config_for({"original", "normal:0.1"}, 6, 8));
    ASSERT_EQ(six.variants[0].size(), 6u);
    for (std::size_t r = 0; r < 5; ++r)
        for (std::size_t c = 0; c < kb.cases.size(); ++c) {
            EXPECT_EQ(five.variants[0][r][c].correct_diag_prob, six.variants[0][r][c].correct_diag_prob);
            EXPECT_EQ(five.variants[0][r][c].posterior, six.variants[0][r][c].posterior);
        }
}

TEST(RunExperiment, OriginalRowIsReproducible) {
    const KnowledgeBase kb = small_kb(6);
    const auto cfg = config_for({"original"}, 1, 0);
    EXPECT_EQ(run_experiment(kb.network, kb.cases, cfg), run_experiment(kb.network, kb.cases, cfg));
}

TEST(RunExperiment, UniformPriorRegimeAndSuffix) {
    const KnowledgeBase kb = small_kb(7);
    auto cfg = config_for({"original", "original+uniform-priors"}, 2, 0);
    const Report expert = run_experiment(kb.network, kb.cases, cfg);
    cfg.prior_regime = PriorRegime::uniform;
    const Report uniform = run_experiment(kb.network, kb.cases, cfg);
    EXPECT_EQ(uniform.prior_regime, PriorRegime::uniform);
    // The forced-uniform variant in the expert regime reproduces the uniform
    // regime's original network on every replicate.
    EXPECT_EQ(expert.rows[1].pct_correct, uniform.rows[0].pct_correct);
    EXPECT_EQ(expert.rows[1].n_correct, 2 * uniform.rows[0].n_correct);
}

TEST(RunExperiment, RejectsBadInput) {
    const KnowledgeBase kb = small_kb(8);
    EXPECT_THROW(run_experiment(kb.network, {}, config_for({"original"}, 1, 0)), std::invalid_argument);
    EXPECT_THROW(run_experiment(kb.network, kb.cases, config_for({"original"}, 0, 0)), std::invalid_argument);
    std::vector<Case> bad = kb.cases;
    bad[0].evidence.assignments["f0"] = "sideways";
    EXPECT_THROW(run_experiment(kb.network, bad, config_for({"original"}, 1, 0)), InvalidEvidence);
}

TEST(AccuracyByDiagnosis, CountsPerState) {
    const std::vector<std::vector<CaseResult>> reps{{result(true, 1), result(false, 1), result(true, 1)},
                                                    {result(true, 1), result(true, 1), result(false, 1)}};
    const auto by = accuracy_by_diagnosis(reps, {0, 1, 1}, 3);
    EXPECT_EQ(by[0].correct, 2u);
    EXPECT_EQ(by[0].total, 2u);
    EXPECT_EQ(by[1].correct, 2u);
    EXPECT_EQ(by[1].total, 4u);
    EXPECT_EQ(by[2].total, 0u);
    EXPECT_DOUBLE_EQ(by[1].accuracy(), 0.5);
}
