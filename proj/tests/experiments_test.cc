// Copyright 2026 The qadv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qadv/experiments.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qadv {
namespace {

std::filesystem::path fresh_dir(const std::string& name) {
    auto dir = std::filesystem::path(::testing::TempDir()) / name;
    std::filesystem::remove_all(dir);
    return dir;
}

TEST(stats, mean_median_bootstrap) {
    std::vector<double> v = {1, 2, 3, 4, 100};
    EXPECT_DOUBLE_EQ(mean_of(v), 22.0);
    EXPECT_DOUBLE_EQ(median_of(v), 3.0);
    EXPECT_DOUBLE_EQ(median_of({1, 2, 3, 4}), 2.5);
    Summary s = summarize(v, 1, 2000);
    EXPECT_LE(s.ci_low, s.mean);
    EXPECT_GE(s.ci_high, s.mean);
    EXPECT_EQ(summarize(v, 1, 2000), s);
    Summary constant = summarize(std::vector<double>(50, 7.0), 2, 500);
    EXPECT_EQ(constant.ci_low, 7.0);
    EXPECT_EQ(constant.ci_high, 7.0);
    EXPECT_TRUE(cis_disjoint(constant, summarize(std::vector<double>(50, 9.0), 2, 500)));
    EXPECT_FALSE(cis_disjoint(constant, constant));
}

TEST(stats, bootstrap_coverage) {
    // Normal-theory interval as an independent check on the percentile width.
    Rng rng = make_rng(3, 0);
    std::vector<double> v(400);
    for (double& x : v) {
        x = normal(rng, 10.0, 2.0);
    }
    Summary s = summarize(v, 4);
    double se = 2.0 / std::sqrt(400.0);
    EXPECT_NEAR(s.ci_high - s.ci_low, 2 * 1.96 * se, 0.25 * se * 2 * 1.96);
}

RunRecord sample_record(const std::string& id) {
    RunRecord r;
    r.id = id;
    r.kind = "test";
    r.version = artifact_version();
    r.created_at = "2026-01-01T00:00:00Z";
    r.config = {{"seed", 3}};
    r.key_columns = {"strategy", "n_samples"};
    r.cells.push_back({{{"strategy", "min"}, {"n_samples", 1}}, {3, 6, 9}, {0.1, 0.2, 0.3}, {}});
    r.cells.push_back({{{"strategy", "min"}, {"n_samples", 8}}, {3, 3}, {0.5, 0.5}, {}});
    r.summarize_cells(5);
    return r;
}

TEST(result_store, round_trip_and_duplicates) {
    ResultStore store(fresh_dir("qadv_store"));
    RunRecord r = sample_record("run-a");
    store.write(r);
    RunRecord back = store.read("run-a");
    EXPECT_EQ(nlohmann::json(back), nlohmann::json(r));
    EXPECT_THROW(store.write(r), std::invalid_argument);
    store.write(sample_record("run-b"));
    EXPECT_EQ(store.ids(), (std::vector<std::string>{"run-a", "run-b"}));
    RunRecord copy = back;
    copy.summarize_cells(5);
    EXPECT_EQ(copy.cells[0].summary, back.cells[0].summary);
    EXPECT_THROW(store.read("missing"), std::runtime_error);
}

TEST(result_store, csv_golden) {
    RunRecord r = sample_record("golden");
    std::ostringstream summary, lifetimes;
    write_summary_csv(summary, r);
    write_lifetimes_csv(lifetimes, r);
    std::istringstream s(summary.str());
    std::string header;
    std::getline(s, header);
    EXPECT_EQ(header, "run_id,strategy,n_samples,episodes,mean_lifetime,median_lifetime,ci_low,ci_high,mean_seconds");
    std::string row;
    std::getline(s, row);
    EXPECT_EQ(row.substr(0, 27), "golden,min,1,3,6,6,3,9,0.2");
    EXPECT_EQ(lifetimes.str().substr(0, 60), "run_id,strategy,n_samples,episode,lifetime\ngolden,min,1,0,3\n");
}

TEST(run_id, format) {
    std::string id = make_run_id("attack", 3);
    EXPECT_EQ(id.rfind("attack-", 0), 0u);
    EXPECT_NE(id, make_run_id("attack", 3));
}

SweepConfig small_sweep(SpatialPattern pattern, double param) {
    SweepConfig s;
    s.error_rates = {0.01, 0.02};
    s.episodes_per_rate = 12;
    s.resample_interval = 5;
    s.env.distance = 3;
    s.noise.spatial = pattern;
    s.noise.sigma = pattern == SpatialPattern::gaussian ? param : 0.0;
    s.noise.beta = pattern == SpatialPattern::gaussian ? 0.0 : param;
    s.seed = 11;
    return s;
}

TEST(robustness_sweep, zero_sigma_equals_uniform) {
    RunRecord g = robustness_sweep(nullptr, small_sweep(SpatialPattern::gaussian, 0.0));
    RunRecord u = robustness_sweep(nullptr, small_sweep(SpatialPattern::uniform, 0.0));
    ASSERT_EQ(g.cells.size(), 4u);  // treatment + reference per rate
    ASSERT_EQ(u.cells.size(), 2u);
    EXPECT_EQ(g.cells[0].lifetimes, u.cells[0].lifetimes);
    EXPECT_EQ(g.cells[1].lifetimes, u.cells[0].lifetimes);  // reference curve
    EXPECT_EQ(g.cells[2].lifetimes, u.cells[1].lifetimes);
}

TEST(robustness_sweep, deterministic_and_worker_independent) {
    SweepConfig s = small_sweep(SpatialPattern::gaussian, 0.005);
    RunRecord a = robustness_sweep(nullptr, s, 1);
    RunRecord b = robustness_sweep(nullptr, s, 3);
    for (size_t i = 0; i < a.cells.size(); i++) {
        EXPECT_EQ(a.cells[i].lifetimes, b.cells[i].lifetimes);
    }
    SweepConfig bad = s;
    bad.error_rates = {0.02, 0.01};
    EXPECT_THROW(robustness_sweep(nullptr, bad), std::invalid_argument);
    Rng rng = make_rng(1, 0);
    QNetwork wrong = QNetwork::random({10, 4, 19}, rng);
    EXPECT_THROW(robustness_sweep(&wrong, s), std::invalid_argument);
}

TEST(robustness_sweep, default_grid) {
    auto grid = SweepConfig::default_grid();
    ASSERT_EQ(grid.size(), 13u);
    EXPECT_DOUBLE_EQ(grid.front(), 0.001);
    EXPECT_DOUBLE_EQ(grid.back(), 0.013);
}

TEST(attack_sweep, cells_and_timing) {
    Rng rng = make_rng(2, 0);
    QNetwork net = QNetwork::random({24, 8, 19}, rng);
    AttackSweepConfig s;
    s.n_values = {1, 4};
    s.p_values = {0.03};
    s.repetitions = 5;
    s.env.distance = 3;
    RunRecord r = attack_sweep(net, s);
    ASSERT_EQ(r.cells.size(), 2u);
    for (const RunCell& c : r.cells) {
        EXPECT_EQ(c.lifetimes.size(), 5u);
        for (double t : c.seconds) {
            EXPECT_GT(t, 0.0);
        }
    }
    RunRecord again = attack_sweep(net, s, 2);
    EXPECT_EQ(again.cells[1].lifetimes, r.cells[1].lifetimes);
}

TEST(referee_sweep, trends) {
    RefereeSweepConfig s;
    s.distances = {3};
    s.sigmas = {0.0};
    s.rates = {0.01, 0.04};
    s.steps = 3000;
    RunRecord r = referee_sweep(s);
    ASSERT_EQ(r.cells.size(), 2u);
    EXPECT_GT(r.cells[0].summary.mean, r.cells[1].summary.mean);
    EXPECT_THROW(referee_sweep(RefereeSweepConfig{{}, {0.0}, {0.01}, 10, 1, {}}), std::invalid_argument);
}

TEST(decoder_episode, mwpm_beats_identity) {
    EnvConfig e;
    e.distance = 3;
    e.noise.p_phys = 0.01;
    double mwpm = 0, idle = 0;
    for (uint64_t s = 0; s < 100; s++) {
        MemoryEnv a(e, s), b(e, s);
        mwpm += static_cast<double>(run_decoder_episode(a, nullptr).lifetime_cycles);
        idle += static_cast<double>(run_episode(b, identity_policy(9)).lifetime_cycles);
    }
    EXPECT_GT(mwpm, 2 * idle);
}

}  // namespace
}  // namespace qadv
