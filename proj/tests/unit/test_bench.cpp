// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "krdoa/bench.hpp"
#include "krdoa/errors.hpp"

namespace krdoa {
namespace {

EstimateSet make_estimates(std::vector<Direction> pairs) {
    EstimateSet e;
    e.pairs = std::move(pairs);
    e.pairing_costs.assign(e.pairs.size(), 0.0);
    return e;
}

TEST(Rmse, Examples) {
    const SourceSet one({{50, 60}});
    EXPECT_EQ(rmse(one, make_estimates({{50, 60}})), 0.0);
    EXPECT_DOUBLE_EQ(rmse(one, make_estimates({{51, 60}})), 1.0);

    const SourceSet two({{50, 60}, {100, 120}});
    // sqrt((1/2) * ((1 + 0) + (0 + 1))) = 1
    EXPECT_DOUBLE_EQ(rmse(two, make_estimates({{51, 60}, {100, 121}})), 1.0);
    EXPECT_THROW(rmse(two, make_estimates({{51, 60}})), DomainError);
}

TEST(Rmse, InvariantToEstimateOrder) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> ang(0.0, 180.0), jitter(-2.0, 2.0);
    for (int t = 0; t < 50; ++t) {
        std::vector<Direction> truth, est;
        for (int p = 0; p < 4; ++p) {
            truth.push_back({ang(rng), ang(rng)});
            est.push_back({truth.back().azimuth_deg + jitter(rng), truth.back().elevation_deg + jitter(rng)});
        }
        const SourceSet s(truth);
        const double ref = rmse(s, make_estimates(est));
        std::shuffle(est.begin(), est.end(), rng);
        EXPECT_DOUBLE_EQ(rmse(s, make_estimates(est)), ref);
    }
}

EnsembleConfig small_config() {
    EnsembleConfig c;
    c.geometry.M = 6;
    c.geometry.N = 6;
    c.sources = {{155, 20}, {21, 150}, {76, 80}};
    c.methods = {Method::DeRootMusic, Method::DeEsprit};
    c.axis = SweepAxis::Snr;
    c.values = {0.0, 10.0};
    c.runs = 12;
    c.base_seed = 5;
    return c;
}

TEST(RunEnsemble, SingleNoiselessRun) {
    EnsembleConfig c = small_config();
    c.values = {std::numeric_limits<double>::infinity()};
    c.runs = 1;
    const auto r = run_ensemble(c);
    ASSERT_EQ(r.cells.size(), 2u);
    for (const auto& cell : r.cells) {
        EXPECT_LT(cell.mean_rmse_deg, 1e-6);
        EXPECT_EQ(cell.std_rmse_deg, 0.0);
        EXPECT_EQ(cell.runs, 1u);
        EXPECT_EQ(cell.failures, 0u);
    }
}

TEST(RunEnsemble, ReproducibleAcrossWorkerCounts) {
    EnsembleConfig c = small_config();
    c.workers = 1;
    const std::string a = to_csv(run_ensemble(c));
    c.workers = 3;
    const std::string b = to_csv(run_ensemble(c));
    EXPECT_EQ(a, b);
}

TEST(RunEnsemble, FailuresCountedAndExcluded) {
    EnsembleConfig c = small_config();
    c.geometry.kind = ArrayKind::NURA;
    c.geometry.seed = 3;
    c.methods = {Method::DeRootMusic, Method::DeMusic};
    c.runs = 4;
    const auto r = run_ensemble(c);
    for (const auto& cell : r.cells) {
        EXPECT_EQ(cell.runs, 4u);
        if (cell.method == Method::DeRootMusic) {
            EXPECT_EQ(cell.failures, 4u);
            EXPECT_TRUE(std::isnan(cell.mean_rmse_deg));
            ASSERT_EQ(cell.errors.size(), 1u);
            EXPECT_NE(cell.errors[0].find("[est1d]"), std::string::npos);
        } else {
            EXPECT_EQ(cell.failures, 0u);
            EXPECT_GE(cell.mean_rmse_deg, 0.0);
        }
    }
}

TEST(RunEnsemble, SnapshotAndSizeAxes) {
    EnsembleConfig c = small_config();
    c.axis = SweepAxis::Snapshots;
    c.values = {8.0, 64.0};
    EXPECT_EQ(run_ensemble(c).cells.size(), 4u);
    c.values = {8.5};
    EXPECT_THROW(run_ensemble(c), DomainError);

    c.axis = SweepAxis::Size;
    c.sources.clear();
    c.values = {4.0, 5.0};
    c.runs = 2;
    const auto r = run_ensemble(c);
    ASSERT_EQ(r.cells.size(), 4u);
}

TEST(RunEnsemble, RejectsEmptyMethods) {
    EnsembleConfig c = small_config();
    c.methods.clear();
    EXPECT_THROW(run_ensemble(c), DomainError);
}

TEST(RunTiming, ReportsPercentiles) {
    EnsembleConfig c = small_config();
    c.runs = 5;
    c.warmup = 1;
    c.values = {10.0};
    const auto r = run_timing(c);
    ASSERT_EQ(r.cells.size(), 2u);
    for (const auto& cell : r.cells) {
        ASSERT_TRUE(cell.timing.has_value());
        EXPECT_LE(cell.timing->p10_s, cell.timing->median_s);
        EXPECT_LE(cell.timing->median_s, cell.timing->p90_s);
        EXPECT_GT(cell.timing->p10_s, 0.0);
    }
    const std::string csv = to_csv(r);
    EXPECT_NE(csv.find("median_s,p10_s,p90_s"), std::string::npos);
}

TEST(RunTiming, MediansGrowWithArraySize) {
    EnsembleConfig c;
    c.geometry.kind = ArrayKind::NURA;
    c.geometry.seed = 1;
    c.sources = {{155, 20}, {21, 150}, {76, 80}};
    c.methods = {Method::DeMusic, Method::DeMusicOpt, Method::Music2D};
    c.axis = SweepAxis::Size;
    c.values = {5.0, 10.0, 15.0};
    c.runs = 7;
    c.warmup = 1;
    const auto r = run_timing(c);
    ASSERT_EQ(r.cells.size(), 9u);
    for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t v = 1; v < 3; ++v) {
            EXPECT_LE(r.cells[(v - 1) * 3 + k].timing->median_s, r.cells[v * 3 + k].timing->median_s)
                << to_string(r.cells[k].method) << " size " << c.values[v];
        }
    }
}

TEST(RunTiming, BoundedRefinementBeatsFineGridOnNura) {
    EnsembleConfig c;
    c.geometry.kind = ArrayKind::NURA;
    c.geometry.seed = 1;
    c.sources = {{155, 20}, {21, 150}, {76, 80}};
    c.methods = {Method::DeMusic, Method::DeMusicOpt};
    c.values = {10.0};
    c.runs = 150;
    c.warmup = 5;
    const auto r = run_timing(c);
    EXPECT_LT(r.cells[1].timing->median_s, r.cells[0].timing->median_s);
}

TEST(SpreadSources, DistinctAndInRange) {
    const auto s = spread_sources(9);
    ASSERT_EQ(s.size(), 9u);
    EXPECT_NO_THROW(SourceSet{s});
    for (std::size_t p = 1; p < s.size(); ++p) {
        EXPECT_NE(s[p - 1].azimuth_deg, s[p].azimuth_deg);
        EXPECT_NE(s[p - 1].elevation_deg, s[p].elevation_deg);
    }
}

TEST(Csv, HeaderAndRowCount) {
    EnsembleResult r;
    r.axis = SweepAxis::Snr;
    r.cells.push_back({-5.0, Method::DeRootMusic, 0.25, 0.125, 10, 1, std::nullopt, {}});
    const std::string csv = to_csv(r);
    EXPECT_EQ(csv,
              "sweep_axis,sweep_value,method,mean_rmse_deg,std_rmse_deg,runs,failures\n"
              "snr,-5,de-rmusic,0.25,0.125,10,1\n");
}

}  // namespace
}  // namespace krdoa
