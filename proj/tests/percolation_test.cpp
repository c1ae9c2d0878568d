// Copyright 2026 The qacme Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "qacme/percolation.hpp"

using namespace qacme;

TEST(BqStatistics, UnbrokenReadoutsGiveZero) {
    auto lg = two_level_grid(2);
    std::vector<std::vector<GroupState>> readouts(5, std::vector<GroupState>(8));
    auto st = bq_statistics(readouts, *lg.graph);
    EXPECT_EQ(st.mean_p_bq, 0.0);
    EXPECT_EQ(st.mean_p_tie, 0.0);
    EXPECT_EQ(st.sample_count, 5u);
    for (double p : st.per_qubit_p) EXPECT_EQ(p, 0.0);
}

TEST(BqStatistics, PersistentTie) {
    auto lg = two_level_grid(2);
    std::vector<std::vector<GroupState>> readouts(4, std::vector<GroupState>(8));
    for (auto& r : readouts) r[3] = {GroupKind::Tie, 0};
    auto st = bq_statistics(readouts, *lg.graph);
    EXPECT_EQ(st.per_qubit_p[3], 1.0);
    EXPECT_DOUBLE_EQ(st.mean_p_tie, 1.0 / 8.0);
    EXPECT_DOUBLE_EQ(st.mean_p_bq, 1.0 / 8.0);
}

TEST(BqStatistics, UniformFourSpinGroups) {
    auto lg = two_level_grid(2);
    Rng rng(1);
    std::vector<std::vector<GroupState>> readouts(12500, std::vector<GroupState>(8));
    std::vector<Spin> g(4);
    for (auto& r : readouts) {
        for (auto& st : r) {
            for (auto& s : g) s = random_spin(rng);
            st = classify_group(g);
        }
    }
    auto st = bq_statistics(readouts, *lg.graph);
    EXPECT_NEAR(st.mean_p_tie, 0.375, 0.01);
    EXPECT_NEAR(st.mean_p_bq, 0.875, 0.01);
    EXPECT_LE(st.mean_p_tie, st.mean_p_bq);
    const auto active = lg.graph->active_vertices();
    const double cv = per_qubit_cv(st, active);
    EXPECT_TRUE(std::isfinite(cv));
    EXPECT_LT(cv, 0.05);
}

TEST(BqClusters, SmallCases) {
    auto lg = two_level_grid(4);
    EXPECT_TRUE(bq_clusters(*lg.graph, {}).empty());
    const std::vector<NodeId> pair{lg.vertex(1, 1, 0), lg.vertex(1, 1, 1)};
    auto h = bq_clusters(*lg.graph, pair);
    ASSERT_EQ(h.size(), 1u);
    EXPECT_EQ(h.at(2), 1u);
}

TEST(BqClusters, MassConservationAndSubThresholdRegime) {
    auto lg = two_level_grid(8);
    Rng rng(2);
    std::size_t largest = 0;
    for (int t = 0; t < 1000; ++t) {
        std::vector<NodeId> bq;
        for (NodeId v = 0; v < 128; ++v)
            if (uniform01(rng) < 0.1) bq.push_back(v);
        auto h = bq_clusters(*lg.graph, bq);
        std::size_t mass = 0;
        for (auto [s, c] : h) mass += s * c;
        EXPECT_EQ(mass, bq.size());
        if (!h.empty()) largest = std::max(largest, h.rbegin()->first);
    }
    EXPECT_LT(largest, 20u);
}

TEST(DomainScan, Extremes) {
    Rng rng(3);
    EXPECT_EQ(domain_size_scan(6, 0.0, 50, rng).mean_size, 0.0);
    EXPECT_EQ(domain_size_scan(6, 1.0, 50, rng).mean_size, 72.0);
    EXPECT_THROW(domain_size_scan(6, 1.5, 10, rng), ParameterError);
}

TEST(DomainScan, MonotoneInPWithMatchedSeeds) {
    double prev = -1.0;
    std::vector<std::size_t> prev_sizes;
    for (int i = 0; i <= 20; ++i) {
        const double p = i / 20.0;
        Rng rng(4);
        auto scan = domain_size_scan(10, p, 200, rng);
        EXPECT_GE(scan.mean_size, prev);
        if (!prev_sizes.empty())
            for (std::size_t t = 0; t < scan.sizes.size(); ++t) EXPECT_GE(scan.sizes[t], prev_sizes[t]);
        prev = scan.mean_size;
        prev_sizes = scan.sizes;
    }
}

TEST(DomainScan, ThreadCountDoesNotChangeResults) {
    Rng a(5), b(5);
    auto s1 = domain_size_scan(12, 0.375, 300, a, 1);
    auto s4 = domain_size_scan(12, 0.375, 300, b, 4);
    EXPECT_EQ(s1.sizes, s4.sizes);
    EXPECT_EQ(central_vertex(12), two_level_grid(12).vertex(6, 6, 0));
}

TEST(Spanning, LatticeShapes) {
    auto sq = spanning_lattice(Lattice::Square, 5);
    EXPECT_EQ(sq.graph.vertex_count(), 25u);
    EXPECT_EQ(sq.graph.edge_count(), 40u);
    EXPECT_EQ(sq.left.size(), 5u);
    auto cu = spanning_lattice(Lattice::Cubic, 4);
    EXPECT_EQ(cu.graph.vertex_count(), 64u);
    EXPECT_EQ(cu.graph.edge_count(), 144u);
    EXPECT_EQ(cu.right.size(), 16u);
    auto tl = spanning_lattice(Lattice::TwoLevelGrid, 4);
    EXPECT_EQ(tl.graph.vertex_count(), 32u);
    EXPECT_EQ(tl.left.size(), 8u);
    for (Lattice l : {Lattice::Square, Lattice::Cubic, Lattice::TwoLevelGrid}) EXPECT_EQ(parse_lattice(lattice_name(l)), l);
}

TEST(Spanning, ProbabilityIsMonotone) {
    auto lat = spanning_lattice(Lattice::Square, 16);
    Rng rng(6);
    auto counts = spanning_counts(lat, 400, rng);
    for (auto c : counts) {
        EXPECT_GE(c, 16u);
        EXPECT_LE(c, 256u);
    }
    EXPECT_EQ(spanning_probability(counts, 256, 0.0), 0.0);
    EXPECT_EQ(spanning_probability(counts, 256, 1.0), 1.0);
    double prev = 0.0;
    for (double p = 0.0; p <= 1.0; p += 0.02) {
        const double r = spanning_probability(counts, 256, p);
        EXPECT_GE(r, prev - 1e-12);
        prev = r;
    }
    EXPECT_NEAR(spanning_probability(counts, 256, 0.5927), 0.5, 0.15);
}

TEST(Threshold, SquareLatticeSmallSizes) {
    Rng rng(7);
    const std::vector<int> sizes{16, 32};
    auto est = estimate_site_threshold(Lattice::Square, sizes, 400, rng, 1, 20);
    EXPECT_NEAR(est.estimate, 0.5927, 0.04);
    EXPECT_GT(est.err, 0.0);
    EXPECT_EQ(est.crossings.size(), 1u);
    const std::vector<int> one{16};
    EXPECT_THROW(estimate_site_threshold(Lattice::Square, one, 10, rng), ParameterError);
}

TEST(TailFit, RecoversExponential) {
    SizeHistogram h;
    for (std::size_t s = 1; s <= 12; ++s) h[s] = static_cast<std::size_t>(std::llround(1e6 * 0.5 * std::exp(-0.7 * s)));
    h[40] = 1;
    auto fit = fit_cluster_tail(h, 1e6);
    EXPECT_NEAR(fit.alpha, 0.5, 0.01);
    EXPECT_NEAR(fit.gamma, 0.7, 0.005);
    EXPECT_EQ(fit.bins, 12u);
    SizeHistogram thin{{1, 100}, {2, 3}};
    EXPECT_THROW(fit_cluster_tail(thin, 10.0), EstimationError);
}

TEST(DecodingCost, Limits) {
    TailFit none{0.0, 1.0, 0.0, 2};
    auto c = decoding_cost_estimate(1000, 0.1, 10, none);
    EXPECT_EQ(c.p_r, 1.0);
    EXPECT_DOUBLE_EQ(c.t_ratio, 100.0);
    EXPECT_FALSE(c.above_threshold);
    TailFit growing{0.1, -0.1, 0.0, 2};
    EXPECT_TRUE(decoding_cost_estimate(1000, 0.1, 10, growing).above_threshold);
    EXPECT_THROW(decoding_cost_estimate(1000, 0.0, 10, none), ParameterError);
}

TEST(DecodingCost, LogarithmicDomainCapKeepsSuccessConstant) {
    TailFit fit{0.5, std::log(10.0), 0.0, 5};
    std::vector<double> prs;
    for (int k = 2; k <= 6; ++k) {
        const auto n = static_cast<std::size_t>(std::llround(std::pow(10.0, k)));
        prs.push_back(decoding_cost_estimate(n, 0.1, k, fit).p_r);
    }
    for (double p : prs) EXPECT_NEAR(p, std::exp(-0.5), 0.01);
}

TEST(PercolationCsv, Headers) {
    std::ostringstream a, b, c;
    DomainScan s{0.5, {1, 3}, 2.0};
    write_scan_csv(a, std::span<const DomainScan>(&s, 1));
    EXPECT_EQ(a.str(), "p,mean_size,stderr\n0.5,2,1\n");
    write_histogram_csv(b, SizeHistogram{{2, 5}});
    EXPECT_EQ(b.str(), "size,count\n2,5\n");
    ThresholdEstimate t{Lattice::Cubic, 0.3, 0.01, {}};
    write_threshold_csv(c, std::span<const ThresholdEstimate>(&t, 1));
    EXPECT_EQ(c.str(), "lattice,estimate,err\ncubic,0.29999999999999999,0.01\n");
}
