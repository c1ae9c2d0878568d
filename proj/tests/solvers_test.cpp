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

#include "qacme/solvers.hpp"

using namespace qacme;

namespace {

std::shared_ptr<const Graph> complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId a = 0; a < n; ++a)
        for (NodeId b = a + 1; b < n; ++b) edges.push_back({a, b});
    return std::make_shared<const Graph>(n, edges);
}

std::shared_ptr<const Graph> chain_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId a = 0; a + 1 < n; ++a) edges.push_back({a, a + 1});
    return std::make_shared<const Graph>(n, edges);
}

IsingProblem random_problem(std::size_t n, Rng& rng) {
    auto g = complete_graph(n);
    IsingProblem p(g);
    std::uniform_int_distribution<int> d(-3, 3);
    for (NodeId v = 0; v < n; ++v) p.set_h(v, 0.5 * d(rng));
    for (std::size_t e = 0; e < g->edge_count(); ++e) p.set_j(e, 0.5 * d(rng));
    return p;
}

double naive_minimum(const IsingProblem& p) {
    double best = INFINITY;
    const std::size_t n = p.size();
    for (std::uint64_t b = 0; b < (1ull << n); ++b) {
        SpinConfig s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = (b >> i) & 1 ? -1 : 1;
        best = std::min(best, energy(p, s));
    }
    return best;
}

}  // namespace

TEST(Schedule, LinearAndInterpolation) {
    auto sch = AnnealSchedule::linear();
    auto [a, b] = sch.at(0.25);
    EXPECT_DOUBLE_EQ(a, 0.75);
    EXPECT_DOUBLE_EQ(b, 0.25);
    EXPECT_EQ(sch.final_b(), 1.0);
    auto tab = AnnealSchedule::from_points({{0, 2, 0}, {0.5, 1, 1}, {1, 0, 3}});
    EXPECT_DOUBLE_EQ(tab.at(0.75).first, 0.5);
    EXPECT_DOUBLE_EQ(tab.at(0.75).second, 2.0);
}

TEST(Schedule, Validation) {
    EXPECT_THROW(AnnealSchedule::from_points({{0, 1, 0}}), ParameterError);
    EXPECT_THROW(AnnealSchedule::from_points({{0, 1, 0}, {0.5, 2, 0.5}, {1, 0, 1}}), ParameterError);
    EXPECT_THROW(AnnealSchedule::from_points({{0, 1, 0}, {1, 0.5, 1}}), ParameterError);
    EXPECT_NO_THROW(AnnealSchedule::from_points({{0, 1, 0.5}, {1, 1, 0.5}}, false));
    std::istringstream in("# s A B\n0 1 0\n1 0 1\n");
    EXPECT_EQ(read_schedule(in).points().size(), 2u);
}

TEST(JPerp, ClosedForm) {
    EXPECT_NEAR(j_perp(1, 1, 2).value, 0.5 * std::log(std::tanh(0.5)), 1e-15);
    EXPECT_NEAR(j_perp(1, 1, 2).value, -0.38597, 1e-5);
    auto sat = j_perp(1e4, 1, 2);
    EXPECT_TRUE(sat.saturated);
    EXPECT_EQ(sat.value, 0.0);
    auto frozen = j_perp(1e-30, 1, 64);
    EXPECT_TRUE(frozen.saturated);
    EXPECT_EQ(frozen.value, kJPerpFloor);
    EXPECT_THROW(j_perp(1, 0, 4), DomainError);
    EXPECT_THROW(j_perp(1, -1, 4), DomainError);
}

TEST(JPerp, MonotoneAndNegative) {
    double prev = -INFINITY;
    for (double a = 0.01; a < 5.0; a += 0.01) {
        const double v = j_perp(2.0, a, 64).value;
        EXPECT_LT(v, 0.0);
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(BruteForce, SmallCases) {
    auto g1 = std::make_shared<const Graph>(1, std::vector<Edge>{});
    IsingProblem one(g1, {1.0}, {});
    auto r = brute_force(one);
    EXPECT_EQ(r.best_energy, -1.0);
    ASSERT_EQ(r.configs.size(), 1u);
    EXPECT_EQ(r.configs[0][0], -1);

    auto g = std::make_shared<const Graph>(4, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    IsingProblem loop(g, {0, 0, 0, 0}, {-1, -1, -1, 1});
    auto lr = brute_force(loop);
    EXPECT_EQ(lr.best_energy, -2.0);
    EXPECT_EQ(lr.ground_state_count, 8u);
    bool has_up = false;
    for (const auto& c : lr.configs) {
        EXPECT_EQ(energy(loop, c), -2.0);
        has_up |= c == SpinConfig{1, 1, 1, 1};
    }
    EXPECT_TRUE(has_up);
}

TEST(BruteForce, MatchesNaiveEnumeration) {
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
        auto p = random_problem(9, rng);
        EXPECT_NEAR(brute_force(p).best_energy, naive_minimum(p), 1e-12);
    }
}

TEST(BruteForce, SizeLimit) {
    IsingProblem p(chain_graph(27));
    EXPECT_THROW(brute_force(p), SizeLimitError);
}

TEST(Sa, GreedyDescentAlignsPair) {
    IsingProblem p(complete_graph(2), {0, 0}, {-1});
    Rng rng(1);
    SaParams sa{1e-9, 1e-9, 5, 10, 0};
    auto r = sa_run(p, sa, rng);
    for (const auto& c : r.configs) EXPECT_EQ(c[0], c[1]);
}

TEST(Sa, FindsBruteForceMinimum) {
    Rng rng(12);
    int hits = 0;
    for (int t = 0; t < 100; ++t) {
        auto p = random_problem(10, rng);
        SaParams sa{3.0, 0.05, 1000, 20, 0};
        auto r = sa_run(p, sa, rng);
        hits += std::abs(r.best_energy - brute_force(p).best_energy) < 1e-9;
    }
    EXPECT_GE(hits, 99);
}

TEST(Sa, IncrementalEnergyMatchesRecomputation) {
    Rng rng(13);
    auto p = random_problem(12, rng);
    SaParams sa{5.0, 0.1, 500, 3, 1000};
    EXPECT_NO_THROW(sa_run(p, sa, rng));
}

TEST(Sa, ResultInvariants) {
    Rng rng(14);
    auto p = random_problem(6, rng);
    auto r = sa_run(p, default_decoding_sa(p), rng);
    ASSERT_EQ(r.configs.size(), 10u);
    for (std::size_t i = 0; i < r.configs.size(); ++i) EXPECT_EQ(r.energies[i], energy(p, r.configs[i]));
    EXPECT_EQ(r.best_energy, r.energies[r.best_index()]);
}

TEST(Sa, DecodingDefaults) {
    auto g = chain_graph(4);
    IsingProblem p(g, {0, 0, 0, 0}, {-2, 0.5, 0});
    auto sa = default_decoding_sa(p);
    EXPECT_EQ(sa.t_init, 8.0);
    EXPECT_EQ(sa.t_final, 0.05);
    EXPECT_EQ(sa.sweeps, 10);
    EXPECT_EQ(sa.restarts, 10);
}

TEST(Sqa, ZeroProblemIsUnbiased) {
    IsingProblem p(chain_graph(3));
    Rng rng(21);
    SqaParams sp;
    sp.n_tau = 8;
    sp.sweeps = 20;
    const int runs = 10000;
    std::vector<double> sum(3, 0.0);
    for (int r = 0; r < runs; ++r) {
        auto res = sqa_run(p, AnnealSchedule::linear(), sp, rng);
        for (int i = 0; i < 3; ++i) sum[i] += res.configs[0][i];
    }
    for (double s : sum) EXPECT_LT(std::abs(s / runs), 3.0 / std::sqrt(runs));
}

TEST(Sqa, FrozenScheduleMatchesDualGibbs) {
    // Constant A, B: the per-slice magnetization of one spin is the Gibbs
    // average of the n_tau-site classical ring.
    const int nt = 4;
    const double beta = 1.5, a = 0.8, b = 0.6, h = -0.7;
    auto g = std::make_shared<const Graph>(1, std::vector<Edge>{});
    IsingProblem p(g, {h}, {});
    const double jp = j_perp(beta, a, nt).value;
    double z = 0.0, m = 0.0;
    for (int bits = 0; bits < (1 << nt); ++bits) {
        double e = 0.0, mag = 0.0;
        for (int t = 0; t < nt; ++t) {
            const int s = (bits >> t) & 1 ? -1 : 1;
            const int s2 = (bits >> ((t + 1) % nt)) & 1 ? -1 : 1;
            e += beta / nt * b * h * s + jp * s * s2;
            mag += s;
        }
        z += std::exp(-e);
        m += mag / nt * std::exp(-e);
    }
    const double expected = m / z;

    auto sch = AnnealSchedule::from_points({{0, a, b}, {1, a, b}}, false);
    SqaParams sp;
    sp.n_tau = nt;
    sp.sweeps = 50;
    sp.beta = beta;
    Rng rng(22);
    const int runs = 20000;
    double sum = 0.0, sq = 0.0;
    for (int r = 0; r < runs; ++r) {
        const double v = sqa_run(p, sch, sp, rng).configs[0][0];
        sum += v;
        sq += v * v;
    }
    const double mean = sum / runs;
    const double se = std::sqrt((sq / runs - mean * mean) / runs);
    EXPECT_NEAR(mean, expected, 4 * se);
}

TEST(Sqa, FerromagneticPairAligns) {
    IsingProblem p(chain_graph(2), {0, 0}, {-1});
    SqaParams sp;
    sp.n_tau = 16;
    sp.sweeps = 500;
    sp.beta = 5.0;
    Rng rng(23);
    int aligned = 0;
    for (int r = 0; r < 200; ++r) {
        auto res = sqa_run(p, AnnealSchedule::linear(), sp, rng);
        aligned += res.configs[0][0] == res.configs[0][1];
        EXPECT_EQ(res.energies[0], energy(p, res.configs[0]));
    }
    EXPECT_GE(aligned, 190);
}

TEST(Sqa, MajorityReadout) {
    IsingProblem p(chain_graph(4), {-1, -1, -1, -1}, {-1, -1, -1});
    SqaParams sp;
    sp.n_tau = 8;
    sp.sweeps = 300;
    sp.beta = 8.0;
    sp.readout = Readout::MajoritySlice;
    Rng rng(24);
    auto res = sqa_run(p, AnnealSchedule::linear(), sp, rng);
    EXPECT_EQ(res.configs[0], (SpinConfig{1, 1, 1, 1}));
}

TEST(Sqa, RejectsBadParams) {
    IsingProblem p(chain_graph(2));
    Rng rng(1);
    SqaParams sp;
    sp.n_tau = 1;
    EXPECT_THROW(sqa_run(p, AnnealSchedule::linear(), sp, rng), ParameterError);
    sp.n_tau = 4;
    sp.sweeps = 0;
    EXPECT_THROW(sqa_run(p, AnnealSchedule::linear(), sp, rng), ParameterError);
}
