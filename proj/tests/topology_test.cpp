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

#include <algorithm>
#include <set>
#include <sstream>

#include "qacme/topology.hpp"

using namespace qacme;

TEST(Chimera, FullDeviceCounts) {
    auto hw = chimera(8, 8, 4);
    EXPECT_EQ(hw.graph->vertex_count(), 512u);
    EXPECT_EQ(hw.graph->active_count(), 512u);
    EXPECT_EQ(hw.graph->edge_count(), 1472u);
    const std::size_t formula = 8 * 8 * 16 + 4 * (8 * 7 + 8 * 7);
    EXPECT_EQ(hw.graph->edge_count(), formula);
}

TEST(Chimera, DeadQubitsReduceActiveCount) {
    std::vector<NodeId> dead{3, 40, 77, 130, 201, 288, 350, 499};
    auto hw = chimera(8, 8, 4, dead);
    EXPECT_EQ(hw.graph->active_count(), 504u);
    for (NodeId v : dead) EXPECT_EQ(hw.graph->degree(v), 0u);
}

TEST(Chimera, OutOfRangeInactiveThrows) {
    std::vector<NodeId> dead{512};
    EXPECT_THROW(chimera(8, 8, 4, dead), ParameterError);
    EXPECT_THROW(chimera(0, 8, 4), ParameterError);
}

TEST(Chimera, StructureInvariants) {
    for (int half : {1, 2, 4}) {
        auto hw = chimera(3, 4, half);
        for (const Edge& e : hw.graph->edges()) {
            const int cu = static_cast<int>(e.u) / (2 * half), cv = static_cast<int>(e.v) / (2 * half);
            const int ku = static_cast<int>(e.u) % (2 * half), kv = static_cast<int>(e.v) % (2 * half);
            if (cu == cv) {
                EXPECT_NE(ku < half, kv < half);
            } else {
                EXPECT_EQ(ku, kv);
                const int ru = cu / 4, rv = cv / 4;
                if (ru != rv) EXPECT_LT(ku, half);  // vertical couples left halves
                else EXPECT_GE(ku, half);
            }
        }
        for (NodeId v = 0; v < hw.graph->vertex_count(); ++v) EXPECT_LE(hw.graph->degree(v), std::size_t(half + 2));
    }
}

TEST(TwoLevelGrid, Counts) {
    auto lg = two_level_grid(8);
    EXPECT_EQ(lg.graph->vertex_count(), 128u);
    EXPECT_EQ(lg.graph->edge_count(), 288u);
    auto small = two_level_grid(2);
    EXPECT_EQ(small.graph->vertex_count(), 8u);
    EXPECT_EQ(small.graph->edge_count(), 12u);
    for (NodeId v = 0; v < 128; ++v) EXPECT_LE(lg.graph->degree(v), 5u);
}

TEST(TwoLevelGrid, CoordinatesAreBijective) {
    auto lg = two_level_grid(5);
    std::set<std::tuple<int, int, int>> seen;
    for (NodeId v = 0; v < lg.graph->vertex_count(); ++v) {
        Coord c = lg.coord(v);
        EXPECT_EQ(lg.vertex(c.x, c.y, c.z), v);
        seen.insert({c.x, c.y, c.z});
    }
    EXPECT_EQ(seen.size(), 50u);
}

TEST(TwoLevelGrid, RemovedEdges) {
    std::vector<Edge> removed{make_edge(0, 1)};
    auto lg = two_level_grid(2, removed);
    EXPECT_EQ(lg.graph->edge_count(), 11u);
    EXPECT_FALSE(lg.graph->has_edge(0, 1));
    ASSERT_EQ(lg.removed_edges.size(), 1u);
    std::vector<Edge> bogus{make_edge(0, 7)};
    EXPECT_THROW(two_level_grid(2, bogus), ParameterError);
}

TEST(EmbeddableSubgraph, FullDevice) {
    auto hw = chimera(8, 8, 4);
    auto lg = embeddable_subgraph(hw);
    EXPECT_EQ(lg.graph->active_count(), 128u);
    auto full = two_level_grid(8);
    for (const Edge& e : lg.graph->edges()) EXPECT_TRUE(full.graph->has_edge(e.u, e.v));
    // Layer 0 keeps only y-edges, layer 1 only x-edges, plus every interlayer edge.
    EXPECT_EQ(lg.graph->edge_count(), std::size_t(8 * 7 + 8 * 7 + 64));
    for (const Edge& e : lg.graph->edges()) {
        Coord a = lg.coord(e.u), b = lg.coord(e.v);
        const NodeId qa = direct_qubit(hw, a.x, a.y, a.z), qb = direct_qubit(hw, b.x, b.y, b.z);
        EXPECT_TRUE(hw.graph->has_edge(qa, qb));
    }
}

TEST(EmbeddableSubgraph, DeadCellExcludesBothVertices) {
    std::vector<NodeId> dead;
    auto probe = chimera(8, 8, 4);
    for (int k = 0; k < 8; ++k) dead.push_back(probe.qubit(2, 3, k));
    auto hw = chimera(8, 8, 4, dead);
    auto lg = embeddable_subgraph(hw);
    EXPECT_EQ(lg.graph->active_count(), 126u);
    EXPECT_FALSE(lg.graph->active(lg.vertex(3, 2, 0)));
    EXPECT_FALSE(lg.graph->active(lg.vertex(3, 2, 1)));
}

TEST(EmbeddableSubgraph, FixtureMaskGives120) {
    // One dead qubit in each of eight distinct square-code groups.
    auto probe = chimera(8, 8, 4);
    std::vector<NodeId> dead{probe.qubit(0, 1, 0), probe.qubit(1, 5, 6), probe.qubit(2, 2, 3), probe.qubit(3, 7, 4),
                             probe.qubit(4, 0, 1), probe.qubit(5, 4, 7), probe.qubit(6, 6, 2), probe.qubit(7, 3, 5)};
    auto hw = chimera(8, 8, 4, dead);
    EXPECT_EQ(hw.graph->active_count(), 504u);
    EXPECT_EQ(embeddable_subgraph(hw).graph->active_count(), 120u);
}

TEST(Percolation, Components) {
    auto lg = two_level_grid(8);
    EXPECT_TRUE(percolation_subgraph(*lg.graph, {}).empty());
    auto all = lg.graph->active_vertices();
    auto one = percolation_subgraph(*lg.graph, all);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].size(), 128u);
    std::vector<NodeId> apart{lg.vertex(0, 0, 0), lg.vertex(2, 0, 1)};
    auto two = percolation_subgraph(*lg.graph, apart);
    ASSERT_EQ(two.size(), 2u);
    EXPECT_EQ(two[0].size(), 1u);
}

TEST(Percolation, IdempotentOnComponents) {
    auto lg = two_level_grid(6);
    Rng rng(5);
    std::vector<NodeId> occ;
    for (NodeId v = 0; v < lg.graph->vertex_count(); ++v)
        if (uniform01(rng) < 0.4) occ.push_back(v);
    auto comps = percolation_subgraph(*lg.graph, occ);
    std::size_t total = 0;
    for (const auto& c : comps) {
        total += c.size();
        auto again = percolation_subgraph(*lg.graph, c);
        ASSERT_EQ(again.size(), 1u);
        EXPECT_EQ(again[0], c);
    }
    EXPECT_EQ(total, occ.size());
}

TEST(GraphIo, RoundTrip) {
    std::vector<NodeId> dead{5, 100};
    auto hw = chimera(4, 4, 4, dead);
    std::stringstream ss;
    write_hardware(ss, hw);
    GraphFile gf = read_graph(ss);
    ASSERT_TRUE(gf.hardware.has_value());
    EXPECT_EQ(gf.graph->edge_count(), hw.graph->edge_count());
    EXPECT_EQ(gf.graph->inactive_vertices(), dead);

    auto lg = embeddable_subgraph(chimera(3, 3, 4));
    std::stringstream s2;
    write_logical(s2, lg);
    GraphFile g2 = read_graph(s2);
    ASSERT_TRUE(g2.logical.has_value());
    EXPECT_EQ(g2.graph->edge_count(), lg.graph->edge_count());
    std::istringstream bad("GRAPH torus 3\n");
    EXPECT_THROW(read_graph(bad), FormatError);
}
