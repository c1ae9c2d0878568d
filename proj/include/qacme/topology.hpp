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

#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qacme/common.hpp"

namespace qacme {

/// Undirected edge, always stored with u < v.
struct Edge {
    NodeId u;
    NodeId v;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

struct Neighbor {
    NodeId node;
    std::size_t edge;
};

/// Immutable simple graph with a dense vertex range and an inactive mask.
/// Edges touching inactive vertices are dropped at construction.
class Graph {
  public:
    Graph() = default;
    Graph(std::size_t vertex_count, std::vector<Edge> edges, std::span<const NodeId> inactive = {});

    std::size_t vertex_count() const { return active_.size(); }
    std::size_t active_count() const { return active_count_; }
    std::size_t edge_count() const { return edges_.size(); }
    bool active(NodeId v) const { return active_[v] != 0; }

    std::span<const Edge> edges() const { return edges_; }
    const Edge& edge(std::size_t e) const { return edges_[e]; }
    std::span<const Neighbor> neighbors(NodeId v) const;
    std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

    std::optional<std::size_t> edge_index(NodeId a, NodeId b) const;
    bool has_edge(NodeId a, NodeId b) const { return edge_index(a, b).has_value(); }

    std::vector<NodeId> inactive_vertices() const;
    std::vector<NodeId> active_vertices() const;

  private:
    std::vector<char> active_;
    std::size_t active_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_;
    std::vector<Neighbor> adjacency_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Chimera hardware graph: rows x cols unit cells, each a K_{L,L}.
/// Qubit numbering is row-major over cells; within a cell, k in [0, L) is
/// the left (vertically coupled) half and k in [L, 2L) the right
/// (horizontally coupled) half.
struct HardwareGraph {
    int rows = 0;
    int cols = 0;
    int half = 0;
    std::shared_ptr<const Graph> graph;

    NodeId qubit(int row, int col, int k) const {
        return static_cast<NodeId>(((row * cols) + col) * 2 * half + k);
    }
    bool qubit_active(int row, int col, int k) const { return graph->active(qubit(row, col, k)); }
};

struct Coord {
    int x;
    int y;
    int z;
    friend bool operator==(const Coord&, const Coord&) = default;
};

/// Two-level grid: two side x side square lattices (z = 0, 1) joined by one
/// vertical edge per (x, y). Vertex id = (y * side + x) * 2 + z.
struct LogicalGraph {
    int side = 0;
    std::shared_ptr<const Graph> graph;
    std::vector<Edge> removed_edges;

    NodeId vertex(int x, int y, int z) const { return static_cast<NodeId>(((y * side) + x) * 2 + z); }
    Coord coord(NodeId v) const {
        const int cell = static_cast<int>(v) / 2;
        return {cell % side, cell / side, static_cast<int>(v) % 2};
    }
};

HardwareGraph chimera(int rows, int cols, int half, std::span<const NodeId> inactive = {});

/// Full 2LG edge list (no masking) for the given side.
std::vector<Edge> two_level_grid_edges(int side);

LogicalGraph two_level_grid(int side, std::span<const Edge> removed_edges = {},
                            std::span<const NodeId> inactive = {});

// Square-code layout on Chimera (requires half >= 4). Cell (row y, col x)
// hosts the encoded vertices (x, y, 0) and (x, y, 1). Vertex z = 0 owns left
// qubits {0, 1} and right qubits {L, L+1}; z = 1 owns {2, 3} and {L+2, L+3}.
// The intra-cell couplers between a vertex's own left and right pairs form
// the penalty square.
std::array<NodeId, 4> square_code_group(const HardwareGraph& hw, int x, int y, int z);
/// Two-qubit chain used by the minor embedding: one left, one right qubit.
std::array<NodeId, 2> me_group(const HardwareGraph& hw, int x, int y, int z);
/// Single qubit used by the direct embedding (z = 0 left half, z = 1 right half).
NodeId direct_qubit(const HardwareGraph& hw, int x, int y, int z);
/// Side of the 2LG hosted by hw.
int hosted_side(const HardwareGraph& hw);

/// Encoded 2LG vertices whose four square-code qubits are all alive.
std::vector<char> usable_encoded_vertices(const HardwareGraph& hw);

/// Full 2LG restricted to the encoded vertices the hardware can host.
LogicalGraph usable_two_level_grid(const HardwareGraph& hw);

/// Largest 2LG subgraph that embeds one-qubit-per-vertex into hw.
LogicalGraph embeddable_subgraph(const HardwareGraph& hw);

/// Connected components of the subgraph induced by `occupied`.
std::vector<std::vector<NodeId>> percolation_subgraph(const Graph& g, std::span<const NodeId> occupied);

/// Disjoint-set forest with path compression and union by size.
class UnionFind {
  public:
    explicit UnionFind(std::size_t n);
    NodeId find(NodeId v);
    bool unite(NodeId a, NodeId b);
    std::size_t size_of(NodeId v) { return size_[find(v)]; }

  private:
    std::vector<NodeId> parent_;
    std::vector<std::size_t> size_;
};

// Line-oriented text: `GRAPH <kind> <params>`, `E u v`, `X u`.
void write_graph(std::ostream& out, const Graph& g, const std::string& kind_and_params);
void write_hardware(std::ostream& out, const HardwareGraph& hw);
void write_logical(std::ostream& out, const LogicalGraph& lg);

struct GraphFile {
    std::string kind;
    std::vector<long> params;
    std::shared_ptr<const Graph> graph;
    std::optional<HardwareGraph> hardware;
    std::optional<LogicalGraph> logical;
};

/// Builds the graph from the GRAPH/E/X records; other tags are ignored.
GraphFile parse_graph(std::span<const Record> records);
GraphFile read_graph(std::istream& in);

}  // namespace qacme
