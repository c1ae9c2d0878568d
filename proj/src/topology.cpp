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

#include "qacme/topology.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>

namespace qacme {

namespace {

std::uint64_t edge_key(NodeId a, NodeId b) {
    const Edge e = make_edge(a, b);
    return (static_cast<std::uint64_t>(e.u) << 32) | e.v;
}

}  // namespace

Graph::Graph(std::size_t vertex_count, std::vector<Edge> edges, std::span<const NodeId> inactive)
    : active_(vertex_count, 1) {
    for (NodeId v : inactive) {
        if (v >= vertex_count) {
            throw ParameterError("inactive vertex " + std::to_string(v) + " out of range");
        }
        active_[v] = 0;
    }
    active_count_ = static_cast<std::size_t>(std::count(active_.begin(), active_.end(), 1));

    for (Edge e : edges) {
        e = make_edge(e.u, e.v);
        if (e.v >= vertex_count || e.u == e.v) {
            throw ParameterError("bad edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ")");
        }
        if (!active_[e.u] || !active_[e.v]) continue;
        if (index_.contains(edge_key(e.u, e.v))) continue;
        index_.emplace(edge_key(e.u, e.v), edges_.size());
        edges_.push_back(e);
    }

    offsets_.assign(vertex_count + 1, 0);
    for (const Edge& e : edges_) {
        ++offsets_[e.u + 1];
        ++offsets_[e.v + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    adjacency_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        adjacency_[fill[edges_[i].u]++] = {edges_[i].v, i};
        adjacency_[fill[edges_[i].v]++] = {edges_[i].u, i};
    }
}

std::span<const Neighbor> Graph::neighbors(NodeId v) const {
    return std::span<const Neighbor>(adjacency_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
}

std::optional<std::size_t> Graph::edge_index(NodeId a, NodeId b) const {
    auto it = index_.find(edge_key(a, b));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<NodeId> Graph::inactive_vertices() const {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < active_.size(); ++v)
        if (!active_[v]) out.push_back(v);
    return out;
}

std::vector<NodeId> Graph::active_vertices() const {
    std::vector<NodeId> out;
    out.reserve(active_count_);
    for (NodeId v = 0; v < active_.size(); ++v)
        if (active_[v]) out.push_back(v);
    return out;
}

HardwareGraph chimera(int rows, int cols, int half, std::span<const NodeId> inactive) {
    if (rows < 1 || cols < 1 || half < 1) throw ParameterError("chimera dimensions must be >= 1");
    HardwareGraph hw{rows, cols, half, nullptr};
    const std::size_t n = static_cast<std::size_t>(rows) * cols * 2 * half;
    std::vector<Edge> edges;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            for (int i = 0; i < half; ++i)
                for (int j = 0; j < half; ++j) edges.push_back(make_edge(hw.qubit(r, c, i), hw.qubit(r, c, half + j)));
            for (int k = 0; k < half; ++k) {
                if (r + 1 < rows) edges.push_back(make_edge(hw.qubit(r, c, k), hw.qubit(r + 1, c, k)));
                if (c + 1 < cols) edges.push_back(make_edge(hw.qubit(r, c, half + k), hw.qubit(r, c + 1, half + k)));
            }
        }
    }
    hw.graph = std::make_shared<const Graph>(n, std::move(edges), inactive);
    return hw;
}

std::vector<Edge> two_level_grid_edges(int side) {
    if (side < 1) throw ParameterError("2LG side must be >= 1");
    LogicalGraph shape{side, nullptr, {}};
    std::vector<Edge> edges;
    for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
            for (int z = 0; z < 2; ++z) {
                if (x + 1 < side) edges.push_back(make_edge(shape.vertex(x, y, z), shape.vertex(x + 1, y, z)));
                if (y + 1 < side) edges.push_back(make_edge(shape.vertex(x, y, z), shape.vertex(x, y + 1, z)));
            }
            edges.push_back(make_edge(shape.vertex(x, y, 0), shape.vertex(x, y, 1)));
        }
    }
    return edges;
}

LogicalGraph two_level_grid(int side, std::span<const Edge> removed_edges, std::span<const NodeId> inactive) {
    std::vector<Edge> full = two_level_grid_edges(side);
    std::set<Edge> removed;
    for (Edge e : removed_edges) {
        e = make_edge(e.u, e.v);
        if (std::find(full.begin(), full.end(), e) == full.end()) {
            throw ParameterError("removed edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                 ") is not a 2LG edge");
        }
        removed.insert(e);
    }
    std::vector<Edge> kept;
    for (const Edge& e : full)
        if (!removed.contains(e)) kept.push_back(e);
    const std::size_t n = static_cast<std::size_t>(side) * side * 2;
    auto g = std::make_shared<const Graph>(n, std::move(kept), inactive);
    // Edges lost to inactive endpoints count as removed too.
    std::vector<Edge> all_removed;
    for (const Edge& e : full)
        if (!g->has_edge(e.u, e.v)) all_removed.push_back(e);
    return LogicalGraph{side, std::move(g), std::move(all_removed)};
}

int hosted_side(const HardwareGraph& hw) { return std::min(hw.rows, hw.cols); }

std::array<NodeId, 4> square_code_group(const HardwareGraph& hw, int x, int y, int z) {
    if (hw.half < 4) throw EmbeddingError("square code needs half-cells of at least 4 qubits");
    const int l = hw.half;
    const int o = 2 * z;
    return {hw.qubit(y, x, o), hw.qubit(y, x, o + 1), hw.qubit(y, x, l + o), hw.qubit(y, x, l + o + 1)};
}

std::array<NodeId, 2> me_group(const HardwareGraph& hw, int x, int y, int z) {
    if (hw.half < 4) throw EmbeddingError("2LG layout needs half-cells of at least 4 qubits");
    return {hw.qubit(y, x, 2 * z), hw.qubit(y, x, hw.half + 2 * z)};
}

NodeId direct_qubit(const HardwareGraph& hw, int x, int y, int z) {
    if (hw.half < 4) throw EmbeddingError("2LG layout needs half-cells of at least 4 qubits");
    return z == 0 ? hw.qubit(y, x, 0) : hw.qubit(y, x, hw.half + 2);
}

std::vector<char> usable_encoded_vertices(const HardwareGraph& hw) {
    const int side = hosted_side(hw);
    LogicalGraph shape{side, nullptr, {}};
    std::vector<char> usable(static_cast<std::size_t>(side) * side * 2, 0);
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x)
            for (int z = 0; z < 2; ++z) {
                auto group = square_code_group(hw, x, y, z);
                usable[shape.vertex(x, y, z)] =
                    std::all_of(group.begin(), group.end(), [&](NodeId q) { return hw.graph->active(q); });
            }
    return usable;
}

namespace {

std::vector<NodeId> unusable_list(const std::vector<char>& usable) {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < usable.size(); ++v)
        if (!usable[v]) out.push_back(v);
    return out;
}

}  // namespace

LogicalGraph usable_two_level_grid(const HardwareGraph& hw) {
    auto usable = usable_encoded_vertices(hw);
    auto dead = unusable_list(usable);
    return two_level_grid(hosted_side(hw), {}, dead);
}

LogicalGraph embeddable_subgraph(const HardwareGraph& hw) {
    const int side = hosted_side(hw);
    auto usable = usable_encoded_vertices(hw);
    LogicalGraph shape{side, nullptr, {}};
    std::vector<Edge> removed;
    for (const Edge& e : two_level_grid_edges(side)) {
        const Coord a = shape.coord(e.u);
        const Coord b = shape.coord(e.v);
        const NodeId qa = direct_qubit(hw, a.x, a.y, a.z);
        const NodeId qb = direct_qubit(hw, b.x, b.y, b.z);
        const bool ok = usable[e.u] && usable[e.v] && hw.graph->has_edge(qa, qb);
        if (!ok) removed.push_back(e);
    }
    return two_level_grid(side, removed, unusable_list(usable));
}

UnionFind::UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), NodeId{0});
}

NodeId UnionFind::find(NodeId v) {
    NodeId root = v;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[v] != root) {
        NodeId next = parent_[v];
        parent_[v] = root;
        v = next;
    }
    return root;
}

bool UnionFind::unite(NodeId a, NodeId b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
}

std::vector<std::vector<NodeId>> percolation_subgraph(const Graph& g, std::span<const NodeId> occupied) {
    std::vector<char> in(g.vertex_count(), 0);
    for (NodeId v : occupied) {
        if (v >= g.vertex_count()) throw ParameterError("occupied vertex out of range");
        in[v] = 1;
    }
    UnionFind uf(g.vertex_count());
    for (const Edge& e : g.edges())
        if (in[e.u] && in[e.v]) uf.unite(e.u, e.v);

    std::vector<std::vector<NodeId>> components;
    std::vector<std::size_t> slot(g.vertex_count(), SIZE_MAX);
    for (NodeId v = 0; v < g.vertex_count(); ++v) {
        if (!in[v]) continue;
        const NodeId r = uf.find(v);
        if (slot[r] == SIZE_MAX) {
            slot[r] = components.size();
            components.emplace_back();
        }
        components[slot[r]].push_back(v);
    }
    return components;
}

void write_graph(std::ostream& out, const Graph& g, const std::string& kind_and_params) {
    out << "GRAPH " << kind_and_params << '\n';
    for (const Edge& e : g.edges()) out << "E " << e.u << ' ' << e.v << '\n';
    for (NodeId v : g.inactive_vertices()) out << "X " << v << '\n';
}

void write_hardware(std::ostream& out, const HardwareGraph& hw) {
    write_graph(out, *hw.graph,
                "chimera " + std::to_string(hw.rows) + ' ' + std::to_string(hw.cols) + ' ' + std::to_string(hw.half));
}

void write_logical(std::ostream& out, const LogicalGraph& lg) {
    write_graph(out, *lg.graph, "2lg " + std::to_string(lg.side));
}

GraphFile parse_graph(std::span<const Record> records) {
    GraphFile gf;
    std::vector<Edge> edges;
    std::vector<NodeId> inactive;
    bool seen_header = false;
    for (const Record& r : records) {
        if (r.tag == "GRAPH") {
            if (r.fields.empty()) throw FormatError("GRAPH line without kind");
            seen_header = true;
            gf.kind = r.fields[0];
            for (std::size_t i = 1; i < r.fields.size(); ++i) gf.params.push_back(parse_long(r.fields[i]));
        } else if (r.tag == "E") {
            if (r.fields.size() != 2) throw FormatError("E line needs two vertices");
            edges.push_back(make_edge(static_cast<NodeId>(parse_long(r.fields[0])),
                                      static_cast<NodeId>(parse_long(r.fields[1]))));
        } else if (r.tag == "X") {
            if (r.fields.size() != 1) throw FormatError("X line needs one vertex");
            inactive.push_back(static_cast<NodeId>(parse_long(r.fields[0])));
        }
    }
    if (!seen_header) throw FormatError("missing GRAPH header");

    auto need = [&](std::size_t k) {
        if (gf.params.size() != k) throw FormatError("GRAPH " + gf.kind + " expects " + std::to_string(k) + " params");
    };
    if (gf.kind == "chimera") {
        need(3);
        HardwareGraph hw = chimera(static_cast<int>(gf.params[0]), static_cast<int>(gf.params[1]),
                                   static_cast<int>(gf.params[2]), inactive);
        for (const Edge& e : edges)
            if (!hw.graph->has_edge(e.u, e.v)) throw FormatError("edge not in chimera graph");
        if (edges.size() != hw.graph->edge_count()) {
            // A file may list a sparser edge set; honour it as a generic graph.
            hw.graph = std::make_shared<const Graph>(hw.graph->vertex_count(), edges, inactive);
        }
        gf.graph = hw.graph;
        gf.hardware = hw;
    } else if (gf.kind == "2lg") {
        need(1);
        const int side = static_cast<int>(gf.params[0]);
        std::set<Edge> present(edges.begin(), edges.end());
        std::vector<Edge> removed;
        for (const Edge& e : two_level_grid_edges(side))
            if (!present.contains(e)) removed.push_back(e);
        LogicalGraph lg = two_level_grid(side, removed, inactive);
        if (lg.graph->edge_count() != present.size()) throw FormatError("edge not in 2LG");
        gf.graph = lg.graph;
        gf.logical = lg;
    } else if (gf.kind == "generic") {
        need(1);
        gf.graph = std::make_shared<const Graph>(static_cast<std::size_t>(gf.params[0]), edges, inactive);
    } else {
        throw FormatError("unknown graph kind '" + gf.kind + "'");
    }
    return gf;
}

GraphFile read_graph(std::istream& in) {
    auto records = read_records(in);
    return parse_graph(records);
}

}  // namespace qacme
