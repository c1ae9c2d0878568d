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

#include "qacme/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>

namespace qacme {

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Direct: return "direct";
        case Scheme::ME: return "me";
        case Scheme::QACME: return "qacme";
    }
    return "?";
}

Scheme parse_scheme(const std::string& name) {
    if (name == "direct" || name == "D") return Scheme::Direct;
    if (name == "me" || name == "ME") return Scheme::ME;
    if (name == "qacme" || name == "QACME" || name == "qac-me") return Scheme::QACME;
    throw ParameterError("unknown scheme '" + name + "'");
}

double scheme_boost(Scheme s) { return s == Scheme::QACME ? 2.0 : 1.0; }

std::size_t scheme_group_size(Scheme s) {
    switch (s) {
        case Scheme::Direct: return 1;
        case Scheme::ME: return 2;
        case Scheme::QACME: return 4;
    }
    return 0;
}

namespace {

struct Coupler {
    NodeId a;
    NodeId b;
    double scale;  // fraction of J placed on this coupler
};

std::vector<NodeId> group_for(Scheme scheme, const HardwareGraph& hw, Coord c) {
    switch (scheme) {
        case Scheme::Direct: return {direct_qubit(hw, c.x, c.y, c.z)};
        case Scheme::ME: {
            auto g = me_group(hw, c.x, c.y, c.z);
            return {g.begin(), g.end()};
        }
        case Scheme::QACME: {
            auto g = square_code_group(hw, c.x, c.y, c.z);
            return {g.begin(), g.end()};
        }
    }
    return {};
}

// Physical couplers for the logical edge a-b (a precedes b in coordinate order).
std::vector<Coupler> couplers_for(Scheme scheme, BlueCouplers blue, const HardwareGraph& hw, Coord a, Coord b) {
    const int l = hw.half;
    auto q = [&](Coord c, int k) { return hw.qubit(c.y, c.x, k); };
    std::vector<Coupler> out;
    if (a.z != b.z) {
        const Coord c0 = a.z == 0 ? a : b;
        switch (scheme) {
            case Scheme::Direct: out.push_back({q(c0, 0), q(c0, l + 2), 1.0}); break;
            case Scheme::ME:
                out.push_back({q(c0, 0), q(c0, l + 2), 0.5});
                out.push_back({q(c0, 2), q(c0, l), 0.5});
                break;
            case Scheme::QACME:
                if (blue == BlueCouplers::Pair) {
                    out.push_back({q(c0, 0), q(c0, l + 2), 1.0});
                    out.push_back({q(c0, 1), q(c0, l + 3), 1.0});
                } else {
                    for (int i : {0, 1})
                        for (int j : {l + 2, l + 3}) out.push_back({q(c0, i), q(c0, j), 0.25});
                    for (int i : {2, 3})
                        for (int j : {l, l + 1}) out.push_back({q(c0, i), q(c0, j), 0.25});
                }
                break;
        }
        return out;
    }
    const int o = 2 * a.z;
    const bool horizontal = a.x != b.x;
    switch (scheme) {
        case Scheme::Direct: {
            const int k = a.z == 0 ? 0 : l + 2;
            out.push_back({q(a, k), q(b, k), 1.0});
            break;
        }
        case Scheme::ME: {
            const int k = horizontal ? l + o : o;
            out.push_back({q(a, k), q(b, k), 1.0});
            break;
        }
        case Scheme::QACME: {
            const int k = horizontal ? l + o : o;
            out.push_back({q(a, k), q(b, k), 1.0});
            out.push_back({q(a, k + 1), q(b, k + 1), 1.0});
            break;
        }
    }
    return out;
}

std::vector<Edge> penalty_couplers(Scheme scheme, const std::vector<NodeId>& group) {
    switch (scheme) {
        case Scheme::Direct: return {};
        case Scheme::ME: return {make_edge(group[0], group[1])};
        case Scheme::QACME:
            return {make_edge(group[0], group[2]), make_edge(group[0], group[3]), make_edge(group[1], group[2]),
                    make_edge(group[1], group[3])};
    }
    return {};
}

EmbeddedProblem build(Scheme scheme, BlueCouplers blue, const IsingProblem& logical, const LogicalGraph& lg,
                      const HardwareGraph& hw) {
    const Graph& lgraph = logical.graph();
    if (lgraph.vertex_count() != lg.graph->vertex_count()) throw ParameterError("logical problem is not on lg");
    if (lg.side > hosted_side(hw)) throw EmbeddingError("2LG side exceeds the hardware grid");

    EmbeddedProblem e;
    e.hw = hw;
    e.logical = logical;
    e.logical_graph = lg;
    e.map.scheme = scheme;
    e.map.groups.assign(lgraph.vertex_count(), {});

    std::vector<char> used(hw.graph->vertex_count(), 0);
    for (NodeId v = 0; v < lgraph.vertex_count(); ++v) {
        if (!lgraph.active(v)) continue;
        auto group = group_for(scheme, hw, lg.coord(v));
        for (NodeId qb : group) {
            if (!hw.graph->active(qb)) {
                throw EmbeddingError("logical vertex " + std::to_string(v) + " maps onto dead qubit " +
                                     std::to_string(qb));
            }
            used[qb] = 1;
        }
        e.map.groups[v] = std::move(group);
    }
    std::vector<NodeId> inactive;
    for (NodeId qb = 0; qb < used.size(); ++qb)
        if (!used[qb]) inactive.push_back(qb);
    HardwareGraph phys = chimera(hw.rows, hw.cols, hw.half, inactive);
    const Graph& pg = *phys.graph;
    std::vector<double> h(pg.vertex_count(), 0.0);
    std::vector<double> j(pg.edge_count(), 0.0);

    e.realizations.assign(lgraph.edge_count(), {});
    std::vector<int> problem_degree(pg.vertex_count(), 0);
    for (std::size_t le = 0; le < lgraph.edge_count(); ++le) {
        const Edge ledge = lgraph.edge(le);
        const double jl = logical.j(le);
        const auto cs = couplers_for(scheme, blue, hw, lg.coord(ledge.u), lg.coord(ledge.v));
        bool missing = false;
        for (const Coupler& c : cs)
            if (!pg.has_edge(c.a, c.b)) missing = true;
        if (missing) {
            if (jl != 0.0) {
                throw EmbeddingError("logical edge (" + std::to_string(ledge.u) + ", " + std::to_string(ledge.v) +
                                     ") has no physical coupler");
            }
            continue;
        }
        for (const Coupler& c : cs) {
            const std::size_t pe = *pg.edge_index(c.a, c.b);
            j[pe] = c.scale * jl;
            e.realizations[le].push_back(pe);
            ++problem_degree[c.a];
            ++problem_degree[c.b];
        }
    }
    for (NodeId v = 0; v < lgraph.vertex_count(); ++v) {
        if (!lgraph.active(v)) continue;
        const double hl = logical.h(v);
        const auto& group = e.map.groups[v];
        switch (scheme) {
            case Scheme::Direct: h[group[0]] = hl; break;
            case Scheme::ME:
                h[group[0]] = hl / 2.0;
                h[group[1]] = hl / 2.0;
                break;
            case Scheme::QACME: {
                std::vector<NodeId> order = group;
                std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
                    if (problem_degree[a] != problem_degree[b]) return problem_degree[a] > problem_degree[b];
                    return a < b;
                });
                h[order[0]] = hl;
                h[order[1]] = hl;
                break;
            }
        }
        for (const Edge& pe : penalty_couplers(scheme, group)) {
            e.penalty_edges.push_back(*pg.edge_index(pe.u, pe.v));
            e.penalty_group.push_back(v);
        }
    }

    e.physical = IsingProblem(phys.graph, std::move(h), std::move(j));
    audit_sum_rule(e);
    audit_penalties_intra(e);
    return e;
}

}  // namespace

EmbeddedProblem embed_direct(const IsingProblem& logical, const LogicalGraph& lg, const HardwareGraph& hw) {
    return build(Scheme::Direct, BlueCouplers::Pair, logical, lg, hw);
}

EmbeddedProblem embed_me(const IsingProblem& logical, const LogicalGraph& lg, const HardwareGraph& hw) {
    return build(Scheme::ME, BlueCouplers::Pair, logical, lg, hw);
}

EmbeddedProblem embed_qacme(const IsingProblem& logical, const LogicalGraph& lg, const HardwareGraph& hw,
                            BlueCouplers blue) {
    return build(Scheme::QACME, blue, logical, lg, hw);
}

EmbeddedProblem embed(Scheme scheme, const IsingProblem& logical, const LogicalGraph& lg, const HardwareGraph& hw) {
    return build(scheme, BlueCouplers::Pair, logical, lg, hw);
}

EmbeddedProblem assign_penalties(const EmbeddedProblem& e, const PenaltyStrategy& strat) {
    if (!(strat.gamma > 0.0)) throw ParameterError("penalty gamma must be positive");
    if (e.penalty_edges.empty()) throw ParameterError("embedding has no penalty couplers");
    EmbeddedProblem out = e;
    out.penalty_warnings.clear();
    const Graph& lgraph = e.logical.graph();
    std::vector<double> strength(lgraph.vertex_count(), strat.gamma);
    if (strat.kind == PenaltyKind::Nonuniform) {
        for (NodeId v = 0; v < lgraph.vertex_count(); ++v) {
            if (!lgraph.active(v)) continue;
            double sum = 0.0;
            int count = 0;
            for (const Neighbor& nb : lgraph.neighbors(v)) {
                const double a = std::abs(e.logical.j(nb.edge));
                if (a == 0.0) continue;
                sum += a;
                ++count;
            }
            if (count == 0) {
                strength[v] = 0.0;
                out.penalty_warnings.push_back(v);
            } else {
                strength[v] = strat.gamma * (sum / count);
            }
        }
    }
    for (std::size_t k = 0; k < e.penalty_edges.size(); ++k)
        out.physical.set_j(e.penalty_edges[k], -strength[e.penalty_group[k]]);
    return out;
}

IsingProblem apply_noise(const IsingProblem& physical, double chi, Rng& rng) {
    if (!(chi >= 0.0)) throw ParameterError("noise chi must be non-negative");
    if (chi == 0.0) return physical;
    std::normal_distribution<double> noise(0.0, chi);
    std::vector<double> h(physical.fields().begin(), physical.fields().end());
    std::vector<double> j(physical.couplings().begin(), physical.couplings().end());
    for (double& x : h)
        if (x != 0.0) x += noise(rng);
    for (double& x : j)
        if (x != 0.0) x += noise(rng);
    return IsingProblem(physical.graph_ptr(), std::move(h), std::move(j));
}

ConcatParams concat_params(long n, long r) {
    if (n < 1 || r < 1) throw ParameterError("concatenation needs n, r >= 1");
    long p = 1;
    for (long i = 1; i < r; ++i) p *= n;
    return {4 * p * p, 2 * p, 4 * p * p};
}

void audit_sum_rule(const EmbeddedProblem& e) {
    const Graph& lgraph = e.logical.graph();
    const double boost = e.boost();
    for (std::size_t le = 0; le < lgraph.edge_count(); ++le) {
        double sum = 0.0;
        for (std::size_t pe : e.realizations[le]) sum += e.physical.j(pe);
        if (sum != boost * e.logical.j(le)) throw ContractViolation("coupling sum rule violated");
    }
    for (NodeId v = 0; v < lgraph.vertex_count(); ++v) {
        double sum = 0.0;
        for (NodeId q : e.map.groups[v]) sum += e.physical.h(q);
        if (sum != boost * e.logical.h(v)) throw ContractViolation("field sum rule violated");
    }
}

void audit_penalties_intra(const EmbeddedProblem& e) {
    const Graph& pg = e.physical.graph();
    for (std::size_t k = 0; k < e.penalty_edges.size(); ++k) {
        const Edge pe = pg.edge(e.penalty_edges[k]);
        const auto& group = e.map.groups[e.penalty_group[k]];
        const bool inside = std::find(group.begin(), group.end(), pe.u) != group.end() &&
                            std::find(group.begin(), group.end(), pe.v) != group.end();
        if (!inside) throw ContractViolation("penalty coupler crosses groups");
    }
}

SpinConfig unanimous_logical(const EmbeddedProblem& e, std::span<const Spin> physical) {
    SpinConfig out(e.map.groups.size(), 1);
    for (NodeId v = 0; v < out.size(); ++v) {
        const auto& g = e.map.groups[v];
        if (g.empty()) continue;
        out[v] = physical[g[0]];
        for (NodeId q : g)
            if (physical[q] != out[v]) throw ContractViolation("group is broken");
    }
    return out;
}

SpinConfig spread_logical(const EmbeddedProblem& e, std::span<const Spin> logical) {
    SpinConfig out(e.physical.size(), 1);
    for (NodeId v = 0; v < e.map.groups.size(); ++v)
        for (NodeId q : e.map.groups[v]) out[q] = logical[v];
    return out;
}

void write_embedded(std::ostream& out, const EmbeddedProblem& e) {
    write_problem(out, e.physical,
                  "chimera " + std::to_string(e.hw.rows) + ' ' + std::to_string(e.hw.cols) + ' ' +
                      std::to_string(e.hw.half));
    out << "SCHEME " << scheme_name(e.scheme()) << '\n';
    for (NodeId v = 0; v < e.map.groups.size(); ++v) {
        if (e.map.groups[v].empty()) continue;
        out << "GROUP " << v;
        for (NodeId q : e.map.groups[v]) out << ' ' << q;
        out << '\n';
    }
    const Graph& pg = e.physical.graph();
    for (std::size_t k = 0; k < e.penalty_edges.size(); ++k) {
        const Edge pe = pg.edge(e.penalty_edges[k]);
        out << "PEN " << pe.u << ' ' << pe.v << ' ' << format_double(e.physical.j(e.penalty_edges[k])) << '\n';
    }
}

EmbeddedProblem parse_embedded(std::span<const Record> records, const IsingProblem& logical, const LogicalGraph& lg) {
    GraphFile gf;
    EmbeddedProblem e;
    e.physical = parse_problem(records, &gf);
    if (!gf.hardware) throw FormatError("embedded problem must live on a chimera graph");
    e.hw = *gf.hardware;
    e.logical = logical;
    e.logical_graph = lg;
    e.map.groups.assign(logical.size(), {});
    bool have_scheme = false;
    std::vector<Edge> pens;
    for (const Record& r : records) {
        if (r.tag == "SCHEME" && r.fields.size() == 1) {
            e.map.scheme = parse_scheme(r.fields[0]);
            have_scheme = true;
        } else if (r.tag == "GROUP") {
            if (r.fields.size() < 2) throw FormatError("GROUP needs a logical vertex and qubits");
            const auto v = static_cast<std::size_t>(parse_long(r.fields[0]));
            if (v >= logical.size()) throw FormatError("GROUP logical vertex out of range");
            for (std::size_t i = 1; i < r.fields.size(); ++i)
                e.map.groups[v].push_back(static_cast<NodeId>(parse_long(r.fields[i])));
        } else if (r.tag == "PEN") {
            if (r.fields.size() != 3) throw FormatError("PEN needs two qubits and a value");
            pens.push_back(make_edge(static_cast<NodeId>(parse_long(r.fields[0])),
                                     static_cast<NodeId>(parse_long(r.fields[1]))));
        }
    }
    if (!have_scheme) throw FormatError("embedded problem lacks SCHEME");
    const Graph& pg = e.physical.graph();
    std::vector<NodeId> owner(pg.vertex_count(), UINT32_MAX);
    for (NodeId v = 0; v < e.map.groups.size(); ++v)
        for (NodeId q : e.map.groups[v]) owner[q] = v;
    std::set<Edge> pen_set(pens.begin(), pens.end());
    for (const Edge& pe : pens) {
        auto idx = pg.edge_index(pe.u, pe.v);
        if (!idx || owner[pe.u] == UINT32_MAX) throw FormatError("PEN edge is not a physical coupler");
        e.penalty_edges.push_back(*idx);
        e.penalty_group.push_back(owner[pe.u]);
    }
    const Graph& lgraph = logical.graph();
    e.realizations.assign(lgraph.edge_count(), {});
    for (std::size_t pe = 0; pe < pg.edge_count(); ++pe) {
        const Edge ed = pg.edge(pe);
        if (pen_set.contains(ed)) continue;
        const NodeId a = owner[ed.u], b = owner[ed.v];
        if (a == UINT32_MAX || b == UINT32_MAX || a == b) continue;
        if (auto le = lgraph.edge_index(a, b)) e.realizations[*le].push_back(pe);
    }
    audit_sum_rule(e);
    audit_penalties_intra(e);
    return e;
}

}  // namespace qacme
