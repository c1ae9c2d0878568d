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

#include "qacme/instances.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "qacme/solvers.hpp"

namespace qacme {

int LengthMix::draw(Rng& rng) const {
    if (lengths.empty() || lengths.size() != weights.size()) throw ParameterError("malformed loop length mix");
    std::discrete_distribution<std::size_t> d(weights.begin(), weights.end());
    return lengths[d(rng)];
}

Loop sample_loop(const Graph& g, int length, Rng& rng, int retries) {
    if (length < 3) throw ParameterError("loop length must be >= 3");
    std::vector<NodeId> starts;
    for (NodeId v : g.active_vertices())
        if (g.degree(v) >= 2) starts.push_back(v);
    if (starts.empty()) throw GenerationError("graph has no vertex of degree >= 2");

    std::vector<NodeId> path;
    std::vector<NodeId> options;
    for (int attempt = 0; attempt < retries; ++attempt) {
        path.assign(1, starts[rng() % starts.size()]);
        bool ok = true;
        for (int step = 1; step < length && ok; ++step) {
            options.clear();
            for (const Neighbor& nb : g.neighbors(path.back())) {
                if (std::find(path.begin(), path.end(), nb.node) != path.end()) continue;
                if (step == length - 1 && !g.has_edge(nb.node, path.front())) continue;
                options.push_back(nb.node);
            }
            if (options.empty()) ok = false;
            else path.push_back(options[rng() % options.size()]);
        }
        if (!ok) continue;
        Loop loop;
        loop.vertices = path;
        loop.af_index = static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(length));
        return loop;
    }
    throw GenerationError("no cycle of length " + std::to_string(length) + " found in " + std::to_string(retries) +
                          " attempts");
}

namespace {

std::vector<double> raw_couplings(const Graph& g, std::span<const Loop> loops) {
    std::vector<double> raw(g.edge_count(), 0.0);
    for (const Loop& loop : loops) {
        for (std::size_t i = 0; i < loop.length(); ++i) {
            const Edge e = loop.edge(i);
            auto idx = g.edge_index(e.u, e.v);
            if (!idx) throw ParameterError("loop edge is not a graph edge");
            raw[*idx] += loop.weight * loop.sign(i);
        }
    }
    return raw;
}

}  // namespace

PlantedInstance build_instance(const LogicalGraph& host, std::vector<Loop> loops, double alpha) {
    const Graph& g = *host.graph;
    std::vector<double> j = raw_couplings(g, loops);
    double norm = 0.0;
    for (double x : j) norm = std::max(norm, std::abs(x));
    if (norm == 0.0) throw GenerationError("loops cancel to an all-zero problem");
    for (double& x : j) x /= norm;

    PlantedInstance inst;
    inst.problem = IsingProblem(host.graph, std::vector<double>(g.vertex_count(), 0.0), std::move(j));
    inst.host = host;
    inst.planted = all_up(g);
    inst.loops = std::move(loops);
    inst.alpha = alpha;
    inst.normalization = norm;
    inst.reference_energy = planted_energy(inst);
    return inst;
}

PlantedInstance generate_planted(const LogicalGraph& host, double alpha, const LengthMix& mix, Rng& rng) {
    const Graph& g = *host.graph;
    if (!(alpha > 0.0)) throw ParameterError("clause density must be positive");
    const auto count = static_cast<std::size_t>(std::llround(alpha * static_cast<double>(g.active_count())));
    if (count < 1) throw ParameterError("clause density yields no loops");

    std::vector<double> raw(g.edge_count(), 0.0);
    std::vector<Loop> loops;
    loops.reserve(count);
    std::vector<std::pair<std::size_t, double>> delta;
    while (loops.size() < count) {
        bool placed = false;
        for (int attempt = 0; attempt < kLoopRetries && !placed; ++attempt) {
            Loop loop = sample_loop(g, mix.draw(rng), rng);
            delta.clear();
            bool cancels = false;
            for (std::size_t i = 0; i < loop.length(); ++i) {
                const Edge e = loop.edge(i);
                const std::size_t idx = *g.edge_index(e.u, e.v);
                const double next = raw[idx] + loop.sign(i);
                if (raw[idx] != 0.0 && next == 0.0) cancels = true;
                delta.push_back({idx, next});
            }
            if (cancels) continue;
            for (auto [idx, v] : delta) raw[idx] = v;
            loops.push_back(std::move(loop));
            placed = true;
        }
        if (!placed) throw GenerationError("loop placement budget exhausted");
    }
    return build_instance(host, std::move(loops), alpha);
}

std::vector<PlantedInstance> generate_batch(const LogicalGraph& host, double alpha, const LengthMix& mix,
                                            std::size_t count, std::uint64_t master_seed) {
    std::vector<PlantedInstance> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng(master_seed ^ static_cast<std::uint64_t>(i));
        out.push_back(generate_planted(host, alpha, mix, rng));
    }
    return out;
}

double loop_weight(const LogicalGraph& host, const Loop& loop) {
    if (host.side < 1) throw ParameterError("weighting needs a host with coordinates");
    long sum = 0;
    for (NodeId v : loop.vertices) sum += host.coord(v).x;
    return std::floor(static_cast<double>(sum) / static_cast<double>(loop.length())) + 1.0;
}

PlantedInstance generate_weighted(const PlantedInstance& base) {
    if (base.deformed) throw ContractViolation("cannot weight a deformed instance");
    std::vector<Loop> loops = base.loops;
    for (Loop& loop : loops) loop.weight = loop_weight(base.host, loop);
    return build_instance(base.host, std::move(loops), base.alpha);
}

PlantedInstance deform_with(const PlantedInstance& base, std::span<const NodeId> picked) {
    const Graph& g = base.problem.graph();
    std::vector<char> in(g.vertex_count(), 0);
    for (NodeId v : picked) {
        if (v >= g.vertex_count() || !g.active(v)) throw ParameterError("picked vertex is not an active vertex");
        in[v] = 1;
    }
    PlantedInstance out = base;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const double j = base.problem.j(e);
        const int inside = in[g.edge(e).u] + in[g.edge(e).v];
        if (inside == 1) {
            out.problem.set_j(e, j / 3.0);
        } else if (inside == 0) {
            const double sign = j > 0.0 ? 1.0 : j < 0.0 ? -1.0 : 0.0;
            out.problem.set_j(e, (2.0 * sign + j) / 3.0);
        }
    }
    out.deformed = true;
    out.reference_energy = exact_ground_energy(out.problem);
    return out;
}

PlantedInstance deform_embeddable(const PlantedInstance& base, std::size_t picked_count, Rng& rng) {
    std::vector<NodeId> verts = base.problem.graph().active_vertices();
    if (picked_count > verts.size()) throw ParameterError("picked_count exceeds the vertex count");
    std::shuffle(verts.begin(), verts.end(), rng);
    verts.resize(picked_count);
    std::sort(verts.begin(), verts.end());
    return deform_with(base, verts);
}

double planted_energy(const PlantedInstance& inst) {
    if (inst.deformed) throw ContractViolation("planted energy is undefined for deformed instances");
    double e = 0.0;
    for (const Loop& loop : inst.loops) e += loop.weight * -(static_cast<double>(loop.length()) - 2.0);
    return e / inst.normalization;
}

void write_instance(std::ostream& out, const PlantedInstance& inst) {
    const std::string kind = inst.host.side > 0 ? "2lg " + std::to_string(inst.host.side)
                                                : "generic " + std::to_string(inst.problem.size());
    write_problem(out, inst.problem, kind);
    for (const Loop& loop : inst.loops) {
        out << "LOOP";
        for (NodeId v : loop.vertices) out << ' ' << v;
        out << ' ' << loop.af_index << ' ' << format_double(loop.weight) << '\n';
    }
    out << "ALPHA " << format_double(inst.alpha) << '\n';
    out << "NORM " << format_double(inst.normalization) << '\n';
    out << "REFENERGY " << format_double(inst.reference_energy) << '\n';
    out << "DEFORMED " << (inst.deformed ? 1 : 0) << '\n';
}

PlantedInstance parse_instance(std::span<const Record> records) {
    GraphFile gf;
    PlantedInstance inst;
    inst.problem = parse_problem(records, &gf);
    if (gf.logical) inst.host = *gf.logical;
    else inst.host = LogicalGraph{0, gf.graph, {}};
    inst.planted = all_up(*gf.graph);
    bool have_ref = false;
    for (const Record& r : records) {
        if (r.tag == "LOOP") {
            if (r.fields.size() < 5) throw FormatError("LOOP needs at least 3 vertices, af index and weight");
            Loop loop;
            for (std::size_t i = 0; i + 2 < r.fields.size(); ++i)
                loop.vertices.push_back(static_cast<NodeId>(parse_long(r.fields[i])));
            loop.af_index = static_cast<std::size_t>(parse_long(r.fields[r.fields.size() - 2]));
            loop.weight = parse_double(r.fields.back());
            if (loop.af_index >= loop.length()) throw FormatError("LOOP af index out of range");
            inst.loops.push_back(std::move(loop));
        } else if (r.tag == "ALPHA" && r.fields.size() == 1) {
            inst.alpha = parse_double(r.fields[0]);
        } else if (r.tag == "NORM" && r.fields.size() == 1) {
            inst.normalization = parse_double(r.fields[0]);
        } else if (r.tag == "REFENERGY" && r.fields.size() == 1) {
            inst.reference_energy = parse_double(r.fields[0]);
            have_ref = true;
        } else if (r.tag == "DEFORMED" && r.fields.size() == 1) {
            inst.deformed = parse_long(r.fields[0]) != 0;
        }
    }
    if (!have_ref) throw FormatError("instance file lacks REFENERGY");
    return inst;
}

PlantedInstance read_instance(std::istream& in) {
    auto records = read_records(in);
    return parse_instance(records);
}

}  // namespace qacme
