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

#include "qacme/decoding.hpp"

#include <algorithm>
#include <ostream>

namespace qacme {

namespace {

/// `p` restricted to `keep`, same numbering, everything else inactive.
IsingProblem restrict_to(const IsingProblem& p, std::span<const NodeId> keep) {
    const Graph& g = p.graph();
    std::vector<char> in(g.vertex_count(), 0);
    for (NodeId v : keep) in[v] = 1;
    std::vector<Edge> edges;
    for (const Edge& ed : g.edges()) {
        if (in[ed.u] && in[ed.v]) edges.push_back(ed);
    }
    std::vector<NodeId> inactive;
    for (NodeId v = 0; v < g.vertex_count(); ++v) {
        if (!in[v]) inactive.push_back(v);
    }
    auto sub_graph = std::make_shared<const Graph>(g.vertex_count(), edges, inactive);
    IsingProblem sub(sub_graph);
    for (NodeId v : keep) sub.set_h(v, p.h(v));
    for (std::size_t e = 0; e < sub_graph->edge_count(); ++e) {
        const Edge& ed = sub_graph->edge(e);
        sub.set_j(e, p.coupling(ed.u, ed.v));
    }
    return sub;
}

std::size_t count_kind(std::span<const GroupState> states, const Graph& g, GroupKind kind) {
    std::size_t n = 0;
    for (NodeId v = 0; v < states.size(); ++v) {
        if (g.active(v) && states[v].kind == kind) ++n;
    }
    return n;
}

void fill_counts(DecodedConfig& d, std::span<const GroupState> states, const Graph& g) {
    d.ties = count_kind(states, g, GroupKind::Tie);
    d.broken = d.ties + count_kind(states, g, GroupKind::PartiallyBroken);
}

}  // namespace

GroupState classify_group(std::span<const Spin> spins) {
    if (spins.empty()) throw ContractViolation("empty group");
    int sum = 0;
    for (Spin s : spins) sum += s;
    const int n = static_cast<int>(spins.size());
    if (sum == n) return {GroupKind::Unbroken, 1};
    if (sum == -n) return {GroupKind::Unbroken, -1};
    if (sum == 0) return {GroupKind::Tie, 0};
    return {GroupKind::PartiallyBroken, static_cast<Spin>(sum > 0 ? 1 : -1)};
}

std::vector<GroupState> classify_groups(const EmbeddedProblem& e, std::span<const Spin> readout) {
    check_config(e.physical.graph(), readout);
    std::vector<GroupState> out(e.map.groups.size());
    std::vector<Spin> buf;
    for (std::size_t v = 0; v < e.map.groups.size(); ++v) {
        const auto& group = e.map.groups[v];
        if (group.empty()) continue;
        buf.clear();
        for (NodeId q : group) buf.push_back(readout[q]);
        out[v] = classify_group(buf);
    }
    return out;
}

std::string decoder_name(Decoder d) {
    switch (d) {
        case Decoder::CT: return "ct";
        case Decoder::MV_CT: return "mv-ct";
        case Decoder::EM: return "em";
        case Decoder::MV_EM: return "mv-em";
        case Decoder::MV_EM_R: return "mv-em-r";
        case Decoder::Recursive: return "recursive";
    }
    throw ContractViolation("unknown decoder");
}

Decoder parse_decoder(const std::string& name) {
    for (Decoder d : {Decoder::CT, Decoder::MV_CT, Decoder::EM, Decoder::MV_EM, Decoder::MV_EM_R,
                      Decoder::Recursive}) {
        if (decoder_name(d) == name) return d;
    }
    throw ParameterError("unknown decoder '" + name + "'");
}

DecodedConfig decode_local(std::span<const GroupState> states, Decoder kind, Rng& rng) {
    if (kind != Decoder::CT && kind != Decoder::MV_CT) throw ParameterError("decode_local handles ct and mv-ct only");
    DecodedConfig d;
    d.strategy = kind;
    d.spins.resize(states.size());
    for (std::size_t v = 0; v < states.size(); ++v) {
        const GroupState& st = states[v];
        if (st.kind == GroupKind::Unbroken) {
            d.spins[v] = st.value;
            continue;
        }
        ++d.broken;
        if (st.kind == GroupKind::Tie) ++d.ties;
        const bool majority = kind == Decoder::MV_CT && st.kind == GroupKind::PartiallyBroken;
        d.spins[v] = majority ? st.value : random_spin(rng);
    }
    return d;
}

DecodingProblem build_decoding_problem(const IsingProblem& logical, std::span<const Spin> assigned,
                                       std::span<const NodeId> em_set) {
    const Graph& g = logical.graph();
    if (assigned.size() != g.vertex_count()) throw ContractViolation("assignment size mismatch");
    std::vector<char> in(g.vertex_count(), 0);
    for (NodeId v : em_set) {
        if (v >= g.vertex_count() || !g.active(v)) throw ContractViolation("decoding vertex not in the logical graph");
        in[v] = 1;
    }
    DecodingProblem dp;
    dp.vertices.assign(em_set.begin(), em_set.end());
    std::sort(dp.vertices.begin(), dp.vertices.end());
    dp.assigned.assign(assigned.begin(), assigned.end());
    dp.sub = restrict_to(logical, dp.vertices);
    for (NodeId v : dp.vertices) {
        double field = logical.h(v);
        for (const Neighbor& nb : g.neighbors(v)) {
            if (!in[nb.node]) field += logical.j(nb.edge) * assigned[nb.node];
        }
        dp.sub.set_h(v, field);
    }
    return dp;
}

std::vector<std::vector<NodeId>> coupling_components(const IsingProblem& p) {
    const Graph& g = p.graph();
    UnionFind uf(g.vertex_count());
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        if (p.j(e) != 0.0) uf.unite(g.edge(e).u, g.edge(e).v);
    }
    std::vector<std::vector<NodeId>> by_root(g.vertex_count());
    for (NodeId v : g.active_vertices()) by_root[uf.find(v)].push_back(v);
    std::vector<std::vector<NodeId>> out;
    for (auto& c : by_root) {
        if (!c.empty()) out.push_back(std::move(c));
    }
    return out;
}

EmResult minimize_decoding(const IsingProblem& sub, Rng& rng, const EmOptions& opt) {
    EmResult r;
    r.spins = all_up(sub.graph());
    std::vector<NodeId> large;
    for (const auto& comp : coupling_components(sub)) {
        if (comp.size() > opt.exhaustive_cutoff || comp.size() > kBruteForceLimit) {
            large.insert(large.end(), comp.begin(), comp.end());
            continue;
        }
        const SolveResult bf = brute_force(restrict_to(sub, comp), 4096);
        std::uniform_int_distribution<std::size_t> pick(0, bf.configs.size() - 1);
        const SpinConfig& c = bf.configs[pick(rng)];
        for (NodeId v : comp) r.spins[v] = c[v];
    }
    if (!large.empty()) {
        const IsingProblem rest = restrict_to(sub, large);
        const SaParams params = opt.sa ? *opt.sa : default_decoding_sa(rest);
        const SolveResult sa = sa_run(rest, params, rng);
        const double tol = ground_energy_tolerance(rest);
        std::size_t hits = 0;
        for (double en : sa.energies) {
            if (en <= sa.best_energy + tol) ++hits;
        }
        r.p_dec = static_cast<double>(hits) / static_cast<double>(sa.energies.size());
        const SpinConfig& c = sa.configs[sa.best_index()];
        for (NodeId v : large) r.spins[v] = c[v];
    }
    return r;
}

DecodedConfig decode_em(const EmbeddedProblem& e, std::span<const GroupState> states, Decoder mode, Rng& rng,
                        const EmOptions& opt) {
    if (mode != Decoder::EM && mode != Decoder::MV_EM && mode != Decoder::MV_EM_R) {
        throw ParameterError("decode_em handles em, mv-em and mv-em-r only");
    }
    const Graph& g = e.logical.graph();
    if (states.size() != g.vertex_count()) throw ContractViolation("state count mismatch");
    DecodedConfig d;
    d.strategy = mode;
    fill_counts(d, states, g);

    SpinConfig assigned(states.size(), 1);
    std::vector<NodeId> em_set;
    std::vector<NodeId> unbroken;
    for (NodeId v = 0; v < states.size(); ++v) {
        if (!g.active(v)) continue;
        const GroupState& st = states[v];
        if (st.kind == GroupKind::Unbroken) {
            assigned[v] = st.value;
            unbroken.push_back(v);
        } else if (st.kind == GroupKind::PartiallyBroken && mode != Decoder::EM) {
            assigned[v] = st.value;
        } else {
            em_set.push_back(v);
        }
    }
    if (mode == Decoder::MV_EM_R) {
        const std::size_t extra =
            std::min(unbroken.size(), count_kind(states, g, GroupKind::PartiallyBroken));
        std::vector<NodeId> chosen;
        std::sample(unbroken.begin(), unbroken.end(), std::back_inserter(chosen), extra, rng);
        em_set.insert(em_set.end(), chosen.begin(), chosen.end());
    }
    if (em_set.empty()) {
        d.spins = std::move(assigned);
        return d;
    }
    const DecodingProblem dp = build_decoding_problem(e.logical, assigned, em_set);
    const EmResult r = minimize_decoding(dp.sub, rng, opt);
    d.spins = std::move(assigned);
    for (NodeId v : dp.vertices) d.spins[v] = r.spins[v];
    d.p_dec = r.p_dec;
    return d;
}

TieSolver classical_tie_solver(std::function<SolveResult(const IsingProblem&, Rng&)> solve) {
    return [solve = std::move(solve)](const IsingProblem& sub, Rng& rng) {
        const SolveResult r = solve(sub, rng);
        const SpinConfig& c = r.configs.at(r.best_index());
        std::vector<GroupState> out(sub.size());
        for (NodeId v : sub.graph().active_vertices()) out[v] = {GroupKind::Unbroken, c[v]};
        return out;
    };
}

TieSolver annealer_tie_solver(const HardwareGraph& hw, int side, Scheme scheme, PenaltyStrategy penalty,
                              AnnealSchedule schedule, SqaParams sqa) {
    return [=](const IsingProblem& sub, Rng& rng) {
        const LogicalGraph lg{side, sub.graph_ptr(), {}};
        EmbeddedProblem emb = embed(scheme, sub, lg, hw);
        if (scheme != Scheme::Direct) emb = assign_penalties(emb, penalty);
        const SolveResult r = sqa_run(emb.physical, schedule, sqa, rng);
        return classify_groups(emb, r.configs.at(r.best_index()));
    };
}

DecodedConfig decode_recursive(const EmbeddedProblem& e, std::span<const GroupState> states, const TieSolver& solver,
                               Rng& rng, std::size_t* rounds) {
    const Graph& g = e.logical.graph();
    if (states.size() != g.vertex_count()) throw ContractViolation("state count mismatch");
    DecodedConfig d;
    d.strategy = Decoder::Recursive;
    fill_counts(d, states, g);

    SpinConfig assigned(states.size(), 1);
    std::vector<NodeId> ties;
    for (NodeId v = 0; v < states.size(); ++v) {
        if (!g.active(v)) continue;
        if (states[v].kind == GroupKind::Tie) {
            ties.push_back(v);
        } else {
            assigned[v] = states[v].value;
        }
    }
    std::size_t round = 0;
    int unchanged = 0;
    while (!ties.empty()) {
        const DecodingProblem dp = build_decoding_problem(e.logical, assigned, ties);
        const std::vector<GroupState> next = solver(dp.sub, rng);
        if (next.size() != g.vertex_count()) throw ContractViolation("tie solver returned wrong size");
        ++round;
        std::vector<NodeId> left;
        for (NodeId v : dp.vertices) {
            if (next[v].kind == GroupKind::Tie) {
                left.push_back(v);
            } else {
                assigned[v] = next[v].value;
            }
        }
        if (left == ties) {
            if (++unchanged >= 2) break;
        } else {
            unchanged = 0;
        }
        ties = std::move(left);
    }
    if (!ties.empty()) {
        const DecodingProblem dp = build_decoding_problem(e.logical, assigned, ties);
        const EmResult r = minimize_decoding(dp.sub, rng);
        for (NodeId v : dp.vertices) assigned[v] = r.spins[v];
        d.p_dec = r.p_dec;
    }
    if (rounds) *rounds = round;
    d.spins = std::move(assigned);
    return d;
}

DecodedConfig decode(const EmbeddedProblem& e, std::span<const Spin> readout, Decoder d, Rng& rng,
                     const EmOptions& opt) {
    const auto states = classify_groups(e, readout);
    switch (d) {
        case Decoder::CT:
        case Decoder::MV_CT: return decode_local(states, d, rng);
        case Decoder::EM:
        case Decoder::MV_EM:
        case Decoder::MV_EM_R: return decode_em(e, states, d, rng, opt);
        case Decoder::Recursive: {
            const TieSolver exact = classical_tie_solver([opt](const IsingProblem& p, Rng& r) {
                const EmResult m = minimize_decoding(p, r, opt);
                SolveResult out;
                out.configs.push_back(m.spins);
                out.energies.push_back(energy(p, m.spins));
                out.best_energy = out.energies.front();
                return out;
            });
            return decode_recursive(e, states, exact, rng);
        }
    }
    throw ContractViolation("unknown decoder");
}

bool is_success(const IsingProblem& logical, std::span<const Spin> spins, double reference_energy) {
    return energy(logical, spins) <= reference_energy + 1e-9;
}

void write_decode_header(std::ostream& out) { out << "strategy,broken,ties,p_dec,success\n"; }

void write_decode_record(std::ostream& out, const DecodedConfig& d, bool success) {
    out << decoder_name(d.strategy) << ',' << d.broken << ',' << d.ties << ',' << format_double(d.p_dec) << ','
        << (success ? 1 : 0) << '\n';
}

}  // namespace qacme
