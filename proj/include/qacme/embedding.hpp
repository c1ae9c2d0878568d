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

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qacme/ising.hpp"

namespace qacme {

enum class Scheme { Direct, ME, QACME };

std::string scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);
/// Energy boost of problem terms: 1 for Direct and ME, 2 for QACME.
double scheme_boost(Scheme s);
std::size_t scheme_group_size(Scheme s);

/// How an interlayer logical coupling is realized in the square code.
enum class BlueCouplers { Pair, AllEight };

struct GroupMap {
    Scheme scheme = Scheme::Direct;
    /// Physical qubits per logical vertex; empty for inactive logical vertices.
    std::vector<std::vector<NodeId>> groups;
};

struct EmbeddedProblem {
    HardwareGraph hw;
    IsingProblem physical;
    GroupMap map;
    IsingProblem logical;
    LogicalGraph logical_graph;
    /// Physical edge indices carrying penalties, and the group each belongs to.
    std::vector<std::size_t> penalty_edges;
    std::vector<NodeId> penalty_group;
    /// Physical edge indices realizing each logical edge.
    std::vector<std::vector<std::size_t>> realizations;
    /// Logical vertices whose nonuniform penalty fell back to 0.
    std::vector<NodeId> penalty_warnings;

    Scheme scheme() const { return map.scheme; }
    double boost() const { return scheme_boost(map.scheme); }
};

/// One qubit per logical vertex, z = 0 on left qubit 0, z = 1 on right qubit L + 2.
EmbeddedProblem embed_direct(const IsingProblem& logical, const LogicalGraph& lg, const HardwareGraph& hw);
/// Two-qubit chains {2z, L + 2z} joined by one penalty coupler.
EmbeddedProblem embed_me(const IsingProblem& logical, const LogicalGraph& lg, const HardwareGraph& hw);
/// Square code: four qubits {2z, 2z + 1, L + 2z, L + 2z + 1}, penalties on the
/// four couplers between the left and right pairs.
EmbeddedProblem embed_qacme(const IsingProblem& logical, const LogicalGraph& lg, const HardwareGraph& hw,
                            BlueCouplers blue = BlueCouplers::Pair);
EmbeddedProblem embed(Scheme scheme, const IsingProblem& logical, const LogicalGraph& lg, const HardwareGraph& hw);

enum class PenaltyKind { Uniform, Nonuniform };

struct PenaltyStrategy {
    PenaltyKind kind = PenaltyKind::Uniform;
    double gamma = 1.0;
};

/// Uniform: -gamma on every penalty edge. Nonuniform: -gamma times the mean
/// |J| over the group's nonzero logical couplings.
EmbeddedProblem assign_penalties(const EmbeddedProblem& e, const PenaltyStrategy& strat);

/// Physical problem with N(0, chi^2) added to every nonzero h and J.
IsingProblem apply_noise(const IsingProblem& physical, double chi, Rng& rng);
inline IsingProblem apply_noise(const EmbeddedProblem& e, double chi, Rng& rng) {
    return apply_noise(e.physical, chi, rng);
}

struct ConcatParams {
    long physical_qubits;
    long boost;
    long distance;
};
ConcatParams concat_params(long n, long r);

/// Each logical edge's physical couplings sum to boost * J and each group's
/// fields to boost * h. Throws ContractViolation otherwise.
void audit_sum_rule(const EmbeddedProblem& e);
/// Every penalty edge joins two qubits of the same group.
void audit_penalties_intra(const EmbeddedProblem& e);

/// Logical spins read from group members; inactive logical vertices get +1.
SpinConfig unanimous_logical(const EmbeddedProblem& e, std::span<const Spin> physical);
/// Physical configuration repeating each logical spin over its group.
SpinConfig spread_logical(const EmbeddedProblem& e, std::span<const Spin> logical);

// Physical problem in the ising format plus `SCHEME`, `GROUP l q1 .. qk` and
// `PEN i j value` lines.
void write_embedded(std::ostream& out, const EmbeddedProblem& e);
EmbeddedProblem parse_embedded(std::span<const Record> records, const IsingProblem& logical, const LogicalGraph& lg);

}  // namespace qacme
