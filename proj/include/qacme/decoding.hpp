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

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qacme/embedding.hpp"
#include "qacme/solvers.hpp"

namespace qacme {

enum class GroupKind : std::uint8_t { Unbroken, PartiallyBroken, Tie };

struct GroupState {
    GroupKind kind = GroupKind::Unbroken;
    /// Common value (Unbroken), majority (PartiallyBroken) or 0 (Tie).
    Spin value = 1;

    bool broken() const { return kind != GroupKind::Unbroken; }
    friend bool operator==(const GroupState&, const GroupState&) = default;
};

GroupState classify_group(std::span<const Spin> spins);
/// One state per logical vertex; inactive logical vertices read Unbroken(+1).
std::vector<GroupState> classify_groups(const EmbeddedProblem& e, std::span<const Spin> readout);

enum class Decoder { CT, MV_CT, EM, MV_EM, MV_EM_R, Recursive };

std::string decoder_name(Decoder d);
Decoder parse_decoder(const std::string& name);

struct DecodedConfig {
    SpinConfig spins;
    Decoder strategy = Decoder::CT;
    /// Fraction of SA restarts that reached the best decoding energy; 1 when
    /// the decoding problem was solved exhaustively or not at all.
    double p_dec = 1.0;
    std::size_t broken = 0;
    std::size_t ties = 0;
};

/// CT: every broken group gets a coin flip. MV_CT: partially broken groups
/// take their majority, ties a coin flip.
DecodedConfig decode_local(std::span<const GroupState> states, Decoder kind, Rng& rng);

/// Logical problem restricted to `em_set` (same vertex numbering, all other
/// vertices inactive), with frozen neighbours folded into the fields.
struct DecodingProblem {
    IsingProblem sub;
    std::vector<NodeId> vertices;
    /// Full logical assignment; entries in `vertices` are placeholders.
    SpinConfig assigned;
};

DecodingProblem build_decoding_problem(const IsingProblem& logical, std::span<const Spin> assigned,
                                       std::span<const NodeId> em_set);

/// Connected components of the nonzero couplings among active vertices.
std::vector<std::vector<NodeId>> coupling_components(const IsingProblem& p);

struct EmOptions {
    /// Components up to this size are solved exactly; larger ones by SA.
    std::size_t exhaustive_cutoff = 20;
    /// SA budget; defaults to default_decoding_sa of the residual problem.
    std::optional<SaParams> sa;
};

struct EmResult {
    SpinConfig spins;  // minimizing assignment on the active vertices
    double p_dec = 1.0;
};

/// Minimizes a decoding problem component by component.
EmResult minimize_decoding(const IsingProblem& sub, Rng& rng, const EmOptions& opt = {});

DecodedConfig decode_em(const EmbeddedProblem& e, std::span<const GroupState> states, Decoder mode, Rng& rng,
                        const EmOptions& opt = {});

/// Returns a state per logical vertex id for the active vertices of `sub`.
using TieSolver = std::function<std::vector<GroupState>(const IsingProblem& sub, Rng& rng)>;

/// Wraps a classical solver: its lowest-energy configuration, all Unbroken.
TieSolver classical_tie_solver(std::function<SolveResult(const IsingProblem&, Rng&)> solve);

/// Re-embeds each round's tie problem and anneals it with SQA.
TieSolver annealer_tie_solver(const HardwareGraph& hw, int side, Scheme scheme, PenaltyStrategy penalty,
                              AnnealSchedule schedule, SqaParams sqa);

DecodedConfig decode_recursive(const EmbeddedProblem& e, std::span<const GroupState> states, const TieSolver& solver,
                               Rng& rng, std::size_t* rounds = nullptr);

/// Classify and decode one readout.
DecodedConfig decode(const EmbeddedProblem& e, std::span<const Spin> readout, Decoder d, Rng& rng,
                     const EmOptions& opt = {});

/// Energy criterion: energy(logical, spins) <= reference + 1e-9.
bool is_success(const IsingProblem& logical, std::span<const Spin> spins, double reference_energy);

void write_decode_header(std::ostream& out);
void write_decode_record(std::ostream& out, const DecodedConfig& d, bool success);

}  // namespace qacme
