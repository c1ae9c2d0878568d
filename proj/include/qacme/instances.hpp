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

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "qacme/ising.hpp"

namespace qacme {

/// Frustrated loop: a simple cycle with one antiferromagnetic edge, the edge
/// (vertices[af_index], vertices[af_index + 1 mod k]).
struct Loop {
    std::vector<NodeId> vertices;
    std::size_t af_index = 0;
    double weight = 1.0;

    std::size_t length() const { return vertices.size(); }
    Edge edge(std::size_t i) const { return make_edge(vertices[i], vertices[(i + 1) % vertices.size()]); }
    /// Unweighted coupling on loop edge i: +1 on the AF edge, -1 elsewhere.
    double sign(std::size_t i) const { return i == af_index ? 1.0 : -1.0; }
};

/// Distribution of loop lengths.
struct LengthMix {
    std::vector<int> lengths{4, 6};
    std::vector<double> weights{0.5, 0.5};

    static LengthMix only(int length) { return {{length}, {1.0}}; }
    int draw(Rng& rng) const;
};

struct PlantedInstance {
    IsingProblem problem;
    /// Host with coordinates; side == 0 for hosts without them.
    LogicalGraph host;
    SpinConfig planted;
    std::vector<Loop> loops;
    double alpha = 0.0;
    double reference_energy = 0.0;
    /// max |sum of weighted loop couplings| before normalization.
    double normalization = 1.0;
    bool deformed = false;
};

inline constexpr int kLoopRetries = 1000;

/// Self-avoiding random walk closed into a cycle of the given length.
Loop sample_loop(const Graph& g, int length, Rng& rng, int retries = kLoopRetries);

/// Sums the loops' weighted couplings, normalizes to max |J| = 1 and
/// records the planted energy.
PlantedInstance build_instance(const LogicalGraph& host, std::vector<Loop> loops, double alpha);

/// round(alpha * active vertices) loops; a loop that would cancel an existing
/// nonzero coupling to zero is resampled.
PlantedInstance generate_planted(const LogicalGraph& host, double alpha, const LengthMix& mix, Rng& rng);

/// Instance `index` of a batch uses seed `master_seed ^ index`.
std::vector<PlantedInstance> generate_batch(const LogicalGraph& host, double alpha, const LengthMix& mix,
                                            std::size_t count, std::uint64_t master_seed);

/// Loop weight = floor(mean x coordinate) + 1.
double loop_weight(const LogicalGraph& host, const Loop& loop);
PlantedInstance generate_weighted(const PlantedInstance& base);

/// Rescales couplings around a random vertex subset of size picked_count
/// and recomputes the reference energy exactly.
PlantedInstance deform_embeddable(const PlantedInstance& base, std::size_t picked_count, Rng& rng);
/// Deterministic core of deform_embeddable for a given subset.
PlantedInstance deform_with(const PlantedInstance& base, std::span<const NodeId> picked);

double planted_energy(const PlantedInstance& inst);

// Problem format plus `LOOP v1 .. vk af weight`, `ALPHA a`, `REFENERGY e`,
// `DEFORMED 0|1` trailers.
void write_instance(std::ostream& out, const PlantedInstance& inst);
PlantedInstance parse_instance(std::span<const Record> records);
PlantedInstance read_instance(std::istream& in);

}  // namespace qacme
