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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qacme/decoding.hpp"

namespace qacme {

struct BqStats {
    /// Fraction of readouts in which each logical vertex's group is broken.
    std::vector<double> per_qubit_p;
    double mean_p_bq = 0.0;
    double mean_p_tie = 0.0;
    std::size_t sample_count = 0;
};

/// Statistics over classified readouts of the active vertices of `logical`.
BqStats bq_statistics(std::span<const std::vector<GroupState>> readouts, const Graph& logical);

/// Coefficient of variation of per_qubit_p over `vertices`.
double per_qubit_cv(const BqStats& stats, std::span<const NodeId> vertices);

using SizeHistogram = std::map<std::size_t, std::size_t>;

/// Component size -> number of components of the subgraph induced by bq_set.
SizeHistogram bq_clusters(const Graph& encoded, std::span<const NodeId> bq_set);

struct DomainScan {
    double p = 0.0;
    std::vector<std::size_t> sizes;
    double mean_size = 0.0;

    double stderr_of_mean() const;
};

/// Vertex of the N x N x 2 grid whose occupied domain is measured.
NodeId central_vertex(int side);

/// Trial t occupies vertex v iff u_{t,v} < p, with u drawn from a stream
/// seeded by one draw of `rng` and t, so scans sharing a seed are nested in p.
DomainScan domain_size_scan(int side, double p, std::size_t trials, Rng& rng, unsigned threads = 1);

enum class Lattice { Square, Cubic, TwoLevelGrid };

std::string lattice_name(Lattice l);
Lattice parse_lattice(const std::string& name);

/// Lattice of linear size L with its two x-boundary site sets.
struct SpanningLattice {
    Graph graph;
    std::vector<NodeId> left;
    std::vector<NodeId> right;
};

SpanningLattice spanning_lattice(Lattice kind, int size);

/// Per-trial number of occupied sites at which a left-right spanning cluster
/// first appears when sites are added in uniformly random order.
std::vector<std::size_t> spanning_counts(const SpanningLattice& lat, std::size_t trials, Rng& rng,
                                         unsigned threads = 1);

/// Spanning probability at p: binomial convolution of the empirical counts.
double spanning_probability(std::span<const std::size_t> counts, std::size_t sites, double p);

struct ThresholdEstimate {
    Lattice lattice = Lattice::Square;
    double estimate = 0.0;
    double err = 0.0;
    /// Crossing of each consecutive size pair.
    std::vector<double> crossings;
};

/// Mean crossing point of consecutive sizes' spanning curves, with a
/// bootstrap (over trials) error bar. Throws EstimationError when some pair
/// of curves does not cross.
ThresholdEstimate estimate_site_threshold(Lattice kind, std::span<const int> sizes, std::size_t trials, Rng& rng,
                                          unsigned threads = 1, std::size_t bootstrap = 100);

struct TailFit {
    double alpha = 0.0;
    double gamma = 0.0;
    double rms_residual = 0.0;
    std::size_t bins = 0;
};

/// Least squares of ln(count / n_sites) = ln(alpha) - gamma * size over bins
/// with count >= min_count. Throws EstimationError with fewer than two bins.
TailFit fit_cluster_tail(const SizeHistogram& hist, double n_sites, std::size_t min_count = 10);

struct CostEstimate {
    double p_r = 0.0;
    double t_ratio = 0.0;
    std::size_t n_bar = 0;
    double p_bq = 0.0;
    int r_bar = 0;
    TailFit fit;
    /// Set when gamma <= 0: no exponential decay, t_ratio unreliable.
    bool above_threshold = false;
};

/// P_r = (1 - alpha e^{-gamma r})^N and T_ratio = (N / r) / P_r.
CostEstimate decoding_cost_estimate(std::size_t n_bar, double p_bq, int r_bar, const TailFit& fit);

void write_scan_csv(std::ostream& out, std::span<const DomainScan> scans);
void write_histogram_csv(std::ostream& out, const SizeHistogram& hist);
void write_threshold_csv(std::ostream& out, std::span<const ThresholdEstimate> estimates);

}  // namespace qacme
