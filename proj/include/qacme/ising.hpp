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
#include <memory>
#include <span>
#include <vector>

#include "qacme/common.hpp"
#include "qacme/topology.hpp"

namespace qacme {

/// Ising problem  H(s) = sum_i h_i s_i + sum_(i,j) J_ij s_i s_j  on a graph.
/// Couplings are indexed by the graph's edge index.
class IsingProblem {
  public:
    IsingProblem() = default;
    explicit IsingProblem(std::shared_ptr<const Graph> graph);
    IsingProblem(std::shared_ptr<const Graph> graph, std::vector<double> h, std::vector<double> j);

    const Graph& graph() const { return *graph_; }
    const std::shared_ptr<const Graph>& graph_ptr() const { return graph_; }
    std::size_t size() const { return h_.size(); }

    double h(NodeId v) const { return h_[v]; }
    void set_h(NodeId v, double value);
    std::span<const double> fields() const { return h_; }

    double j(std::size_t edge) const { return j_[edge]; }
    void set_j(std::size_t edge, double value) { j_[edge] = value; }
    std::span<const double> couplings() const { return j_; }

    /// Coupling on edge (a, b); throws ParameterError when (a, b) is not an edge.
    double coupling(NodeId a, NodeId b) const;
    void set_coupling(NodeId a, NodeId b, double value);

    double max_abs_coupling() const;
    std::size_t nonzero_coupling_count() const;

    /// Throws ParameterError unless |h| <= 2 and |J| <= 1 everywhere.
    void validate_device_range() const;

    friend bool operator==(const IsingProblem& a, const IsingProblem& b) {
        return a.h_ == b.h_ && a.j_ == b.j_;
    }

  private:
    std::shared_ptr<const Graph> graph_;
    std::vector<double> h_;
    std::vector<double> j_;
};

/// Sum with pairwise reduction once the term count exceeds 10^4.
double stable_sum(std::span<const double> terms);

double energy(const IsingProblem& p, std::span<const Spin> s);

/// Throws ContractViolation unless s assigns +-1 to every active vertex.
void check_config(const Graph& g, std::span<const Spin> s);

IsingProblem apply_gauge(const IsingProblem& p, std::span<const Spin> gauge);
SpinConfig ungauge(std::span<const Spin> s, std::span<const Spin> gauge);
GaugeVector random_gauge(const Graph& g, Rng& rng);
GaugeVector identity_gauge(const Graph& g);

/// Fraction of nonzero couplings left unsatisfied (J s_i s_j > 0) by `planted`.
double frustration_fraction(const IsingProblem& p, std::span<const Spin> planted);
/// Smallest nonzero |J| after scaling the largest to 1.
double inverse_range(const IsingProblem& p);
/// Divides h and J by max |J|.
IsingProblem normalize_couplings(const IsingProblem& p);

SpinConfig all_up(const Graph& g);

// Text format: the graph block, then `H i value` per active vertex and
// `J i j value` per edge. Values keep 17 significant digits.
void write_problem(std::ostream& out, const IsingProblem& p, const std::string& graph_kind);
IsingProblem parse_problem(std::span<const Record> records, GraphFile* graph_out = nullptr);
IsingProblem read_problem(std::istream& in);

void write_config(std::ostream& out, std::span<const Spin> s, const Graph& g);
SpinConfig parse_config(std::span<const Record> records, std::size_t vertex_count);

}  // namespace qacme
