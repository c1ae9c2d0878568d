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
#include <utility>
#include <vector>

#include "qacme/ising.hpp"

namespace qacme {

/// Tabulated annealing schedule A(s), B(s), linearly interpolated.
class AnnealSchedule {
  public:
    struct Point {
        double s;
        double a;
        double b;
    };

    /// A(s) = a0 (1 - s), B(s) = b0 s.
    static AnnealSchedule linear(double a0 = 1.0, double b0 = 1.0);
    /// Checks s strictly increasing over [0, 1], A non-increasing, B
    /// non-decreasing; with `require_endpoints`, also A(1) ~ 0 and B(0) ~ 0.
    static AnnealSchedule from_points(std::vector<Point> points, bool require_endpoints = true);

    std::pair<double, double> at(double s) const;
    double final_b() const { return points_.back().b; }
    std::span<const Point> points() const { return points_; }

  private:
    std::vector<Point> points_;
};

/// Reads `s A B` lines.
AnnealSchedule read_schedule(std::istream& in, bool require_endpoints = true);

struct JPerp {
    double value;
    bool saturated;
};

inline constexpr double kJPerpFloor = -25.0;

/// Trotter-direction coupling (1/2) ln tanh(beta A / n_tau).
JPerp j_perp(double beta, double a, int n_tau, double floor = kJPerpFloor);

enum class Readout { RandomSlice, MajoritySlice };

struct SqaParams {
    int n_tau = 64;
    int sweeps = 20000;
    /// Inverse temperature in units of 1 / B(1).
    double beta = 1.0;
    Readout readout = Readout::RandomSlice;
    /// Sweeps performed at each schedule point before s advances.
    int sweeps_per_step = 1;
    double jperp_floor = kJPerpFloor;
};

struct SaParams {
    double t_init = 1.0;
    double t_final = 0.01;
    int sweeps = 1000;
    int restarts = 1;
    /// When > 0, incremental energies are checked against a full
    /// recomputation every `check_interval` accepted flips.
    int check_interval = 0;
};

struct SolveResult {
    std::vector<SpinConfig> configs;
    std::vector<double> energies;
    double best_energy = 0.0;
    /// Number of exact ground states (brute force only; configs may be capped).
    std::size_t ground_state_count = 0;

    std::size_t best_index() const;
};

/// Active-vertex view of a problem with only the nonzero couplings.
struct CompactProblem {
    std::vector<NodeId> vertices;     // compact index -> graph vertex
    std::vector<double> h;            // per compact index
    std::vector<std::size_t> offsets; // CSR over compact indices
    std::vector<std::uint32_t> nbr;
    std::vector<double> w;

    explicit CompactProblem(const IsingProblem& p);
    std::size_t size() const { return vertices.size(); }
    double local_field(std::size_t i, std::span<const Spin> s) const;
    double energy(std::span<const Spin> s) const;
    SpinConfig expand(std::span<const Spin> compact, std::size_t vertex_count) const;
};

SolveResult sqa_run(const IsingProblem& p, const AnnealSchedule& schedule, const SqaParams& params, Rng& rng);

SolveResult sa_run(const IsingProblem& p, const SaParams& params, Rng& rng);

/// Decoding defaults: T_init = 4 max|coef|, T_final = 0.1 min nonzero |coef|,
/// 10 restarts of 10 sweeps.
SaParams default_decoding_sa(const IsingProblem& p);

inline constexpr std::size_t kBruteForceLimit = 26;

/// Exhaustive enumeration; keeps at most `max_configs` ground states.
SolveResult brute_force(const IsingProblem& p, std::size_t max_configs = 1u << 16);

double ground_energy_tolerance(const IsingProblem& p);

/// Exact minimum energy by min-degree variable elimination. Throws
/// SizeLimitError when an intermediate table would span more than
/// `max_width` spins.
double exact_ground_energy(const IsingProblem& p, std::size_t max_width = 24);

}  // namespace qacme
