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

#include "qacme/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>

namespace qacme {

AnnealSchedule AnnealSchedule::linear(double a0, double b0) {
    return from_points({{0.0, a0, 0.0}, {1.0, 0.0, b0}});
}

AnnealSchedule AnnealSchedule::from_points(std::vector<Point> points, bool require_endpoints) {
    if (points.size() < 2) throw ParameterError("schedule needs at least two points");
    if (points.front().s != 0.0 || points.back().s != 1.0) throw ParameterError("schedule must span s = 0 .. 1");
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i].s > points[i - 1].s)) throw ParameterError("schedule s must be strictly increasing");
        if (points[i].a > points[i - 1].a) throw ParameterError("schedule A must be non-increasing");
        if (points[i].b < points[i - 1].b) throw ParameterError("schedule B must be non-decreasing");
    }
    if (require_endpoints) {
        const double scale = std::max(points.front().a, points.back().b);
        if (std::abs(points.back().a) > 1e-3 * scale || std::abs(points.front().b) > 1e-3 * scale) {
            throw ParameterError("schedule must have A(1) ~ 0 and B(0) ~ 0");
        }
    }
    AnnealSchedule out;
    out.points_ = std::move(points);
    return out;
}

std::pair<double, double> AnnealSchedule::at(double s) const {
    s = std::clamp(s, 0.0, 1.0);
    auto it = std::upper_bound(points_.begin(), points_.end(), s, [](double v, const Point& p) { return v < p.s; });
    if (it == points_.end()) return {points_.back().a, points_.back().b};
    const Point& hi = *it;
    const Point& lo = *(it - 1);
    const double f = (s - lo.s) / (hi.s - lo.s);
    return {lo.a + f * (hi.a - lo.a), lo.b + f * (hi.b - lo.b)};
}

AnnealSchedule read_schedule(std::istream& in, bool require_endpoints) {
    std::vector<AnnealSchedule::Point> pts;
    for (const Record& r : read_records(in)) {
        if (r.fields.size() != 2) throw FormatError("schedule lines are `s A B`");
        pts.push_back({parse_double(r.tag), parse_double(r.fields[0]), parse_double(r.fields[1])});
    }
    return AnnealSchedule::from_points(std::move(pts), require_endpoints);
}

JPerp j_perp(double beta, double a, int n_tau, double floor) {
    if (!(beta > 0.0) || !(a > 0.0)) throw DomainError("j_perp needs beta > 0 and A > 0");
    if (n_tau < 2) throw ParameterError("n_tau must be >= 2");
    const double t = std::tanh(beta * a / n_tau);
    if (t >= 1.0) return {0.0, true};
    const double v = 0.5 * std::log(t);
    if (!(v > floor)) return {floor, true};
    return {v, false};
}

std::size_t SolveResult::best_index() const {
    return static_cast<std::size_t>(std::min_element(energies.begin(), energies.end()) - energies.begin());
}

CompactProblem::CompactProblem(const IsingProblem& p) {
    const Graph& g = p.graph();
    std::vector<std::uint32_t> local(g.vertex_count(), UINT32_MAX);
    for (NodeId v = 0; v < g.vertex_count(); ++v) {
        if (!g.active(v)) continue;
        local[v] = static_cast<std::uint32_t>(vertices.size());
        vertices.push_back(v);
        h.push_back(p.h(v));
    }
    offsets.assign(vertices.size() + 1, 0);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        std::size_t count = 0;
        for (const Neighbor& nb : g.neighbors(vertices[i]))
            if (p.j(nb.edge) != 0.0) ++count;
        offsets[i + 1] = offsets[i] + count;
    }
    nbr.reserve(offsets.back());
    w.reserve(offsets.back());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        for (const Neighbor& nb : g.neighbors(vertices[i])) {
            const double j = p.j(nb.edge);
            if (j == 0.0) continue;
            nbr.push_back(local[nb.node]);
            w.push_back(j);
        }
    }
}

double CompactProblem::local_field(std::size_t i, std::span<const Spin> s) const {
    double f = h[i];
    for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) f += w[k] * s[nbr[k]];
    return f;
}

double CompactProblem::energy(std::span<const Spin> s) const {
    double e = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        double pair = 0.0;
        for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k)
            if (nbr[k] > i) pair += w[k] * s[nbr[k]];
        e += s[i] * (h[i] + pair);
    }
    return e;
}

SpinConfig CompactProblem::expand(std::span<const Spin> compact, std::size_t vertex_count) const {
    SpinConfig out(vertex_count, 1);
    for (std::size_t i = 0; i < vertices.size(); ++i) out[vertices[i]] = compact[i];
    return out;
}

namespace {

void finish(SolveResult& r, const IsingProblem& p) {
    r.energies.clear();
    for (const auto& c : r.configs) r.energies.push_back(energy(p, c));
    r.best_energy = r.energies.empty() ? 0.0 : *std::min_element(r.energies.begin(), r.energies.end());
}

}  // namespace

SolveResult sqa_run(const IsingProblem& p, const AnnealSchedule& schedule, const SqaParams& params, Rng& rng) {
    if (params.n_tau < 2) throw ParameterError("n_tau must be >= 2");
    if (params.sweeps < 1) throw ParameterError("sweeps must be >= 1");
    if (params.sweeps_per_step < 1) throw ParameterError("sweeps_per_step must be >= 1");
    if (!(params.beta > 0.0)) throw ParameterError("beta must be positive");

    const CompactProblem cp(p);
    const std::size_t n = cp.size();
    const int nt = params.n_tau;
    if (n == 0) throw ParameterError("empty problem");

    // World lines: spins[i * nt + tau].
    std::vector<Spin> spins(n * nt);
    for (auto& x : spins) x = random_spin(rng);

    const int steps = (params.sweeps + params.sweeps_per_step - 1) / params.sweeps_per_step;
    std::vector<int> cluster;
    cluster.reserve(nt);

    int sweep = 0;
    for (int step = 0; step < steps; ++step) {
        const double s = steps == 1 ? 1.0 : static_cast<double>(step) / (steps - 1);
        const auto [a, b] = schedule.at(s);
        const double jp = a > 0.0 ? j_perp(params.beta, a, nt, params.jperp_floor).value : params.jperp_floor;
        const double p_add = -std::expm1(2.0 * jp);
        const double slice_w = params.beta / nt * b;

        for (int rep = 0; rep < params.sweeps_per_step && sweep < params.sweeps; ++rep, ++sweep) {
            for (std::size_t i = 0; i < n; ++i) {
                Spin* ring = &spins[i * nt];
                const int t0 = static_cast<int>(rng() % static_cast<std::uint64_t>(nt));
                const Spin sign = ring[t0];
                cluster.clear();
                cluster.push_back(t0);
                // Grow forward, then backward, testing each Trotter bond once.
                int t = t0;
                while (static_cast<int>(cluster.size()) < nt) {
                    const int next = (t + 1) % nt;
                    if (ring[next] != sign || !(uniform01(rng) < p_add)) break;
                    cluster.push_back(next);
                    t = next;
                }
                t = t0;
                while (static_cast<int>(cluster.size()) < nt) {
                    const int prev = (t + nt - 1) % nt;
                    if (ring[prev] != sign || !(uniform01(rng) < p_add)) break;
                    cluster.push_back(prev);
                    t = prev;
                }
                double delta = 0.0;
                if (slice_w != 0.0) {
                    for (int tau : cluster) {
                        double f = cp.h[i];
                        for (std::size_t k = cp.offsets[i]; k < cp.offsets[i + 1]; ++k)
                            f += cp.w[k] * spins[cp.nbr[k] * nt + tau];
                        delta -= 2.0 * sign * f;
                    }
                    delta *= slice_w;
                }
                if (delta <= 0.0 || uniform01(rng) < std::exp(-delta)) {
                    for (int tau : cluster) ring[tau] = static_cast<Spin>(-sign);
                }
            }
        }
    }

    std::vector<Spin> out(n);
    if (params.readout == Readout::RandomSlice) {
        const int tau = static_cast<int>(rng() % static_cast<std::uint64_t>(nt));
        for (std::size_t i = 0; i < n; ++i) out[i] = spins[i * nt + tau];
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            int sum = 0;
            for (int tau = 0; tau < nt; ++tau) sum += spins[i * nt + tau];
            out[i] = sum > 0 ? Spin{1} : sum < 0 ? Spin{-1} : random_spin(rng);
        }
    }

    SolveResult r;
    r.configs.push_back(cp.expand(out, p.size()));
    finish(r, p);
    return r;
}

SolveResult sa_run(const IsingProblem& p, const SaParams& params, Rng& rng) {
    if (!(params.t_final > 0.0) || params.t_init < params.t_final) {
        throw ParameterError("SA needs t_init >= t_final > 0");
    }
    if (params.sweeps < 1 || params.restarts < 1) throw ParameterError("SA needs sweeps, restarts >= 1");
    const CompactProblem cp(p);
    const std::size_t n = cp.size();
    if (n == 0) throw ParameterError("empty problem");

    SolveResult r;
    std::vector<Spin> s(n);
    std::vector<double> field(n);
    for (int restart = 0; restart < params.restarts; ++restart) {
        for (auto& x : s) x = random_spin(rng);
        for (std::size_t i = 0; i < n; ++i) field[i] = cp.local_field(i, s);
        double e = cp.energy(s);
        long flips = 0;
        for (int sweep = 0; sweep < params.sweeps; ++sweep) {
            const double temp = params.sweeps == 1
                                    ? params.t_final
                                    : params.t_init + (params.t_final - params.t_init) * sweep / (params.sweeps - 1);
            for (std::size_t i = 0; i < n; ++i) {
                const double delta = -2.0 * s[i] * field[i];
                if (delta <= 0.0 || uniform01(rng) < std::exp(-delta / temp)) {
                    s[i] = static_cast<Spin>(-s[i]);
                    e += delta;
                    for (std::size_t k = cp.offsets[i]; k < cp.offsets[i + 1]; ++k)
                        field[cp.nbr[k]] += 2.0 * cp.w[k] * s[i];
                    ++flips;
                    if (params.check_interval > 0 && flips % params.check_interval == 0) {
                        const double full = cp.energy(s);
                        if (std::abs(full - e) > 1e-9) {
                            throw ContractViolation("SA incremental energy drifted from full recomputation");
                        }
                    }
                }
            }
        }
        r.configs.push_back(cp.expand(s, p.size()));
    }
    finish(r, p);
    return r;
}

SaParams default_decoding_sa(const IsingProblem& p) {
    double hi = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    for (double j : p.couplings()) {
        if (j == 0.0) continue;
        hi = std::max(hi, std::abs(j));
        lo = std::min(lo, std::abs(j));
    }
    if (hi == 0.0) {
        for (double h : p.fields()) {
            if (h == 0.0) continue;
            hi = std::max(hi, std::abs(h));
            lo = std::min(lo, std::abs(h));
        }
    }
    if (hi == 0.0) {
        hi = 1.0;
        lo = 1.0;
    }
    SaParams sa;
    sa.t_init = 4.0 * hi;
    sa.t_final = 0.1 * lo;
    sa.sweeps = 10;
    sa.restarts = 10;
    return sa;
}

double ground_energy_tolerance(const IsingProblem& p) {
    double scale = 0.0;
    for (double h : p.fields()) scale += std::abs(h);
    for (double j : p.couplings()) scale += std::abs(j);
    return 1e-9 * std::max(1.0, scale);
}

SolveResult brute_force(const IsingProblem& p, std::size_t max_configs) {
    const CompactProblem cp(p);
    const std::size_t n = cp.size();
    if (n > kBruteForceLimit) {
        throw SizeLimitError("brute force limited to " + std::to_string(kBruteForceLimit) + " spins, got " +
                             std::to_string(n));
    }
    const double tol = ground_energy_tolerance(p);
    std::vector<Spin> s(n, 1);
    std::vector<double> field(n);
    for (std::size_t i = 0; i < n; ++i) field[i] = cp.local_field(i, s);
    double e = cp.energy(s);

    double best = e;
    std::size_t count = 0;
    std::vector<std::vector<Spin>> keep;
    auto consider = [&] {
        if (e < best - tol) {
            best = e;
            count = 0;
            keep.clear();
        }
        if (e <= best + tol) {
            ++count;
            if (keep.size() < max_configs) keep.push_back(s);
            best = std::min(best, e);
        }
    };
    consider();
    // Gray-code walk: step k flips the bit at the position of k's lowest set bit.
    const std::uint64_t total = n == 0 ? 1 : (std::uint64_t{1} << n);
    for (std::uint64_t k = 1; k < total; ++k) {
        const auto i = static_cast<std::size_t>(std::countr_zero(k));
        e += -2.0 * s[i] * field[i];
        s[i] = static_cast<Spin>(-s[i]);
        for (std::size_t q = cp.offsets[i]; q < cp.offsets[i + 1]; ++q) field[cp.nbr[q]] += 2.0 * cp.w[q] * s[i];
        consider();
    }

    SolveResult r;
    for (const auto& c : keep) r.configs.push_back(cp.expand(c, p.size()));
    finish(r, p);
    // Drop anything the incremental walk let through on rounding alone.
    const double exact_best = r.best_energy;
    std::vector<SpinConfig> cfgs;
    std::vector<double> es;
    for (std::size_t k = 0; k < r.configs.size(); ++k) {
        if (r.energies[k] <= exact_best + tol) {
            cfgs.push_back(std::move(r.configs[k]));
            es.push_back(r.energies[k]);
        }
    }
    r.configs = std::move(cfgs);
    r.energies = std::move(es);
    r.ground_state_count = count;
    return r;
}

namespace {

struct Factor {
    std::vector<std::uint32_t> scope;  // sorted; bit k of a table index is scope[k], set bit = spin -1
    std::vector<double> table;
};

}  // namespace

double exact_ground_energy(const IsingProblem& p, std::size_t max_width) {
    const CompactProblem cp(p);
    const std::size_t n = cp.size();
    std::vector<Factor> factors;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (cp.h[i] != 0.0) factors.push_back({{i}, {cp.h[i], -cp.h[i]}});
        for (std::size_t k = cp.offsets[i]; k < cp.offsets[i + 1]; ++k) {
            const std::uint32_t j = cp.nbr[k];
            if (j <= i) continue;
            const double w = cp.w[k];
            factors.push_back({{i, j}, {w, -w, -w, w}});
        }
    }
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::size_t k = cp.offsets[i]; k < cp.offsets[i + 1]; ++k) adj[i].push_back(cp.nbr[k]);
    for (auto& a : adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }

    std::vector<char> alive(factors.size(), 1);
    std::vector<char> eliminated(n, 0);
    double constant = 0.0;
    for (std::size_t round = 0; round < n; ++round) {
        std::uint32_t v = 0;
        std::size_t best_deg = SIZE_MAX;
        for (std::uint32_t i = 0; i < n; ++i) {
            if (!eliminated[i] && adj[i].size() < best_deg) {
                best_deg = adj[i].size();
                v = i;
            }
        }
        eliminated[v] = 1;

        std::vector<std::size_t> bucket;
        for (std::size_t f = 0; f < factors.size(); ++f)
            if (alive[f] && std::binary_search(factors[f].scope.begin(), factors[f].scope.end(), v)) bucket.push_back(f);
        std::vector<std::uint32_t> scope = adj[v];
        if (scope.size() > max_width) {
            throw SizeLimitError("elimination width " + std::to_string(scope.size()) + " exceeds " +
                                 std::to_string(max_width));
        }
        for (std::uint32_t a : scope) {
            auto& na = adj[a];
            na.erase(std::remove(na.begin(), na.end(), v), na.end());
            for (std::uint32_t b : scope)
                if (b != a && !std::binary_search(na.begin(), na.end(), b)) na.insert(std::upper_bound(na.begin(), na.end(), b), b);
        }
        adj[v].clear();
        if (bucket.empty()) continue;

        // Position of each bucket factor's variables in the new scope; -1 marks v.
        std::vector<std::vector<int>> pos(bucket.size());
        for (std::size_t b = 0; b < bucket.size(); ++b) {
            for (std::uint32_t x : factors[bucket[b]].scope) {
                if (x == v) pos[b].push_back(-1);
                else pos[b].push_back(static_cast<int>(std::lower_bound(scope.begin(), scope.end(), x) - scope.begin()));
            }
        }
        Factor out{scope, std::vector<double>(std::size_t{1} << scope.size())};
        for (std::size_t a = 0; a < out.table.size(); ++a) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t sv = 0; sv < 2; ++sv) {
                double total = 0.0;
                for (std::size_t b = 0; b < bucket.size(); ++b) {
                    std::size_t idx = 0;
                    for (std::size_t k = 0; k < pos[b].size(); ++k) {
                        const std::size_t bit = pos[b][k] < 0 ? sv : (a >> pos[b][k]) & 1;
                        idx |= bit << k;
                    }
                    total += factors[bucket[b]].table[idx];
                }
                best = std::min(best, total);
            }
            out.table[a] = best;
        }
        for (std::size_t f : bucket) alive[f] = 0;
        if (scope.empty()) {
            constant += out.table[0];
        } else {
            factors.push_back(std::move(out));
            alive.push_back(1);
        }
    }
    return constant;
}

}  // namespace qacme
