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

#include "qacme/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace qacme {

BqStats bq_statistics(std::span<const std::vector<GroupState>> readouts, const Graph& logical) {
    if (readouts.empty()) throw ContractViolation("bq_statistics needs at least one readout");
    const std::vector<NodeId> active = logical.active_vertices();
    if (active.empty()) throw ContractViolation("bq_statistics needs active vertices");
    BqStats st;
    st.per_qubit_p.assign(logical.vertex_count(), 0.0);
    std::vector<std::size_t> broken(logical.vertex_count(), 0);
    double bq_sum = 0.0;
    double tie_sum = 0.0;
    for (const auto& r : readouts) {
        if (r.size() != logical.vertex_count()) throw ContractViolation("readout size mismatch");
        std::size_t b = 0;
        std::size_t t = 0;
        for (NodeId v : active) {
            if (r[v].broken()) {
                ++b;
                ++broken[v];
            }
            if (r[v].kind == GroupKind::Tie) ++t;
        }
        bq_sum += static_cast<double>(b) / static_cast<double>(active.size());
        tie_sum += static_cast<double>(t) / static_cast<double>(active.size());
    }
    const auto n = static_cast<double>(readouts.size());
    for (NodeId v : active) st.per_qubit_p[v] = static_cast<double>(broken[v]) / n;
    st.mean_p_bq = bq_sum / n;
    st.mean_p_tie = tie_sum / n;
    st.sample_count = readouts.size();
    return st;
}

double per_qubit_cv(const BqStats& stats, std::span<const NodeId> vertices) {
    if (vertices.empty()) throw ContractViolation("per_qubit_cv needs vertices");
    double sum = 0.0;
    for (NodeId v : vertices) sum += stats.per_qubit_p.at(v);
    const double mean = sum / static_cast<double>(vertices.size());
    double ss = 0.0;
    for (NodeId v : vertices) ss += (stats.per_qubit_p[v] - mean) * (stats.per_qubit_p[v] - mean);
    const double sd = std::sqrt(ss / static_cast<double>(vertices.size()));
    return mean > 0.0 ? sd / mean : 0.0;
}

SizeHistogram bq_clusters(const Graph& encoded, std::span<const NodeId> bq_set) {
    SizeHistogram hist;
    for (const auto& c : percolation_subgraph(encoded, bq_set)) ++hist[c.size()];
    return hist;
}

double DomainScan::stderr_of_mean() const {
    if (sizes.size() < 2) return 0.0;
    double ss = 0.0;
    for (std::size_t s : sizes) ss += (static_cast<double>(s) - mean_size) * (static_cast<double>(s) - mean_size);
    const auto n = static_cast<double>(sizes.size());
    return std::sqrt(ss / (n - 1.0) / n);
}

NodeId central_vertex(int side) {
    const LogicalGraph lg{side, nullptr, {}};
    return lg.vertex(side / 2, side / 2, 0);
}

DomainScan domain_size_scan(int side, double p, std::size_t trials, Rng& rng, unsigned threads) {
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("occupation probability must lie in [0, 1]");
    if (trials < 1) throw ParameterError("need at least one trial");
    if (side < 1) throw ParameterError("grid side must be positive");
    const LogicalGraph lg = two_level_grid(side);
    const Graph& g = *lg.graph;
    const NodeId center = central_vertex(side);
    const std::uint64_t master = rng();

    DomainScan scan;
    scan.p = p;
    scan.sizes.assign(trials, 0);
    parallel_for(trials, threads, [&](std::size_t t) {
        Rng r(stream_seed(master, t));
        std::vector<char> occupied(g.vertex_count());
        for (auto& o : occupied) o = uniform01(r) < p;
        if (!occupied[center]) return;
        std::vector<NodeId> stack{center};
        occupied[center] = 0;
        std::size_t size = 0;
        while (!stack.empty()) {
            const NodeId v = stack.back();
            stack.pop_back();
            ++size;
            for (const Neighbor& nb : g.neighbors(v)) {
                if (occupied[nb.node]) {
                    occupied[nb.node] = 0;
                    stack.push_back(nb.node);
                }
            }
        }
        scan.sizes[t] = size;
    });
    const double total = std::accumulate(scan.sizes.begin(), scan.sizes.end(), 0.0);
    scan.mean_size = total / static_cast<double>(trials);
    return scan;
}

std::string lattice_name(Lattice l) {
    switch (l) {
        case Lattice::Square: return "square";
        case Lattice::Cubic: return "cubic";
        case Lattice::TwoLevelGrid: return "2lg";
    }
    throw ContractViolation("unknown lattice");
}

Lattice parse_lattice(const std::string& name) {
    for (Lattice l : {Lattice::Square, Lattice::Cubic, Lattice::TwoLevelGrid}) {
        if (lattice_name(l) == name) return l;
    }
    throw ParameterError("unknown lattice '" + name + "'");
}

SpanningLattice spanning_lattice(Lattice kind, int size) {
    if (size < 2) throw ParameterError("lattice size must be at least 2");
    const auto n = static_cast<NodeId>(size);
    SpanningLattice lat;
    std::vector<Edge> edges;
    switch (kind) {
        case Lattice::Square: {
            auto id = [n](NodeId x, NodeId y) { return y * n + x; };
            for (NodeId y = 0; y < n; ++y) {
                for (NodeId x = 0; x < n; ++x) {
                    if (x + 1 < n) edges.push_back({id(x, y), id(x + 1, y)});
                    if (y + 1 < n) edges.push_back({id(x, y), id(x, y + 1)});
                }
                lat.left.push_back(id(0, y));
                lat.right.push_back(id(n - 1, y));
            }
            lat.graph = Graph(std::size_t{n} * n, std::move(edges));
            break;
        }
        case Lattice::Cubic: {
            auto id = [n](NodeId x, NodeId y, NodeId z) { return (z * n + y) * n + x; };
            for (NodeId z = 0; z < n; ++z) {
                for (NodeId y = 0; y < n; ++y) {
                    for (NodeId x = 0; x < n; ++x) {
                        if (x + 1 < n) edges.push_back({id(x, y, z), id(x + 1, y, z)});
                        if (y + 1 < n) edges.push_back({id(x, y, z), id(x, y + 1, z)});
                        if (z + 1 < n) edges.push_back({id(x, y, z), id(x, y, z + 1)});
                    }
                    lat.left.push_back(id(0, y, z));
                    lat.right.push_back(id(n - 1, y, z));
                }
            }
            lat.graph = Graph(std::size_t{n} * n * n, std::move(edges));
            break;
        }
        case Lattice::TwoLevelGrid: {
            const LogicalGraph lg = two_level_grid(size);
            lat.graph = *lg.graph;
            for (NodeId v = 0; v < lat.graph.vertex_count(); ++v) {
                const Coord c = lg.coord(v);
                if (c.x == 0) lat.left.push_back(v);
                if (c.x == size - 1) lat.right.push_back(v);
            }
            break;
        }
    }
    return lat;
}

std::vector<std::size_t> spanning_counts(const SpanningLattice& lat, std::size_t trials, Rng& rng,
                                         unsigned threads) {
    const std::size_t n = lat.graph.vertex_count();
    std::vector<char> side(n, 0);
    for (NodeId v : lat.left) side[v] |= 1;
    for (NodeId v : lat.right) side[v] |= 2;
    const auto left = static_cast<NodeId>(n);
    const auto right = static_cast<NodeId>(n + 1);
    const std::uint64_t master = rng();
    std::vector<std::size_t> out(trials, n);
    parallel_for(trials, threads, [&](std::size_t t) {
        Rng r(stream_seed(master, t));
        std::vector<NodeId> order(n);
        std::iota(order.begin(), order.end(), NodeId{0});
        std::shuffle(order.begin(), order.end(), r);
        UnionFind uf(n + 2);
        std::vector<char> occupied(n, 0);
        for (std::size_t k = 0; k < n; ++k) {
            const NodeId v = order[k];
            occupied[v] = 1;
            if (side[v] & 1) uf.unite(v, left);
            if (side[v] & 2) uf.unite(v, right);
            for (const Neighbor& nb : lat.graph.neighbors(v)) {
                if (occupied[nb.node]) uf.unite(v, nb.node);
            }
            if (uf.find(left) == uf.find(right)) {
                out[t] = k + 1;
                return;
            }
        }
    });
    return out;
}

double spanning_probability(std::span<const std::size_t> counts, std::size_t sites, double p) {
    if (counts.empty()) throw ContractViolation("no spanning counts");
    std::vector<std::size_t> sorted(counts.begin(), counts.end());
    std::sort(sorted.begin(), sorted.end());
    const auto total = static_cast<double>(sorted.size());
    auto cdf = [&](std::size_t m) {
        return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), m) - sorted.begin()) / total;
    };
    if (p <= 0.0) return cdf(0);
    if (p >= 1.0) return cdf(sites);
    const auto nn = static_cast<double>(sites);
    const double mean = nn * p;
    const double sd = std::sqrt(nn * p * (1.0 - p));
    const auto lo = static_cast<std::size_t>(std::max(0.0, std::floor(mean - 12.0 * sd - 1.0)));
    const auto hi = static_cast<std::size_t>(std::min(nn, std::ceil(mean + 12.0 * sd + 1.0)));
    const double lg_n = std::lgamma(nn + 1.0);
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    double sum = 0.0;
    for (std::size_t m = lo; m <= hi; ++m) {
        const auto mm = static_cast<double>(m);
        const double w = std::exp(lg_n - std::lgamma(mm + 1.0) - std::lgamma(nn - mm + 1.0) + mm * lp + (nn - mm) * lq);
        sum += w * cdf(m);
    }
    return sum;
}

namespace {

/// Crossing of the spanning curves of a smaller and a larger lattice.
bool find_crossing(std::span<const std::size_t> small, std::size_t small_sites, std::span<const std::size_t> large,
                   std::size_t large_sites, double& where) {
    auto diff = [&](double p) {
        return spanning_probability(small, small_sites, p) - spanning_probability(large, large_sites, p);
    };
    auto level = [&](double p) {
        return 0.5 * (spanning_probability(small, small_sites, p) + spanning_probability(large, large_sites, p));
    };
    constexpr int kGrid = 99;
    double best_gap = 2.0;
    bool found = false;
    double a_best = 0.0;
    double b_best = 0.0;
    double prev_p = 0.01;
    double prev_d = diff(prev_p);
    for (int i = 2; i <= kGrid; ++i) {
        const double p = i / 100.0;
        const double d = diff(p);
        if (prev_d > 0.0 && d < 0.0) {
            const double gap = std::abs(level(0.5 * (prev_p + p)) - 0.5);
            if (gap < best_gap) {
                best_gap = gap;
                a_best = prev_p;
                b_best = p;
                found = true;
            }
        }
        prev_p = p;
        prev_d = d;
    }
    if (!found) return false;
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (a_best + b_best);
        if (diff(mid) > 0.0) {
            a_best = mid;
        } else {
            b_best = mid;
        }
    }
    where = 0.5 * (a_best + b_best);
    return true;
}

bool mean_crossing(const std::vector<std::vector<std::size_t>>& counts, const std::vector<std::size_t>& sites,
                   std::vector<double>& crossings) {
    crossings.clear();
    for (std::size_t i = 0; i + 1 < counts.size(); ++i) {
        double c = 0.0;
        if (!find_crossing(counts[i], sites[i], counts[i + 1], sites[i + 1], c)) return false;
        crossings.push_back(c);
    }
    return true;
}

}  // namespace

ThresholdEstimate estimate_site_threshold(Lattice kind, std::span<const int> sizes, std::size_t trials, Rng& rng,
                                          unsigned threads, std::size_t bootstrap) {
    if (sizes.size() < 2) throw ParameterError("threshold estimation needs at least two sizes");
    if (trials < 2) throw ParameterError("threshold estimation needs at least two trials");
    std::vector<int> sorted(sizes.begin(), sizes.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw ParameterError("sizes must be distinct");

    std::vector<std::vector<std::size_t>> counts;
    std::vector<std::size_t> sites;
    for (int L : sorted) {
        const SpanningLattice lat = spanning_lattice(kind, L);
        counts.push_back(spanning_counts(lat, trials, rng, threads));
        sites.push_back(lat.graph.vertex_count());
    }
    ThresholdEstimate est;
    est.lattice = kind;
    if (!mean_crossing(counts, sites, est.crossings)) {
        throw EstimationError("spanning curves of " + lattice_name(kind) + " lattices do not cross");
    }
    est.estimate = std::accumulate(est.crossings.begin(), est.crossings.end(), 0.0) /
                   static_cast<double>(est.crossings.size());

    std::vector<double> reps;
    std::uniform_int_distribution<std::size_t> pick(0, trials - 1);
    std::vector<std::vector<std::size_t>> resampled(counts.size());
    std::vector<double> cross;
    for (std::size_t b = 0; b < bootstrap; ++b) {
        for (std::size_t i = 0; i < counts.size(); ++i) {
            resampled[i].resize(trials);
            for (auto& c : resampled[i]) c = counts[i][pick(rng)];
        }
        if (mean_crossing(resampled, sites, cross)) {
            reps.push_back(std::accumulate(cross.begin(), cross.end(), 0.0) / static_cast<double>(cross.size()));
        }
    }
    if (reps.size() >= 2) {
        const double m = std::accumulate(reps.begin(), reps.end(), 0.0) / static_cast<double>(reps.size());
        double ss = 0.0;
        for (double r : reps) ss += (r - m) * (r - m);
        est.err = std::sqrt(ss / static_cast<double>(reps.size() - 1));
    }
    return est;
}

TailFit fit_cluster_tail(const SizeHistogram& hist, double n_sites, std::size_t min_count) {
    if (!(n_sites > 0.0)) throw ParameterError("site count must be positive");
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& [size, count] : hist) {
        if (count < min_count) continue;
        xs.push_back(static_cast<double>(size));
        ys.push_back(std::log(static_cast<double>(count) / n_sites));
    }
    if (xs.size() < 2) throw EstimationError("cluster-tail fit needs at least two populated bins");
    const auto n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    TailFit fit;
    fit.alpha = std::exp(intercept);
    fit.gamma = -slope;
    fit.bins = xs.size();
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        rss += r * r;
    }
    fit.rms_residual = std::sqrt(rss / n);
    return fit;
}

CostEstimate decoding_cost_estimate(std::size_t n_bar, double p_bq, int r_bar, const TailFit& fit) {
    if (!(p_bq > 0.0 && p_bq < 1.0)) throw ParameterError("p_bq must lie in (0, 1)");
    if (n_bar < 1 || r_bar < 1) throw ParameterError("N and r must be positive");
    CostEstimate c;
    c.n_bar = n_bar;
    c.p_bq = p_bq;
    c.r_bar = r_bar;
    c.fit = fit;
    c.above_threshold = fit.gamma <= 0.0;
    const double x = fit.alpha * std::exp(-fit.gamma * r_bar);
    c.p_r = x >= 1.0 ? 0.0 : std::exp(static_cast<double>(n_bar) * std::log1p(-x));
    const double domains = static_cast<double>(n_bar) / r_bar;
    c.t_ratio = c.p_r > 0.0 ? domains / c.p_r : std::numeric_limits<double>::infinity();
    return c;
}

void write_scan_csv(std::ostream& out, std::span<const DomainScan> scans) {
    out << "p,mean_size,stderr\n";
    for (const auto& s : scans) {
        out << format_double(s.p) << ',' << format_double(s.mean_size) << ',' << format_double(s.stderr_of_mean())
            << '\n';
    }
}

void write_histogram_csv(std::ostream& out, const SizeHistogram& hist) {
    out << "size,count\n";
    for (const auto& [size, count] : hist) out << size << ',' << count << '\n';
}

void write_threshold_csv(std::ostream& out, std::span<const ThresholdEstimate> estimates) {
    out << "lattice,estimate,err\n";
    for (const auto& e : estimates) {
        out << lattice_name(e.lattice) << ',' << format_double(e.estimate) << ',' << format_double(e.err) << '\n';
    }
}

}  // namespace qacme
