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

#include "qacme/ising.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

namespace qacme {

IsingProblem::IsingProblem(std::shared_ptr<const Graph> graph)
    : graph_(std::move(graph)), h_(graph_->vertex_count(), 0.0), j_(graph_->edge_count(), 0.0) {}

IsingProblem::IsingProblem(std::shared_ptr<const Graph> graph, std::vector<double> h, std::vector<double> j)
    : graph_(std::move(graph)), h_(std::move(h)), j_(std::move(j)) {
    if (h_.size() != graph_->vertex_count() || j_.size() != graph_->edge_count()) {
        throw ParameterError("field/coupling vectors do not match the graph");
    }
    for (NodeId v = 0; v < h_.size(); ++v)
        if (!graph_->active(v) && h_[v] != 0.0) throw ParameterError("field on inactive vertex");
}

void IsingProblem::set_h(NodeId v, double value) {
    if (!graph_->active(v) && value != 0.0) throw ParameterError("field on inactive vertex");
    h_[v] = value;
}

double IsingProblem::coupling(NodeId a, NodeId b) const {
    auto e = graph_->edge_index(a, b);
    if (!e) throw ParameterError("no edge (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    return j_[*e];
}

void IsingProblem::set_coupling(NodeId a, NodeId b, double value) {
    auto e = graph_->edge_index(a, b);
    if (!e) throw ParameterError("no edge (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    j_[*e] = value;
}

double IsingProblem::max_abs_coupling() const {
    double m = 0.0;
    for (double j : j_) m = std::max(m, std::abs(j));
    return m;
}

std::size_t IsingProblem::nonzero_coupling_count() const {
    return static_cast<std::size_t>(std::count_if(j_.begin(), j_.end(), [](double j) { return j != 0.0; }));
}

void IsingProblem::validate_device_range() const {
    for (double h : h_)
        if (std::abs(h) > 2.0) throw ParameterError("|h| exceeds device range 2");
    for (double j : j_)
        if (std::abs(j) > 1.0) throw ParameterError("|J| exceeds device range 1");
}

namespace {

double pairwise(std::span<const double> t) {
    if (t.size() <= 128) {
        double s = 0.0;
        for (double x : t) s += x;
        return s;
    }
    const std::size_t half = t.size() / 2;
    return pairwise(t.first(half)) + pairwise(t.subspan(half));
}

}  // namespace

double stable_sum(std::span<const double> terms) {
    if (terms.size() > 10000) return pairwise(terms);
    double s = 0.0;
    for (double x : terms) s += x;
    return s;
}

void check_config(const Graph& g, std::span<const Spin> s) {
    if (s.size() != g.vertex_count()) throw ContractViolation("spin configuration has the wrong length");
    for (NodeId v = 0; v < s.size(); ++v)
        if (g.active(v) && s[v] != 1 && s[v] != -1) throw ContractViolation("missing spin value");
}

double energy(const IsingProblem& p, std::span<const Spin> s) {
    const Graph& g = p.graph();
    check_config(g, s);
    std::vector<double> terms;
    terms.reserve(g.active_count() + g.edge_count());
    for (NodeId v = 0; v < s.size(); ++v)
        if (g.active(v) && p.h(v) != 0.0) terms.push_back(p.h(v) * s[v]);
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const double j = p.j(e);
        if (j != 0.0) terms.push_back(j * s[g.edge(e).u] * s[g.edge(e).v]);
    }
    return stable_sum(terms);
}

IsingProblem apply_gauge(const IsingProblem& p, std::span<const Spin> gauge) {
    const Graph& g = p.graph();
    check_config(g, gauge);
    std::vector<double> h(p.fields().begin(), p.fields().end());
    std::vector<double> j(p.couplings().begin(), p.couplings().end());
    for (NodeId v = 0; v < h.size(); ++v)
        if (g.active(v)) h[v] *= gauge[v];
    for (std::size_t e = 0; e < j.size(); ++e) j[e] *= gauge[g.edge(e).u] * gauge[g.edge(e).v];
    return IsingProblem(p.graph_ptr(), std::move(h), std::move(j));
}

SpinConfig ungauge(std::span<const Spin> s, std::span<const Spin> gauge) {
    if (s.size() != gauge.size()) throw ContractViolation("gauge and configuration differ in length");
    SpinConfig out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = static_cast<Spin>(s[i] * gauge[i]);
    return out;
}

GaugeVector random_gauge(const Graph& g, Rng& rng) {
    GaugeVector out(g.vertex_count(), 1);
    for (NodeId v = 0; v < out.size(); ++v)
        if (g.active(v)) out[v] = random_spin(rng);
    return out;
}

GaugeVector identity_gauge(const Graph& g) { return GaugeVector(g.vertex_count(), 1); }

SpinConfig all_up(const Graph& g) { return SpinConfig(g.vertex_count(), 1); }

double frustration_fraction(const IsingProblem& p, std::span<const Spin> planted) {
    const Graph& g = p.graph();
    check_config(g, planted);
    std::size_t nonzero = 0;
    std::size_t violated = 0;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const double j = p.j(e);
        if (j == 0.0) continue;
        ++nonzero;
        if (j * planted[g.edge(e).u] * planted[g.edge(e).v] > 0.0) ++violated;
    }
    if (nonzero == 0) throw MetricError("frustration undefined without nonzero couplings");
    return static_cast<double>(violated) / static_cast<double>(nonzero);
}

double inverse_range(const IsingProblem& p) {
    const double top = p.max_abs_coupling();
    if (top == 0.0) throw MetricError("range undefined for all-zero couplings");
    double low = top;
    for (double j : p.couplings())
        if (j != 0.0) low = std::min(low, std::abs(j));
    return low / top;
}

IsingProblem normalize_couplings(const IsingProblem& p) {
    const double top = p.max_abs_coupling();
    if (top == 0.0) throw MetricError("cannot normalize all-zero couplings");
    std::vector<double> h(p.fields().begin(), p.fields().end());
    std::vector<double> j(p.couplings().begin(), p.couplings().end());
    for (double& x : h) x /= top;
    for (double& x : j) x /= top;
    return IsingProblem(p.graph_ptr(), std::move(h), std::move(j));
}

void write_problem(std::ostream& out, const IsingProblem& p, const std::string& graph_kind) {
    const Graph& g = p.graph();
    write_graph(out, g, graph_kind);
    for (NodeId v = 0; v < g.vertex_count(); ++v)
        if (g.active(v)) out << "H " << v << ' ' << format_double(p.h(v)) << '\n';
    for (std::size_t e = 0; e < g.edge_count(); ++e)
        out << "J " << g.edge(e).u << ' ' << g.edge(e).v << ' ' << format_double(p.j(e)) << '\n';
}

IsingProblem parse_problem(std::span<const Record> records, GraphFile* graph_out) {
    GraphFile gf = parse_graph(records);
    IsingProblem p(gf.graph);
    for (const Record& r : records) {
        if (r.tag == "H") {
            if (r.fields.size() != 2) throw FormatError("H line needs vertex and value");
            const auto v = static_cast<NodeId>(parse_long(r.fields[0]));
            if (v >= p.size()) throw FormatError("H vertex out of range");
            p.set_h(v, parse_double(r.fields[1]));
        } else if (r.tag == "J") {
            if (r.fields.size() != 3) throw FormatError("J line needs two vertices and a value");
            p.set_coupling(static_cast<NodeId>(parse_long(r.fields[0])), static_cast<NodeId>(parse_long(r.fields[1])),
                           parse_double(r.fields[2]));
        }
    }
    if (graph_out) *graph_out = std::move(gf);
    return p;
}

IsingProblem read_problem(std::istream& in) {
    auto records = read_records(in);
    return parse_problem(records);
}

void write_config(std::ostream& out, std::span<const Spin> s, const Graph& g) {
    for (NodeId v = 0; v < s.size(); ++v)
        if (g.active(v)) out << "S " << v << ' ' << (s[v] > 0 ? "+1" : "-1") << '\n';
}

SpinConfig parse_config(std::span<const Record> records, std::size_t vertex_count) {
    SpinConfig s(vertex_count, 1);
    for (const Record& r : records) {
        if (r.tag != "S") continue;
        if (r.fields.size() != 2) throw FormatError("S line needs vertex and spin");
        const auto v = static_cast<std::size_t>(parse_long(r.fields[0]));
        if (v >= vertex_count) throw FormatError("S vertex out of range");
        const std::string& t = r.fields[1];
        if (t == "+1" || t == "1") s[v] = 1;
        else if (t == "-1") s[v] = -1;
        else throw FormatError("spin must be +1 or -1");
    }
    return s;
}

}  // namespace qacme
