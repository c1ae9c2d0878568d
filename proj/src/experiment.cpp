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

#include "qacme/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qacme {

using nlohmann::json;

std::string solver_name(SolverKind k) {
    switch (k) {
        case SolverKind::SQA: return "sqa";
        case SolverKind::SA: return "sa";
        case SolverKind::BruteForce: return "brute";
    }
    throw ContractViolation("unknown solver");
}

SolverKind parse_solver(const std::string& name) {
    for (SolverKind k : {SolverKind::SQA, SolverKind::SA, SolverKind::BruteForce}) {
        if (solver_name(k) == name) return k;
    }
    throw ParameterError("unknown solver '" + name + "'");
}

void ExperimentPlan::validate() const {
    if (instances.empty()) throw ParameterError("plan has no instances");
    if (cycles < 1 || runs_per_cycle < 1) throw ParameterError("cycles and runs_per_cycle must be >= 1");
    if (!(chi >= 0.0)) throw ParameterError("noise chi must be >= 0");
    if (!hw.graph) throw ParameterError("plan has no hardware graph");
    if (scheme != Scheme::Direct) {
        if (penalty_grid.empty()) throw ParameterError("penalty grid is empty");
        for (double g : penalty_grid) {
            if (!(g > 0.0)) throw ParameterError("penalty strengths must be positive");
        }
    }
}

std::vector<double> ExperimentPlan::gammas() const {
    if (scheme == Scheme::Direct) return {0.0};
    return penalty_grid;
}

std::vector<std::filesystem::path> instance_files(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw ParameterError("not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

PlantedInstance load_instance(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ParameterError("cannot open instance " + file.string());
    return read_instance(in);
}

std::vector<NodeId> read_dead_mask(std::istream& in, int rows, int cols, int half) {
    std::vector<NodeId> dead;
    for (const Record& r : read_records(in)) {
        if (r.tag != "DEAD" || r.fields.size() != 3) throw FormatError("expected 'DEAD row col k'");
        const long row = parse_long(r.fields[0]);
        const long col = parse_long(r.fields[1]);
        const long k = parse_long(r.fields[2]);
        if (row < 0 || row >= rows || col < 0 || col >= cols || k < 0 || k >= 2 * half) {
            throw FormatError("dead qubit outside the hardware graph");
        }
        dead.push_back(static_cast<NodeId>(((row * cols) + col) * 2 * half + k));
    }
    return dead;
}

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!obj.is_object()) throw ParameterError(where + " must be an object");
    for (const auto& [key, _] : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
            throw ParameterError("unknown key '" + key + "' in " + where);
        }
    }
}

template <typename T>
void read_opt(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

Readout parse_readout(const std::string& s) {
    if (s == "random") return Readout::RandomSlice;
    if (s == "majority") return Readout::MajoritySlice;
    throw ParameterError("unknown readout '" + s + "'");
}

std::string readout_name(Readout r) { return r == Readout::RandomSlice ? "random" : "majority"; }

PenaltyKind parse_penalty_kind(const std::string& s) {
    if (s == "uniform") return PenaltyKind::Uniform;
    if (s == "nonuniform") return PenaltyKind::Nonuniform;
    throw ParameterError("unknown penalty kind '" + s + "'");
}

std::string penalty_kind_name(PenaltyKind k) { return k == PenaltyKind::Uniform ? "uniform" : "nonuniform"; }

}  // namespace

ExperimentPlan parse_plan(const std::string& json_text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("plan is not valid JSON: ") + e.what());
    }
    ExperimentPlan plan;
    try {
        check_keys(j,
                   {"instances", "instances_dir", "hardware", "scheme", "penalty_grid", "penalty_kind", "cycles",
                    "runs_per_cycle", "chi", "solver", "decoder", "em_cutoff", "em_sa", "random_gauge", "seed",
                    "threads"},
                   "plan");
        std::vector<std::filesystem::path> files;
        if (j.contains("instances")) {
            for (const auto& p : j.at("instances")) files.push_back(resolve(base_dir, p.get<std::string>()));
        }
        if (j.contains("instances_dir")) {
            for (auto& f : instance_files(resolve(base_dir, j.at("instances_dir").get<std::string>())))
                files.push_back(f);
        }
        for (const auto& f : files) {
            plan.instances.push_back(load_instance(f));
            plan.instance_sources.push_back(f.string());
        }

        const json& hwj = j.at("hardware");
        check_keys(hwj, {"rows", "cols", "half", "dead", "dead_file"}, "hardware");
        const int rows = hwj.at("rows").get<int>();
        const int cols = hwj.at("cols").get<int>();
        const int half = hwj.value("half", 4);
        std::vector<NodeId> dead;
        if (hwj.contains("dead")) {
            for (const auto& q : hwj.at("dead")) {
                const auto rck = q.get<std::vector<int>>();
                if (rck.size() != 3) throw ParameterError("dead qubits are [row, col, k] triples");
                dead.push_back(static_cast<NodeId>(((rck[0] * cols) + rck[1]) * 2 * half + rck[2]));
            }
        }
        if (hwj.contains("dead_file")) {
            std::ifstream in(resolve(base_dir, hwj.at("dead_file").get<std::string>()));
            if (!in) throw ParameterError("cannot open dead-qubit file");
            for (NodeId q : read_dead_mask(in, rows, cols, half)) dead.push_back(q);
        }
        plan.hw = chimera(rows, cols, half, dead);

        if (j.contains("scheme")) plan.scheme = parse_scheme(j.at("scheme").get<std::string>());
        read_opt(j, "penalty_grid", plan.penalty_grid);
        if (j.contains("penalty_kind")) plan.penalty_kind = parse_penalty_kind(j.at("penalty_kind").get<std::string>());
        read_opt(j, "cycles", plan.cycles);
        read_opt(j, "runs_per_cycle", plan.runs_per_cycle);
        read_opt(j, "chi", plan.chi);
        if (j.contains("decoder")) plan.decoder = parse_decoder(j.at("decoder").get<std::string>());
        read_opt(j, "em_cutoff", plan.em.exhaustive_cutoff);
        if (j.contains("em_sa")) {
            const json& s = j.at("em_sa");
            check_keys(s, {"t_init", "t_final", "sweeps", "restarts"}, "em_sa");
            SaParams sa;
            read_opt(s, "t_init", sa.t_init);
            read_opt(s, "t_final", sa.t_final);
            read_opt(s, "sweeps", sa.sweeps);
            read_opt(s, "restarts", sa.restarts);
            plan.em.sa = sa;
        }
        read_opt(j, "random_gauge", plan.random_gauge);
        read_opt(j, "seed", plan.seed);
        read_opt(j, "threads", plan.threads);

        if (j.contains("solver")) {
            const json& s = j.at("solver");
            check_keys(s,
                       {"kind", "n_tau", "sweeps", "beta", "readout", "sweeps_per_step", "jperp_floor", "schedule",
                        "t_init", "t_final", "restarts"},
                       "solver");
            SolverSpec& spec = plan.solver;
            if (s.contains("kind")) spec.kind = parse_solver(s.at("kind").get<std::string>());
            read_opt(s, "n_tau", spec.sqa.n_tau);
            read_opt(s, "beta", spec.sqa.beta);
            read_opt(s, "sweeps_per_step", spec.sqa.sweeps_per_step);
            read_opt(s, "jperp_floor", spec.sqa.jperp_floor);
            if (s.contains("readout")) spec.sqa.readout = parse_readout(s.at("readout").get<std::string>());
            if (s.contains("sweeps")) {
                spec.sqa.sweeps = s.at("sweeps").get<int>();
                spec.sa.sweeps = spec.sqa.sweeps;
            }
            read_opt(s, "t_init", spec.sa.t_init);
            read_opt(s, "t_final", spec.sa.t_final);
            if (s.contains("schedule")) {
                const auto name = s.at("schedule").get<std::string>();
                if (name != "linear") {
                    std::ifstream in(resolve(base_dir, name));
                    if (!in) throw ParameterError("cannot open schedule " + name);
                    spec.schedule = read_schedule(in);
                }
            }
        }
    } catch (const json::exception& e) {
        throw ParameterError(std::string("bad plan field: ") + e.what());
    }
    plan.validate();
    return plan;
}

ExperimentPlan load_plan(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ParameterError("cannot open plan " + file.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_plan(buf.str(), file.parent_path());
}

std::string plan_summary_json(const ExperimentPlan& plan) {
    json j;
    j["instances"] = plan.instance_sources;
    j["instance_count"] = plan.instances.size();
    j["hardware"] = {{"rows", plan.hw.rows},
                     {"cols", plan.hw.cols},
                     {"half", plan.hw.half},
                     {"dead", plan.hw.graph ? plan.hw.graph->inactive_vertices() : std::vector<NodeId>{}}};
    j["scheme"] = scheme_name(plan.scheme);
    j["penalty_grid"] = plan.penalty_grid;
    j["penalty_kind"] = penalty_kind_name(plan.penalty_kind);
    j["cycles"] = plan.cycles;
    j["runs_per_cycle"] = plan.runs_per_cycle;
    j["chi"] = plan.chi;
    json s;
    s["kind"] = solver_name(plan.solver.kind);
    s["n_tau"] = plan.solver.sqa.n_tau;
    s["sweeps"] = plan.solver.sqa.sweeps;
    s["beta"] = plan.solver.sqa.beta;
    s["readout"] = readout_name(plan.solver.sqa.readout);
    s["sweeps_per_step"] = plan.solver.sqa.sweeps_per_step;
    s["jperp_floor"] = plan.solver.sqa.jperp_floor;
    s["t_init"] = plan.solver.sa.t_init;
    s["t_final"] = plan.solver.sa.t_final;
    json pts = json::array();
    for (const auto& p : plan.solver.schedule.points()) pts.push_back({p.s, p.a, p.b});
    s["schedule"] = pts;
    j["solver"] = s;
    j["decoder"] = decoder_name(plan.decoder);
    j["em_cutoff"] = plan.em.exhaustive_cutoff;
    if (plan.em.sa) {
        j["em_sa"] = {{"t_init", plan.em.sa->t_init},
                      {"t_final", plan.em.sa->t_final},
                      {"sweeps", plan.em.sa->sweeps},
                      {"restarts", plan.em.sa->restarts}};
    }
    j["random_gauge"] = plan.random_gauge;
    j["seed"] = plan.seed;
    j["threads"] = plan.threads;
    return j.dump(2);
}

PipelineResult run_pipeline(const ExperimentPlan& plan) {
    plan.validate();
    const std::vector<double> gammas = plan.gammas();
    const std::size_t n_inst = plan.instances.size();
    const auto n_gamma = gammas.size();
    const auto n_cycles = static_cast<std::size_t>(plan.cycles);

    PipelineResult result;
    std::vector<std::optional<EmbeddedProblem>> base(n_inst);
    std::vector<std::string> error(n_inst);
    for (std::size_t i = 0; i < n_inst; ++i) {
        const PlantedInstance& inst = plan.instances[i];
        try {
            base[i] = embed(plan.scheme, inst.problem, inst.host, plan.hw);
        } catch (const DomainError& e) {
            error[i] = e.what();
        }
    }

    const std::size_t tasks = n_inst * n_gamma * n_cycles;
    std::vector<std::vector<RunRecord>> out(tasks);
    std::vector<std::string> task_error(tasks);
    parallel_for(tasks, plan.threads, [&](std::size_t t) {
        const std::size_t i = t / (n_gamma * n_cycles);
        const std::size_t gi = (t / n_cycles) % n_gamma;
        const std::size_t c = t % n_cycles;
        if (!base[i]) return;
        const PlantedInstance& inst = plan.instances[i];
        try {
            const EmbeddedProblem e = plan.scheme == Scheme::Direct
                                          ? *base[i]
                                          : assign_penalties(*base[i], {plan.penalty_kind, gammas[gi]});
            Rng rng(stream_seed(plan.seed, i, gi, c));
            const GaugeVector gauge =
                plan.random_gauge ? random_gauge(e.physical.graph(), rng) : identity_gauge(e.physical.graph());
            const IsingProblem noisy = apply_noise(e.physical, plan.chi, rng);
            const IsingProblem gauged = apply_gauge(noisy, gauge);

            std::vector<SpinConfig> readouts;
            switch (plan.solver.kind) {
                case SolverKind::SQA:
                    for (int r = 0; r < plan.runs_per_cycle; ++r)
                        readouts.push_back(sqa_run(gauged, plan.solver.schedule, plan.solver.sqa, rng).configs.front());
                    break;
                case SolverKind::SA: {
                    SaParams sa = plan.solver.sa;
                    sa.restarts = plan.runs_per_cycle;
                    readouts = sa_run(gauged, sa, rng).configs;
                    break;
                }
                case SolverKind::BruteForce: {
                    const SolveResult bf = brute_force(gauged, 4096);
                    std::uniform_int_distribution<std::size_t> pick(0, bf.configs.size() - 1);
                    for (int r = 0; r < plan.runs_per_cycle; ++r) readouts.push_back(bf.configs[pick(rng)]);
                    break;
                }
            }
            auto& recs = out[t];
            for (std::size_t r = 0; r < readouts.size(); ++r) {
                const SpinConfig phys = ungauge(readouts[r], gauge);
                const DecodedConfig d = decode(e, phys, plan.decoder, rng, plan.em);
                RunRecord rec;
                rec.instance = i;
                rec.gamma_index = gi;
                rec.gamma = gammas[gi];
                rec.cycle = static_cast<int>(c);
                rec.run = static_cast<int>(r);
                rec.energy = energy(inst.problem, d.spins);
                rec.success = rec.energy <= inst.reference_energy + 1e-9;
                rec.broken = d.broken;
                rec.ties = d.ties;
                rec.p_dec = d.p_dec;
                recs.push_back(rec);
            }
        } catch (const DomainError& ex) {
            task_error[t] = ex.what();
        }
    });
    for (std::size_t t = 0; t < tasks; ++t) {
        const std::size_t i = t / (n_gamma * n_cycles);
        if (error[i].empty() && !task_error[t].empty()) error[i] = task_error[t];
    }
    for (std::size_t i = 0; i < n_inst; ++i) {
        if (!error[i].empty()) result.failures.push_back({i, error[i]});
    }
    for (std::size_t t = 0; t < tasks; ++t) {
        const std::size_t i = t / (n_gamma * n_cycles);
        if (!error[i].empty()) continue;
        result.records.insert(result.records.end(), out[t].begin(), out[t].end());
    }
    return result;
}

double success_probability(std::span<const RunRecord> records, std::size_t instance, std::size_t gamma_index) {
    std::map<int, std::pair<std::size_t, std::size_t>> per_cycle;
    for (const auto& r : records) {
        if (r.instance != instance || r.gamma_index != gamma_index) continue;
        auto& [hits, total] = per_cycle[r.cycle];
        hits += r.success ? 1 : 0;
        ++total;
    }
    if (per_cycle.empty()) throw ParameterError("no records for instance " + std::to_string(instance));
    double sum = 0.0;
    for (const auto& [_, ht] : per_cycle) sum += static_cast<double>(ht.first) / static_cast<double>(ht.second);
    return sum / static_cast<double>(per_cycle.size());
}

double renormalize(double p, Scheme scheme) {
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("probability outside [0, 1]");
    switch (scheme) {
        case Scheme::Direct: return 1.0 - std::pow(1.0 - p, 4);
        case Scheme::ME: return 1.0 - std::pow(1.0 - p, 2);
        case Scheme::QACME: return p;
    }
    throw ContractViolation("unknown scheme");
}

PenaltyChoice optimize_penalty(const std::map<double, std::vector<double>>& per_gamma) {
    if (per_gamma.empty()) throw ParameterError("no penalty values to optimize over");
    PenaltyChoice best;
    bool first = true;
    for (const auto& [gamma, values] : per_gamma) {
        if (values.empty()) continue;
        const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
        if (first || mean > best.mean) {
            best = {gamma, mean, values};
            first = false;
        }
    }
    if (first) throw ParameterError("no penalty values to optimize over");
    return best;
}

BootstrapResult bootstrap_mean(std::span<const double> values, std::size_t resamples, Rng& rng) {
    if (values.empty()) throw ParameterError("bootstrap needs values");
    if (resamples < 1) throw ParameterError("bootstrap needs at least one resample");
    std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
    std::vector<double> means(resamples);
    for (auto& m : means) {
        double s = 0.0;
        for (std::size_t k = 0; k < values.size(); ++k) s += values[pick(rng)];
        m = s / static_cast<double>(values.size());
    }
    BootstrapResult r;
    r.mean = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(resamples);
    double ss = 0.0;
    for (double m : means) ss += (m - r.mean) * (m - r.mean);
    r.stderr_ = resamples > 1 ? std::sqrt(ss / static_cast<double>(resamples - 1)) : 0.0;
    if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; })) {
        r.mean = values[0];
        r.stderr_ = 0.0;
    }
    return r;
}

SuccessStats summarize(const ExperimentPlan& plan, const PipelineResult& result, std::size_t resamples) {
    const std::vector<double> gammas = plan.gammas();
    std::set<std::size_t> failed;
    for (const auto& f : result.failures) failed.insert(f.instance);
    std::map<double, std::vector<std::size_t>> by_alpha;
    for (std::size_t i = 0; i < plan.instances.size(); ++i) {
        if (!failed.count(i)) by_alpha[plan.instances[i].alpha].push_back(i);
    }
    SuccessStats stats;
    std::size_t alpha_index = 0;
    for (const auto& [alpha, members] : by_alpha) {
        std::map<double, std::vector<double>> per_gamma;
        for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
            auto& vals = per_gamma[gammas[gi]];
            for (std::size_t i : members) {
                const double p = renormalize(success_probability(result.records, i, gi), plan.scheme);
                stats.per_instance_p[{i, gi}] = p;
                vals.push_back(p);
            }
        }
        const PenaltyChoice choice = optimize_penalty(per_gamma);
        Rng rng(stream_seed(plan.seed, 0xB0075742ULL, alpha_index++));
        const BootstrapResult b = bootstrap_mean(choice.values, resamples, rng);
        stats.rows.push_back({alpha, plan.scheme, choice.gamma, b.mean, b.stderr_});
    }
    return stats;
}

void write_runs_csv(std::ostream& out, std::span<const RunRecord> records) {
    out << "instance,gamma,cycle,run,success,energy,broken,ties,p_dec\n";
    for (const auto& r : records) {
        out << r.instance << ',' << format_double(r.gamma) << ',' << r.cycle << ',' << r.run << ','
            << (r.success ? 1 : 0) << ',' << format_double(r.energy) << ',' << r.broken << ',' << r.ties << ','
            << format_double(r.p_dec) << '\n';
    }
}

void write_cycles_csv(std::ostream& out, std::span<const RunRecord> records) {
    out << "instance,gamma,cycle,runs,successes,P,mean_broken,mean_p_dec\n";
    std::size_t k = 0;
    while (k < records.size()) {
        const RunRecord& head = records[k];
        std::size_t runs = 0;
        std::size_t hits = 0;
        double broken = 0.0;
        double p_dec = 0.0;
        for (; k < records.size() && records[k].instance == head.instance &&
               records[k].gamma_index == head.gamma_index && records[k].cycle == head.cycle;
             ++k) {
            ++runs;
            hits += records[k].success ? 1 : 0;
            broken += static_cast<double>(records[k].broken);
            p_dec += records[k].p_dec;
        }
        const auto n = static_cast<double>(runs);
        out << head.instance << ',' << format_double(head.gamma) << ',' << head.cycle << ',' << runs << ',' << hits
            << ',' << format_double(static_cast<double>(hits) / n) << ',' << format_double(broken / n) << ','
            << format_double(p_dec / n) << '\n';
    }
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
    out << "alpha,scheme,gamma_opt,P_mean,P_stderr\n";
    for (const auto& r : rows) {
        out << format_double(r.alpha) << ',' << scheme_name(r.scheme) << ',' << format_double(r.gamma_opt) << ','
            << format_double(r.p_mean) << ',' << format_double(r.p_stderr) << '\n';
    }
}

}  // namespace qacme
