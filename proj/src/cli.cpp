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

#include "qacme/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qacme/percolation.hpp"

#ifndef QACME_VERSION
#define QACME_VERSION "0.0.0"
#endif

namespace qacme {

using nlohmann::json;
namespace fs = std::filesystem;

std::string version_string() { return QACME_VERSION; }

std::vector<PlotPoint> plot_points(const SuccessStats& stats) {
    std::vector<PlotPoint> pts;
    for (const auto& r : stats.rows) pts.push_back({r.alpha, r.scheme, r.p_mean, r.p_stderr});
    return pts;
}

void emit_plot_data(std::span<const PlotPoint> points, const fs::path& path) {
    if (points.empty()) throw ParameterError("no plot data to write");
    std::vector<PlotPoint> sorted(points.begin(), points.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const PlotPoint& a, const PlotPoint& b) {
        const auto sa = scheme_name(a.scheme);
        const auto sb = scheme_name(b.scheme);
        return sa != sb ? sa < sb : a.alpha < b.alpha;
    });
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "alpha,scheme,P_mean,P_stderr\n";
    for (const auto& p : sorted) {
        out << format_double(p.alpha) << ',' << scheme_name(p.scheme) << ',' << format_double(p.p_mean) << ','
            << format_double(p.p_stderr) << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

std::vector<PlotPoint> read_plot_data(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "alpha,scheme,P_mean,P_stderr") throw FormatError("bad plot data header");
    std::vector<PlotPoint> pts;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(c);
        if (cols.size() != 4) throw FormatError("plot data rows have four columns");
        pts.push_back({parse_double(cols[0]), parse_scheme(cols[1]), parse_double(cols[2]), parse_double(cols[3])});
    }
    return pts;
}

void write_readouts(std::ostream& out, std::span<const SpinConfig> readouts) {
    for (const auto& r : readouts) {
        out << "R ";
        for (Spin s : r) out << (s > 0 ? '+' : '-');
        out << '\n';
    }
}

std::vector<SpinConfig> read_readouts(std::istream& in, std::size_t vertex_count) {
    std::vector<SpinConfig> out;
    for (const Record& r : read_records(in)) {
        if (r.tag != "R" || r.fields.size() != 1) throw FormatError("expected 'R <spins>'");
        const std::string& s = r.fields[0];
        if (s.size() != vertex_count) throw FormatError("readout length does not match the problem");
        SpinConfig c(vertex_count);
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] != '+' && s[i] != '-') throw FormatError("readout spins are '+' or '-'");
            c[i] = s[i] == '+' ? 1 : -1;
        }
        out.push_back(std::move(c));
    }
    return out;
}

namespace {

struct Globals {
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string out = ".";
};

HardwareGraph parse_hardware(const std::string& spec, const std::string& dead_file) {
    int dims[3] = {0, 0, 4};
    int n = 0;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, 'x')) {
        if (n == 3) throw ParameterError("hardware is ROWSxCOLS or ROWSxCOLSxHALF");
        dims[n++] = static_cast<int>(parse_long(part));
    }
    if (n < 2) throw ParameterError("hardware is ROWSxCOLS or ROWSxCOLSxHALF");
    std::vector<NodeId> dead;
    if (!dead_file.empty()) {
        std::ifstream in(dead_file);
        if (!in) throw IoError("cannot read " + dead_file);
        dead = read_dead_mask(in, dims[0], dims[1], dims[2]);
    }
    return chimera(dims[0], dims[1], dims[2], dead);
}

template <typename T>
T read_file(const std::string& path, T (*reader)(std::istream&)) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    return reader(in);
}

std::vector<Record> file_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    return read_records(in);
}

class Output {
  public:
    Output(const std::string& dir, std::string command, int argc, const char* const* argv)
        : dir_(dir), command_(std::move(command)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_)) throw IoError("cannot create output directory " + dir);
        for (int i = 0; i < argc; ++i) argv_.emplace_back(argv[i]);
    }

    std::ofstream open(const std::string& name) {
        std::ofstream f(dir_ / name);
        if (!f) throw IoError("cannot write " + (dir_ / name).string());
        files_.push_back(name);
        return f;
    }
    fs::path path(const std::string& name) {
        files_.push_back(name);
        return dir_ / name;
    }

    void manifest(const std::string& effective, json extra = json::object()) {
        json m;
        m["command"] = command_;
        m["argv"] = argv_;
        m["version"] = version_string();
        m["effective_config"] = effective;
        m["outputs"] = files_;
        for (auto& [k, v] : extra.items()) m[k] = v;
        std::ofstream f(dir_ / "manifest.json");
        if (!f) throw IoError("cannot write manifest");
        f << m.dump(2) << '\n';
    }

  private:
    fs::path dir_;
    std::string command_;
    std::vector<std::string> argv_;
    std::vector<std::string> files_;
};

std::vector<RunRecord> read_runs_csv(const std::string& path, const std::vector<double>& gammas) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    std::string line;
    if (!std::getline(in, line) || line != "instance,gamma,cycle,run,success,energy,broken,ties,p_dec") {
        throw FormatError("bad runs header in " + path);
    }
    std::vector<RunRecord> recs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> c;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) c.push_back(f);
        if (c.size() != 9) throw FormatError("runs rows have nine columns");
        RunRecord r;
        r.instance = static_cast<std::size_t>(parse_long(c[0]));
        r.gamma = parse_double(c[1]);
        const auto it = std::find(gammas.begin(), gammas.end(), r.gamma);
        if (it == gammas.end()) throw FormatError("gamma not in the plan's grid");
        r.gamma_index = static_cast<std::size_t>(it - gammas.begin());
        r.cycle = static_cast<int>(parse_long(c[2]));
        r.run = static_cast<int>(parse_long(c[3]));
        r.success = parse_long(c[4]) != 0;
        r.energy = parse_double(c[5]);
        r.broken = static_cast<std::size_t>(parse_long(c[6]));
        r.ties = static_cast<std::size_t>(parse_long(c[7]));
        r.p_dec = parse_double(c[8]);
        recs.push_back(r);
    }
    return recs;
}

void write_experiment_outputs(Output& o, const ExperimentPlan& plan, const PipelineResult& result,
                              std::size_t resamples) {
    {
        auto f = o.open("runs.csv");
        write_runs_csv(f, result.records);
    }
    {
        auto f = o.open("cycles.csv");
        write_cycles_csv(f, result.records);
    }
    {
        auto f = o.open("failures.csv");
        f << "instance,message\n";
        for (const auto& fl : result.failures) f << fl.instance << ",\"" << fl.message << "\"\n";
    }
    const SuccessStats stats = summarize(plan, result, resamples);
    {
        auto f = o.open("summary.csv");
        write_summary_csv(f, stats.rows);
    }
    if (!stats.rows.empty()) emit_plot_data(plot_points(stats), o.path("plot.csv"));
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum annealing correction with minor embedding: simulation toolkit", "qacme"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "INI/TOML file with option values");
    Globals g;
    app.add_option("--seed", g.seed, "Master seed; all randomness derives from it")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")->capture_default_str();
    app.add_option("--out", g.out, "Output directory")->capture_default_str();

    // generate
    auto* gen = app.add_subcommand("generate", "Planted frustrated-loop instances");
    std::string gen_graph;
    std::string hw_spec = "8x8x4";
    std::string dead_file;
    double alpha = 0.0;
    std::size_t count = 1;
    std::vector<int> lengths;
    std::vector<double> length_weights;
    bool weighted = false;
    std::size_t deform = 0;
    gen->add_option("--graph", gen_graph, "2lg<N>, usable or embeddable")->required();
    gen->add_option("--hardware", hw_spec, "Chimera ROWSxCOLS[xHALF]")->capture_default_str();
    gen->add_option("--dead-file", dead_file, "Dead-qubit mask file");
    gen->add_option("--alpha", alpha, "Clause density")->required();
    gen->add_option("--count", count, "Number of instances")->capture_default_str();
    gen->add_option("--lengths", lengths, "Loop lengths (default 4 6; 8 for embeddable)");
    gen->add_option("--length-weights", length_weights, "Probabilities of the loop lengths");
    gen->add_flag("--weighted", weighted, "Weight loops by their mean x coordinate");
    gen->add_option("--deform", deform, "Deform couplings around this many random vertices");

    // embed
    auto* emb = app.add_subcommand("embed", "Embed an instance on Chimera");
    std::string instance_file;
    std::string scheme_str = "qacme";
    double gamma = 0.2;
    std::string penalty_kind = "uniform";
    std::string blue = "pair";
    emb->add_option("--instance", instance_file, "Instance file")->required();
    emb->add_option("--scheme", scheme_str, "direct, me or qacme")->capture_default_str();
    emb->add_option("--hardware", hw_spec, "Chimera ROWSxCOLS[xHALF]")->capture_default_str();
    emb->add_option("--dead-file", dead_file, "Dead-qubit mask file");
    emb->add_option("--gamma", gamma, "Penalty strength")->capture_default_str();
    emb->add_option("--penalty-kind", penalty_kind, "uniform or nonuniform")->capture_default_str();
    emb->add_option("--blue", blue, "Interlayer couplers for qacme: pair or all")->capture_default_str();

    // solve
    auto* sol = app.add_subcommand("solve", "Anneal or enumerate a problem file");
    std::string problem_file;
    std::string solver = "sqa";
    int runs = 1;
    SqaParams sqa;
    SaParams sa;
    std::string readout = "random";
    std::string schedule_file;
    sol->add_option("--problem", problem_file, "Problem, instance or embedded file")->required();
    sol->add_option("--solver", solver, "sqa, sa or brute")->capture_default_str();
    sol->add_option("--runs", runs, "Independent anneals")->capture_default_str();
    sol->add_option("--n-tau", sqa.n_tau, "Trotter slices")->capture_default_str();
    sol->add_option("--sweeps", sqa.sweeps, "Sweeps per anneal")->capture_default_str();
    sol->add_option("--beta", sqa.beta, "Inverse temperature in units of 1/B(1)")->capture_default_str();
    sol->add_option("--readout", readout, "random or majority slice")->capture_default_str();
    sol->add_option("--schedule", schedule_file, "Schedule file (default linear)");
    sol->add_option("--t-init", sa.t_init, "SA initial temperature")->capture_default_str();
    sol->add_option("--t-final", sa.t_final, "SA final temperature")->capture_default_str();

    // decode
    auto* dec = app.add_subcommand("decode", "Decode physical readouts");
    std::string embedded_file;
    std::string readouts_file;
    std::string decoder = "mv-em";
    std::size_t em_cutoff = 20;
    dec->add_option("--embedded", embedded_file, "Embedded problem file")->required();
    dec->add_option("--instance", instance_file, "Logical instance file")->required();
    dec->add_option("--readouts", readouts_file, "Readout file from solve")->required();
    dec->add_option("--decoder", decoder, "ct, mv-ct, em, mv-em, mv-em-r or recursive")->capture_default_str();
    dec->add_option("--em-cutoff", em_cutoff, "Largest component solved exhaustively")->capture_default_str();

    // percolate
    auto* perc = app.add_subcommand("percolate", "Percolation analyses");
    std::string mode;
    std::vector<int> sides{16, 32, 48};
    std::vector<double> ps{0.375};
    std::size_t trials = 10000;
    std::vector<std::string> lattices{"square", "cubic", "2lg"};
    std::vector<int> sizes;
    std::size_t bootstrap = 100;
    int r_bar = 0;
    perc->add_option("--mode", mode, "scan, threshold or clusters")->required();
    perc->add_option("--sides", sides, "2LG sides for scan and clusters")->capture_default_str();
    perc->add_option("--p", ps, "Occupation probabilities")->capture_default_str();
    perc->add_option("--trials", trials, "Monte Carlo trials")->capture_default_str();
    perc->add_option("--lattices", lattices, "square, cubic, 2lg")->capture_default_str();
    perc->add_option("--sizes", sizes, "Lattice sizes for threshold crossings");
    perc->add_option("--bootstrap", bootstrap, "Bootstrap resamples for error bars")->capture_default_str();
    perc->add_option("--r-bar", r_bar, "Domain cap for the decoding-cost estimate");

    // experiment
    auto* exp = app.add_subcommand("experiment", "Run an experiment plan");
    std::string plan_file;
    std::size_t resamples = 5000;
    exp->add_option("--plan", plan_file, "JSON plan file")->required();
    exp->add_option("--resamples", resamples, "Bootstrap resamples")->capture_default_str();

    // stats
    auto* st = app.add_subcommand("stats", "Aggregate a runs.csv produced by experiment");
    std::string runs_file;
    st->add_option("--plan", plan_file, "JSON plan file")->required();
    st->add_option("--runs", runs_file, "runs.csv")->required();
    st->add_option("--resamples", resamples, "Bootstrap resamples")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        const std::string effective = app.config_to_str(true, false);
        const unsigned threads = g.threads;
        if (gen->parsed()) {
            Output o(g.out, "generate", argc, argv);
            const HardwareGraph hw = parse_hardware(hw_spec, dead_file);
            LogicalGraph host;
            const bool embeddable = gen_graph == "embeddable";
            if (gen_graph.rfind("2lg", 0) == 0) {
                host = two_level_grid(static_cast<int>(parse_long(gen_graph.substr(3))));
            } else if (gen_graph == "usable") {
                host = usable_two_level_grid(hw);
            } else if (embeddable) {
                host = embeddable_subgraph(hw);
            } else {
                throw ParameterError("unknown graph '" + gen_graph + "'");
            }
            LengthMix mix = embeddable ? LengthMix::only(8) : LengthMix{};
            if (!lengths.empty()) {
                mix.lengths = lengths;
                mix.weights = length_weights.empty()
                                  ? std::vector<double>(lengths.size(), 1.0 / static_cast<double>(lengths.size()))
                                  : length_weights;
                if (mix.weights.size() != mix.lengths.size()) throw ParameterError("one weight per loop length");
            }
            auto batch = generate_batch(host, alpha, mix, count, g.seed);
            for (std::size_t i = 0; i < batch.size(); ++i) {
                PlantedInstance inst = weighted ? generate_weighted(batch[i]) : batch[i];
                if (deform > 0) {
                    Rng rng(stream_seed(g.seed, i, 0xDEF0));
                    inst = deform_embeddable(inst, deform, rng);
                }
                std::ostringstream name;
                name << "instance_" << std::setw(4) << std::setfill('0') << i << ".txt";
                auto f = o.open(name.str());
                write_instance(f, inst);
            }
            o.manifest(effective);
            out << "wrote " << batch.size() << " instances to " << g.out << '\n';
        } else if (emb->parsed()) {
            Output o(g.out, "embed", argc, argv);
            const HardwareGraph hw = parse_hardware(hw_spec, dead_file);
            const PlantedInstance inst = read_file(instance_file, &read_instance);
            const Scheme scheme = parse_scheme(scheme_str);
            if (blue != "pair" && blue != "all") throw ParameterError("--blue is pair or all");
            EmbeddedProblem e = scheme == Scheme::QACME
                                    ? embed_qacme(inst.problem, inst.host, hw,
                                                  blue == "all" ? BlueCouplers::AllEight : BlueCouplers::Pair)
                                    : embed(scheme, inst.problem, inst.host, hw);
            if (scheme != Scheme::Direct) {
                const PenaltyKind kind = penalty_kind == "uniform"      ? PenaltyKind::Uniform
                                         : penalty_kind == "nonuniform" ? PenaltyKind::Nonuniform
                                                                        : throw ParameterError("bad --penalty-kind");
                e = assign_penalties(e, {kind, gamma});
                for (NodeId v : e.penalty_warnings) err << "warning: zero penalty for logical vertex " << v << '\n';
            }
            auto f = o.open("embedded.txt");
            write_embedded(f, e);
            o.manifest(effective);
        } else if (sol->parsed()) {
            Output o(g.out, "solve", argc, argv);
            GraphFile gf;
            const auto records = file_records(problem_file);
            const IsingProblem p = parse_problem(records, &gf);
            if (runs < 1) throw ParameterError("--runs must be >= 1");
            sqa.readout = readout == "random"     ? Readout::RandomSlice
                          : readout == "majority" ? Readout::MajoritySlice
                                                  : throw ParameterError("bad --readout");
            sa.sweeps = sqa.sweeps;
            AnnealSchedule schedule = AnnealSchedule::linear();
            if (!schedule_file.empty()) {
                std::ifstream in(schedule_file);
                if (!in) throw IoError("cannot read " + schedule_file);
                schedule = read_schedule(in);
            }
            const SolverKind kind = parse_solver(solver);
            std::vector<SpinConfig> configs(static_cast<std::size_t>(runs));
            if (kind == SolverKind::SA) {
                Rng rng(stream_seed(g.seed, 0));
                sa.restarts = runs;
                configs = sa_run(p, sa, rng).configs;
            } else if (kind == SolverKind::BruteForce) {
                Rng rng(stream_seed(g.seed, 0));
                const SolveResult bf = brute_force(p, 4096);
                std::uniform_int_distribution<std::size_t> pick(0, bf.configs.size() - 1);
                for (auto& c : configs) c = bf.configs[pick(rng)];
            } else {
                parallel_for(configs.size(), threads, [&](std::size_t r) {
                    Rng rng(stream_seed(g.seed, r));
                    configs[r] = sqa_run(p, schedule, sqa, rng).configs.front();
                });
            }
            {
                auto f = o.open("readouts.txt");
                write_readouts(f, configs);
            }
            auto f = o.open("energies.csv");
            f << "run,energy\n";
            for (std::size_t r = 0; r < configs.size(); ++r) f << r << ',' << format_double(energy(p, configs[r])) << '\n';
            o.manifest(effective);
        } else if (dec->parsed()) {
            Output o(g.out, "decode", argc, argv);
            const PlantedInstance inst = read_file(instance_file, &read_instance);
            const EmbeddedProblem e = parse_embedded(file_records(embedded_file), inst.problem, inst.host);
            std::ifstream in(readouts_file);
            if (!in) throw IoError("cannot read " + readouts_file);
            const auto readouts = read_readouts(in, e.physical.size());
            const Decoder d = parse_decoder(decoder);
            EmOptions em;
            em.exhaustive_cutoff = em_cutoff;
            std::vector<SpinConfig> decoded;
            auto f = o.open("decoded.csv");
            f << "run,strategy,broken,ties,p_dec,success\n";
            for (std::size_t r = 0; r < readouts.size(); ++r) {
                Rng rng(stream_seed(g.seed, r));
                const DecodedConfig dc = decode(e, readouts[r], d, rng, em);
                f << r << ',';
                write_decode_record(f, dc, is_success(inst.problem, dc.spins, inst.reference_energy));
                decoded.push_back(dc.spins);
            }
            auto df = o.open("decoded.txt");
            write_readouts(df, decoded);
            o.manifest(effective);
        } else if (perc->parsed()) {
            Output o(g.out, "percolate", argc, argv);
            Rng rng(g.seed);
            if (mode == "scan") {
                for (int side : sides) {
                    std::vector<DomainScan> scans;
                    for (double p : ps) {
                        Rng r(stream_seed(g.seed, static_cast<std::uint64_t>(side)));
                        scans.push_back(domain_size_scan(side, p, trials, r, threads));
                    }
                    auto f = o.open("scan_N" + std::to_string(side) + ".csv");
                    write_scan_csv(f, scans);
                }
            } else if (mode == "threshold") {
                std::vector<ThresholdEstimate> est;
                for (const auto& name : lattices) {
                    const Lattice l = parse_lattice(name);
                    std::vector<int> sz = sizes;
                    if (sz.empty()) {
                        sz = l == Lattice::Square ? std::vector<int>{32, 64, 128}
                             : l == Lattice::Cubic ? std::vector<int>{8, 16, 24}
                                                   : std::vector<int>{16, 32, 64};
                    }
                    est.push_back(estimate_site_threshold(l, sz, trials, rng, threads, bootstrap));
                }
                auto f = o.open("thresholds.csv");
                write_threshold_csv(f, est);
            } else if (mode == "clusters") {
                if (sides.empty() || ps.empty()) throw ParameterError("clusters needs --sides and --p");
                const int side = sides.front();
                const double p = ps.front();
                const LogicalGraph lg = two_level_grid(side);
                SizeHistogram hist;
                for (std::size_t t = 0; t < trials; ++t) {
                    std::vector<NodeId> bq;
                    for (NodeId v = 0; v < lg.graph->vertex_count(); ++v)
                        if (uniform01(rng) < p) bq.push_back(v);
                    for (auto [s, c] : bq_clusters(*lg.graph, bq)) hist[s] += c;
                }
                {
                    auto f = o.open("histogram.csv");
                    write_histogram_csv(f, hist);
                }
                const double sites = static_cast<double>(lg.graph->vertex_count() * trials);
                const TailFit fit = fit_cluster_tail(hist, sites);
                auto f = o.open("tailfit.csv");
                f << "alpha,gamma,rms_residual,bins\n"
                  << format_double(fit.alpha) << ',' << format_double(fit.gamma) << ','
                  << format_double(fit.rms_residual) << ',' << fit.bins << '\n';
                if (r_bar > 0 && p > 0.0 && p < 1.0) {
                    const CostEstimate c = decoding_cost_estimate(lg.graph->vertex_count(), p, r_bar, fit);
                    auto cf = o.open("cost.csv");
                    cf << "N,p_bq,r,P_r,T_ratio,above_threshold\n"
                       << c.n_bar << ',' << format_double(c.p_bq) << ',' << c.r_bar << ',' << format_double(c.p_r)
                       << ',' << format_double(c.t_ratio) << ',' << (c.above_threshold ? 1 : 0) << '\n';
                    if (c.above_threshold) err << "warning: no exponential decay; above threshold\n";
                }
            } else {
                throw ParameterError("--mode is scan, threshold or clusters");
            }
            o.manifest(effective);
        } else if (exp->parsed() || st->parsed()) {
            const bool is_exp = exp->parsed();
            Output o(g.out, is_exp ? "experiment" : "stats", argc, argv);
            ExperimentPlan plan = load_plan(plan_file);
            if (app.get_option("--seed")->count() > 0) plan.seed = g.seed;
            plan.threads = threads;
            PipelineResult result;
            if (is_exp) {
                result = run_pipeline(plan);
            } else {
                result.records = read_runs_csv(runs_file, plan.gammas());
            }
            write_experiment_outputs(o, plan, result, resamples);
            o.manifest(effective, {{"plan", json::parse(plan_summary_json(plan))}});
            for (const auto& f : result.failures)
                err << "warning: instance " << f.instance << " skipped: " << f.message << '\n';
        }
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace qacme
