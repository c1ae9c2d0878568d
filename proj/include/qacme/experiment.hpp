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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qacme/decoding.hpp"
#include "qacme/instances.hpp"

namespace qacme {

enum class SolverKind { SQA, SA, BruteForce };

std::string solver_name(SolverKind k);
SolverKind parse_solver(const std::string& name);

struct SolverSpec {
    SolverKind kind = SolverKind::SQA;
    SqaParams sqa;
    AnnealSchedule schedule = AnnealSchedule::linear();
    SaParams sa;
};

struct ExperimentPlan {
    std::vector<PlantedInstance> instances;
    /// Where each instance was read from, echoed in manifests.
    std::vector<std::string> instance_sources;
    HardwareGraph hw;
    Scheme scheme = Scheme::QACME;
    /// Ignored for Direct, which runs once with gamma = 0.
    std::vector<double> penalty_grid{0.2};
    PenaltyKind penalty_kind = PenaltyKind::Uniform;
    int cycles = 10;
    int runs_per_cycle = 1000;
    double chi = 0.0;
    SolverSpec solver;
    Decoder decoder = Decoder::MV_EM;
    EmOptions em;
    bool random_gauge = true;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    /// Throws ParameterError on an invalid combination.
    void validate() const;
    /// Effective gamma list (a single 0 for Direct).
    std::vector<double> gammas() const;
};

/// Reads a JSON plan. Relative paths resolve against the plan's directory.
ExperimentPlan load_plan(const std::filesystem::path& file);
ExperimentPlan parse_plan(const std::string& json_text, const std::filesystem::path& base_dir);
/// JSON echo of every effective plan parameter except the instances.
std::string plan_summary_json(const ExperimentPlan& plan);

/// Instance files (`*.txt`) of a directory in lexicographic order.
std::vector<std::filesystem::path> instance_files(const std::filesystem::path& dir);
PlantedInstance load_instance(const std::filesystem::path& file);

/// Dead-qubit mask: one `DEAD row col k` line per inactive qubit.
std::vector<NodeId> read_dead_mask(std::istream& in, int rows, int cols, int half);

struct RunRecord {
    std::size_t instance = 0;
    std::size_t gamma_index = 0;
    double gamma = 0.0;
    int cycle = 0;
    int run = 0;
    bool success = false;
    double energy = 0.0;
    std::size_t broken = 0;
    std::size_t ties = 0;
    double p_dec = 1.0;
};

struct PipelineFailure {
    std::size_t instance = 0;
    std::string message;
};

struct PipelineResult {
    std::vector<RunRecord> records;
    std::vector<PipelineFailure> failures;
};

/// One unit of the protocol: embed, penalize, then G cycles of gauge, noise
/// and R solves with decoding. Records come out in (instance, gamma, cycle,
/// run) order regardless of the thread count.
PipelineResult run_pipeline(const ExperimentPlan& plan);

/// Mean over cycles of the per-cycle success fraction.
double success_probability(std::span<const RunRecord> records, std::size_t instance, std::size_t gamma_index = 0);

/// Probability of at least one success when the qubits of one encoded
/// vertex are spent on independent copies: Direct 4, ME 2, QAC-ME 1.
double renormalize(double p, Scheme scheme);

struct PenaltyChoice {
    double gamma = 0.0;
    double mean = 0.0;
    std::vector<double> values;
};

/// Argmax over gamma of the mean of the given values; ties go to smaller gamma.
PenaltyChoice optimize_penalty(const std::map<double, std::vector<double>>& per_gamma);

struct BootstrapResult {
    double mean = 0.0;
    double stderr_ = 0.0;
};

BootstrapResult bootstrap_mean(std::span<const double> values, std::size_t resamples, Rng& rng);

struct SummaryRow {
    double alpha = 0.0;
    Scheme scheme = Scheme::QACME;
    double gamma_opt = 0.0;
    double p_mean = 0.0;
    double p_stderr = 0.0;
};

struct SuccessStats {
    /// Renormalized P per (instance, gamma index).
    std::map<std::pair<std::size_t, std::size_t>, double> per_instance_p;
    std::vector<SummaryRow> rows;
};

/// Per-alpha penalty optimization and bootstrap error bars.
SuccessStats summarize(const ExperimentPlan& plan, const PipelineResult& result, std::size_t resamples = 5000);

void write_runs_csv(std::ostream& out, std::span<const RunRecord> records);
/// One row per (instance, gamma, cycle).
void write_cycles_csv(std::ostream& out, std::span<const RunRecord> records);
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);

}  // namespace qacme
