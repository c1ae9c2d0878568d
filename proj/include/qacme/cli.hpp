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
#include <span>
#include <string>
#include <vector>

#include "qacme/experiment.hpp"

namespace qacme {

/// Runs one subcommand. Returns 0 on success, 1 on domain errors and 2 on
/// usage errors; help output returns 0.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct PlotPoint {
    double alpha = 0.0;
    Scheme scheme = Scheme::QACME;
    double p_mean = 0.0;
    double p_stderr = 0.0;

    friend bool operator==(const PlotPoint&, const PlotPoint&) = default;
};

std::vector<PlotPoint> plot_points(const SuccessStats& stats);

/// Writes `alpha,scheme,P_mean,P_stderr` sorted by (scheme, alpha).
void emit_plot_data(std::span<const PlotPoint> points, const std::filesystem::path& path);
std::vector<PlotPoint> read_plot_data(const std::filesystem::path& path);

/// One `R` line per readout: a `+`/`-` character per vertex.
void write_readouts(std::ostream& out, std::span<const SpinConfig> readouts);
std::vector<SpinConfig> read_readouts(std::istream& in, std::size_t vertex_count);

/// Library version echoed into manifests.
std::string version_string();

}  // namespace qacme
