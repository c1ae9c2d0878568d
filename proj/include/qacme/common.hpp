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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qacme {

using NodeId = std::uint32_t;

/// Spin values are +1 / -1. Computational |0> is +1.
using Spin = std::int8_t;
using SpinConfig = std::vector<Spin>;
using GaugeVector = std::vector<Spin>;

using Rng = std::mt19937_64;

// Error hierarchy. Everything a caller can recover from derives from
// DomainError; ContractViolation marks a programming error.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParameterError : DomainError {
    using DomainError::DomainError;
};
struct GenerationError : DomainError {
    using DomainError::DomainError;
};
struct EmbeddingError : DomainError {
    using DomainError::DomainError;
};
struct MetricError : DomainError {
    using DomainError::DomainError;
};
struct SizeLimitError : DomainError {
    using DomainError::DomainError;
};
struct EstimationError : DomainError {
    using DomainError::DomainError;
};
struct FormatError : DomainError {
    using DomainError::DomainError;
};
struct IoError : DomainError {
    using DomainError::DomainError;
};
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

/// splitmix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for sub-stream (a, b, c) of a master seed.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                                    std::uint64_t c = 0) {
    return mix64(mix64(mix64(master ^ mix64(a)) ^ b) ^ c);
}

inline Spin random_spin(Rng& rng) { return (rng() & 1ULL) ? Spin{1} : Spin{-1}; }

inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Shortest-exact decimal with 17 significant digits.
std::string format_double(double v);
double parse_double(std::string_view s);
long parse_long(std::string_view s);

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 means
/// hardware concurrency). The first exception thrown is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// One whitespace-tokenized line of a text data file.
struct Record {
    std::string tag;
    std::vector<std::string> fields;
};

/// Reads every non-empty, non-`#` line of a text data file.
std::vector<Record> read_records(std::istream& in);

}  // namespace qacme
