// SPDX-License-Identifier: Apache-2.0
//
// scncov: coverage and area spectral efficiency of dense small-cell networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef SCN_SWEEP_HPP
#define SCN_SWEEP_HPP

// Density and threshold sweeps with CSV / JSON persistence.
//
// Config files are plain "key = value" lines; '#' starts a comment. Lists are comma separated.
// dB and dBm values are converted to linear units here and nowhere else.

#include "scn/analytic_engine.hpp"
#include "scn/channel_model.hpp"
#include "scn/mc_simulator.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace scn
{

enum class Metric
{
    PCov,
    Ase
};

std::string to_string(Metric m);
Metric metric_from_string(const std::string &s);

struct SweepConfig
{
    // Log grid parameters; setting any of them through apply_setting rebuilds densities
    double lambda_min = 1.0;
    double lambda_max = 1e4;
    std::size_t points = 50;
    std::vector<double> densities = logspace(0.0, 4.0, 50); // BSs/km^2
    std::vector<double> gammas_db = {0.0, 3.0};
    std::vector<Metric> metrics = {Metric::PCov};
    bool analytic = true;
    bool mc = false;
    std::vector<FadingMode> fadings = {FadingMode::DistanceDependentRician, FadingMode::Rayleigh};

    std::string output = "sweep.csv";
    std::string json;       // empty: no JSON file
    std::string comparison; // empty: no rician - rayleigh table

    ChannelParams channel;
    RicianSpec rician; // K law used for the rician fading mode
    McConfig mc_config;
    EngineOptions engine;

    // Throws ConfigError on empty grids, non-positive densities or invalid nested settings
    void validate() const;

    RicianSpec spec_for(FadingMode mode) const;

    // 10^a ... 10^b, n points
    static std::vector<double> logspace(double a, double b, std::size_t n);
};

// Applies one "key = value" setting. Throws ConfigError for unknown keys or bad values.
void apply_setting(SweepConfig &cfg, const std::string &key, const std::string &value);

SweepConfig parse_config(std::istream &in);
SweepConfig load_config(const std::string &path);

// Echo of every setting in file syntax, in a fixed order
std::map<std::string, std::string> config_echo(const SweepConfig &cfg);

struct RowDiagnostics
{
    std::string path; // closed_form, numeric_laplace or monte_carlo
    std::size_t clamp_count = 0;
    std::size_t fallback_count = 0;
    std::size_t evaluations = 0;
    std::size_t trials = 0;
    std::size_t resamples = 0;
    double window_radius = 0.0;
    double wall_time_s = 0.0;
    // Monte Carlo rician rows: standard error of the paired rician - rayleigh difference
    double paired_std_err = std::numeric_limits<double>::quiet_NaN();
};

struct SweepRow
{
    double lambda = 0.0;
    double gamma_db = 0.0;
    Metric metric = Metric::PCov;
    std::string fading;
    std::string method; // analytic or mc
    double value = 0.0;
    double std_err = 0.0;
    std::string status = "ok";
    RowDiagnostics diag;

    bool ok() const { return status == "ok"; }
};

// Equality of the fields persisted in CSV; NaN compares equal to NaN
bool same_record(const SweepRow &a, const SweepRow &b);

using SweepTable = std::vector<SweepRow>;

// One row per (metric, fading, method, lambda, gamma), sorted in that order.
// Point failures land in the status column and the sweep continues.
SweepTable run_sweep(const SweepConfig &cfg);

void sort_table(SweepTable &table);

extern const char *const csv_header;

void write_csv(std::ostream &out, const SweepTable &table);
SweepTable parse_csv(std::istream &in);

struct RunMetadata
{
    std::map<std::string, std::string> config;
    std::uint64_t seed = 0;
    std::string git_describe;
    std::string timestamp; // UTC, ISO 8601
};

RunMetadata make_metadata(const SweepConfig &cfg);

void write_json(std::ostream &out, const SweepTable &table, const RunMetadata &meta);

// Rician and Rayleigh values side by side with their difference. Monte Carlo differences
// use the paired estimate from common random numbers when `paired` holds it.
struct ComparisonRow
{
    double lambda = 0.0;
    double gamma_db = 0.0;
    Metric metric = Metric::PCov;
    std::string method;
    double rician = 0.0;
    double rayleigh = 0.0;
    double difference = 0.0;
    double difference_std_err = 0.0;
};

std::vector<ComparisonRow> comparison_table(const SweepTable &table);
void write_comparison_csv(std::ostream &out, const std::vector<ComparisonRow> &rows);

// Writes output, json and comparison files named in cfg. Throws IoError when a file cannot be opened.
void emit(const SweepTable &table, const SweepConfig &cfg);

} // namespace scn

#endif
