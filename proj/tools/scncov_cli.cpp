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

// scncov run --config <file> [overrides]
//
// Exit codes: 0 every point succeeded, 1 invalid usage or configuration, 2 some point failed.

#include "scn/error.hpp"
#include "scn/sweep.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

int main(int argc, char **argv)
{
    CLI::App app{"Coverage probability and area spectral efficiency sweeps for dense small-cell networks"};
    app.require_subcommand(1);

    auto *run = app.add_subcommand("run", "Run a density / threshold sweep");
    std::string config_path;
    std::optional<double> lambda_min, lambda_max;
    std::optional<std::size_t> points;
    std::vector<double> gamma_db;
    std::string metric, method, fading, out;
    std::optional<std::uint64_t> seed;
    bool quiet = false;

    run->add_option("--config", config_path, "Key-value config file")->required()->check(CLI::ExistingFile);
    run->add_option("--lambda-min", lambda_min, "Smallest density [BSs/km^2]");
    run->add_option("--lambda-max", lambda_max, "Largest density [BSs/km^2]");
    run->add_option("--points", points, "Number of log-spaced densities");
    run->add_option("--gamma-db", gamma_db, "Thresholds [dB]")->delimiter(',');
    run->add_option("--metric", metric, "pcov, ase or both")->check(CLI::IsMember({"pcov", "ase", "both"}));
    run->add_option("--method", method, "analytic, mc or both")->check(CLI::IsMember({"analytic", "mc", "both"}));
    run->add_option("--fading", fading, "rician, rayleigh or both")->check(CLI::IsMember({"rician", "rayleigh", "both"}));
    run->add_option("--seed", seed, "Monte Carlo seed");
    run->add_option("--out", out, "CSV output path");
    run->add_flag("-q,--quiet", quiet, "No summary on stderr");

    CLI11_PARSE(app, argc, argv);

    try
    {
        scn::SweepConfig cfg = scn::load_config(config_path);
        auto set = [&](const char *key, const std::string &v) { scn::apply_setting(cfg, key, v); };
        auto exact = [](double x) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            return std::string(buf);
        };
        if (lambda_min)
            set("lambda_min", exact(*lambda_min));
        if (lambda_max)
            set("lambda_max", exact(*lambda_max));
        if (points)
            set("points", std::to_string(*points));
        if (!gamma_db.empty())
            cfg.gammas_db = gamma_db;
        if (!metric.empty())
            set("metric", metric);
        if (!method.empty())
            set("method", method);
        if (!fading.empty())
            set("fading", fading);
        if (seed)
            cfg.mc_config.seed = *seed;
        if (!out.empty())
            cfg.output = out;

        cfg.validate();
        const scn::SweepTable table = scn::run_sweep(cfg);
        scn::emit(table, cfg);

        const auto failed = std::count_if(table.begin(), table.end(), [](const scn::SweepRow &r) { return !r.ok(); });
        if (!quiet)
            std::fprintf(stderr, "%zu rows written to %s, %zu with errors\n", table.size(), cfg.output.c_str(),
                         static_cast<std::size_t>(failed));
        return failed ? 2 : 0;
    }
    catch (const scn::ConfigError &e)
    {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 1;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
