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

#include "catch_amalgamated.hpp"

#include "scn/error.hpp"
#include "scn/sweep.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>

using Catch::Matchers::WithinRel;
using namespace scn;

namespace
{

SweepConfig parse(const std::string &text)
{
    std::istringstream in(text);
    return parse_config(in);
}

std::string to_csv(const SweepTable &t)
{
    std::ostringstream out;
    write_csv(out, t);
    return out.str();
}

const char *const small_run = "lambda_min = 10\n"
                              "lambda_max = 1000\n"
                              "points = 3\n"
                              "gamma_db = 0, 3\n"
                              "metric = both\n"
                              "method = both\n"
                              "fading = both\n"
                              "trials = 1000\n"
                              "seed = 11\n"
                              "mc_mode = sir\n";

// Analytic ASE is the slow part, so the full table is computed once
const SweepTable &shared_table()
{
    static const SweepTable t = run_sweep(parse(small_run));
    return t;
}

} // namespace

TEST_CASE("Sweep - Defaults follow the reference parameter set", "[sweep]")
{
    const SweepConfig c;
    CHECK(c.densities.size() == 50);
    CHECK_THAT(c.densities.front(), WithinRel(1.0, 1e-15));
    CHECK_THAT(c.densities.back(), WithinRel(1e4, 1e-15));
    CHECK(c.channel.alpha_los == 2.09);
    CHECK(c.channel.alpha_nlos == 3.75);
    CHECK_THAT(c.channel.a_los, WithinRel(std::pow(10.0, -10.38), 1e-14));
    CHECK_THAT(c.channel.a_nlos, WithinRel(std::pow(10.0, -14.54), 1e-14));
    CHECK(c.channel.d1 == 0.3);
    CHECK_THAT(c.channel.tx_power, WithinRel(std::pow(10.0, 2.4) * 1e-3, 1e-14));
    CHECK_THAT(c.channel.noise_power, WithinRel(std::pow(10.0, -9.5) * 1e-3, 1e-14));
    CHECK(c.rician.k_los_intercept_db == 13.0);
    CHECK(c.rician.k_los_slope_db_per_m == 0.03);
    CHECK(c.rician.k_nlos_db == 0.0);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("Sweep - Config parsing", "[sweep]")
{
    const SweepConfig c = parse("# comment\n"
                                "lambda_min = 10   # trailing\n"
                                "lambda_max = 100\n"
                                "points = 2\n\n"
                                "gamma_db = -3, 6\n"
                                "metric = ase\n"
                                "fading = rayleigh\n"
                                "alpha_los = 2.5\n"
                                "tx_power_dbm = 30\n"
                                "seed = 99\n");
    REQUIRE(c.densities.size() == 2);
    CHECK_THAT(c.densities[1], WithinRel(100.0, 1e-15));
    CHECK(c.gammas_db == std::vector<double>{-3.0, 6.0});
    CHECK(c.metrics == std::vector<Metric>{Metric::Ase});
    CHECK(c.fadings == std::vector<FadingMode>{FadingMode::Rayleigh});
    CHECK(c.channel.alpha_los == 2.5);
    CHECK_THAT(c.channel.tx_power, WithinRel(1.0, 1e-14));
    CHECK(c.mc_config.seed == 99);

    const SweepConfig d = parse("densities = 5, 50\n");
    CHECK(d.densities == std::vector<double>{5.0, 50.0});

    CHECK_THROWS_AS(parse("no_such_key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("points = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("lambda_min = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse("lambda_min = 100\nlambda_max = 10\n"), ConfigError);
    CHECK_THROWS_AS(parse("gamma_db = \n"), ConfigError);
    CHECK_THROWS_AS(parse("metric = sinr\n"), ConfigError);
    CHECK_THROWS_AS(parse("fading = rayleigh, rayleigh\n"), ConfigError);
    CHECK_THROWS_AS(parse("alpha_los = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse("just text\n"), ConfigError);
    try
    {
        parse("points = 3\nbogus = 1\n");
        FAIL("expected ConfigError");
    }
    catch (const ConfigError &e)
    {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(load_config("/nonexistent/dir/cfg"), IoError);
    CHECK_NOTHROW(parse("lambda_min = 2e4\nlambda_max = 3e4\n"));
}

TEST_CASE("Sweep - Table layout and CSV round trip", "[sweep]")
{
    const SweepTable &t = shared_table();
    // 3 densities x 2 thresholds x 2 metrics x 2 fadings x 2 methods
    REQUIRE(t.size() == 48);
    for (const auto &r : t)
    {
        INFO(r.fading << " " << r.method << " " << r.lambda << " " << r.status);
        CHECK(r.ok());
        CHECK(std::isfinite(r.value));
        if (r.metric == Metric::PCov)
            CHECK((r.value >= 0.0 && r.value <= 1.0));
        CHECK((r.method == "analytic" || r.method == "mc"));
    }
    for (std::size_t i = 1; i < t.size(); ++i)
    {
        const auto key = [](const SweepRow &r) {
            return std::make_tuple(static_cast<int>(r.metric), r.fading, r.method, r.lambda, r.gamma_db);
        };
        CHECK(key(t[i - 1]) < key(t[i]));
    }

    const std::string csv = to_csv(t);
    CHECK(csv.substr(0, csv.find('\n')) == "lambda_bs_per_km2,gamma_db,metric,fading,method,value,std_err,status");
    CHECK(std::string(csv_header) == csv.substr(0, csv.find('\n')));
    std::istringstream in(csv);
    const SweepTable back = parse_csv(in);
    REQUIRE(back.size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        CHECK(same_record(back[i], t[i]));

    // Same config, same bytes (analytic ASE skipped to keep the rerun cheap)
    SweepConfig again = parse(std::string(small_run) + "metric = pcov\n");
    SweepTable first = run_sweep(again);
    CHECK(to_csv(run_sweep(again)) == to_csv(first));
    again = parse(std::string(small_run) + "method = mc\n");
    first = run_sweep(again);
    CHECK(to_csv(run_sweep(again)) == to_csv(first));

    SweepTable shuffled(t.rbegin(), t.rend());
    sort_table(shuffled);
    CHECK(to_csv(shuffled) == csv);
}

TEST_CASE("Sweep - Comparison and JSON", "[sweep]")
{
    const SweepConfig c = parse(small_run);
    const SweepTable &t = shared_table();
    const auto cmp = comparison_table(t);
    REQUIRE(cmp.size() == 24);
    for (const auto &r : cmp)
    {
        CHECK(r.difference == r.rician - r.rayleigh);
        if (r.method == "mc")
            CHECK(r.difference_std_err > 0.0);
    }
    std::ostringstream cs;
    write_comparison_csv(cs, cmp);
    CHECK(cs.str().rfind("lambda_bs_per_km2,gamma_db,metric,method,rician,rayleigh,difference,difference_std_err\n", 0) == 0);

    std::ostringstream js;
    write_json(js, t, make_metadata(c));
    const auto j = nlohmann::json::parse(js.str());
    CHECK(j["metadata"]["seed"] == 11);
    CHECK(j["metadata"]["config"].contains("alpha_los"));
    CHECK(j["metadata"].contains("git_describe"));
    CHECK(j["metadata"].contains("timestamp"));
    REQUIRE(j["rows"].size() == t.size());
    CHECK(j["rows"][0].contains("diagnostics"));
}

TEST_CASE("Sweep - Failures are reported", "[sweep]")
{
    SweepConfig c = parse("densities = 10\ngamma_db = 0\nmethod = analytic\n");
    c.output = "/nonexistent/dir/out.csv";
    const SweepTable t = run_sweep(c);
    CHECK_THROWS_AS(emit(t, c), IoError);

    SweepRow bad;
    bad.status = "error: a, b";
    bad.value = std::nan("");
    const std::string csv = to_csv({bad});
    CHECK(csv.find("error: a; b") != std::string::npos);
}
