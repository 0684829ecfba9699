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

#include "scn/sweep.hpp"
#include "scn/error.hpp"
#include "scn/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#ifndef SCN_GIT_DESCRIBE
#define SCN_GIT_DESCRIBE "unknown"
#endif

namespace scn
{

namespace
{

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, sep))
        out.push_back(trim(item));
    if (!s.empty() && s.back() == sep)
        out.emplace_back();
    return out;
}

double to_double(const std::string &key, const std::string &v)
{
    std::size_t used = 0;
    double x = 0.0;
    try
    {
        x = std::stod(v, &used);
    }
    catch (const std::exception &)
    {
        used = 0;
    }
    if (used == 0 || used != v.size())
        throw ConfigError("config key '" + key + "': '" + v + "' is not a number");
    return x;
}

std::uint64_t to_uint(const std::string &key, const std::string &v)
{
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
        throw ConfigError("config key '" + key + "': '" + v + "' is not a non-negative integer");
    try
    {
        return std::stoull(v);
    }
    catch (const std::exception &)
    {
        throw ConfigError("config key '" + key + "': '" + v + "' is out of range");
    }
}

std::vector<double> to_doubles(const std::string &key, const std::string &v)
{
    std::vector<double> out;
    if (trim(v).empty())
        return out;
    for (const auto &item : split(v, ','))
        out.push_back(to_double(key, item));
    return out;
}

std::string fmt(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

template <typename E>
struct Names
{
    std::vector<std::pair<E, const char *>> items;

    const char *name(E e) const
    {
        for (const auto &[v, n] : items)
            if (v == e)
                return n;
        return "unknown";
    }

    E parse(const std::string &key, const std::string &s) const
    {
        for (const auto &[v, n] : items)
            if (s == n)
                return v;
        throw ConfigError("config key '" + key + "': unknown value '" + s + "'");
    }
};

const Names<LaplaceMethod> laplace_names{{{LaplaceMethod::ClosedFormWithFallback, "closed_form_with_fallback"},
                                          {LaplaceMethod::ClosedFormOnly, "closed_form_only"},
                                          {LaplaceMethod::Numeric, "numeric"}}};
const Names<Expectation> expectation_names{{{Expectation::SeriesApprox, "series_approx"}, {Expectation::Exact, "exact"}}};
const Names<InterfererK> interferer_k_names{{{InterfererK::ServingLink, "serving_link"}, {InterfererK::PerLink, "per_link"}}};

std::string join(const std::vector<std::string> &items)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i)
        out += (i ? "," : "") + items[i];
    return out;
}

std::string join(const std::vector<double> &xs)
{
    std::vector<std::string> items;
    for (double x : xs)
        items.push_back(fmt(x));
    return join(items);
}

// Keeps a status message inside one CSV field
std::string csv_safe(std::string s)
{
    for (char &c : s)
        if (c == ',')
            c = ';';
        else if (c == '\n' || c == '\r')
            c = ' ';
        else if (c == '"')
            c = '\'';
    return s;
}

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

} // namespace

std::string to_string(Metric m) { return m == Metric::PCov ? "pcov" : "ase"; }

Metric metric_from_string(const std::string &s)
{
    if (s == "pcov")
        return Metric::PCov;
    if (s == "ase")
        return Metric::Ase;
    throw ConfigError("unknown metric '" + s + "'");
}

std::vector<double> SweepConfig::logspace(double a, double b, std::size_t n)
{
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = n == 1 ? std::pow(10.0, a) : std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    return out;
}

void SweepConfig::validate() const
{
    if (densities.empty())
        throw ConfigError("sweep: density grid is empty (need 0 < lambda_min <= lambda_max and points >= 1)");
    for (double l : densities)
        if (!(l > 0.0) || !std::isfinite(l))
            throw ConfigError("sweep: densities must be positive and finite");
    if (gammas_db.empty())
        throw ConfigError("sweep: threshold grid is empty");
    for (double g : gammas_db)
        if (!std::isfinite(g))
            throw ConfigError("sweep: thresholds must be finite");
    if (metrics.empty())
        throw ConfigError("sweep: no metric selected");
    if (!analytic && !mc)
        throw ConfigError("sweep: no method selected");
    if (fadings.empty())
        throw ConfigError("sweep: no fading mode selected");
    for (std::size_t i = 0; i < fadings.size(); ++i)
        if (std::count(fadings.begin(), fadings.end(), fadings[i]) > 1)
            throw ConfigError("sweep: fading mode '" + to_string(fadings[i]) + "' listed twice");
    if (output.empty())
        throw ConfigError("sweep: output path is empty");
    channel.validate();
    mc_config.validate();
    engine.validate();
}

RicianSpec SweepConfig::spec_for(FadingMode mode) const
{
    RicianSpec s = rician;
    s.mode = mode;
    return s;
}

void apply_setting(SweepConfig &cfg, const std::string &key_in, const std::string &value_in)
{
    const std::string key = trim(key_in);
    const std::string v = trim(value_in);
    auto num = [&] { return to_double(key, v); };
    auto rebuild = [&] {
        // An inconsistent pair may be fixed by a later line; validate() reports what is left
        cfg.densities.clear();
        if (cfg.lambda_min > 0.0 && cfg.lambda_max >= cfg.lambda_min && cfg.points > 0)
            cfg.densities = SweepConfig::logspace(std::log10(cfg.lambda_min), std::log10(cfg.lambda_max), cfg.points);
    };

    if (key == "lambda_min")
        cfg.lambda_min = num(), rebuild();
    else if (key == "lambda_max")
        cfg.lambda_max = num(), rebuild();
    else if (key == "points")
        cfg.points = to_uint(key, v), rebuild();
    else if (key == "densities")
        cfg.densities = to_doubles(key, v);
    else if (key == "gamma_db")
        cfg.gammas_db = to_doubles(key, v);
    else if (key == "metric")
    {
        cfg.metrics.clear();
        for (const auto &m : split(v, ','))
            if (m == "both")
                cfg.metrics = {Metric::PCov, Metric::Ase};
            else
                cfg.metrics.push_back(metric_from_string(m));
    }
    else if (key == "method")
    {
        if (v == "analytic")
            cfg.analytic = true, cfg.mc = false;
        else if (v == "mc")
            cfg.analytic = false, cfg.mc = true;
        else if (v == "both")
            cfg.analytic = cfg.mc = true;
        else
            throw ConfigError("config key 'method': expected analytic, mc or both");
    }
    else if (key == "fading")
    {
        cfg.fadings.clear();
        for (const auto &f : split(v, ','))
            if (f == "both")
                cfg.fadings = {FadingMode::DistanceDependentRician, FadingMode::Rayleigh};
            else
                cfg.fadings.push_back(fading_mode_from_string(f));
    }
    else if (key == "output")
        cfg.output = v;
    else if (key == "json")
        cfg.json = v;
    else if (key == "comparison")
        cfg.comparison = v;
    // Monte Carlo
    else if (key == "seed")
        cfg.mc_config.seed = to_uint(key, v);
    else if (key == "trials")
        cfg.mc_config.trials = to_uint(key, v);
    else if (key == "batch")
        cfg.mc_config.batch = to_uint(key, v);
    else if (key == "threads")
        cfg.mc_config.threads = static_cast<unsigned>(to_uint(key, v));
    else if (key == "window_radius_km")
        cfg.mc_config.window_radius = num();
    else if (key == "mc_mode")
        cfg.mc_config.mode = sinr_mode_from_string(v);
    // Channel
    else if (key == "alpha_los")
        cfg.channel.alpha_los = num();
    else if (key == "alpha_nlos")
        cfg.channel.alpha_nlos = num();
    else if (key == "a_los_db")
        cfg.channel.a_los = db_to_linear(num());
    else if (key == "a_nlos_db")
        cfg.channel.a_nlos = db_to_linear(num());
    else if (key == "d1_km")
        cfg.channel.d1 = num();
    else if (key == "tx_power_dbm")
        cfg.channel.tx_power = dbm_to_watt(num());
    else if (key == "noise_dbm")
        cfg.channel.noise_power = dbm_to_watt(num());
    // Fading
    else if (key == "k_los_intercept_db")
        cfg.rician.k_los_intercept_db = num();
    else if (key == "k_los_slope_db_per_m")
        cfg.rician.k_los_slope_db_per_m = num();
    else if (key == "k_nlos_db")
        cfg.rician.k_nlos_db = num();
    else if (key == "fixed_k_db")
        cfg.rician.fixed_k_db = num();
    // Analytic engine
    else if (key == "series_rel_tol")
        cfg.engine.series.rel_tol = num();
    else if (key == "series_max_terms")
        cfg.engine.series.max_terms = static_cast<int>(to_uint(key, v));
    else if (key == "laplace")
        cfg.engine.laplace = laplace_names.parse(key, v);
    else if (key == "expectation")
        cfg.engine.expectation = expectation_names.parse(key, v);
    else if (key == "interferer_k")
        cfg.engine.interferer_k = interferer_k_names.parse(key, v);
    else if (key == "d0_km")
        cfg.engine.d0_km = num();
    else if (key == "inner_rel_tol")
        cfg.engine.inner_rel_tol = num();
    else if (key == "outer_abs_tol")
        cfg.engine.outer_abs_tol = num();
    else if (key == "outer_rel_tol")
        cfg.engine.outer_rel_tol = num();
    else if (key == "tail_mass")
        cfg.engine.tail_mass = num();
    else if (key == "clamp_abort")
        cfg.engine.clamp_abort = num();
    else if (key == "max_jet_order")
        cfg.engine.max_jet_order = to_uint(key, v);
    else if (key == "ase_pcov_floor")
        cfg.engine.ase_pcov_floor = num();
    else
        throw ConfigError("unknown config key '" + key + "'");
}

SweepConfig parse_config(std::istream &in)
{
    SweepConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        try
        {
            apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
        }
        catch (const ConfigError &e)
        {
            throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

SweepConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file '" + path + "'");
    return parse_config(in);
}

std::map<std::string, std::string> config_echo(const SweepConfig &cfg)
{
    std::map<std::string, std::string> e;
    std::vector<std::string> items;
    e["densities"] = join(cfg.densities);
    e["gamma_db"] = join(cfg.gammas_db);
    for (Metric m : cfg.metrics)
        items.push_back(to_string(m));
    e["metric"] = join(items);
    e["method"] = cfg.analytic && cfg.mc ? "both" : cfg.mc ? "mc" : "analytic";
    items.clear();
    for (FadingMode f : cfg.fadings)
        items.push_back(to_string(f));
    e["fading"] = join(items);
    e["output"] = cfg.output;
    e["json"] = cfg.json;
    e["comparison"] = cfg.comparison;

    e["seed"] = std::to_string(cfg.mc_config.seed);
    e["trials"] = std::to_string(cfg.mc_config.trials);
    e["batch"] = std::to_string(cfg.mc_config.batch);
    e["threads"] = std::to_string(cfg.mc_config.threads);
    e["window_radius_km"] = fmt(cfg.mc_config.window_radius);
    e["mc_mode"] = to_string(cfg.mc_config.mode);

    e["alpha_los"] = fmt(cfg.channel.alpha_los);
    e["alpha_nlos"] = fmt(cfg.channel.alpha_nlos);
    e["a_los_db"] = fmt(linear_to_db(cfg.channel.a_los));
    e["a_nlos_db"] = fmt(linear_to_db(cfg.channel.a_nlos));
    e["d1_km"] = fmt(cfg.channel.d1);
    e["tx_power_dbm"] = fmt(watt_to_dbm(cfg.channel.tx_power));
    e["noise_dbm"] = fmt(watt_to_dbm(cfg.channel.noise_power));

    e["k_los_intercept_db"] = fmt(cfg.rician.k_los_intercept_db);
    e["k_los_slope_db_per_m"] = fmt(cfg.rician.k_los_slope_db_per_m);
    e["k_nlos_db"] = fmt(cfg.rician.k_nlos_db);
    e["fixed_k_db"] = fmt(cfg.rician.fixed_k_db);

    e["series_rel_tol"] = fmt(cfg.engine.series.rel_tol);
    e["series_max_terms"] = std::to_string(cfg.engine.series.max_terms);
    e["laplace"] = laplace_names.name(cfg.engine.laplace);
    e["expectation"] = expectation_names.name(cfg.engine.expectation);
    e["interferer_k"] = interferer_k_names.name(cfg.engine.interferer_k);
    e["d0_km"] = fmt(cfg.engine.d0_km);
    e["inner_rel_tol"] = fmt(cfg.engine.inner_rel_tol);
    e["outer_abs_tol"] = fmt(cfg.engine.outer_abs_tol);
    e["outer_rel_tol"] = fmt(cfg.engine.outer_rel_tol);
    e["tail_mass"] = fmt(cfg.engine.tail_mass);
    e["clamp_abort"] = fmt(cfg.engine.clamp_abort);
    e["max_jet_order"] = std::to_string(cfg.engine.max_jet_order);
    e["ase_pcov_floor"] = fmt(cfg.engine.ase_pcov_floor);
    return e;
}

bool same_record(const SweepRow &a, const SweepRow &b)
{
    return same_double(a.lambda, b.lambda) && same_double(a.gamma_db, b.gamma_db) && a.metric == b.metric &&
           a.fading == b.fading && a.method == b.method && same_double(a.value, b.value) &&
           same_double(a.std_err, b.std_err) && a.status == b.status;
}

void sort_table(SweepTable &table)
{
    std::stable_sort(table.begin(), table.end(), [](const SweepRow &a, const SweepRow &b) {
        return std::tie(a.metric, a.fading, a.method, a.lambda, a.gamma_db) <
               std::tie(b.metric, b.fading, b.method, b.lambda, b.gamma_db);
    });
}

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

SweepRow analytic_row(const SweepConfig &cfg, Metric metric, FadingMode fading, double lambda, double gamma_db)
{
    SweepRow row;
    row.lambda = lambda;
    row.gamma_db = gamma_db;
    row.metric = metric;
    row.fading = to_string(fading);
    row.method = "analytic";
    const auto t0 = Clock::now();
    try
    {
        const RicianSpec spec = cfg.spec_for(fading);
        const double gamma = db_to_linear(gamma_db);
        if (metric == Metric::PCov)
        {
            const CoveragePoint p = coverage_probability(lambda, gamma, cfg.channel, spec, cfg.engine);
            row.value = p.p_cov;
            row.std_err = p.est_error;
            row.diag.path = to_string(p.method);
            row.diag.clamp_count = p.clamp_count;
            row.diag.fallback_count = p.fallback_count;
            row.diag.evaluations = p.evaluations;
        }
        else
        {
            const AseResult a = ase(lambda, gamma, cfg.channel, spec, cfg.engine);
            row.value = a.ase;
            row.std_err = a.est_error;
            row.diag.path = to_string(a.method);
            row.diag.clamp_count = a.clamp_count;
            row.diag.fallback_count = a.fallback_count;
            row.diag.evaluations = a.evaluations;
        }
    }
    catch (const std::exception &e)
    {
        row.value = nan_v;
        row.std_err = nan_v;
        row.status = std::string("error: ") + e.what();
    }
    row.diag.wall_time_s = seconds_since(t0);
    return row;
}

// Every fading mode and threshold at one density from a single set of drops
std::vector<SweepRow> mc_rows(const SweepConfig &cfg, double lambda)
{
    std::vector<RicianSpec> specs;
    for (FadingMode f : cfg.fadings)
        specs.push_back(cfg.spec_for(f));
    std::vector<double> gammas;
    for (double g : cfg.gammas_db)
        gammas.push_back(db_to_linear(g));

    auto make = [&](Metric metric, std::size_t s, double gamma_db) {
        SweepRow row;
        row.lambda = lambda;
        row.gamma_db = gamma_db;
        row.metric = metric;
        row.fading = to_string(cfg.fadings[s]);
        row.method = "mc";
        row.diag.path = to_string(Method::MonteCarlo);
        return row;
    };

    std::vector<SweepRow> rows;
    const auto t0 = Clock::now();
    try
    {
        const McJointResult r = estimate_joint(lambda, gammas, specs, cfg.mc_config, cfg.channel);
        const double wall = seconds_since(t0) / static_cast<double>(cfg.metrics.size() * specs.size() * gammas.size());
        const auto ric = std::find(cfg.fadings.begin(), cfg.fadings.end(), FadingMode::DistanceDependentRician);
        const auto ray = std::find(cfg.fadings.begin(), cfg.fadings.end(), FadingMode::Rayleigh);
        for (Metric metric : cfg.metrics)
            for (std::size_t s = 0; s < specs.size(); ++s)
                for (std::size_t g = 0; g < gammas.size(); ++g)
                {
                    SweepRow row = make(metric, s, cfg.gammas_db[g]);
                    const McStat st = metric == Metric::PCov ? r.coverage(s, g) : r.ase(s, g);
                    row.value = st.mean;
                    row.std_err = st.std_err;
                    row.diag.trials = r.trials;
                    row.diag.resamples = r.resamples;
                    row.diag.window_radius = r.window_radius;
                    row.diag.wall_time_s = wall;
                    if (ric != cfg.fadings.end() && ray != cfg.fadings.end() &&
                        s == static_cast<std::size_t>(ric - cfg.fadings.begin()))
                    {
                        const auto b = static_cast<std::size_t>(ray - cfg.fadings.begin());
                        const McStat d = metric == Metric::PCov ? r.coverage_difference(s, b, g) : r.ase_difference(s, b, g);
                        row.diag.paired_std_err = d.std_err;
                    }
                    rows.push_back(row);
                }
    }
    catch (const std::exception &e)
    {
        for (Metric metric : cfg.metrics)
            for (std::size_t s = 0; s < specs.size(); ++s)
                for (double gdb : cfg.gammas_db)
                {
                    SweepRow row = make(metric, s, gdb);
                    row.value = nan_v;
                    row.std_err = nan_v;
                    row.status = std::string("error: ") + e.what();
                    rows.push_back(row);
                }
    }
    return rows;
}

} // namespace

SweepTable run_sweep(const SweepConfig &cfg)
{
    cfg.validate();
    SweepTable table;

    if (cfg.analytic)
    {
        struct Task
        {
            Metric metric;
            FadingMode fading;
            double lambda, gamma_db;
        };
        std::vector<Task> tasks;
        for (Metric m : cfg.metrics)
            for (FadingMode f : cfg.fadings)
                for (double l : cfg.densities)
                    for (double g : cfg.gammas_db)
                        tasks.push_back({m, f, l, g});
        std::vector<SweepRow> rows(tasks.size());
        parallel_for(tasks.size(), worker_count(cfg.mc_config.threads, tasks.size()), [&](std::size_t i) {
            const Task &t = tasks[i];
            rows[i] = analytic_row(cfg, t.metric, t.fading, t.lambda, t.gamma_db);
        });
        table.insert(table.end(), rows.begin(), rows.end());
    }

    // The Monte Carlo estimator parallelizes over trials, so densities run one after another
    if (cfg.mc)
        for (double l : cfg.densities)
        {
            auto rows = mc_rows(cfg, l);
            table.insert(table.end(), rows.begin(), rows.end());
        }

    sort_table(table);
    return table;
}

const char *const csv_header = "lambda_bs_per_km2,gamma_db,metric,fading,method,value,std_err,status";

void write_csv(std::ostream &out, const SweepTable &table)
{
    out << csv_header << '\n';
    for (const auto &r : table)
        out << fmt(r.lambda) << ',' << fmt(r.gamma_db) << ',' << to_string(r.metric) << ',' << r.fading << ','
            << r.method << ',' << fmt(r.value) << ',' << fmt(r.std_err) << ',' << csv_safe(r.status) << '\n';
}

SweepTable parse_csv(std::istream &in)
{
    std::string line;
    if (!std::getline(in, line) || trim(line) != csv_header)
        throw IoError("parse_csv: missing or unexpected header");
    SweepTable table;
    int lineno = 1;
    while (std::getline(in, line))
    {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto f = split(line, ',');
        if (f.size() != 8)
            throw IoError("parse_csv: line " + std::to_string(lineno) + " has " + std::to_string(f.size()) +
                          " fields, expected 8");
        SweepRow r;
        try
        {
            r.lambda = std::stod(f[0]);
            r.gamma_db = std::stod(f[1]);
            r.metric = metric_from_string(f[2]);
            r.value = std::stod(f[5]);
            r.std_err = std::stod(f[6]);
        }
        catch (const std::exception &e)
        {
            throw IoError("parse_csv: line " + std::to_string(lineno) + ": " + e.what());
        }
        r.fading = f[3];
        r.method = f[4];
        r.status = f[7];
        table.push_back(r);
    }
    return table;
}

RunMetadata make_metadata(const SweepConfig &cfg)
{
    RunMetadata m;
    m.config = config_echo(cfg);
    m.seed = cfg.mc_config.seed;
    m.git_describe = SCN_GIT_DESCRIBE;
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    m.timestamp = buf;
    return m;
}

void write_json(std::ostream &out, const SweepTable &table, const RunMetadata &meta)
{
    using nlohmann::ordered_json;
    auto num = [](double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); };
    ordered_json doc;
    doc["metadata"] = {{"config", meta.config},
                       {"seed", meta.seed},
                       {"git_describe", meta.git_describe},
                       {"timestamp", meta.timestamp}};
    ordered_json rows = ordered_json::array();
    for (const auto &r : table)
    {
        ordered_json diag = {{"path", r.diag.path},
                             {"clamp_count", r.diag.clamp_count},
                             {"fallback_count", r.diag.fallback_count},
                             {"evaluations", r.diag.evaluations},
                             {"wall_time_s", r.diag.wall_time_s}};
        if (r.method == "mc")
        {
            diag["trials"] = r.diag.trials;
            diag["resamples"] = r.diag.resamples;
            diag["window_radius_km"] = r.diag.window_radius;
            if (std::isfinite(r.diag.paired_std_err))
                diag["paired_difference_std_err"] = r.diag.paired_std_err;
        }
        rows.push_back({{"lambda_bs_per_km2", r.lambda},
                        {"gamma_db", r.gamma_db},
                        {"metric", to_string(r.metric)},
                        {"fading", r.fading},
                        {"method", r.method},
                        {"value", num(r.value)},
                        {"std_err", num(r.std_err)},
                        {"status", r.status},
                        {"diagnostics", diag}});
    }
    doc["rows"] = rows;
    out << doc.dump(2) << '\n';
}

std::vector<ComparisonRow> comparison_table(const SweepTable &table)
{
    std::vector<ComparisonRow> out;
    for (const auto &a : table)
    {
        if (a.fading != "rician")
            continue;
        const auto b = std::find_if(table.begin(), table.end(), [&](const SweepRow &r) {
            return r.fading == "rayleigh" && r.metric == a.metric && r.method == a.method && r.lambda == a.lambda &&
                   r.gamma_db == a.gamma_db;
        });
        if (b == table.end())
            continue;
        ComparisonRow c;
        c.lambda = a.lambda;
        c.gamma_db = a.gamma_db;
        c.metric = a.metric;
        c.method = a.method;
        c.rician = a.value;
        c.rayleigh = b->value;
        c.difference = a.value - b->value;
        c.difference_std_err = std::isfinite(a.diag.paired_std_err) ? a.diag.paired_std_err
                                                                    : std::hypot(a.std_err, b->std_err);
        out.push_back(c);
    }
    return out;
}

void write_comparison_csv(std::ostream &out, const std::vector<ComparisonRow> &rows)
{
    out << "lambda_bs_per_km2,gamma_db,metric,method,rician,rayleigh,difference,difference_std_err\n";
    for (const auto &c : rows)
        out << fmt(c.lambda) << ',' << fmt(c.gamma_db) << ',' << to_string(c.metric) << ',' << c.method << ','
            << fmt(c.rician) << ',' << fmt(c.rayleigh) << ',' << fmt(c.difference) << ','
            << fmt(c.difference_std_err) << '\n';
}

namespace
{

template <typename Writer>
void write_file(const std::string &path, Writer &&w)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    w(out);
    out.flush();
    if (!out)
        throw IoError("write to '" + path + "' failed");
}

} // namespace

void emit(const SweepTable &table, const SweepConfig &cfg)
{
    write_file(cfg.output, [&](std::ostream &o) { write_csv(o, table); });
    if (!cfg.json.empty())
    {
        const RunMetadata meta = make_metadata(cfg);
        write_file(cfg.json, [&](std::ostream &o) { write_json(o, table, meta); });
    }
    if (!cfg.comparison.empty())
        write_file(cfg.comparison, [&](std::ostream &o) { write_comparison_csv(o, comparison_table(table)); });
}

} // namespace scn
