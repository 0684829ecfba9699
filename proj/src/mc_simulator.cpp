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

#include "scn/mc_simulator.hpp"
#include "scn/error.hpp"
#include "scn/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace scn
{

namespace
{
constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Neumaier compensated sum
struct CompensatedSum
{
    double sum = 0.0;
    double comp = 0.0;

    void add(double v)
    {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

Branch classify(double r, bool los, const ChannelParams &params, double y1)
{
    if (los)
        return Branch::L1;
    if (r <= y1)
        return Branch::NL1a;
    if (r <= params.d1)
        return Branch::NL1b;
    return Branch::NL2;
}

// One drop before fading is applied: everything shared across fading specs
struct Drop
{
    std::vector<double> x, y, dist, gain, z1, z2;
    std::vector<unsigned char> los;
    std::size_t serving = 0;
    std::size_t resamples = 0;

    std::size_t size() const { return dist.size(); }
};

void draw_drop(Drop &d, double lambda, const ChannelParams &params, double window, std::mt19937_64 &rng,
               bool positions)
{
    std::poisson_distribution<long long> count(lambda * kPi * window * window);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    long long n = count(rng);
    d.resamples = 0;
    while (n == 0)
    {
        ++d.resamples;
        n = count(rng);
    }
    const auto un = static_cast<std::size_t>(n);
    if (positions)
    {
        d.x.resize(un);
        d.y.resize(un);
    }
    d.dist.resize(un);
    d.gain.resize(un);
    d.z1.resize(un);
    d.z2.resize(un);
    d.los.resize(un);
    double best = -1.0;
    for (std::size_t i = 0; i < un; ++i)
    {
        // 1 - U lies in (0, 1], so no BS sits exactly on the UE
        const double r = window * std::sqrt(1.0 - unif(rng));
        const double phi = 2.0 * kPi * unif(rng);
        // beyond d1 the LOS probability is zero and no draw is spent
        const bool los = r < params.d1 && unif(rng) < los_probability(r, params);
        d.dist[i] = r;
        if (positions)
        {
            d.x[i] = r * std::cos(phi);
            d.y[i] = r * std::sin(phi);
        }
        d.los[i] = los ? 1 : 0;
        d.gain[i] = path_loss(r, los, params);
        d.z1[i] = normal(rng);
        d.z2[i] = normal(rng);
        if (d.gain[i] > best)
        {
            best = d.gain[i];
            d.serving = i;
        }
    }
}

// rician_k with the constant parts converted to linear once
class KFactor
{
public:
    explicit KFactor(const RicianSpec &spec)
        : spec_(spec), nlos_(rician_k(1.0, false, spec)), fixed_(rician_k(0.0, true, spec))
    {
    }
    double operator()(double r, bool los) const
    {
        if (spec_.mode == FadingMode::DistanceDependentRician && los)
            return rician_k(r, true, spec_);
        return los ? fixed_ : nlos_;
    }

private:
    RicianSpec spec_;
    double nlos_;
    double fixed_;
};

struct SinrParts
{
    double signal = 0.0;
    double interference = 0.0;
};

SinrParts sinr_parts(const Drop &d, const KFactor &kf, const ChannelParams &params)
{
    SinrParts s;
    CompensatedSum interf;
    for (std::size_t i = 0; i < d.size(); ++i)
    {
        const double k = kf(d.dist[i], d.los[i] != 0);
        const double h = fading_from_normals(k, d.z1[i], d.z2[i]);
        const double rx = params.tx_power * d.gain[i] * h;
        if (i == d.serving)
            s.signal = rx;
        else
            interf.add(rx);
    }
    s.interference = interf.value();
    return s;
}

double ratio(const SinrParts &s, const ChannelParams &params, SinrMode mode)
{
    const double den = s.interference + (mode == SinrMode::SINR ? params.noise_power : 0.0);
    if (den == 0.0)
        return std::numeric_limits<double>::infinity();
    return s.signal / den;
}

McStat binomial(double count, double n)
{
    const double p = count / n;
    return {p, std::sqrt(std::max(p * (1.0 - p), 0.0) / n)};
}

} // namespace

std::string to_string(SinrMode m) { return m == SinrMode::SIR ? "sir" : "sinr"; }

SinrMode sinr_mode_from_string(const std::string &s)
{
    if (s == "sir")
        return SinrMode::SIR;
    if (s == "sinr")
        return SinrMode::SINR;
    throw ConfigError("unknown SINR mode '" + s + "'");
}

void McConfig::validate() const
{
    if (trials < 1)
        throw ConfigError("McConfig: trials must be at least 1");
    if (!(window_radius >= 0.0))
        throw ConfigError("McConfig: window_radius must be non-negative (0 selects auto)");
    if (batch < 1)
        throw ConfigError("McConfig: batch must be at least 1");
}

std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t index)
{
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

double median_serving_gain(double lambda, const ChannelParams &params)
{
    if (!(lambda > 0.0))
        throw DomainError("median_serving_gain: lambda must be positive");
    const double d1 = params.d1;
    // Mean number of BSs with path loss gain >= g
    auto mean_stronger = [&](double g) {
        const double xl = std::min(los_distance_for_gain(g, params), d1);
        const double xn = nlos_distance_for_gain(g, params);
        const double xn_in = std::min(xn, d1);
        double m = xl * xl / 2.0 - xl * xl * xl / (3.0 * d1);
        m += xn_in * xn_in * xn_in / (3.0 * d1);
        if (xn > d1)
            m += (xn * xn - d1 * d1) / 2.0;
        return 2.0 * kPi * lambda * m;
    };
    double lo = std::log(1e-40);
    double hi = std::log(1.0);
    const double target = std::numbers::ln2;
    for (int it = 0; it < 200; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        if (mean_stronger(std::exp(mid)) > target)
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

double auto_window_radius(double lambda, const ChannelParams &params)
{
    const double g_med = median_serving_gain(lambda, params);
    const double a = params.alpha_nlos;
    // 2 pi lambda int_R^inf u A u^-a du = 2 pi lambda A R^(2-a) / (a - 2) < 1e-4 g_med
    const double r_star = std::pow(2.0 * kPi * lambda * params.a_nlos / ((a - 2.0) * 1e-4 * g_med), 1.0 / (a - 2.0));
    return std::max({3.0 / std::sqrt(lambda), params.d1, r_star});
}

NetworkRealization sample_realization(double lambda, const ChannelParams &params, const RicianSpec &spec,
                                      double window, std::mt19937_64 &rng)
{
    if (!(lambda > 0.0))
        throw DomainError("sample_realization: lambda must be positive");
    if (!(window > 0.0))
        throw DomainError("sample_realization: window must be positive");
    Drop d;
    draw_drop(d, lambda, params, window, rng, true);
    NetworkRealization net;
    net.window_radius = window;
    net.serving_index = d.serving;
    net.resamples = d.resamples;
    net.bs.resize(d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
    {
        auto &b = net.bs[i];
        b.x = d.x[i];
        b.y = d.y[i];
        b.link.distance = d.dist[i];
        b.link.is_los = d.los[i] != 0;
        b.link.path_loss = d.gain[i];
        b.link.fading_gain = fading_from_normals(rician_k(d.dist[i], b.link.is_los, spec), d.z1[i], d.z2[i]);
    }
    return net;
}

double sinr(const NetworkRealization &net, const ChannelParams &params, SinrMode mode)
{
    if (net.bs.empty() || net.serving_index >= net.bs.size())
        throw DomainError("sinr: realization without a serving BS");
    SinrParts s;
    CompensatedSum interf;
    for (std::size_t i = 0; i < net.bs.size(); ++i)
    {
        const double rx = params.tx_power * net.bs[i].link.path_loss * net.bs[i].link.fading_gain;
        if (i == net.serving_index)
            s.signal = rx;
        else
            interf.add(rx);
    }
    s.interference = interf.value();
    return ratio(s, params, mode);
}

// ---------------------------------------------------------------------------------------------

McJointResult::McJointResult(std::size_t n_specs, std::size_t n_gammas) : n_specs_(n_specs), n_gammas_(n_gammas)
{
    const std::size_t cells = n_specs * n_gammas;
    const std::size_t pairs = n_specs * (n_specs - 1) / 2;
    cov_sum.assign(cells, 0.0);
    ase_sum.assign(cells, 0.0);
    ase_sq.assign(cells, 0.0);
    cov_cross.assign(pairs * n_gammas, 0.0);
    ase_cross.assign(pairs * n_gammas, 0.0);
}

std::size_t McJointResult::pair_index(std::size_t a, std::size_t b) const
{
    if (a > b)
        std::swap(a, b);
    if (a == b || b >= n_specs_)
        throw DomainError("McJointResult: invalid spec pair");
    return a * (2 * n_specs_ - a - 1) / 2 + (b - a - 1);
}

McStat McJointResult::coverage(std::size_t spec, std::size_t gamma) const
{
    return binomial(cov_sum.at(spec * n_gammas_ + gamma), static_cast<double>(trials));
}

McStat McJointResult::ase(std::size_t spec, std::size_t gamma) const
{
    const double n = static_cast<double>(trials);
    const std::size_t i = spec * n_gammas_ + gamma;
    const double mean = ase_sum.at(i) / n;
    const double var = n > 1.0 ? std::max(ase_sq[i] / n - mean * mean, 0.0) * n / (n - 1.0) : 0.0;
    return {lambda * mean, lambda * std::sqrt(var / n)};
}

McStat McJointResult::coverage_difference(std::size_t a, std::size_t b, std::size_t gamma) const
{
    const double n = static_cast<double>(trials);
    const double pa = cov_sum.at(a * n_gammas_ + gamma) / n;
    const double pb = cov_sum.at(b * n_gammas_ + gamma) / n;
    const double cross = cov_cross.at(pair_index(a, b) * n_gammas_ + gamma) / n;
    const double mean = pa - pb;
    const double second = pa + pb - 2.0 * cross;
    const double var = n > 1.0 ? std::max(second - mean * mean, 0.0) * n / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n)};
}

McStat McJointResult::ase_difference(std::size_t a, std::size_t b, std::size_t gamma) const
{
    const double n = static_cast<double>(trials);
    const std::size_t ia = a * n_gammas_ + gamma;
    const std::size_t ib = b * n_gammas_ + gamma;
    const double ma = ase_sum.at(ia) / n;
    const double mb = ase_sum.at(ib) / n;
    const double cross = ase_cross.at(pair_index(a, b) * n_gammas_ + gamma) / n;
    const double second = ase_sq[ia] / n + ase_sq[ib] / n - 2.0 * cross;
    const double mean = ma - mb;
    const double var = n > 1.0 ? std::max(second - mean * mean, 0.0) * n / (n - 1.0) : 0.0;
    return {lambda * mean, lambda * std::sqrt(var / n)};
}

McStat McJointResult::ase_ratio(std::size_t a, std::size_t b, std::size_t gamma) const
{
    const double n = static_cast<double>(trials);
    const std::size_t ia = a * n_gammas_ + gamma;
    const std::size_t ib = b * n_gammas_ + gamma;
    const double ma = ase_sum.at(ia) / n;
    const double mb = ase_sum.at(ib) / n;
    if (mb == 0.0)
        return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    const double va = ase_sq[ia] / n - ma * ma;
    const double vb = ase_sq[ib] / n - mb * mb;
    const double cab = ase_cross.at(pair_index(a, b) * n_gammas_ + gamma) / n - ma * mb;
    const double r = ma / mb;
    const double var = std::max(va - 2.0 * r * cab + r * r * vb, 0.0) / (mb * mb);
    return {r, std::sqrt(var / n)};
}

McStat McJointResult::branch_probability(Branch b) const
{
    return binomial(branch_count[static_cast<std::size_t>(b)], static_cast<double>(trials));
}

McJointResult estimate_joint(double lambda, const std::vector<double> &gammas, const std::vector<RicianSpec> &specs,
                             const McConfig &cfg, const ChannelParams &params)
{
    if (!(lambda > 0.0))
        throw DomainError("estimate_joint: lambda must be positive");
    if (gammas.empty() || specs.empty())
        throw ConfigError("estimate_joint: needs at least one threshold and one fading spec");
    for (double g : gammas)
        if (!(g >= 0.0))
            throw DomainError("estimate_joint: thresholds must be non-negative");
    cfg.validate();
    params.validate();

    const std::size_t ns = specs.size();
    const std::size_t ng = gammas.size();
    const std::size_t np = ns * (ns - 1) / 2;
    const double window = cfg.window_radius > 0.0 ? cfg.window_radius : auto_window_radius(lambda, params);
    const double y1 = breakpoint_y1(params);
    const std::size_t batches = (cfg.trials + cfg.batch - 1) / cfg.batch;
    std::vector<KFactor> kfactors;
    for (const auto &spec : specs)
        kfactors.emplace_back(spec);

    struct BatchAcc
    {
        std::vector<double> cov, ase, ase_sq, cov_cross, ase_cross;
        std::array<double, 4> branch{};
        std::size_t resamples = 0;
    };
    std::vector<BatchAcc> acc(batches);

    parallel_for(batches, worker_count(cfg.threads, batches), [&](std::size_t b) {
        BatchAcc &a = acc[b];
        a.cov.assign(ns * ng, 0.0);
        a.ase_sq.assign(ns * ng, 0.0);
        a.cov_cross.assign(np * ng, 0.0);
        a.ase_cross.assign(np * ng, 0.0);
        std::vector<CompensatedSum> ase_acc(ns * ng), sq_acc(ns * ng), cross_acc(np * ng);
        std::vector<double> value(ns);
        std::vector<double> ase_term(ns * ng);
        Drop d;
        const std::size_t first = b * cfg.batch;
        const std::size_t last = std::min(cfg.trials, first + cfg.batch);
        for (std::size_t t = first; t < last; ++t)
        {
            auto rng = trial_stream(cfg.seed, t);
            draw_drop(d, lambda, params, window, rng, false);
            a.resamples += d.resamples;
            const std::size_t o = d.serving;
            a.branch[static_cast<std::size_t>(classify(d.dist[o], d.los[o] != 0, params, y1))] += 1.0;
            for (std::size_t s = 0; s < ns; ++s)
                value[s] = ratio(sinr_parts(d, kfactors[s], params), params, cfg.mode);
            for (std::size_t g = 0; g < ng; ++g)
            {
                for (std::size_t s = 0; s < ns; ++s)
                {
                    const bool covered = value[s] > gammas[g];
                    const double y = covered ? std::log2(1.0 + value[s]) : 0.0;
                    ase_term[s * ng + g] = y;
                    a.cov[s * ng + g] += covered ? 1.0 : 0.0;
                    ase_acc[s * ng + g].add(y);
                    sq_acc[s * ng + g].add(y * y);
                }
                std::size_t pair = 0;
                for (std::size_t s = 0; s < ns; ++s)
                    for (std::size_t u = s + 1; u < ns; ++u, ++pair)
                    {
                        const bool both = value[s] > gammas[g] && value[u] > gammas[g];
                        a.cov_cross[pair * ng + g] += both ? 1.0 : 0.0;
                        cross_acc[pair * ng + g].add(ase_term[s * ng + g] * ase_term[u * ng + g]);
                    }
            }
        }
        a.ase.resize(ns * ng);
        for (std::size_t i = 0; i < ns * ng; ++i)
        {
            a.ase[i] = ase_acc[i].value();
            a.ase_sq[i] = sq_acc[i].value();
        }
        for (std::size_t i = 0; i < np * ng; ++i)
            a.ase_cross[i] = cross_acc[i].value();
    });

    McJointResult res(ns, ng);
    res.lambda = lambda;
    res.trials = cfg.trials;
    res.window_radius = window;
    auto merge = [&](std::vector<double> &out, auto field) {
        for (std::size_t i = 0; i < out.size(); ++i)
        {
            CompensatedSum s;
            for (const auto &a : acc)
                s.add((a.*field)[i]);
            out[i] = s.value();
        }
    };
    merge(res.cov_sum, &BatchAcc::cov);
    merge(res.ase_sum, &BatchAcc::ase);
    merge(res.ase_sq, &BatchAcc::ase_sq);
    merge(res.cov_cross, &BatchAcc::cov_cross);
    merge(res.ase_cross, &BatchAcc::ase_cross);
    for (const auto &a : acc)
    {
        for (std::size_t i = 0; i < 4; ++i)
            res.branch_count[i] += a.branch[i];
        res.resamples += a.resamples;
    }
    return res;
}

CoveragePoint estimate_coverage(double lambda, double gamma, const McConfig &cfg, const ChannelParams &params,
                                const RicianSpec &spec)
{
    const McJointResult r = estimate_joint(lambda, {gamma}, {spec}, cfg, params);
    const McStat st = r.coverage(0, 0);
    CoveragePoint pt;
    pt.lambda = lambda;
    pt.gamma = gamma;
    pt.p_cov = st.mean;
    pt.est_error = st.std_err;
    pt.method = Method::MonteCarlo;
    pt.evaluations = cfg.trials;
    // Wilson score interval at 95%
    const double z = 1.959963984540054;
    const double n = static_cast<double>(cfg.trials);
    const double denom = 1.0 + z * z / n;
    const double centre = (st.mean + z * z / (2.0 * n)) / denom;
    const double half = z * std::sqrt(st.mean * (1.0 - st.mean) / n + z * z / (4.0 * n * n)) / denom;
    pt.ci_low = std::max(0.0, centre - half);
    pt.ci_high = std::min(1.0, centre + half);
    return pt;
}

AseResult estimate_ase(double lambda, double gamma0, const McConfig &cfg, const ChannelParams &params,
                       const RicianSpec &spec)
{
    const McJointResult r = estimate_joint(lambda, {gamma0}, {spec}, cfg, params);
    const McStat st = r.ase(0, 0);
    AseResult out;
    out.lambda = lambda;
    out.gamma0 = gamma0;
    out.ase = st.mean;
    out.est_error = st.std_err;
    out.method = Method::MonteCarlo;
    out.evaluations = cfg.trials;
    return out;
}

McStat estimate_conditional_coverage(const ServingLink &link, double gamma, double lambda, const McConfig &cfg,
                                     const ChannelParams &params, const RicianSpec &spec)
{
    check_branch(link, params);
    cfg.validate();
    const double serving_gain = path_loss(link.r, link.is_los(), params);
    const double k_serving = rician_k(link.r, link.is_los(), spec);
    const double window = cfg.window_radius > 0.0 ? cfg.window_radius
                                                  : std::max(auto_window_radius(lambda, params), 2.0 * link.r);
    const std::size_t batches = (cfg.trials + cfg.batch - 1) / cfg.batch;
    const KFactor kf(spec);
    std::vector<double> hits(batches, 0.0);

    parallel_for(batches, worker_count(cfg.threads, batches), [&](std::size_t b) {
        std::poisson_distribution<long long> count(lambda * kPi * window * window);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::normal_distribution<double> normal(0.0, 1.0);
        const std::size_t first = b * cfg.batch;
        const std::size_t last = std::min(cfg.trials, first + cfg.batch);
        for (std::size_t t = first; t < last; ++t)
        {
            auto rng = trial_stream(cfg.seed, t);
            const double z1 = normal(rng);
            const double z2 = normal(rng);
            const double signal = params.tx_power * serving_gain * fading_from_normals(k_serving, z1, z2);
            const long long n = count(rng);
            CompensatedSum interf;
            for (long long i = 0; i < n; ++i)
            {
                const double r = window * std::sqrt(1.0 - unif(rng));
                const bool los = r < params.d1 && unif(rng) < los_probability(r, params);
                const double w1 = normal(rng);
                const double w2 = normal(rng);
                const double g = path_loss(r, los, params);
                // conditioning on the serving event removes every stronger BS
                if (g >= serving_gain)
                    continue;
                interf.add(params.tx_power * g * fading_from_normals(kf(r, los), w1, w2));
            }
            const double den = interf.value() + (cfg.mode == SinrMode::SINR ? params.noise_power : 0.0);
            if (den == 0.0 || signal / den > gamma)
                hits[b] += 1.0;
        }
    });
    CompensatedSum total;
    for (double h : hits)
        total.add(h);
    return binomial(total.value(), static_cast<double>(cfg.trials));
}

} // namespace scn
