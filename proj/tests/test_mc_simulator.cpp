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

#include "scn/analytic_engine.hpp"
#include "scn/error.hpp"
#include "scn/mc_simulator.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace scn;

TEST_CASE("Monte Carlo - Configuration", "[mc]")
{
    CHECK_NOTHROW(McConfig{}.validate());
    McConfig c;
    c.trials = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = McConfig{};
    c.batch = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    CHECK(sinr_mode_from_string("sir") == SinrMode::SIR);
    CHECK(to_string(SinrMode::SINR) == "sinr");
    CHECK_THROWS_AS(sinr_mode_from_string("snr"), ConfigError);
}

TEST_CASE("Monte Carlo - Deployment statistics", "[mc]")
{
    const ChannelParams p;
    std::mt19937_64 rng(42);
    const int draws = 10000;
    double count = 0.0;
    double los_in_bin = 0.0, in_bin = 0.0;
    std::vector<double> nearest_los;
    for (int i = 0; i < draws; ++i)
    {
        const NetworkRealization net = sample_realization(100.0, p, RicianSpec{}, 1.0, rng);
        count += static_cast<double>(net.bs.size());
        double best = std::numeric_limits<double>::infinity();
        for (const auto &b : net.bs)
        {
            CHECK(std::hypot(b.x, b.y) <= 1.0);
            if (b.link.distance >= 0.14 && b.link.distance < 0.16)
            {
                in_bin += 1.0;
                los_in_bin += b.link.is_los;
            }
            if (b.link.is_los)
                best = std::min(best, b.link.distance);
        }
        nearest_los.push_back(best);
    }
    const double mean = count / draws;
    CHECK(std::abs(mean - 100.0 * std::numbers::pi) < 3.0 * std::sqrt(100.0 * std::numbers::pi / draws));
    const double frac = los_in_bin / in_bin;
    CHECK(std::abs(frac - 0.5) < 3.0 * std::sqrt(0.25 / in_bin) + 0.02);

    // Nearest LOS BS: CDF 1 - exp(-2 pi lambda int_0^x (1 - u/d1) u du)
    std::sort(nearest_los.begin(), nearest_los.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < nearest_los.size(); ++i)
    {
        const double x = std::min(nearest_los[i], p.d1);
        const double cdf = 1.0 - std::exp(-2.0 * std::numbers::pi * 100.0 * (x * x / 2.0 - x * x * x / (3.0 * p.d1)));
        if (!std::isfinite(nearest_los[i]))
            break;
        ks = std::max({ks, std::abs(cdf - static_cast<double>(i) / draws), std::abs(cdf - static_cast<double>(i + 1) / draws)});
    }
    CHECK(ks < 1.63 / std::sqrt(draws)); // 1% Kolmogorov critical value
}

TEST_CASE("Monte Carlo - Association and SINR", "[mc]")
{
    const ChannelParams p;
    std::mt19937_64 rng(7);
    for (int i = 0; i < 10000; ++i)
    {
        const NetworkRealization net = sample_realization(50.0, p, RicianSpec{}, 0.6, rng);
        REQUIRE(!net.bs.empty());
        const double serving = net.bs[net.serving_index].link.path_loss;
        bool ok = true;
        for (const auto &b : net.bs)
            ok = ok && b.link.path_loss <= serving;
        CHECK(ok);
    }

    NetworkRealization one;
    one.bs.push_back({0.1, 0.0, {0.1, true, path_loss(0.1, true, p), 1.0}});
    CHECK(std::isinf(sinr(one, p, SinrMode::SIR)));
    CHECK(std::isfinite(sinr(one, p, SinrMode::SINR)));

    NetworkRealization two = one;
    two.bs.push_back({-0.1, 0.0, {0.1, true, path_loss(0.1, true, p), 1.0}});
    CHECK_THAT(sinr(two, p, SinrMode::SIR), WithinRel(1.0, 1e-15));
    CHECK(sinr(two, p, SinrMode::SINR) < 1.0);
}

TEST_CASE("Monte Carlo - Limits and determinism", "[mc]")
{
    const ChannelParams p;
    McConfig cfg;
    cfg.trials = 4000;
    cfg.seed = 5;
    CHECK(estimate_coverage(100.0, 0.0, cfg, p, RicianSpec{}).p_cov == 1.0);
    CHECK(estimate_ase(100.0, 1e30, cfg, p, RicianSpec{}).ase == 0.0);

    const auto a = estimate_coverage(100.0, 1.0, cfg, p, RicianSpec{});
    McConfig one_thread = cfg;
    one_thread.threads = 1;
    one_thread.batch = 333;
    const auto b = estimate_coverage(100.0, 1.0, one_thread, p, RicianSpec{});
    CHECK(a.p_cov == b.p_cov);
    CHECK(a.ci_low <= a.p_cov);
    CHECK(a.ci_high >= a.p_cov);
    CHECK(a.method == Method::MonteCarlo);

    const auto x = estimate_ase(100.0, 1.0, cfg, p, RicianSpec{});
    const auto y = estimate_ase(100.0, 1.0, one_thread, p, RicianSpec{});
    CHECK(x.ase == y.ase);
    CHECK(x.ase > 0.0);

    cfg.seed = 6;
    CHECK(estimate_coverage(100.0, 1.0, cfg, p, RicianSpec{}).p_cov != a.p_cov);
}

TEST_CASE("Monte Carlo - Joint estimates share drops", "[mc]")
{
    const ChannelParams p;
    McConfig cfg;
    cfg.trials = 20000;
    cfg.seed = 3;
    const std::vector<double> gammas = {1.0, 2.0};
    const McJointResult r = estimate_joint(30.0, gammas, {RicianSpec{}, RicianSpec::rayleigh()}, cfg, p);
    // Each spec alone reproduces its column of the joint run
    const auto alone = estimate_coverage(30.0, 2.0, cfg, p, RicianSpec::rayleigh());
    CHECK(alone.p_cov == r.coverage(1, 1).mean);
    const McStat d = r.coverage_difference(0, 1, 0);
    CHECK_THAT(d.mean, WithinAbs(r.coverage(0, 0).mean - r.coverage(1, 0).mean, 1e-15));
    // Pairing shrinks the difference error well below the independent-sample value
    const double indep = std::hypot(r.coverage(0, 0).std_err, r.coverage(1, 0).std_err);
    CHECK(d.std_err < 0.8 * indep);
    const McStat ratio = r.ase_ratio(0, 1, 0);
    CHECK_THAT(ratio.mean, WithinRel(r.ase(0, 0).mean / r.ase(1, 0).mean, 1e-12));
    const McStat ad = r.ase_difference(0, 1, 0);
    CHECK_THAT(ad.mean, WithinRel(r.ase(0, 0).mean - r.ase(1, 0).mean, 1e-9));
    double total = 0.0;
    for (auto b : {Branch::L1, Branch::NL1a, Branch::NL1b, Branch::NL2})
        total += r.branch_probability(b).mean;
    CHECK_THAT(total, WithinAbs(1.0, 1e-12));
}

TEST_CASE("Monte Carlo - Association frequencies match the distance densities", "[mc]")
{
    const ChannelParams p;
    McConfig cfg;
    cfg.trials = 20000;
    cfg.seed = 17;
    cfg.mode = SinrMode::SIR;
    for (double lambda : {10.0, 100.0, 1000.0})
    {
        const DistancePdfSet s = distance_pdfs(lambda, p);
        auto mass = [&](auto f, double a, double b) {
            return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-12);
        };
        const double r_max = p.d1 + std::sqrt(60.0 / (std::numbers::pi * lambda));
        const double m[4] = {mass([&](double r) { return s.f_los_1(r); }, 0.0, p.d1),
                             mass([&](double r) { return s.f_nlos_1a(r); }, 0.0, s.y1),
                             mass([&](double r) { return s.f_nlos_1b(r); }, s.y1, p.d1),
                             mass([&](double r) { return s.f_nlos_2(r); }, p.d1, r_max)};
        const McJointResult r = estimate_joint(lambda, {1.0}, {RicianSpec{}}, cfg, p);
        for (int b = 0; b < 4; ++b)
        {
            const McStat est = r.branch_probability(static_cast<Branch>(b));
            INFO("lambda=" << lambda << " piece=" << to_string(static_cast<Branch>(b)) << " analytic=" << m[b]
                           << " mc=" << est.mean << " +- " << est.std_err);
            // Binomial error from the analytic mass, so pieces with no hits are still judged fairly
            CHECK(std::abs(est.mean - m[b]) <= 3.0 * std::sqrt(m[b] * (1.0 - m[b]) / cfg.trials) + 1e-12);
        }
    }
}

TEST_CASE("Monte Carlo - Window and agreement with the analytic engine", "[mc]")
{
    const ChannelParams p;
    McConfig cfg;
    cfg.trials = 40000;
    cfg.seed = 23;
    cfg.mode = SinrMode::SIR;
    const double r0 = auto_window_radius(10.0, p);
    CHECK(r0 >= 3.0 / std::sqrt(10.0));
    CHECK(r0 >= p.d1);
    const auto base = estimate_coverage(10.0, 1.0, cfg, p, RicianSpec{});
    cfg.window_radius = 2.0 * r0;
    const auto wide = estimate_coverage(10.0, 1.0, cfg, p, RicianSpec{});
    // Independent estimates: the difference has standard error sqrt(2) sigma
    INFO("auto window " << base.p_cov << ", doubled " << wide.p_cov << ", sigma " << base.est_error);
    CHECK(std::abs(base.p_cov - wide.p_cov) < 3.0 * std::sqrt(2.0) * base.est_error);

    cfg.window_radius = 0.0;
    const auto mc = estimate_coverage(100.0, 1.0, cfg, p, RicianSpec{});
    const auto an = coverage_probability(100.0, 1.0, p, RicianSpec{});
    CHECK(std::abs(mc.p_cov - an.p_cov) <= std::max(0.03, 3.0 * mc.est_error));
}
