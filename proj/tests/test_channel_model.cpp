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

#include "scn/channel_model.hpp"
#include "scn/error.hpp"
#include "scn/special_functions.hpp"

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace scn;

TEST_CASE("Channel model - Defaults and validation", "[channel]")
{
    const ChannelParams p;
    CHECK(p.alpha_los == 2.09);
    CHECK(p.alpha_nlos == 3.75);
    CHECK_THAT(p.a_los, WithinRel(std::pow(10.0, -10.38), 1e-14));
    CHECK_THAT(p.a_nlos, WithinRel(std::pow(10.0, -14.54), 1e-14));
    CHECK(p.d1 == 0.3);
    CHECK_THAT(p.tx_power, WithinRel(dbm_to_watt(24.0), 1e-14));
    CHECK_THAT(p.noise_power, WithinRel(dbm_to_watt(-95.0), 1e-14));
    CHECK_NOTHROW(p.validate());

    ChannelParams bad = p;
    bad.alpha_nlos = 2.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = p;
    bad.a_nlos = 2.0 * p.a_los;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = p;
    bad.d1 = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    // ConfigError is an invalid_argument
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("Channel model - LOS probability", "[channel]")
{
    const ChannelParams p;
    CHECK(los_probability(0.15, p) == 0.5);
    CHECK(los_probability(0.3, p) == 0.0);
    CHECK(los_probability(0.0, p) == 1.0);
    CHECK(los_probability(2.0, p) == 0.0);
    CHECK_THROWS_AS(los_probability(-0.1, p), DomainError);

    double prev = 1.0;
    for (double r = 0.0; r < 1.0; r += 0.01)
    {
        const double v = los_probability(r, p);
        CHECK(v <= prev);
        CHECK(v >= 0.0);
        prev = v;
    }
}

TEST_CASE("Channel model - Path loss", "[channel]")
{
    const ChannelParams p;
    CHECK_THAT(path_loss(1.0, true, p), WithinRel(std::pow(10.0, -10.38), 1e-14));
    CHECK_THAT(path_loss(1.0, false, p), WithinRel(std::pow(10.0, -14.54), 1e-14));
    // Log-domain evaluation as an independent route
    const double log_domain = std::exp(-10.38 * std::log(10.0) - 2.09 * std::log(0.5));
    CHECK_THAT(path_loss(0.5, true, p), WithinRel(log_domain, 1e-13));
    CHECK_THAT(path_loss(0.5, true, p), WithinRel(1.776e-10, 1e-3));
    CHECK_THROWS_AS(path_loss(0.0, true, p), DomainError);

    for (double r = 0.01; r <= 0.3; r += 0.01)
        CHECK(path_loss(r, true, p) > path_loss(r, false, p));
}

TEST_CASE("Channel model - Distance mappings", "[channel]")
{
    const ChannelParams p;
    // Root-finding oracle for zeta_NL(r1) = zeta_L(0.1) in the log domain
    const double target = std::log(path_loss(0.1, true, p));
    auto f = [&](double r) { return std::log(p.a_nlos) - p.alpha_nlos * std::log(r) - target; };
    boost::math::tools::eps_tolerance<double> tol(50);
    auto bracket = boost::math::tools::bisect(f, 1e-6, 10.0, tol);
    const double oracle = 0.5 * (bracket.first + bracket.second);
    CHECK_THAT(map_r1(0.1, p), WithinRel(oracle, 1e-12));
    CHECK_THAT(map_r1(0.1, p), WithinAbs(0.02154, 5e-6));

    for (double r : {0.001, 0.05, 0.1, 0.2, 0.3, 1.0, 7.0})
    {
        CHECK_THAT(map_r2(map_r1(r, p), p), WithinRel(r, 1e-13));
        CHECK_THAT(map_r1(map_r2(r, p), p), WithinRel(r, 1e-13));
        CHECK_THAT(path_loss(map_r1(r, p), false, p), WithinRel(path_loss(r, true, p), 1e-13));
        CHECK_THAT(path_loss(map_r2(r, p), true, p), WithinRel(path_loss(r, false, p), 1e-13));
    }
    CHECK(map_r1(0.2, p) > map_r1(0.1, p));
    CHECK(map_r2(0.2, p) > map_r2(0.1, p));

    const double y1 = breakpoint_y1(p);
    CHECK_THAT(y1, WithinRel(std::pow(p.d1, p.alpha_los / p.alpha_nlos) * std::pow(p.a_nlos / p.a_los, 1.0 / p.alpha_nlos), 1e-13));
    CHECK_THAT(map_r2(y1, p), WithinRel(0.3, 1e-13));
    CHECK_THAT(los_distance_for_gain(path_loss(0.2, true, p), p), WithinRel(0.2, 1e-13));
    CHECK_THAT(nlos_distance_for_gain(path_loss(0.2, false, p), p), WithinRel(0.2, 1e-13));
}

TEST_CASE("Channel model - Rician K", "[channel]")
{
    const RicianSpec spec;
    CHECK_THAT(rician_k(0.1, true, spec), WithinRel(10.0, 1e-13));
    CHECK_THAT(rician_k(0.0, true, spec), WithinRel(std::pow(10.0, 1.3), 1e-13));
    for (double r : {0.01, 0.3, 2.0})
    {
        CHECK(rician_k(r, false, spec) == 1.0);
        CHECK(rician_k(r, true, RicianSpec::rayleigh()) == 0.0);
        CHECK(rician_k(r, false, RicianSpec::rayleigh()) == 0.0);
        CHECK_THAT(rician_k(r, true, RicianSpec::fixed(7.0)), WithinRel(std::pow(10.0, 0.7), 1e-13));
    }
    CHECK(to_string(fading_mode_from_string("rayleigh")) == "rayleigh");
    CHECK_THROWS_AS(fading_mode_from_string("nakagami"), ConfigError);
}

TEST_CASE("Channel model - Fading moments", "[channel]")
{
    std::mt19937_64 rng(12345);
    const int n = 1000000;
    for (double k : {0.0, 10.0})
    {
        double s = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i)
        {
            const double h = sample_fading(k, rng);
            REQUIRE(h >= 0.0);
            s += h;
            s2 += h * h;
        }
        const double mean = s / n;
        const double var = s2 / n - mean * mean;
        CHECK_THAT(mean, WithinAbs(1.0, 0.01));
        CHECK_THAT(var, WithinAbs((1.0 + 2.0 * k) / ((1.0 + k) * (1.0 + k)), 0.005));
    }
    // Pure specular limit
    double var = 0.0;
    for (int i = 0; i < 10000; ++i)
    {
        const double h = sample_fading(1e8, rng);
        var += (h - 1.0) * (h - 1.0);
    }
    CHECK(var / 10000 < 1e-6);
}

TEST_CASE("Channel model - Fading CDF agrees with samples", "[channel]")
{
    // Kolmogorov-Smirnov distance against the series CDF and, independently,
    // against 2 (1 + K) h ~ noncentral chi-square with 2 dof and noncentrality 2K
    std::mt19937_64 rng(777);
    const int n = 100000;
    for (double k : {0.0, 1.0, 10.0, 20.0})
    {
        std::vector<double> h(n);
        for (auto &x : h)
            x = sample_fading(k, rng);
        std::sort(h.begin(), h.end());
        double ks_series = 0.0, ks_chi2 = 0.0;
        const boost::math::non_central_chi_squared chi2(2.0, 2.0 * k);
        for (int i = 0; i < n; i += 37)
        {
            const double lo = static_cast<double>(i) / n, hi = static_cast<double>(i + 1) / n;
            const double fs = rician_cdf(h[i], k);
            const double fc = boost::math::cdf(chi2, 2.0 * (1.0 + k) * h[i]);
            ks_series = std::max({ks_series, std::abs(fs - lo), std::abs(fs - hi)});
            ks_chi2 = std::max({ks_chi2, std::abs(fc - lo), std::abs(fc - hi)});
        }
        INFO("K = " << k);
        CHECK(ks_series < 0.01);
        CHECK(ks_chi2 < 0.01);
    }
}
