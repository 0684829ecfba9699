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

#include "oracles.hpp"
#include "scn/error.hpp"
#include "scn/special_functions.hpp"

#include <boost/math/distributions/non_central_chi_squared.hpp>

#include <cmath>
#include <random>

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace scn;

TEST_CASE("Special functions - SeriesControl", "[special]")
{
    CHECK_NOTHROW(SeriesControl{}.validate());
    CHECK_THROWS_AS((SeriesControl{0.0, 10}.validate()), ConfigError);
    CHECK_THROWS_AS((SeriesControl{1e-10, 0}.validate()), ConfigError);
}

TEST_CASE("Special functions - hyp2f1 closed forms", "[special]")
{
    CHECK(hyp2f1(1, 1, 2, 0) == 1.0);
    CHECK_THAT(hyp2f1(1, 1, 2, -1), WithinRel(std::log(2.0), 1e-9));
    // 2F1(1, 1; 2; z) = -ln(1 - z) / z on every branch of the implementation
    for (double z : {-5.0, -3.0, -0.7, -0.3, 0.2, 0.6, 0.95})
        CHECK_THAT(hyp2f1(1, 1, 2, z), WithinRel(-std::log1p(-z) / z, 1e-9));
    // 2F1(1, 1/2; 3/2; -x^2) = atan(x) / x, far out on the negative axis
    for (double z : {-1e6, -1e4, -200.0, -30.0, -3.0})
        CHECK_THAT(hyp2f1(1, 0.5, 1.5, z), WithinRel(std::atan(std::sqrt(-z)) / std::sqrt(-z), 1e-9));
    // 2F1(a, b; b; z) = (1 - z)^-a
    CHECK_THAT(hyp2f1(0.7, 1.3, 1.3, -4.0), WithinRel(std::pow(5.0, -0.7), 1e-11));
    // Polynomial case
    CHECK_THAT(hyp2f1(-2, 1.5, 3, 0.4), WithinRel(1.0 - 2.0 * 1.5 / 3.0 * 0.4 + 1.5 * 2.5 / (3.0 * 4.0) * 0.16, 1e-13));

    CHECK_THROWS_AS(hyp2f1(1, 1, 2, 1.0), DomainError);
    CHECK_THROWS_AS(hyp2f1(1, 1, -2, 0.1), DomainError);
    CHECK_THROWS_AS(hyp2f1(1, 1, 2, std::nan("")), DomainError);
}

TEST_CASE("Special functions - hyp2f1 against extended precision", "[special]")
{
    CHECK_THAT(hyp2f1(1, 0.8, 1.8, -5), WithinRel(oracle::hyp2f1_reference(1, 0.8, 1.8, -5), 1e-10));

    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 150; ++i)
    {
        double a, b, c, z;
        if (i % 3 == 0)
        {
            // General positive parameters inside the unit disk
            a = 0.1 + 3.0 * U(rng), b = 0.1 + 3.0 * U(rng), c = 0.5 + 4.0 * U(rng), z = -0.95 + 1.85 * U(rng);
        }
        else
        {
            // The rho1 / rho2 families: 2F1(1, s; 1 + s; z)
            a = 1.0, b = 0.05 + 1.9 * U(rng), c = 1.0 + b;
            z = i % 3 == 1 ? -std::pow(10.0, -2.0 + 5.0 * U(rng)) : -0.9 + 1.8 * U(rng);
        }
        INFO("a=" << a << " b=" << b << " c=" << c << " z=" << z);
        CHECK_THAT(hyp2f1(a, b, c, z), WithinRel(oracle::hyp2f1_reference(a, b, c, z), 1e-9));
    }
}

TEST_CASE("Special functions - hyp2f1 non-convergence carries the partial sum", "[special]")
{
    // Integer a - b rules out the 1/z formula and the Pfaff series needs far more than 500 terms
    try
    {
        hyp2f1(1, 1, 2, -1e4);
        FAIL("expected NumericError");
    }
    catch (const NumericError &e)
    {
        CHECK(std::isfinite(e.partial()));
    }

    SeriesControl tight{1e-15, 3};
    try
    {
        hyp2f1(1, 1, 2, 0.4, tight);
        FAIL("expected NumericError");
    }
    catch (const NumericError &e)
    {
        CHECK(std::isfinite(e.partial()));
        CHECK(e.partial() > 1.0);
    }
}

TEST_CASE("Special functions - rho1 and rho2", "[special]")
{
    CHECK_THAT(rho1(3.75, 1.0, 0.0, 0.3), WithinRel(0.09 / 2.0, 1e-14));
    CHECK_THAT(rho1(3.75, 1.0, 2.0, 0.3), WithinRel(oracle::rho1_quadrature(3.75, 1.0, 2.0, 0.3), 1e-10));
    CHECK_THAT(rho2(3.75, 1.0, 5.0, 0.3), WithinRel(oracle::rho2_quadrature(3.75, 1.0, 5.0, 0.3), 1e-9));

    double prev = rho1(2.09, 1.0, 0.0, 0.3);
    for (double t = 0.5; t < 50.0; t *= 1.7)
    {
        const double v = rho1(2.09, 1.0, t, 0.3);
        CHECK(v < prev);
        prev = v;
    }
    // Vanishing tail and bounded t rho2
    CHECK(rho2(3.75, 1.0, 5.0, 10.0) < rho2(3.75, 1.0, 5.0, 1.0));
    CHECK(rho2(3.75, 1.0, 5.0, 1e6) < 1e-11);
    for (double t : {1e2, 1e4, 1e6, 1e8})
        CHECK(t * rho2(3.75, 1.0, t, 0.3) <= std::pow(0.3, -1.75) / 1.75 * (1.0 + 1e-9));

    CHECK_THROWS_AS(rho2(2.0, 1.0, 1.0, 0.3), DomainError);
    CHECK_THROWS_AS(rho2(3.75, 1.0, 0.0, 0.3), DomainError);

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 100; ++i)
    {
        const double alpha = 2.0 + 2.0 * U(rng);
        const double beta = -0.5 + 2.5 * U(rng);
        const double d = 0.01 + 1.0 * U(rng);
        // |t| d^alpha < 1 with either sign
        const double t = (2.0 * U(rng) - 1.0) * 0.99 / std::pow(d, alpha);
        INFO("alpha=" << alpha << " beta=" << beta << " t=" << t << " d=" << d);
        CHECK_THAT(rho1(alpha, beta, t, d), WithinRel(oracle::rho1_quadrature(alpha, beta, t, d), 1e-8));
        if (t > 0.0 && alpha > beta + 1.0)
            CHECK_THAT(rho2(alpha, beta, t, d), WithinRel(oracle::rho2_quadrature(alpha, beta, t, d), 1e-8));
    }
}

TEST_CASE("Special functions - Taylor coefficients of rho kernels", "[special]")
{
    // Coefficient n of rho1 in t is (-1)^n int u^(beta + n alpha) (1 + t u^alpha)^-(n+1) du
    const auto c = rho1_taylor(3.75, 1.0, 2.0, 0.3, 3);
    REQUIRE(c.size() == 4);
    CHECK_THAT(c[0], WithinRel(rho1(3.75, 1.0, 2.0, 0.3), 1e-13));
    auto moment = [](int n) {
        boost::math::quadrature::tanh_sinh<double> ts;
        return ts.integrate([n](double u) { return std::pow(u, 1.0 + n * 3.75) / std::pow(1.0 + 2.0 * std::pow(u, 3.75), n + 1); }, 0.0, 0.3, 1e-15);
    };
    for (int n = 1; n <= 3; ++n)
        CHECK_THAT(c[n], WithinRel((n % 2 ? -1.0 : 1.0) * moment(n), 1e-9));
}

TEST_CASE("Special functions - J coefficients", "[special]")
{
    CHECK(series_coeff_j(0, 0, 0.0) == 1.0);
    for (int k = 1; k < 5; ++k)
        for (int m = 0; m <= k; ++m)
            CHECK(series_coeff_j(m, k, 0.0) == 0.0);
    CHECK_THAT(series_coeff_j(0, 1, 1.0), WithinRel(std::exp(-1.0), 1e-14));
    // Direct evaluation with factorials where they do not overflow
    CHECK_THAT(series_coeff_j(2, 5, 3.0),
               WithinRel(std::exp(-3.0) * std::pow(3.0, 5) * 2.0 * 10.0 / (120.0 * 120.0), 1e-13));
    CHECK(std::isfinite(series_coeff_j(150, 300, 20.0)));
    CHECK_THROWS_AS(series_coeff_j(3, 2, 1.0), DomainError);
}

TEST_CASE("Special functions - Rician CDF", "[special]")
{
    CHECK_THAT(rician_cdf(1.0, 0.0), WithinRel(1.0 - std::exp(-1.0), 1e-13));
    for (double k : {0.0, 1.0, 5.0, 10.0, 20.0})
    {
        INFO("K = " << k);
        CHECK(rician_cdf(0.0, k) == 0.0);
        CHECK(rician_cdf(30.0, k) > 1.0 - 1e-9);
        double prev = 0.0;
        const boost::math::non_central_chi_squared chi2(2.0, 2.0 * k);
        for (double x = 0.05; x < 4.0; x += 0.05)
        {
            const double v = rician_cdf(x, k);
            CHECK(v >= prev);
            prev = v;
            // Marcum-Q through the noncentral chi-square and brute-force Bessel integration
            CHECK_THAT(v, WithinAbs(boost::math::cdf(chi2, 2.0 * (1.0 + k) * x), 1e-9));
            CHECK_THAT(v, WithinAbs(oracle::rician_cdf_bessel(x, k), 1e-9));
            // Central difference of the CDF against the series density
            const double h = 1e-5;
            const double fd = (rician_cdf(x + h, k) - rician_cdf(x - h, k)) / (2.0 * h);
            CHECK_THAT(fd, WithinAbs(rician_pdf(x, k), 1e-6));
        }
    }
    CHECK_THROWS_AS(rician_cdf(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(rician_cdf(1.0, -1.0), DomainError);
}

TEST_CASE("Special functions - Rician MGF", "[special]")
{
    for (double k : {0.0, 1.0, 10.0})
        for (double m : {0.1, 1.0, 7.0})
        {
            auto f = [&](double x) { return std::exp(-m * x) * oracle::rician_pdf_bessel(x, k); };
            const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 80.0, 15, 1e-13);
            CHECK_THAT(rician_mgf(m, k), WithinRel(ref, 1e-9));
        }
    // The series approximation equals the MGF only at K = 0
    CHECK_THAT(rician_mgf_series_approx(2.0, 0.0), WithinRel(rician_mgf(2.0, 0.0), 1e-14));
    CHECK(std::abs(rician_mgf_series_approx(0.0, 0.5) - 1.0) > 0.1);
}

TEST_CASE("Special functions - Poisson quantile", "[special]")
{
    CHECK(poisson_quantile(0.0, 1e-12, 100) == 0);
    // P[Poisson(1) > n] < 1e-6 first at n = 9
    CHECK(poisson_quantile(1.0, 1e-6, 100) == 9);
    CHECK(poisson_quantile(1000.0, 1e-12, 50) == 50);
}
