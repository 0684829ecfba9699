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

#include "scn/special_functions.hpp"
#include "scn/error.hpp"
#include "scn/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace scn
{

void SeriesControl::validate() const
{
    if (!(rel_tol > 0.0))
        throw ConfigError("SeriesControl: rel_tol must be positive");
    if (max_terms < 1)
        throw ConfigError("SeriesControl: max_terms must be at least 1");
}

namespace
{

bool is_nonpositive_integer(double x)
{
    return x <= 0.0 && x == std::floor(x);
}

// Ring buffer holding the magnitudes of the last three terms of a series
class LastThree
{
public:
    void push(double v)
    {
        buf_[pos_] = std::abs(v);
        pos_ = (pos_ + 1) % 3;
        if (count_ < 3)
            ++count_;
    }
    bool full() const { return count_ == 3; }
    double max() const { return std::max({buf_[0], buf_[1], buf_[2]}); }

private:
    std::array<double, 3> buf_{};
    int pos_ = 0;
    int count_ = 0;
};

struct SeriesSum
{
    double sum = 0.0;
    double max_term = 0.0;
    bool converged = false;
};

SeriesSum gauss_series(double a, double b, double c, double z, const SeriesControl &ctl)
{
    SeriesSum s;
    double term = 1.0;
    s.sum = 1.0;
    s.max_term = 1.0;
    LastThree last;
    last.push(term);
    for (int n = 0; n < ctl.max_terms; ++n)
    {
        const double dn = static_cast<double>(n);
        term *= (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * z;
        s.sum += term;
        s.max_term = std::max(s.max_term, std::abs(term));
        last.push(term);
        // With a positive term ratio r < 1 the neglected tail is about term r / (1 - r)
        const double r = (a + dn + 1.0) * (b + dn + 1.0) / ((c + dn + 1.0) * (dn + 2.0)) * z;
        const double tail = r > 0.0 && r < 1.0 ? std::max(1.0, r / (1.0 - r)) : 1.0;
        if (term == 0.0 || (last.full() && last.max() * tail < ctl.rel_tol * std::abs(s.sum)))
        {
            s.converged = true;
            return s;
        }
        if (!std::isfinite(s.sum))
            return s;
    }
    return s;
}

// Digits lost to cancellation are tolerated up to this ratio between the largest term and the sum
constexpr double kCancellationLimit = 1e3;

double gamma_sign(double x)
{
    if (x > 0.0)
        return 1.0;
    const double fl = std::floor(x);
    return (static_cast<long long>(-fl) % 2 == 1) ? -1.0 : 1.0;
}

// Gamma(n1) Gamma(n2) / (Gamma(d1) Gamma(d2)); zero when a denominator argument is a pole
double gamma_ratio(double n1, double n2, double d1, double d2)
{
    if (is_nonpositive_integer(d1) || is_nonpositive_integer(d2))
        return 0.0;
    const double lg = std::lgamma(n1) + std::lgamma(n2) - std::lgamma(d1) - std::lgamma(d2);
    return gamma_sign(n1) * gamma_sign(n2) * gamma_sign(d1) * gamma_sign(d2) * std::exp(lg);
}

double hyp2f1_pfaff(double a, double b, double c, double z, const SeriesControl &ctl)
{
    const double w = z / (z - 1.0);
    const SeriesSum s = gauss_series(a, c - b, c, w, ctl);
    const double scale = std::pow(1.0 - z, -a);
    if (!s.converged)
        throw NumericError("hyp2f1: Pfaff-transformed series did not converge", scale * s.sum);
    if (s.max_term > kCancellationLimit * std::abs(s.sum))
        throw NumericError("hyp2f1: cancellation in Pfaff-transformed series", scale * s.sum);
    return scale * s.sum;
}

double hyp2f1_inverse(double a, double b, double c, double z, const SeriesControl &ctl)
{
    const double diff = a - b;
    if (std::abs(diff - std::round(diff)) < 1e-9)
        throw NumericError("hyp2f1: 1/z connection formula needs non-integer a - b");
    const double iz = 1.0 / z;
    const double mz = -z;
    double total = 0.0;
    const double c1 = gamma_ratio(c, b - a, b, c - a);
    if (c1 != 0.0)
    {
        const SeriesSum s = gauss_series(a, a - c + 1.0, a - b + 1.0, iz, ctl);
        if (!s.converged || s.max_term > kCancellationLimit * std::abs(s.sum))
            throw NumericError("hyp2f1: 1/z series failed", s.sum);
        total += c1 * std::pow(mz, -a) * s.sum;
    }
    const double c2 = gamma_ratio(c, a - b, a, c - b);
    if (c2 != 0.0)
    {
        const SeriesSum s = gauss_series(b, b - c + 1.0, b - a + 1.0, iz, ctl);
        if (!s.converged || s.max_term > kCancellationLimit * std::abs(s.sum))
            throw NumericError("hyp2f1: 1/z series failed", s.sum);
        total += c2 * std::pow(mz, -b) * s.sum;
    }
    return total;
}

// Pfaff series are used while the transformed argument stays below this value
constexpr double kPfaffMaxArgument = 0.9;

} // namespace

double hyp2f1(double a, double b, double c, double z, const SeriesControl &ctl)
{
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(z))
        throw DomainError("hyp2f1: non-finite argument");
    if (z >= 1.0)
        throw DomainError("hyp2f1: z must be below 1 (branch point)");
    if (is_nonpositive_integer(c))
        throw DomainError("hyp2f1: c must not be a non-positive integer");
    if (z == 0.0)
        return 1.0;

    if (std::abs(z) < 0.5)
    {
        const SeriesSum s = gauss_series(a, b, c, z, ctl);
        if (!s.converged)
            throw NumericError("hyp2f1: Gauss series did not converge", s.sum);
        if (z > 0.0 || s.max_term <= kCancellationLimit * std::abs(s.sum))
            return s.sum;
        // alternating series with large terms: the Pfaff form has positive terms instead
        return hyp2f1_pfaff(a, b, c, z, ctl);
    }
    if (z > 0.0)
    {
        const SeriesSum s = gauss_series(a, b, c, z, ctl);
        if (!s.converged)
            throw NumericError("hyp2f1: Gauss series did not converge near z = 1", s.sum);
        return s.sum;
    }
    if (z / (z - 1.0) <= kPfaffMaxArgument)
        return hyp2f1_pfaff(a, b, c, z, ctl);
    try
    {
        return hyp2f1_inverse(a, b, c, z, ctl);
    }
    catch (const NumericError &)
    {
        return hyp2f1_pfaff(a, b, c, z, ctl);
    }
}

namespace
{

quad::Options fallback_quadrature()
{
    quad::Options opt;
    opt.abs_tol = 0.0;
    opt.rel_tol = 1e-13;
    opt.max_subdivisions = 2000;
    return opt;
}

double annulus_kernel_quadrature(double alpha, double beta, double t, double d, int p)
{
    // u = d v^(1/(beta+1)) makes the integrand bounded at the origin
    const double da = std::pow(d, alpha);
    const double e = alpha / (beta + 1.0);
    auto f = [&](double v) { return std::pow(1.0 + t * da * std::pow(v, e), -p); };
    const auto res = quad::integrate(f, 0.0, 1.0, fallback_quadrature());
    const double scale = std::pow(d, beta + 1.0) / (beta + 1.0);
    if (!res.converged || !std::isfinite(res.value))
        throw NumericError("annulus_kernel: quadrature fallback did not converge", scale * res.value);
    return scale * res.value;
}

double tail_kernel_quadrature(double alpha, double beta, double t, double d, int p)
{
    // u = d v^(-1/g), g = p alpha - beta - 1 maps [d, inf) onto (0, 1]
    const double g = p * alpha - beta - 1.0;
    auto f = [&](double v) {
        if (v <= 0.0)
            return 1.0;
        const double u = d * std::pow(v, -1.0 / g);
        return std::pow(1.0 + 1.0 / (t * std::pow(u, alpha)), -p);
    };
    const auto res = quad::integrate(f, 0.0, 1.0, fallback_quadrature());
    const double scale = std::pow(t, -p) * std::pow(d, -g) / g;
    if (!res.converged || !std::isfinite(res.value))
        throw NumericError("tail_kernel: quadrature fallback did not converge", scale * res.value);
    return scale * res.value;
}

} // namespace

double annulus_kernel(double alpha, double beta, double t, double d, int p, const SeriesControl &ctl)
{
    if (!(d > 0.0))
        throw DomainError("annulus_kernel: d must be positive");
    if (!(beta > -1.0))
        throw DomainError("annulus_kernel: beta must exceed -1");
    if (!(alpha > 0.0) || p < 1)
        throw DomainError("annulus_kernel: alpha must be positive and p >= 1");
    const double z = -t * std::pow(d, alpha);
    if (z >= 1.0)
        throw DomainError("annulus_kernel: pole of 1/(1 + t u^alpha) inside [0, d]");
    const double b = (beta + 1.0) / alpha;
    try
    {
        return std::pow(d, beta + 1.0) / (beta + 1.0) * hyp2f1(p, b, 1.0 + b, z, ctl);
    }
    catch (const NumericError &)
    {
        return annulus_kernel_quadrature(alpha, beta, t, d, p);
    }
}

double tail_kernel(double alpha, double beta, double t, double d, int p, const SeriesControl &ctl)
{
    if (!(d > 0.0))
        throw DomainError("tail_kernel: d must be positive");
    if (p < 1 || !(p * alpha > beta + 1.0))
        throw DomainError("tail_kernel: requires p alpha > beta + 1 (divergent tail)");
    if (t == 0.0)
        throw DomainError("tail_kernel: t must be non-zero");
    const double z = -1.0 / (t * std::pow(d, alpha));
    if (z >= 1.0)
        throw DomainError("tail_kernel: pole of 1/(1 + t u^alpha) inside [d, inf)");
    const double g = p * alpha - beta - 1.0;
    const double b = static_cast<double>(p) - (beta + 1.0) / alpha;
    try
    {
        return std::pow(t, -p) * std::pow(d, -g) / g * hyp2f1(p, b, b + 1.0, z, ctl);
    }
    catch (const NumericError &)
    {
        return tail_kernel_quadrature(alpha, beta, t, d, p);
    }
}

double rho1(double alpha, double beta, double t, double d, const SeriesControl &ctl)
{
    return annulus_kernel(alpha, beta, t, d, 1, ctl);
}

double rho2(double alpha, double beta, double t, double d, const SeriesControl &ctl)
{
    if (!(alpha > beta + 1.0))
        throw DomainError("rho2: requires alpha > beta + 1");
    return tail_kernel(alpha, beta, t, d, 1, ctl);
}

std::vector<double> rho1_taylor(double alpha, double beta, double t, double d, std::size_t order,
                                const SeriesControl &ctl)
{
    std::vector<double> c(order + 1);
    for (std::size_t n = 0; n <= order; ++n)
    {
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        c[n] = sign * annulus_kernel(alpha, beta + static_cast<double>(n) * alpha, t, d,
                                     static_cast<int>(n) + 1, ctl);
    }
    return c;
}

std::vector<double> rho2_taylor(double alpha, double beta, double t, double d, std::size_t order,
                                const SeriesControl &ctl)
{
    if (!(alpha > beta + 1.0))
        throw DomainError("rho2: requires alpha > beta + 1");
    std::vector<double> c(order + 1);
    for (std::size_t n = 0; n <= order; ++n)
    {
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        c[n] = sign * tail_kernel(alpha, beta + static_cast<double>(n) * alpha, t, d,
                                  static_cast<int>(n) + 1, ctl);
    }
    return c;
}

double series_coeff_j(int m, int k, double k_factor)
{
    if (m < 0 || k < 0 || m > k)
        throw DomainError("series_coeff_j: requires 0 <= m <= k");
    if (!(k_factor >= 0.0))
        throw DomainError("series_coeff_j: K must be non-negative");
    if (k_factor == 0.0)
        return k == 0 ? 1.0 : 0.0;
    // m! C(k, m) / (k!)^2 = 1 / (k! (k - m)!)
    const double lg = -k_factor + k * std::log(k_factor) - std::lgamma(k + 1.0) - std::lgamma(k - m + 1.0);
    return std::exp(lg);
}

double rician_cdf(double x, double k_factor, const SeriesControl &ctl)
{
    if (!(x >= 0.0))
        throw DomainError("rician_cdf: x must be non-negative");
    if (!(k_factor >= 0.0))
        throw DomainError("rician_cdf: K must be non-negative");
    if (std::isinf(x))
        return 1.0;
    const double y = (1.0 + k_factor) * x;
    if (y == 0.0)
        return 0.0;
    const double logy = std::log(y);
    double total = 0.0;
    LastThree last;
    for (int k = 0; k < ctl.max_terms; ++k)
    {
        double row = 0.0;
        for (int m = 0; m <= k; ++m)
        {
            const double j = series_coeff_j(m, k, k_factor);
            if (j == 0.0)
                continue;
            row += std::exp(std::log(j) + (k - m) * logy - y);
        }
        total += row;
        last.push(row);
        if (k_factor == 0.0)
            return std::clamp(1.0 - total, 0.0, 1.0);
        if (last.full() && last.max() < ctl.rel_tol * total)
            return std::clamp(1.0 - total, 0.0, 1.0);
    }
    throw NumericError("rician_cdf: series did not converge", std::clamp(1.0 - total, 0.0, 1.0));
}

double rician_pdf(double x, double k_factor, const SeriesControl &ctl)
{
    if (!(x >= 0.0))
        throw DomainError("rician_pdf: x must be non-negative");
    if (!(k_factor >= 0.0))
        throw DomainError("rician_pdf: K must be non-negative");
    const double scale = 1.0 + k_factor;
    const double y = scale * x;
    if (k_factor == 0.0 || y == 0.0)
        return scale * std::exp(-k_factor - y);
    const double lky = std::log(k_factor * y);
    double total = 0.0;
    LastThree last;
    for (int k = 0; k < ctl.max_terms; ++k)
    {
        const double term = std::exp(-k_factor - y + k * lky - 2.0 * std::lgamma(k + 1.0));
        total += term;
        last.push(term);
        if (last.full() && last.max() < ctl.rel_tol * total)
            return scale * total;
    }
    throw NumericError("rician_pdf: series did not converge", scale * total);
}

double rician_mgf(double m, double k_factor)
{
    const double a = 1.0 + k_factor;
    return a / (a + m) * std::exp(-k_factor * m / (a + m));
}

double rician_mgf_series_approx(double m, double k_factor)
{
    return std::exp(-k_factor) / (1.0 + m - k_factor);
}

std::size_t poisson_quantile(double mean, double tol, std::size_t max_n)
{
    if (!(mean > 0.0))
        return 0;
    // pmf far enough past the mean that the tail beyond is far below any tolerance we use
    const std::size_t span = static_cast<std::size_t>(mean + 40.0 * std::sqrt(mean) + 60.0);
    std::vector<double> pmf(span + 1);
    for (std::size_t j = 0; j <= span; ++j)
        pmf[j] = std::exp(-mean + j * std::log(mean) - std::lgamma(j + 1.0));
    double tail = 0.0;
    std::size_t n = span;
    // walk down while the tail above n stays below tol
    while (n > 0)
    {
        const double next = tail + pmf[n];
        if (next >= tol)
            break;
        tail = next;
        --n;
    }
    return std::min(n, max_n);
}

} // namespace scn
