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

#include "scn/jet.hpp"
#include "scn/error.hpp"

#include <algorithm>
#include <cmath>

namespace scn
{

Jet::Jet(std::vector<double> coefficients) : c_(std::move(coefficients))
{
    if (c_.empty())
        c_.push_back(0.0);
}

Jet Jet::constant(double value, std::size_t order)
{
    Jet j(order);
    j.c_[0] = value;
    return j;
}

Jet Jet::variable(double x0, std::size_t order)
{
    Jet j(order);
    j.c_[0] = x0;
    if (order >= 1)
        j.c_[1] = 1.0;
    return j;
}

double Jet::derivative(std::size_t n) const
{
    if (n > order())
        throw DomainError("Jet::derivative: order exceeds truncation order");
    return std::tgamma(static_cast<double>(n) + 1.0) * c_[n];
}

Jet &Jet::operator+=(const Jet &o)
{
    const std::size_t n = std::min(c_.size(), o.c_.size());
    c_.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        c_[j] += o.c_[j];
    return *this;
}

Jet &Jet::operator-=(const Jet &o)
{
    const std::size_t n = std::min(c_.size(), o.c_.size());
    c_.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        c_[j] -= o.c_[j];
    return *this;
}

Jet &Jet::operator*=(double s)
{
    for (auto &v : c_)
        v *= s;
    return *this;
}

Jet operator*(const Jet &a, const Jet &b)
{
    const std::size_t n = std::min(a.c_.size(), b.c_.size());
    Jet r(n - 1);
    for (std::size_t k = 0; k < n; ++k)
    {
        double s = 0.0;
        for (std::size_t j = 0; j <= k; ++j)
            s += a.c_[j] * b.c_[k - j];
        r.c_[k] = s;
    }
    return r;
}

double Jet::max_abs() const
{
    double m = 0.0;
    for (double v : c_)
        m = std::max(m, std::abs(v));
    return m;
}

Jet reciprocal(const Jet &a)
{
    const double a0 = a[0];
    if (a0 == 0.0 || !std::isfinite(a0))
        throw NumericError("reciprocal of a jet with zero or non-finite constant term");
    Jet r(a.order());
    r[0] = 1.0 / a0;
    for (std::size_t k = 1; k <= a.order(); ++k)
    {
        double s = 0.0;
        for (std::size_t j = 1; j <= k; ++j)
            s += a[j] * r[k - j];
        r[k] = -s / a0;
    }
    return r;
}

Jet exp(const Jet &a)
{
    // f' = a' f  =>  k f_k = sum_{j=1..k} j a_j f_{k-j}
    Jet r(a.order());
    r[0] = std::exp(a[0]);
    for (std::size_t k = 1; k <= a.order(); ++k)
    {
        double s = 0.0;
        for (std::size_t j = 1; j <= k; ++j)
            s += static_cast<double>(j) * a[j] * r[k - j];
        r[k] = s / static_cast<double>(k);
    }
    return r;
}

Jet log(const Jet &a)
{
    const double a0 = a[0];
    if (!(a0 > 0.0))
        throw NumericError("log of a jet with non-positive constant term");
    // a f' = a'  =>  k f_k a0 = k a_k - sum_{j=1..k-1} j f_j a_{k-j}
    Jet r(a.order());
    r[0] = std::log(a0);
    for (std::size_t k = 1; k <= a.order(); ++k)
    {
        double s = static_cast<double>(k) * a[k];
        for (std::size_t j = 1; j < k; ++j)
            s -= static_cast<double>(j) * r[j] * a[k - j];
        r[k] = s / (static_cast<double>(k) * a0);
    }
    return r;
}

Jet compose(std::span<const double> taylor, const Jet &g)
{
    const std::size_t order = g.order();
    Jet result = Jet::constant(taylor.empty() ? 0.0 : taylor[0], order);
    Jet delta = g;
    delta[0] = 0.0;
    Jet power = Jet::constant(1.0, order);
    const std::size_t terms = std::min(taylor.size(), order + 1);
    for (std::size_t n = 1; n < terms; ++n)
    {
        power = power * delta;
        result += power * taylor[n];
    }
    return result;
}

Jet reciprocal_linear(double d0, double m, std::size_t order)
{
    if (d0 == 0.0 || !std::isfinite(d0))
        throw NumericError("reciprocal_linear: zero or non-finite constant term");
    Jet r(order);
    const double q = -m / d0;
    double v = 1.0 / d0;
    for (std::size_t k = 0; k <= order; ++k)
    {
        r[k] = v;
        v *= q;
    }
    return r;
}

Jet exp_reciprocal_linear(double c, double d0, double m, std::size_t order)
{
    if (d0 == 0.0 || !std::isfinite(d0))
        throw NumericError("exp_reciprocal_linear: zero or non-finite constant term");
    Jet f(order);
    f[0] = std::exp(c / d0);
    if (order == 0)
        return f;
    const double d0sq = d0 * d0;
    f[1] = -c * m * f[0] / d0sq;
    for (std::size_t n = 1; n < order; ++n)
    {
        const double dn = static_cast<double>(n);
        f[n + 1] = -(c * m * f[n] + 2.0 * d0 * m * dn * f[n] + m * m * (dn - 1.0) * f[n - 1]) /
                   (d0sq * (dn + 1.0));
    }
    return f;
}

} // namespace scn
