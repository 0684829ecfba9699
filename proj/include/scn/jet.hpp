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

#ifndef SCN_JET_HPP
#define SCN_JET_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace scn
{

/// Truncated Taylor series f(x0 + e) = sum_j c_j e^j, j = 0..order.
///
/// Arithmetic is exact up to the truncation order, so derivatives of arbitrary order
/// of a composite expression come out of one forward evaluation:
/// d^n f / dx^n at x0 equals n! * c_n.
class Jet
{
public:
    Jet() : c_(1, 0.0) {}
    explicit Jet(std::size_t order) : c_(order + 1, 0.0) {}
    explicit Jet(std::vector<double> coefficients);

    static Jet constant(double value, std::size_t order);
    // The identity map x -> x expanded around x0
    static Jet variable(double x0, std::size_t order);

    std::size_t order() const { return c_.size() - 1; }
    double value() const { return c_[0]; }
    double operator[](std::size_t j) const { return c_[j]; }
    double &operator[](std::size_t j) { return c_[j]; }
    std::span<const double> coefficients() const { return c_; }

    // n-th derivative at the expansion point
    double derivative(std::size_t n) const;

    Jet &operator+=(const Jet &o);
    Jet &operator-=(const Jet &o);
    Jet &operator*=(double s);

    friend Jet operator+(Jet a, const Jet &b) { return a += b; }
    friend Jet operator-(Jet a, const Jet &b) { return a -= b; }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator-(Jet a) { return a *= -1.0; }
    friend Jet operator*(const Jet &a, const Jet &b);
    friend Jet operator+(Jet a, double s)
    {
        a.c_[0] += s;
        return a;
    }

    // Largest absolute coefficient
    double max_abs() const;

private:
    std::vector<double> c_;
};

Jet reciprocal(const Jet &a);
Jet exp(const Jet &a);
Jet log(const Jet &a);

// f(g) where `taylor` holds the Taylor coefficients of f around g.value()
Jet compose(std::span<const double> taylor, const Jet &g);

// 1 / (d0 + m e), exact
Jet reciprocal_linear(double d0, double m, std::size_t order);

// exp(c / (d0 + m e)) by the three-term recurrence of (d0 + m e)^2 f' = -c m f.
// O(order) instead of the O(order^2) generic exp; the recurrence is the dominant one
// for c, d0, m > 0 and is forward stable there.
Jet exp_reciprocal_linear(double c, double d0, double m, std::size_t order);

} // namespace scn

#endif
