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

#ifndef SCN_QUADRATURE_HPP
#define SCN_QUADRATURE_HPP

// Globally adaptive 7/15-point Gauss-Kronrod quadrature on finite intervals.
// The integrand may return any value type V closed under `+`, `-` and scaling by double
// (plain doubles, or Taylor jets when a whole derivative stack is integrated at once);
// the caller supplies a norm used for error control.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace scn::quad
{

struct Options
{
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_subdivisions = 400;
};

template <typename V>
struct Result
{
    V value;
    double error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

namespace detail
{
// Kronrod abscissae (positive half) and weights; every odd index is a Gauss node
inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename V>
struct Panel
{
    double a, b;
    V value;
    double error;
    bool operator<(const Panel &o) const { return error < o.error; }
};

template <typename V, typename F, typename Norm>
Panel<V> gk15(F &f, double a, double b, Norm &norm)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    V fc = f(c);
    V kronrod = fc * wgk[7];
    V gauss = fc * wg[3];
    for (int j = 0; j < 7; ++j)
    {
        const double dx = h * xgk[j];
        V f1 = f(c - dx);
        V f2 = f(c + dx);
        V sum = f1 + f2;
        kronrod = kronrod + sum * wgk[j];
        if (j % 2 == 1)
            gauss = gauss + sum * wg[j / 2];
    }
    kronrod = kronrod * h;
    gauss = gauss * h;
    const double err = norm(kronrod - gauss);
    return Panel<V>{a, b, kronrod, err};
}
} // namespace detail

// Integrate a V-valued integrand on [a, b]. Never throws on non-convergence: inspect `converged`.
template <typename V, typename F, typename Norm>
Result<V> integrate(F &&f, double a, double b, Norm &&norm, const Options &opt = {})
{
    Result<V> res;
    if (a == b)
    {
        res.value = f(a) * 0.0;
        res.converged = true;
        return res;
    }
    std::vector<detail::Panel<V>> heap;
    heap.push_back(detail::gk15<V>(f, a, b, norm));
    res.evaluations = 15;
    V total = heap.front().value;
    double err = heap.front().error;
    int splits = 0;
    while (true)
    {
        const double target = std::max(opt.abs_tol, opt.rel_tol * norm(total));
        if (err <= target || splits >= opt.max_subdivisions)
            break;
        std::pop_heap(heap.begin(), heap.end());
        auto worst = std::move(heap.back());
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        ++splits;
        if (!(mid > worst.a && mid < worst.b))
        {
            // interval exhausted at machine precision; keep its estimate
            err -= worst.error;
            worst.error = 0.0;
            heap.push_back(std::move(worst));
            std::push_heap(heap.begin(), heap.end());
            continue;
        }
        auto left = detail::gk15<V>(f, worst.a, mid, norm);
        auto right = detail::gk15<V>(f, mid, worst.b, norm);
        res.evaluations += 30;
        total = total + (left.value + right.value - worst.value);
        err += left.error + right.error - worst.error;
        heap.push_back(std::move(left));
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(std::move(right));
        std::push_heap(heap.begin(), heap.end());
    }
    // Final sums from scratch to drop the incremental round-off
    total = heap.front().value;
    err = heap.front().error;
    for (std::size_t i = 1; i < heap.size(); ++i)
    {
        total = total + heap[i].value;
        err += heap[i].error;
    }
    res.value = total;
    res.error = err;
    res.converged = err <= std::max(opt.abs_tol, opt.rel_tol * norm(total));
    return res;
}

// Scalar convenience overload
template <typename F>
Result<double> integrate(F &&f, double a, double b, const Options &opt = {})
{
    auto absnorm = [](double v) { return std::abs(v); };
    return integrate<double>(std::forward<F>(f), a, b, absnorm, opt);
}

} // namespace scn::quad

#endif
