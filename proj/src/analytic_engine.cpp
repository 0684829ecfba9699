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

#include "scn/analytic_engine.hpp"
#include "scn/error.hpp"
#include "scn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace scn
{

namespace
{
constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;
} // namespace

std::string to_string(Method m)
{
    switch (m)
    {
    case Method::ClosedForm:
        return "closed_form";
    case Method::NumericLaplace:
        return "numeric_laplace";
    case Method::MonteCarlo:
        return "monte_carlo";
    }
    return "unknown";
}

std::string to_string(Branch b)
{
    switch (b)
    {
    case Branch::L1:
        return "L1";
    case Branch::NL1a:
        return "NL1a";
    case Branch::NL1b:
        return "NL1b";
    case Branch::NL2:
        return "NL2";
    }
    return "unknown";
}

void EngineOptions::validate() const
{
    series.validate();
    if (!(inner_rel_tol > 0.0) || !(outer_abs_tol > 0.0) || !(outer_rel_tol > 0.0))
        throw ConfigError("EngineOptions: tolerances must be positive");
    if (inner_max_subdivisions < 1 || outer_max_subdivisions < 1)
        throw ConfigError("EngineOptions: subdivision limits must be positive");
    if (!(tail_mass > 0.0 && tail_mass < 1.0))
        throw ConfigError("EngineOptions: tail_mass must lie in (0, 1)");
    if (!(clamp_abort >= 0.0))
        throw ConfigError("EngineOptions: clamp_abort must be non-negative");
    if (!(d0_km >= 0.0))
        throw ConfigError("EngineOptions: d0_km must be non-negative (0 selects d1)");
    if (!(ase_pcov_floor > 0.0 && ase_pcov_floor < 1.0))
        throw ConfigError("EngineOptions: ase_pcov_floor must lie in (0, 1)");
}

// ---------------------------------------------------------------------------------------------
// Association-distance densities

double DistancePdfSet::f_los_1(double r) const
{
    const double d1 = params.d1;
    if (!(r > 0.0) || r > d1)
        return 0.0;
    const double r1 = map_r1(r, params);
    const double e = -kPi * lambda * r * r + 2.0 * kPi * lambda * (r * r * r - r1 * r1 * r1) / (3.0 * d1);
    return std::exp(e) * (1.0 - r / d1) * 2.0 * kPi * lambda * r;
}

double DistancePdfSet::f_nlos_1a(double r) const
{
    const double d1 = params.d1;
    if (!(r > 0.0) || r > y1)
        return 0.0;
    const double r2 = map_r2(r, params);
    const double e = -kPi * lambda * r2 * r2 + 2.0 * kPi * lambda * (r2 * r2 * r2 - r * r * r) / (3.0 * d1);
    return std::exp(e) * (r / d1) * 2.0 * kPi * lambda * r;
}

double DistancePdfSet::f_nlos_1b(double r) const
{
    const double d1 = params.d1;
    if (!(r > y1) || r > d1)
        return 0.0;
    const double e = -kPi * lambda * d1 * d1 / 3.0 - 2.0 * kPi * lambda * r * r * r / (3.0 * d1);
    return std::exp(e) * (r / d1) * 2.0 * kPi * lambda * r;
}

double DistancePdfSet::f_nlos_2(double r) const
{
    if (!(r > params.d1))
        return 0.0;
    return std::exp(-kPi * lambda * r * r) * 2.0 * kPi * lambda * r;
}

DistancePdfSet distance_pdfs(double lambda, const ChannelParams &params)
{
    if (!(lambda > 0.0))
        throw DomainError("distance_pdfs: lambda must be positive");
    params.validate();
    DistancePdfSet s;
    s.lambda = lambda;
    s.params = params;
    s.y1 = breakpoint_y1(params);
    return s;
}

void check_branch(const ServingLink &link, const ChannelParams &params)
{
    const double r = link.r;
    const double d1 = params.d1;
    const double y1 = breakpoint_y1(params);
    bool ok = false;
    switch (link.branch)
    {
    case Branch::L1:
        ok = r > 0.0 && r <= d1;
        break;
    case Branch::NL1a:
        ok = r > 0.0 && r <= y1;
        break;
    case Branch::NL1b:
        ok = r > y1 && r <= d1;
        break;
    case Branch::NL2:
        ok = r > d1;
        break;
    }
    if (!ok)
        throw DomainError("serving distance " + std::to_string(r) + " km outside branch " + to_string(link.branch));
}

// ---------------------------------------------------------------------------------------------
// Interference exponent

namespace
{

struct Exclusion
{
    double los = 0.0;
    double nlos = 0.0;
};

// Interferers must have a smaller path loss gain than the serving BS
Exclusion exclusion_radii(const ServingLink &link, const ChannelParams &params)
{
    if (link.is_los())
        return {link.r, map_r1(link.r, params)};
    return {map_r2(link.r, params), link.r};
}

Jet zero_jet(std::size_t order) { return Jet(order); }

// Jet of rho1(alpha, beta, t(e), d) with t(e) given as a jet
Jet rho1_jet(double alpha, double beta, double t0, const Jet &t, double d, const SeriesControl &ctl)
{
    if (d <= 0.0)
        return zero_jet(t.order());
    const auto taylor = rho1_taylor(alpha, beta, t0, d, t.order(), ctl);
    return compose(taylor, t);
}

Jet rho2_jet(double alpha, double beta, double t0, const Jet &t, double d, const SeriesControl &ctl)
{
    const auto taylor = rho2_taylor(alpha, beta, t0, d, t.order(), ctl);
    return compose(taylor, t);
}

// 1 - E[exp(-m0 (1 + e) h)] for unit-mean Rician h
Jet one_minus_mgf(double m0, double k, std::size_t order, Expectation mode)
{
    Jet out(order);
    if (mode == Expectation::Exact)
    {
        // MGF = (1+K) e^-K D^-1 exp(c/D), D = d0 + m0 e, c = K(1+K);
        // D^2 g' + m0 (D + c) g = 0 gives a three-term recurrence for the coefficients
        const double d0 = 1.0 + k + m0;
        const double c = k * (1.0 + k);
        const double em = std::expm1(-k * m0 / d0);
        const double g0 = (1.0 + k) / d0 * (1.0 + em);
        out[0] = m0 / d0 - (1.0 + k) / d0 * em;
        if (order == 0)
            return out;
        const double d0sq = d0 * d0;
        double gm1 = 0.0;
        double g = g0;
        for (std::size_t n = 0; n < order; ++n)
        {
            const double dn = static_cast<double>(n);
            const double next = -(((2.0 * dn + 1.0) * d0 * m0 + c * m0) * g + m0 * m0 * dn * gm1) / (d0sq * (dn + 1.0));
            out[n + 1] = -next;
            gm1 = g;
            g = next;
        }
        return out;
    }
    // e^-K / (1 + mu - K), mu = m0 / (1 + K) in the mean-(1 + K) frame
    const double mu0 = m0 / (1.0 + k);
    const double d = 1.0 - k + mu0;
    if (!(d > 0.0))
        throw NumericError("approximate expectation e^-K/(1+M-K) has a non-positive denominator");
    const double scale = std::exp(-k);
    const Jet rec = reciprocal_linear(d, mu0, order);
    out[0] = (mu0 - (k + std::expm1(-k))) / d;
    for (std::size_t n = 1; n <= order; ++n)
        out[n] = -scale * rec[n];
    return out;
}

struct RegionContext
{
    const ServingLink &link;
    double tau0;         // threshold of the unit-mean serving gain, (1 + K_s) gamma0
    double k_serving;
    double serving_gain; // linear path loss gain of the serving link
    std::size_t order;
    double lambda;
    const ChannelParams &params;
    const RicianSpec &spec;
    const EngineOptions &opt;
};

double interferer_k(const RegionContext &ctx, double u, bool los)
{
    if (ctx.opt.interferer_k == InterfererK::ServingLink)
        return ctx.k_serving;
    return rician_k(u, los, ctx.spec);
}

Jet integrate_jet(const std::function<Jet(double)> &f, double a, double b, const RegionContext &ctx,
                  const char *what)
{
    quad::Options qo;
    qo.abs_tol = 1e-15;
    qo.rel_tol = ctx.opt.inner_rel_tol;
    qo.max_subdivisions = ctx.opt.inner_max_subdivisions;
    auto norm = [](const Jet &j) { return j.max_abs(); };
    auto res = quad::integrate<Jet>(f, a, b, norm, qo);
    if (!res.converged)
        throw NumericError(std::string("interference quadrature did not converge: ") + what, res.value.value());
    for (double v : res.value.coefficients())
        if (!std::isfinite(v))
            throw NumericError(std::string("non-finite interference integral: ") + what);
    return res.value;
}

Jet numeric_region(InterferenceRegion region, const RegionContext &ctx)
{
    const ChannelParams &p = ctx.params;
    const Exclusion ex = exclusion_radii(ctx.link, p);
    const double d1 = p.d1;
    const double two_pi_lambda = 2.0 * kPi * ctx.lambda;
    const double m_scale = ctx.tau0 / ctx.serving_gain;
    const Expectation mode = ctx.opt.expectation;

    switch (region)
    {
    case InterferenceRegion::LosAnnulus: {
        if (ex.los >= d1)
            return zero_jet(ctx.order);
        auto f = [&](double u) {
            const double w = two_pi_lambda * (1.0 - u / d1) * u;
            const double m0 = m_scale * p.a_los * std::pow(u, -p.alpha_los);
            return one_minus_mgf(m0, interferer_k(ctx, u, true), ctx.order, mode) * w;
        };
        return integrate_jet(f, ex.los, d1, ctx, "LOS annulus");
    }
    case InterferenceRegion::NlosAnnulus: {
        if (ex.nlos >= d1)
            return zero_jet(ctx.order);
        auto f = [&](double u) {
            const double w = two_pi_lambda * (u / d1) * u;
            const double m0 = m_scale * p.a_nlos * std::pow(u, -p.alpha_nlos);
            return one_minus_mgf(m0, interferer_k(ctx, u, false), ctx.order, mode) * w;
        };
        return integrate_jet(f, ex.nlos, d1, ctx, "NLOS annulus");
    }
    case InterferenceRegion::NlosTail: {
        const double a = std::max(ex.nlos, d1);
        if (mode == Expectation::SeriesApprox)
        {
            // 1 - e^-K/(1-K) does not vanish far away: the tail integral diverges unless K = 0
            const double k_tail = interferer_k(ctx, a, false);
            if (k_tail != 0.0)
                throw NumericError("approximate expectation makes the NLOS tail integral divergent for K != 0");
        }
        // u = a / v maps [a, inf) onto (0, 1]
        auto f = [&](double v) {
            const double u = a / v;
            const double w = two_pi_lambda * u * a / (v * v);
            const double m0 = m_scale * p.a_nlos * std::pow(u, -p.alpha_nlos);
            return one_minus_mgf(m0, interferer_k(ctx, u, false), ctx.order, mode) * w;
        };
        return integrate_jet(f, 0.0, 1.0, ctx, "NLOS tail");
    }
    }
    return zero_jet(ctx.order);
}

Jet closed_region(InterferenceRegion region, const ServingLink &link, double gamma0, double k, std::size_t order,
                  double lambda, const ChannelParams &p, const EngineOptions &opt)
{
    const Exclusion ex = exclusion_radii(link, p);
    const double d1 = p.d1;
    const double d0 = opt.d0_km > 0.0 ? opt.d0_km : d1;
    const double gain = path_loss(link.r, link.is_los(), p);
    const double two_pi_lambda = 2.0 * kPi * lambda;
    const SeriesControl &ctl = opt.series;
    // Mean-(1+K) frame: M = gamma A_i u^-alpha_i / gain = q_i u^-alpha_i, and
    // 1 - e^-K/(1+M-K) = (1 + c u^alpha) / (1 + t u^alpha) with t = (1-K)/q, c = (1-K-e^-K)/q
    const double one_minus_k = 1.0 - k;
    const double c_num = -(k + std::expm1(-k));
    const Jet inv = reciprocal_linear(1.0, 1.0, order);

    auto make = [&](double a_i) {
        const double q0 = gamma0 * a_i / gain;
        struct TC
        {
            double t0, c0;
            Jet t, c;
        };
        return TC{one_minus_k / q0, c_num / q0, inv * (one_minus_k / q0), inv * (c_num / q0)};
    };

    switch (region)
    {
    case InterferenceRegion::LosAnnulus: {
        if (ex.los >= d1)
            return zero_jet(order);
        const double al = p.alpha_los;
        const auto tc = make(p.a_los);
        auto diff = [&](double beta) {
            return rho1_jet(al, beta, tc.t0, tc.t, d1, ctl) - rho1_jet(al, beta, tc.t0, tc.t, ex.los, ctl);
        };
        Jet total = diff(1.0) - diff(2.0) * (1.0 / d0);
        if (tc.c0 != 0.0)
            total += tc.c * (diff(al + 1.0) - diff(al + 2.0) * (1.0 / d0));
        return total * two_pi_lambda;
    }
    case InterferenceRegion::NlosAnnulus: {
        if (ex.nlos >= d1)
            return zero_jet(order);
        const double an = p.alpha_nlos;
        const auto tc = make(p.a_nlos);
        auto diff = [&](double beta) {
            return rho1_jet(an, beta, tc.t0, tc.t, d1, ctl) - rho1_jet(an, beta, tc.t0, tc.t, ex.nlos, ctl);
        };
        Jet total = diff(2.0);
        if (tc.c0 != 0.0)
            total += tc.c * diff(an + 2.0);
        return total * (two_pi_lambda / d0);
    }
    case InterferenceRegion::NlosTail: {
        const double a = std::max(ex.nlos, d1);
        const double an = p.alpha_nlos;
        const auto tc = make(p.a_nlos);
        // the c term violates alpha > beta + 1 and raises DomainError for K != 0
        Jet total = zero_jet(order);
        if (tc.c0 != 0.0)
            total += tc.c * rho2_jet(an, an + 1.0, tc.t0, tc.t, a, ctl);
        total += rho2_jet(an, 1.0, tc.t0, tc.t, a, ctl);
        return total * two_pi_lambda;
    }
    }
    return zero_jet(order);
}

void require_finite(const Jet &j, const char *what)
{
    for (double v : j.coefficients())
        if (!std::isfinite(v))
            throw NumericError(std::string(what) + ": non-finite result");
}

constexpr InterferenceRegion kRegions[] = {InterferenceRegion::NlosTail, InterferenceRegion::LosAnnulus,
                                           InterferenceRegion::NlosAnnulus};

void check_common(const ServingLink &link, double gamma0, double lambda, const ChannelParams &params)
{
    if (!(lambda > 0.0))
        throw DomainError("lambda must be positive");
    if (!(gamma0 > 0.0))
        throw DomainError("threshold must be positive");
    check_branch(link, params);
}

} // namespace

Jet exponent_closed_form(InterferenceRegion region, const ServingLink &link, double gamma0, double k_serving,
                         std::size_t order, double lambda, const ChannelParams &params, const EngineOptions &opt)
{
    check_common(link, gamma0, lambda, params);
    Jet j = closed_region(region, link, gamma0, k_serving, order, lambda, params, opt);
    require_finite(j, "closed-form interference exponent");
    return j;
}

Jet exponent_numeric(InterferenceRegion region, const ServingLink &link, double gamma0, double k_serving,
                     std::size_t order, double lambda, const ChannelParams &params, const RicianSpec &spec,
                     const EngineOptions &opt)
{
    check_common(link, gamma0, lambda, params);
    const RegionContext ctx{link,  (1.0 + k_serving) * gamma0, k_serving, path_loss(link.r, link.is_los(), params),
                            order, lambda,                     params,    spec,
                            opt};
    return numeric_region(region, ctx);
}

Jet laplace_closed_form(const ServingLink &link, double gamma0, double k_serving, std::size_t order, double lambda,
                        const ChannelParams &params, const EngineOptions &opt)
{
    Jet total(order);
    for (auto region : kRegions)
        total += exponent_closed_form(region, link, gamma0, k_serving, order, lambda, params, opt);
    return exp(-total);
}

Jet laplace_numeric_jet(const ServingLink &link, double gamma0, double k_serving, std::size_t order, double lambda,
                        const ChannelParams &params, const RicianSpec &spec, const EngineOptions &opt)
{
    Jet total(order);
    for (auto region : kRegions)
        total += exponent_numeric(region, link, gamma0, k_serving, order, lambda, params, spec, opt);
    return exp(-total);
}

double laplace_numeric(double s, const ServingLink &link, double lambda, const ChannelParams &params,
                       const RicianSpec &spec, const EngineOptions &opt)
{
    if (!(s >= 0.0))
        throw DomainError("laplace_numeric: s must be non-negative");
    check_branch(link, params);
    if (s == 0.0)
        return 1.0;
    // s P beta_i = tau0 beta_i / gain with tau0 = s P gain
    const double gain = path_loss(link.r, link.is_los(), params);
    const double tau0 = s * params.tx_power * gain;
    const double k_serving = rician_k(link.r, link.is_los(), spec);
    return laplace_numeric_jet(link, tau0 / (1.0 + k_serving), k_serving, 0, lambda, params, spec, opt).value();
}

// ---------------------------------------------------------------------------------------------
// Conditional and unconditional coverage

namespace
{

std::string describe(double lambda, double gamma, const ServingLink &link)
{
    std::ostringstream os;
    os.precision(6);
    os << " (lambda=" << lambda << ", gamma=" << gamma << ", branch=" << to_string(link.branch) << ", r=" << link.r
       << ")";
    return os.str();
}

ConditionalCoverage conditional_impl(const ServingLink &link, double gamma, double lambda, const ChannelParams &params,
                                     const RicianSpec &spec, const EngineOptions &opt, bool with_derivative)
{
    check_common(link, gamma, lambda, params);
    const double k = rician_k(link.r, link.is_los(), spec);
    const SeriesControl &ctl = opt.series;

    // Rows beyond the Poisson(K) quantile weigh less than rel_tol / 1000
    std::size_t n_max = 0;
    if (k > 0.0)
    {
        n_max = poisson_quantile(k, ctl.rel_tol * 1e-3, opt.max_jet_order) + 3;
        n_max = std::min<std::size_t>(n_max, static_cast<std::size_t>(ctl.max_terms));
    }
    const std::size_t order = n_max + (with_derivative ? 1 : 0);

    ConditionalCoverage out;
    out.order = order;
    Jet lap;
    switch (opt.laplace)
    {
    case LaplaceMethod::Numeric:
        lap = laplace_numeric_jet(link, gamma, k, order, lambda, params, spec, opt);
        out.method = Method::NumericLaplace;
        break;
    case LaplaceMethod::ClosedFormOnly:
        lap = laplace_closed_form(link, gamma, k, order, lambda, params, opt);
        require_finite(lap, "closed-form Laplace transform");
        out.method = Method::ClosedForm;
        break;
    case LaplaceMethod::ClosedFormWithFallback:
        try
        {
            lap = laplace_closed_form(link, gamma, k, order, lambda, params, opt);
            require_finite(lap, "closed-form Laplace transform");
            out.method = Method::ClosedForm;
        }
        catch (const std::domain_error &)
        {
            lap = laplace_numeric_jet(link, gamma, k, order, lambda, params, spec, opt);
            out.method = Method::NumericLaplace;
        }
        catch (const NumericError &)
        {
            lap = laplace_numeric_jet(link, gamma, k, order, lambda, params, spec, opt);
            out.method = Method::NumericLaplace;
        }
        break;
    }

    // sum_k sum_m J(m,k) tau^n (-1)^n L^(n)(tau), n = k - m; with c_n = tau^n L^(n) / n!
    // the summand is J(m,k) n! (-1)^n c_n. The gamma-derivative uses
    // tau d/dtau (tau^n L^(n)) = n! (n c_n + (n + 1) c_(n+1)).
    double total = 0.0;
    double dtotal = 0.0;
    double last[3] = {0.0, 0.0, 0.0};
    bool converged = (k == 0.0);
    for (std::size_t kk = 0; kk <= n_max; ++kk)
    {
        double row = 0.0;
        double drow = 0.0;
        for (std::size_t m = 0; m <= kk; ++m)
        {
            const std::size_t n = kk - m;
            const double j = series_coeff_j(static_cast<int>(m), static_cast<int>(kk), k);
            if (j == 0.0)
                continue;
            const double jn = j * std::exp(std::lgamma(static_cast<double>(n) + 1.0));
            const double sign = (n % 2 == 0) ? 1.0 : -1.0;
            row += jn * sign * lap[n];
            if (with_derivative)
                drow += jn * sign * (static_cast<double>(n) * lap[n] + static_cast<double>(n + 1) * lap[n + 1]);
        }
        total += row;
        dtotal += drow;
        last[kk % 3] = std::abs(row);
        if (k == 0.0)
            break;
        if (kk >= 2 && std::max({last[0], last[1], last[2]}) < ctl.rel_tol * std::abs(total))
        {
            converged = true;
            break;
        }
    }
    if (!converged && n_max >= opt.max_jet_order)
        throw NumericError("coverage series did not converge within the jet order cap" +
                               describe(lambda, gamma, link),
                           total);

    out.log_derivative = dtotal;
    if (!std::isfinite(total))
        throw NumericError("non-finite conditional coverage" + describe(lambda, gamma, link));
    if (total < -opt.clamp_abort || total > 1.0 + opt.clamp_abort)
        throw NumericError("conditional coverage " + std::to_string(total) + " outside [0, 1]" +
                               describe(lambda, gamma, link),
                           total);
    if (total < 0.0 || total > 1.0)
    {
        out.clamped = true;
        total = std::clamp(total, 0.0, 1.0);
    }
    out.value = total;
    return out;
}

struct OuterPiece
{
    Branch branch;
    double a, b;
    bool log_substitution;
};

CoveragePoint coverage_impl(double lambda, double gamma, const ChannelParams &params, const RicianSpec &spec,
                            const EngineOptions &opt, bool with_derivative)
{
    if (!(lambda > 0.0))
        throw DomainError("coverage_probability: lambda must be positive");
    if (!(gamma > 0.0))
        throw DomainError("coverage_probability: gamma must be positive");
    params.validate();
    opt.validate();

    const DistancePdfSet pdfs = distance_pdfs(lambda, params);
    const double d1 = params.d1;
    const double r_tail = std::sqrt(-std::log(opt.tail_mass) / (kPi * lambda));

    // Log substitution on pieces starting at 0; mass below 1e-9 of the piece length is below any tolerance
    std::vector<OuterPiece> pieces = {{Branch::L1, d1 * 1e-9, d1, true},
                                      {Branch::NL1a, pdfs.y1 * 1e-9, pdfs.y1, true},
                                      {Branch::NL1b, pdfs.y1, d1, false}};
    if (r_tail > d1)
        pieces.push_back({Branch::NL2, d1, r_tail, false});

    CoveragePoint pt;
    pt.lambda = lambda;
    pt.gamma = gamma;
    pt.method = opt.laplace == LaplaceMethod::Numeric ? Method::NumericLaplace : Method::ClosedForm;

    auto density = [&](Branch b, double r) {
        switch (b)
        {
        case Branch::L1:
            return pdfs.f_los_1(r);
        case Branch::NL1a:
            return pdfs.f_nlos_1a(r);
        case Branch::NL1b:
            return pdfs.f_nlos_1b(r);
        case Branch::NL2:
            return pdfs.f_nlos_2(r);
        }
        return 0.0;
    };

    double p_total = 0.0;
    double d_total = 0.0;
    for (const auto &piece : pieces)
    {
        auto integrand = [&](double x) {
            const double r = piece.log_substitution ? std::exp(x) : x;
            const double jac = piece.log_substitution ? r : 1.0;
            Jet v(1);
            const double f = density(piece.branch, r) * jac;
            // negligible density: skip the expensive inner evaluation
            if (!(f > 1e-16))
                return v;
            const ServingLink link{r, piece.branch};
            ConditionalCoverage cc;
            try
            {
                cc = conditional_impl(link, gamma, lambda, params, spec, opt, with_derivative);
            }
            catch (const NumericError &e)
            {
                const std::string msg = e.what();
                if (msg.find("(lambda=") != std::string::npos)
                    throw;
                throw NumericError(msg + describe(lambda, gamma, link), e.partial());
            }
            ++pt.evaluations;
            if (cc.clamped)
                ++pt.clamp_count;
            if (cc.method == Method::NumericLaplace)
            {
                if (opt.laplace == LaplaceMethod::ClosedFormWithFallback)
                    ++pt.fallback_count;
                pt.method = Method::NumericLaplace;
            }
            v[0] = cc.value * f;
            v[1] = cc.log_derivative * f;
            return v;
        };
        quad::Options qo;
        qo.abs_tol = opt.outer_abs_tol;
        qo.rel_tol = opt.outer_rel_tol;
        qo.max_subdivisions = opt.outer_max_subdivisions;
        const double lo = piece.log_substitution ? std::log(piece.a) : piece.a;
        const double hi = piece.log_substitution ? std::log(piece.b) : piece.b;
        auto norm = [](const Jet &j) { return j.max_abs(); };
        auto res = quad::integrate<Jet>(integrand, lo, hi, norm, qo);
        if (!res.converged)
            throw NumericError("outer coverage integral did not converge on piece " + to_string(piece.branch),
                               res.value.value());
        p_total += res.value[0];
        d_total += res.value[1];
        pt.est_error += res.error;
    }
    pt.p_cov = std::clamp(p_total, 0.0, 1.0);
    if (with_derivative)
        pt.pdf = -d_total / gamma;
    return pt;
}

// Decade grid in ln(gamma) from gamma0 until p_cov falls below the floor
struct AseGrid
{
    std::vector<double> v;
    std::vector<double> p;
};

template <typename PFn>
AseGrid ase_grid(double gamma0, const EngineOptions &opt, PFn &&pcov)
{
    AseGrid g;
    const double step = std::log(10.0);
    double v = std::log(gamma0);
    for (int j = 0; j <= 24; ++j, v += step)
    {
        g.v.push_back(v);
        g.p.push_back(pcov(std::exp(v)));
        if (g.p.back() < opt.ase_pcov_floor)
            return g;
    }
    throw NumericError("ase: coverage does not fall below the floor within 24 decades of gamma0");
}

double power_law_tail(const AseGrid &g)
{
    const std::size_t n = g.p.size();
    const double pg = g.p[n - 1];
    if (pg <= 0.0)
        return 0.0;
    if (n < 2 || g.p[n - 2] <= pg)
        return std::numeric_limits<double>::infinity();
    const double slope = std::log(g.p[n - 2] / pg) / (g.v[n - 1] - g.v[n - 2]);
    // int_G^inf p(G) (x/G)^-slope / (1 + x) dx <= p(G) / slope
    return pg / slope;
}

} // namespace

ConditionalCoverage conditional_coverage(const ServingLink &link, double gamma, double lambda,
                                         const ChannelParams &params, const RicianSpec &spec,
                                         const EngineOptions &opt)
{
    return conditional_impl(link, gamma, lambda, params, spec, opt, false);
}

CoveragePoint coverage_probability(double lambda, double gamma, const ChannelParams &params,
                                   const RicianSpec &spec, const EngineOptions &opt)
{
    return coverage_impl(lambda, gamma, params, spec, opt, false);
}

CoveragePoint coverage_pdf(double lambda, double gamma, const ChannelParams &params, const RicianSpec &spec,
                           const EngineOptions &opt)
{
    return coverage_impl(lambda, gamma, params, spec, opt, true);
}

AseResult ase(double lambda, double gamma0, const ChannelParams &params, const RicianSpec &spec,
              const EngineOptions &opt)
{
    if (!(gamma0 > 0.0))
        throw DomainError("ase: gamma0 must be positive");
    AseResult out;
    out.lambda = lambda;
    out.gamma0 = gamma0;
    out.method = Method::ClosedForm;

    auto eval = [&](double g) {
        const CoveragePoint pt = coverage_probability(lambda, g, params, spec, opt);
        ++out.evaluations;
        out.clamp_count += pt.clamp_count;
        out.fallback_count += pt.fallback_count;
        if (pt.method == Method::NumericLaplace)
            out.method = Method::NumericLaplace;
        return pt;
    };
    const CoveragePoint p0 = eval(gamma0);
    out.est_error = std::log2(1.0 + gamma0) * p0.est_error;
    const AseGrid grid = ase_grid(gamma0, opt, [&](double g) { return g == gamma0 ? p0.p_cov : eval(g).p_cov; });

    // int p(g) / (1 + g) dg in v = ln g, decade by decade
    double integral = 0.0;
    quad::Options qo;
    qo.abs_tol = 10.0 * opt.outer_abs_tol;
    qo.rel_tol = 1e-7;
    qo.max_subdivisions = 50;
    for (std::size_t j = 0; j + 1 < grid.v.size(); ++j)
    {
        auto f = [&](double v) {
            const double g = std::exp(v);
            return eval(g).p_cov * g / (1.0 + g);
        };
        const auto res = quad::integrate(f, grid.v[j], grid.v[j + 1], qo);
        integral += res.value;
        out.est_error += res.error / kLn2;
    }
    out.gamma_max = std::exp(grid.v.back());
    out.tail_bound = lambda * power_law_tail(grid) / kLn2;
    out.ase = lambda * (std::log2(1.0 + gamma0) * p0.p_cov + integral / kLn2);
    out.est_error *= lambda;
    return out;
}

AseResult ase_direct(double lambda, double gamma0, const ChannelParams &params, const RicianSpec &spec,
                     const EngineOptions &opt)
{
    if (!(gamma0 > 0.0))
        throw DomainError("ase_direct: gamma0 must be positive");
    AseResult out;
    out.lambda = lambda;
    out.gamma0 = gamma0;
    out.method = Method::ClosedForm;

    auto eval = [&](double g) {
        const CoveragePoint pt = coverage_pdf(lambda, g, params, spec, opt);
        ++out.evaluations;
        out.clamp_count += pt.clamp_count;
        out.fallback_count += pt.fallback_count;
        if (pt.method == Method::NumericLaplace)
            out.method = Method::NumericLaplace;
        return pt;
    };
    const AseGrid grid = ase_grid(gamma0, opt, [&](double g) { return eval(g).p_cov; });

    // int log2(1 + g) f(g) dg = int log2(1 + e^v) f(e^v) e^v dv
    double integral = 0.0;
    quad::Options qo;
    qo.abs_tol = 10.0 * opt.outer_abs_tol;
    qo.rel_tol = 1e-7;
    qo.max_subdivisions = 50;
    for (std::size_t j = 0; j + 1 < grid.v.size(); ++j)
    {
        auto f = [&](double v) {
            const double g = std::exp(v);
            return std::log2(1.0 + g) * eval(g).pdf * g;
        };
        const auto res = quad::integrate(f, grid.v[j], grid.v[j + 1], qo);
        integral += res.value;
        out.est_error += res.error;
    }
    out.gamma_max = std::exp(grid.v.back());
    out.tail_bound = lambda * power_law_tail(grid) / kLn2;
    out.ase = lambda * integral;
    out.est_error *= lambda;
    return out;
}

} // namespace scn
