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

#ifndef SCN_ANALYTIC_ENGINE_HPP
#define SCN_ANALYTIC_ENGINE_HPP

#include "scn/channel_model.hpp"
#include "scn/jet.hpp"
#include "scn/special_functions.hpp"

#include <cstddef>
#include <string>

namespace scn
{

enum class Method
{
    ClosedForm,
    NumericLaplace,
    MonteCarlo
};

std::string to_string(Method m);

// Association-distance densities of the typical UE for the linear LOS probability.
// Serving BS is LOS at r <= d1, NLOS at r <= y1 (competing with LOS BSs inside d1),
// NLOS at y1 < r <= d1 (no LOS BS can win), or NLOS beyond d1.
struct DistancePdfSet
{
    double lambda = 0.0;
    double y1 = 0.0;
    ChannelParams params;

    double f_los_1(double r) const;
    // LOS BSs beyond d1 do not exist, so this piece is identically zero
    double f_los_2(double) const { return 0.0; }
    double f_nlos_1a(double r) const;
    double f_nlos_1b(double r) const;
    double f_nlos_2(double r) const;
};

DistancePdfSet distance_pdfs(double lambda, const ChannelParams &params);

// Which density piece the serving link falls in
enum class Branch
{
    L1,   // LOS, 0 < r <= d1
    NL1a, // NLOS, 0 < r <= y1
    NL1b, // NLOS, y1 < r <= d1
    NL2   // NLOS, r > d1
};

std::string to_string(Branch b);

struct ServingLink
{
    double r = 0.0; // km
    Branch branch = Branch::L1;

    bool is_los() const { return branch == Branch::L1; }
};

// Throws DomainError when r is outside the branch's range
void check_branch(const ServingLink &link, const ChannelParams &params);

// Expectation of exp(-M h) over interferer fading
enum class Expectation
{
    SeriesApprox, // e^-K / (1 + M - K) in the mean-(1 + K) frame
    Exact         // unit-mean Rician MGF
};

// K factor applied to interferers
enum class InterfererK
{
    ServingLink, // every interferer uses the serving link's K (as the closed form)
    PerLink      // each interferer uses its own distance and LOS state
};

enum class LaplaceMethod
{
    ClosedFormWithFallback, // closed form, numeric quadrature where it is not finite
    ClosedFormOnly,
    Numeric
};

struct EngineOptions
{
    LaplaceMethod laplace = LaplaceMethod::ClosedFormWithFallback;
    // Expectation and K policy of the numeric path, both when selected directly and as fallback
    Expectation expectation = Expectation::Exact;
    InterfererK interferer_k = InterfererK::PerLink;
    // Denominator of the u^2 terms in the closed form; 0 binds it to d1
    double d0_km = 0.0;
    SeriesControl series;
    // Inner interference integrals (relative to the largest jet coefficient)
    double inner_rel_tol = 1e-10;
    int inner_max_subdivisions = 200;
    // Outer integrals over the serving distance, per density piece
    double outer_abs_tol = 1e-6;
    double outer_rel_tol = 1e-8;
    int outer_max_subdivisions = 200;
    // Mass of f_nlos_2 dropped beyond the truncation radius
    double tail_mass = 1e-8;
    // Conditional coverage excursions beyond this abort the point; smaller ones are clamped
    double clamp_abort = 1e-3;
    std::size_t max_jet_order = 400;
    // ASE upper limit: integrate until p_cov drops below this
    double ase_pcov_floor = 1e-6;

    void validate() const;
};

enum class InterferenceRegion
{
    LosAnnulus,  // LOS interferers beyond the LOS exclusion radius, inside d1
    NlosAnnulus, // NLOS interferers beyond the NLOS exclusion radius, inside d1
    NlosTail     // NLOS interferers beyond max(d1, NLOS exclusion radius)
};

// Interference exponent Lambda with L = exp(-sum of regions), as a jet in the relative
// threshold increment: gamma = gamma0 (1 + e). Coefficient n equals gamma0^n / n! d^n/dgamma^n.
// The threshold is the SIR threshold of the unit-mean model; k_serving fixes the Rician
// change of variables of the serving link.
//
// Closed form: annulus and tail kernels under the e^-K / (1 + M - K) expectation with the
// serving-link K. Throws DomainError / NumericError where that expression is not finite.
Jet exponent_closed_form(InterferenceRegion region, const ServingLink &link, double gamma0, double k_serving,
                         std::size_t order, double lambda, const ChannelParams &params, const EngineOptions &opt);

// Direct adaptive quadrature of the same integrals, with the expectation and K policy in opt
Jet exponent_numeric(InterferenceRegion region, const ServingLink &link, double gamma0, double k_serving,
                     std::size_t order, double lambda, const ChannelParams &params, const RicianSpec &spec,
                     const EngineOptions &opt);

// L(gamma0 (1 + e)) through the closed form for all regions
Jet laplace_closed_form(const ServingLink &link, double gamma0, double k_serving, std::size_t order, double lambda,
                        const ChannelParams &params, const EngineOptions &opt);

// L through direct quadrature
Jet laplace_numeric_jet(const ServingLink &link, double gamma0, double k_serving, std::size_t order, double lambda,
                        const ChannelParams &params, const RicianSpec &spec, const EngineOptions &opt);

// Scalar E[exp(-s I_r)] for the unit-mean interference I_r = sum P beta_i h_i
double laplace_numeric(double s, const ServingLink &link, double lambda, const ChannelParams &params,
                       const RicianSpec &spec, const EngineOptions &opt);

struct ConditionalCoverage
{
    double value = 0.0;
    // gamma d/dgamma of the unclamped value
    double log_derivative = 0.0;
    Method method = Method::ClosedForm;
    bool clamped = false;
    std::size_t order = 0;
};

// P[SIR > gamma | serving link] by the J(m, k) double series over Laplace derivatives
ConditionalCoverage conditional_coverage(const ServingLink &link, double gamma, double lambda,
                                         const ChannelParams &params, const RicianSpec &spec,
                                         const EngineOptions &opt = {});

struct CoveragePoint
{
    double lambda = 0.0;
    double gamma = 0.0; // linear
    double p_cov = 0.0;
    Method method = Method::ClosedForm;
    double est_error = 0.0;
    // -dp/dgamma, filled only by coverage_pdf
    double pdf = 0.0;
    // 95% interval (Wilson for Monte Carlo)
    double ci_low = 0.0;
    double ci_high = 1.0;
    std::size_t clamp_count = 0;
    std::size_t fallback_count = 0;
    std::size_t evaluations = 0;
};

// SIR coverage probability, summing the outer integrals over every density piece
CoveragePoint coverage_probability(double lambda, double gamma, const ChannelParams &params,
                                   const RicianSpec &spec, const EngineOptions &opt = {});

// Coverage together with the SIR density f(gamma) = -dp/dgamma
CoveragePoint coverage_pdf(double lambda, double gamma, const ChannelParams &params, const RicianSpec &spec,
                           const EngineOptions &opt = {});

struct AseResult
{
    double lambda = 0.0;
    double gamma0 = 0.0;
    double ase = 0.0; // bps/Hz/km^2
    Method method = Method::ClosedForm;
    double est_error = 0.0;
    // Upper threshold where integration stopped and a power-law bound on the dropped tail
    double gamma_max = 0.0;
    double tail_bound = 0.0;
    std::size_t evaluations = 0;
    // Summed over every coverage evaluation
    std::size_t clamp_count = 0;
    std::size_t fallback_count = 0;
};

// lambda [log2(1 + g0) p(g0) + 1/ln2 int_g0^inf p(g) / (1 + g) dg]
AseResult ase(double lambda, double gamma0, const ChannelParams &params, const RicianSpec &spec,
              const EngineOptions &opt = {});

// lambda int_g0^inf log2(1 + g) f(g) dg with the density from coverage_pdf
AseResult ase_direct(double lambda, double gamma0, const ChannelParams &params, const RicianSpec &spec,
                     const EngineOptions &opt = {});

} // namespace scn

#endif
