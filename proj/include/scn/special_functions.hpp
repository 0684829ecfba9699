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

#ifndef SCN_SPECIAL_FUNCTIONS_HPP
#define SCN_SPECIAL_FUNCTIONS_HPP

#include <cstddef>
#include <vector>

namespace scn
{

// Truncation policy for infinite series: stop once the largest of the last three terms
// drops below rel_tol times the running sum, never past max_terms.
struct SeriesControl
{
    double rel_tol = 1e-10;
    int max_terms = 500;

    void validate() const;
};

// Gauss hypergeometric 2F1(a, b; c; z) on the real axis, z < 1.
// |z| < 0.5 uses the defining series; z <= -0.5 goes through the Pfaff transformation,
// and far out on the negative axis through the 1/z connection formula.
// Throws DomainError for z >= 1 or c a non-positive integer, NumericError when the
// chosen series does not converge (the partial sum is attached).
double hyp2f1(double a, double b, double c, double z, const SeriesControl &ctl = {});

// rho1(alpha, beta, t, d) = int_0^d u^beta / (1 + t u^alpha) du
//                         = d^(beta+1)/(beta+1) 2F1(1, (beta+1)/alpha; 1 + (beta+1)/alpha; -t d^alpha)
double rho1(double alpha, double beta, double t, double d, const SeriesControl &ctl = {});

// rho2(alpha, beta, t, d) = int_d^inf u^beta / (1 + t u^alpha) du, requires alpha > beta + 1 and t != 0
double rho2(double alpha, double beta, double t, double d, const SeriesControl &ctl = {});

// Generalized kernels int_0^d u^beta (1 + t u^alpha)^-p du and int_d^inf u^beta (1 + t u^alpha)^-p du.
// Both fall back to direct quadrature when the hypergeometric route fails to converge.
double annulus_kernel(double alpha, double beta, double t, double d, int p, const SeriesControl &ctl = {});
double tail_kernel(double alpha, double beta, double t, double d, int p, const SeriesControl &ctl = {});

// Taylor coefficients in t (orders 0..order) of rho1 and rho2 at the given t
std::vector<double> rho1_taylor(double alpha, double beta, double t, double d, std::size_t order,
                                const SeriesControl &ctl = {});
std::vector<double> rho2_taylor(double alpha, double beta, double t, double d, std::size_t order,
                                const SeriesControl &ctl = {});

// J(m, k) = e^-K K^k m! C(k, m) / (k!)^2, computed in the log domain
double series_coeff_j(int m, int k, double k_factor);

// CDF and PDF of the unit-mean Rician power gain, by the double series in J(m, k).
// The series is written for the gain with unit diffuse power (mean 1 + K); the unit-mean
// gain is that variable divided by 1 + K.
double rician_cdf(double x, double k_factor, const SeriesControl &ctl = {});
double rician_pdf(double x, double k_factor, const SeriesControl &ctl = {});

// E[exp(-M h)] for unit-mean Rician h (exact)
double rician_mgf(double m, double k_factor);

// The closed-form approximation e^-K / (1 + M - K) obtained by replacing
// sum (K g)^k / (k!)^2 with e^(K g) in the density of the mean-(1 + K) gain g.
// M is in the frame of g, so for unit-mean h pass M_h / (1 + K). Not a valid MGF for K > 0.
double rician_mgf_series_approx(double m, double k_factor);

// Smallest n with P[Poisson(mean) > n] < tol, capped at max_n
std::size_t poisson_quantile(double mean, double tol, std::size_t max_n);

} // namespace scn

#endif
