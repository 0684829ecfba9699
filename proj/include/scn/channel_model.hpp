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

#ifndef SCN_CHANNEL_MODEL_HPP
#define SCN_CHANNEL_MODEL_HPP

#include <cmath>
#include <random>
#include <string>

namespace scn
{

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

// Two-slope LOS/NLOS path loss with a linear LOS probability that reaches zero at d1.
// Distances are in km, everything else is linear. Defaults are the 3GPP small-cell values.
struct ChannelParams
{
    double alpha_los = 2.09;
    double alpha_nlos = 3.75;
    double a_los = 4.168693834703354e-11;  // 10^-10.38
    double a_nlos = 2.884031503126606e-15; // 10^-14.54
    double d1 = 0.3;                       // km
    double tx_power = 0.25118864315095796; // 24 dBm in W
    double noise_power = 3.1622776601683794e-13; // -95 dBm in W

    // Throws ConfigError when an invariant is violated.
    void validate() const;
};

enum class FadingMode
{
    DistanceDependentRician, // K_LOS(r) = intercept - slope * r[m] dB, K_NLOS fixed
    FixedRician,             // same K (fixed_k_db) on every link
    Rayleigh                 // K = 0 on every link
};

std::string to_string(FadingMode mode);
FadingMode fading_mode_from_string(const std::string &s);

// Fading selector. All modes are normalized to E[h] = 1.
struct RicianSpec
{
    FadingMode mode = FadingMode::DistanceDependentRician;
    double fixed_k_db = 0.0;
    double k_los_intercept_db = 13.0;
    double k_los_slope_db_per_m = 0.03;
    double k_nlos_db = 0.0;

    static RicianSpec rayleigh() { return RicianSpec{FadingMode::Rayleigh}; }
    static RicianSpec fixed(double k_db)
    {
        RicianSpec s;
        s.mode = FadingMode::FixedRician;
        s.fixed_k_db = k_db;
        return s;
    }
};

// One BS-to-UE link as seen by the typical UE
struct LinkSample
{
    double distance = 0.0; // km
    bool is_los = false;
    double path_loss = 0.0;   // linear gain
    double fading_gain = 1.0; // linear, unit mean
};

double los_probability(double r, const ChannelParams &params);
double path_loss(double r, bool is_los, const ChannelParams &params);

// Distance at which the LOS (NLOS) law reaches a given linear path loss gain
double los_distance_for_gain(double gain, const ChannelParams &params);
double nlos_distance_for_gain(double gain, const ChannelParams &params);

// NLOS distance with the same path loss as a LOS link at r
double map_r1(double r, const ChannelParams &params);
// LOS distance with the same path loss as a NLOS link at r
double map_r2(double r, const ChannelParams &params);
// NLOS distance whose LOS-equivalent distance is d1; NLOS serving links below y1 compete with LOS BSs inside d1
double breakpoint_y1(const ChannelParams &params);

// Linear Rician K factor of a link. The distance-dependent law is specified per meter.
double rician_k(double r, bool is_los, const RicianSpec &spec);

// Power gain |nu + sigma (z1 + i z2)|^2 with nu^2 = K/(K+1), sigma^2 = 1/(2(K+1)).
// Taking the normals as arguments lets callers share draws across fading modes.
inline double fading_from_normals(double k, double z1, double z2)
{
    const double nu = std::sqrt(k / (k + 1.0));
    const double sigma = std::sqrt(0.5 / (k + 1.0));
    const double re = nu + sigma * z1;
    const double im = sigma * z2;
    return re * re + im * im;
}

template <typename Rng>
double sample_fading(double k, Rng &rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    const double z1 = normal(rng);
    const double z2 = normal(rng);
    return fading_from_normals(k, z1, z2);
}

} // namespace scn

#endif
