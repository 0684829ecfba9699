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

#include "scn/channel_model.hpp"
#include "scn/error.hpp"

namespace scn
{

void ChannelParams::validate() const
{
    if (!(alpha_los > 0.0))
        throw ConfigError("alpha_los must be positive");
    if (!(alpha_nlos > alpha_los))
        throw ConfigError("alpha_nlos must exceed alpha_los");
    if (!(a_los > 0.0 && a_los < 1.0))
        throw ConfigError("a_los must lie in (0, 1)");
    if (!(a_nlos > 0.0 && a_nlos < a_los))
        throw ConfigError("a_nlos must lie in (0, a_los)");
    if (!(d1 > 0.0))
        throw ConfigError("d1 must be positive");
    if (!(tx_power > 0.0))
        throw ConfigError("tx_power must be positive");
    if (!(noise_power >= 0.0))
        throw ConfigError("noise_power must be non-negative");
    // The NLOS tail kernel needs alpha > beta + 1 with beta = 1
    if (!(alpha_nlos > 2.0))
        throw ConfigError("alpha_nlos must exceed 2 for a finite NLOS interference tail");
}

std::string to_string(FadingMode mode)
{
    switch (mode)
    {
    case FadingMode::DistanceDependentRician:
        return "rician";
    case FadingMode::FixedRician:
        return "fixed_rician";
    case FadingMode::Rayleigh:
        return "rayleigh";
    }
    return "unknown";
}

FadingMode fading_mode_from_string(const std::string &s)
{
    if (s == "rician")
        return FadingMode::DistanceDependentRician;
    if (s == "fixed_rician")
        return FadingMode::FixedRician;
    if (s == "rayleigh")
        return FadingMode::Rayleigh;
    throw ConfigError("unknown fading mode '" + s + "'");
}

double los_probability(double r, const ChannelParams &params)
{
    if (!(r >= 0.0))
        throw DomainError("los_probability: distance must be non-negative");
    if (r >= params.d1)
        return 0.0;
    return 1.0 - r / params.d1;
}

double path_loss(double r, bool is_los, const ChannelParams &params)
{
    if (!(r > 0.0))
        throw DomainError("path_loss: distance must be positive");
    return is_los ? params.a_los * std::pow(r, -params.alpha_los)
                  : params.a_nlos * std::pow(r, -params.alpha_nlos);
}

double los_distance_for_gain(double gain, const ChannelParams &params)
{
    if (!(gain > 0.0))
        throw DomainError("los_distance_for_gain: gain must be positive");
    return std::pow(params.a_los / gain, 1.0 / params.alpha_los);
}

double nlos_distance_for_gain(double gain, const ChannelParams &params)
{
    if (!(gain > 0.0))
        throw DomainError("nlos_distance_for_gain: gain must be positive");
    return std::pow(params.a_nlos / gain, 1.0 / params.alpha_nlos);
}

double map_r1(double r, const ChannelParams &params)
{
    if (!(r > 0.0))
        throw DomainError("map_r1: distance must be positive");
    return std::pow(params.a_nlos / params.a_los, 1.0 / params.alpha_nlos) *
           std::pow(r, params.alpha_los / params.alpha_nlos);
}

double map_r2(double r, const ChannelParams &params)
{
    if (!(r > 0.0))
        throw DomainError("map_r2: distance must be positive");
    return std::pow(params.a_los / params.a_nlos, 1.0 / params.alpha_los) *
           std::pow(r, params.alpha_nlos / params.alpha_los);
}

double breakpoint_y1(const ChannelParams &params)
{
    return std::pow(params.d1, params.alpha_los / params.alpha_nlos) *
           std::pow(params.a_nlos / params.a_los, 1.0 / params.alpha_nlos);
}

double rician_k(double r, bool is_los, const RicianSpec &spec)
{
    if (!(r >= 0.0))
        throw DomainError("rician_k: distance must be non-negative");
    switch (spec.mode)
    {
    case FadingMode::Rayleigh:
        return 0.0;
    case FadingMode::FixedRician:
        return db_to_linear(spec.fixed_k_db);
    case FadingMode::DistanceDependentRician:
        if (is_los)
            return db_to_linear(spec.k_los_intercept_db - spec.k_los_slope_db_per_m * (1000.0 * r));
        return db_to_linear(spec.k_nlos_db);
    }
    return 0.0;
}

} // namespace scn
