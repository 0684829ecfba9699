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

#ifndef SCN_MC_SIMULATOR_HPP
#define SCN_MC_SIMULATOR_HPP

// Monte Carlo drops of a HPPP small-cell layout around a typical UE at the origin.
//
// Each trial owns a random stream seeded from (seed, trial index), so estimates do not depend on
// the number of worker threads or on the batch schedule. Batch partial sums are merged in batch
// order with compensated summation.

#include "scn/analytic_engine.hpp"
#include "scn/channel_model.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace scn
{

enum class SinrMode
{
    SIR,
    SINR
};

std::string to_string(SinrMode m);
SinrMode sinr_mode_from_string(const std::string &s);

struct McConfig
{
    std::size_t trials = 20000;
    double window_radius = 0.0; // km; 0 selects the automatic radius
    SinrMode mode = SinrMode::SINR;
    std::uint64_t seed = 1;
    std::size_t batch = 1000;
    unsigned threads = 0; // 0 uses the hardware concurrency

    void validate() const;
};

struct BaseStation
{
    double x = 0.0; // km
    double y = 0.0;
    LinkSample link;
};

struct NetworkRealization
{
    std::vector<BaseStation> bs;
    std::size_t serving_index = 0;
    double window_radius = 0.0;
    std::size_t resamples = 0; // empty windows drawn before this one
};

// Stream for one trial: mt19937_64 seeded through splitmix64 of (seed, index)
std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t index);

// Median path loss gain of the serving BS: P[no BS with gain >= g] = 1/2
double median_serving_gain(double lambda, const ChannelParams &params);

// max(3 / sqrt(lambda), d1, r*) with r* bounding the mean NLOS interference beyond the window
// to 1e-4 of the median serving gain
double auto_window_radius(double lambda, const ChannelParams &params);

NetworkRealization sample_realization(double lambda, const ChannelParams &params, const RicianSpec &spec,
                                      double window, std::mt19937_64 &rng);

// SIR or SINR of the serving link; +inf when nothing interferes in SIR mode
double sinr(const NetworkRealization &net, const ChannelParams &params, SinrMode mode);

// Sample mean with its standard error
struct McStat
{
    double mean = 0.0;
    double std_err = 0.0;
};

// Joint estimate over several fading specs and thresholds sharing every drop (common random
// numbers): deployment, LOS states and the complex normals behind the fading gains.
class McJointResult
{
public:
    McJointResult(std::size_t n_specs, std::size_t n_gammas);

    double lambda = 0.0;
    std::size_t trials = 0;
    std::size_t resamples = 0;
    double window_radius = 0.0;
    // Serving-BS piece frequencies, indexed by Branch
    std::array<double, 4> branch_count{};

    std::size_t n_specs() const { return n_specs_; }
    std::size_t n_gammas() const { return n_gammas_; }

    McStat coverage(std::size_t spec, std::size_t gamma) const;
    // lambda E[log2(1 + SINR) 1{SINR > gamma}]
    McStat ase(std::size_t spec, std::size_t gamma) const;
    // Paired difference of coverage, spec a minus spec b
    McStat coverage_difference(std::size_t a, std::size_t b, std::size_t gamma) const;
    McStat ase_difference(std::size_t a, std::size_t b, std::size_t gamma) const;
    // ase(a) / ase(b) with a delta-method standard error from the paired drops
    McStat ase_ratio(std::size_t a, std::size_t b, std::size_t gamma) const;
    McStat branch_probability(Branch b) const;

    // Raw accumulators: index [spec * n_gammas + gamma]
    std::vector<double> cov_sum, ase_sum, ase_sq;
    // Cross moments per spec pair (a < b) and gamma, index [(pair * n_gammas) + gamma]
    std::vector<double> cov_cross, ase_cross;
    std::size_t pair_index(std::size_t a, std::size_t b) const;

private:
    std::size_t n_specs_;
    std::size_t n_gammas_;
};

McJointResult estimate_joint(double lambda, const std::vector<double> &gammas, const std::vector<RicianSpec> &specs,
                             const McConfig &cfg, const ChannelParams &params);

// Coverage with method MonteCarlo, est_error the binomial standard error, Wilson 95% interval
CoveragePoint estimate_coverage(double lambda, double gamma, const McConfig &cfg, const ChannelParams &params,
                                const RicianSpec &spec);

AseResult estimate_ase(double lambda, double gamma0, const McConfig &cfg, const ChannelParams &params,
                       const RicianSpec &spec);

// Coverage given a serving BS at link.r in the link's LOS state; the other BSs are the HPPP
// restricted to smaller path loss gains
McStat estimate_conditional_coverage(const ServingLink &link, double gamma, double lambda, const McConfig &cfg,
                                     const ChannelParams &params, const RicianSpec &spec);

} // namespace scn

#endif
