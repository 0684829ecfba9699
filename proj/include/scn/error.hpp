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

#ifndef SCN_ERROR_HPP
#define SCN_ERROR_HPP

#include <limits>
#include <stdexcept>
#include <string>

namespace scn
{

// Argument outside the mathematical domain of an operation (negative distance, z >= 1, ...)
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Invalid configuration (parameters, sweep settings, config file contents)
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Iterative numerics that did not converge. Carries the last partial value when one exists.
class NumericError : public std::runtime_error
{
public:
    explicit NumericError(const std::string &what, double partial = std::numeric_limits<double>::quiet_NaN())
        : std::runtime_error(what), partial_(partial) {}

    double partial() const noexcept { return partial_; }

private:
    double partial_;
};

// File that cannot be read or written
class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace scn

#endif
