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
#include "scn/channel_model.hpp"
#include "scn/error.hpp"
#include "scn/mc_simulator.hpp"
#include "scn/special_functions.hpp"
#include "scn/sweep.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace scn;

namespace
{

RicianSpec fading_spec(const std::string &fading)
{
    RicianSpec s;
    s.mode = fading_mode_from_string(fading);
    return s;
}

py::dict row_dict(const SweepRow &r)
{
    py::dict d;
    d["lambda_bs_per_km2"] = r.lambda;
    d["gamma_db"] = r.gamma_db;
    d["metric"] = to_string(r.metric);
    d["fading"] = r.fading;
    d["method"] = r.method;
    d["value"] = r.value;
    d["std_err"] = r.std_err;
    d["status"] = r.status;
    return d;
}

} // namespace

PYBIND11_MODULE(_scncov, m)
{
    m.doc() = "Coverage probability and ASE of dense small-cell networks";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<ChannelParams>(m, "ChannelParams")
        .def(py::init<>())
        .def_readwrite("alpha_los", &ChannelParams::alpha_los)
        .def_readwrite("alpha_nlos", &ChannelParams::alpha_nlos)
        .def_readwrite("a_los", &ChannelParams::a_los)
        .def_readwrite("a_nlos", &ChannelParams::a_nlos)
        .def_readwrite("d1", &ChannelParams::d1)
        .def_readwrite("tx_power", &ChannelParams::tx_power)
        .def_readwrite("noise_power", &ChannelParams::noise_power)
        .def("validate", &ChannelParams::validate);

    py::class_<CoveragePoint>(m, "CoveragePoint")
        .def_readonly("lambda_", &CoveragePoint::lambda)
        .def_readonly("gamma", &CoveragePoint::gamma)
        .def_readonly("p_cov", &CoveragePoint::p_cov)
        .def_readonly("est_error", &CoveragePoint::est_error)
        .def_readonly("pdf", &CoveragePoint::pdf)
        .def_readonly("ci_low", &CoveragePoint::ci_low)
        .def_readonly("ci_high", &CoveragePoint::ci_high)
        .def_readonly("clamp_count", &CoveragePoint::clamp_count)
        .def_readonly("fallback_count", &CoveragePoint::fallback_count)
        .def_property_readonly("method", [](const CoveragePoint &p) { return to_string(p.method); });

    py::class_<AseResult>(m, "AseResult")
        .def_readonly("lambda_", &AseResult::lambda)
        .def_readonly("gamma0", &AseResult::gamma0)
        .def_readonly("ase", &AseResult::ase)
        .def_readonly("est_error", &AseResult::est_error)
        .def_readonly("gamma_max", &AseResult::gamma_max)
        .def_readonly("tail_bound", &AseResult::tail_bound)
        .def_property_readonly("method", [](const AseResult &a) { return to_string(a.method); });

    m.def("path_loss", &path_loss, py::arg("r"), py::arg("is_los"), py::arg("params") = ChannelParams{});
    m.def("los_probability", &los_probability, py::arg("r"), py::arg("params") = ChannelParams{});
    m.def("rician_k", [](double r, bool los, const std::string &fading) { return rician_k(r, los, fading_spec(fading)); },
          py::arg("r"), py::arg("is_los"), py::arg("fading") = "rician");

    m.def("hyp2f1", [](double a, double b, double c, double z) { return hyp2f1(a, b, c, z); });
    m.def("rho1", [](double alpha, double beta, double t, double d) { return rho1(alpha, beta, t, d); });
    m.def("rho2", [](double alpha, double beta, double t, double d) { return rho2(alpha, beta, t, d); });
    m.def("rician_cdf", [](double x, double k) { return rician_cdf(x, k); }, py::arg("x"), py::arg("k_factor"));
    m.def("rician_pdf", [](double x, double k) { return rician_pdf(x, k); }, py::arg("x"), py::arg("k_factor"));

    m.def("coverage_probability",
          [](double lambda, double gamma_db, const std::string &fading, const ChannelParams &p) {
              py::gil_scoped_release release;
              return coverage_probability(lambda, db_to_linear(gamma_db), p, fading_spec(fading));
          },
          py::arg("lambda_"), py::arg("gamma_db"), py::arg("fading") = "rician", py::arg("params") = ChannelParams{});
    m.def("ase",
          [](double lambda, double gamma0_db, const std::string &fading, const ChannelParams &p) {
              py::gil_scoped_release release;
              return ase(lambda, db_to_linear(gamma0_db), p, fading_spec(fading));
          },
          py::arg("lambda_"), py::arg("gamma0_db"), py::arg("fading") = "rician", py::arg("params") = ChannelParams{});
    m.def("mc_coverage",
          [](double lambda, double gamma_db, const std::string &fading, std::size_t trials, std::uint64_t seed,
             const std::string &mode, const ChannelParams &p) {
              McConfig cfg;
              cfg.trials = trials;
              cfg.seed = seed;
              cfg.mode = sinr_mode_from_string(mode);
              py::gil_scoped_release release;
              return estimate_coverage(lambda, db_to_linear(gamma_db), cfg, p, fading_spec(fading));
          },
          py::arg("lambda_"), py::arg("gamma_db"), py::arg("fading") = "rician", py::arg("trials") = 20000,
          py::arg("seed") = 1, py::arg("mode") = "sinr", py::arg("params") = ChannelParams{});

    m.attr("CSV_HEADER") = csv_header;
    m.def("run_sweep",
          [](const std::string &config_text) {
              std::istringstream in(config_text);
              const SweepConfig cfg = parse_config(in);
              SweepTable table;
              {
                  py::gil_scoped_release release;
                  table = run_sweep(cfg);
              }
              py::list rows;
              for (const auto &r : table)
                  rows.append(row_dict(r));
              return rows;
          },
          py::arg("config_text"), "Runs a sweep from key-value config text and returns the rows as dicts");
    m.def("sweep_csv",
          [](const std::string &config_text) {
              std::istringstream in(config_text);
              const SweepConfig cfg = parse_config(in);
              std::ostringstream out;
              {
                  py::gil_scoped_release release;
                  write_csv(out, run_sweep(cfg));
              }
              return out.str();
          },
          py::arg("config_text"), "Runs a sweep and returns the CSV text");
}
