// Copyright 2026 The upcross Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "upcross/config.hpp"
#include "upcross/deviation.hpp"
#include "upcross/experiments.hpp"
#include "upcross/exit_time.hpp"
#include "upcross/philox.hpp"
#include "upcross/pvariation.hpp"
#include "upcross/report.hpp"
#include "upcross/skeleton.hpp"
#include "upcross/stats.hpp"
#include "upcross/upcrossing_field.hpp"

namespace py = pybind11;
using namespace upcross;

namespace {

const ExitTimeLaw& default_law() {
  static const ExitTimeLaw law;
  return law;
}

template <class T>
py::array_t<T> to_array(std::span<const T> v) {
  return py::array_t<T>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict row_dict(const ReportRow& r) {
  py::dict d;
  d["experiment"] = r.experiment;
  d["k"] = r.k;
  d["T"] = r.T;
  d["statistic"] = r.statistic;
  d["mean"] = r.mean;
  d["stderr"] = r.stderr_;
  d["median"] = r.median;
  d["q10"] = r.q10;
  d["q90"] = r.q90;
  d["n_paths"] = r.n_paths;
  d["seed"] = r.seed;
  return d;
}

}  // namespace

PYBIND11_MODULE(_upcross, m) {
  m.doc() = "Upcrossing estimates of Brownian local time";
  m.attr("__version__") = kVersion;

  py::enum_<DurationMode>(m, "DurationMode")
      .value("exact", DurationMode::exact)
      .value("deterministic", DurationMode::deterministic);

  py::class_<ExitTimeLaw>(m, "ExitTimeLaw")
      .def(py::init<>())
      .def("cdf", &ExitTimeLaw::cdf, py::arg("t"))
      .def("survival", &ExitTimeLaw::survival, py::arg("t"))
      .def("pdf", &ExitTimeLaw::pdf, py::arg("t"))
      .def("cdf_small_time", &ExitTimeLaw::cdf_small_time)
      .def("cdf_large_time", &ExitTimeLaw::cdf_large_time)
      .def("quantile", &ExitTimeLaw::quantile, py::arg("u"))
      .def(
          "sample",
          [](const ExitTimeLaw& law, std::size_t n, std::uint64_t seed, std::uint64_t stream, double h) {
            RngStream rng(seed, stream);
            std::vector<double> out(n);
            for (auto& t : out) t = law.sample(rng, h);
            return to_array<double>(out);
          },
          py::arg("n"), py::arg("seed"), py::arg("stream") = 0, py::arg("h") = 1.0);

  py::class_<CrossingSkeleton>(m, "CrossingSkeleton")
      .def_property_readonly("level", &CrossingSkeleton::level)
      .def_property_readonly("horizon", &CrossingSkeleton::horizon)
      .def_property_readonly("start_value", &CrossingSkeleton::start_value)
      .def_property_readonly("step_count", &CrossingSkeleton::step_count)
      .def_property_readonly("times", [](const CrossingSkeleton& s) { return to_array(s.times()); })
      .def_property_readonly("signs", [](const CrossingSkeleton& s) { return to_array(s.signs()); })
      .def_property_readonly("values_units", [](const CrossingSkeleton& s) { return to_array(s.values()); })
      .def("coarsen", &coarsen, py::arg("level"))
      .def("__eq__", [](const CrossingSkeleton& a, const CrossingSkeleton& b) { return a == b; });

  m.def(
      "generate_skeleton",
      [](int level, double x0, double horizon, std::uint64_t seed, std::uint64_t stream, DurationMode mode) {
        RngStream rng(seed, stream);
        return generate_skeleton(rng, default_law(), level, x0, horizon, mode);
      },
      py::arg("level"), py::arg("x0") = 0.0, py::arg("horizon") = 1.0, py::arg("seed") = 0, py::arg("stream") = 0,
      py::arg("mode") = DurationMode::exact);

  py::class_<UpcrossingField>(m, "UpcrossingField")
      .def(py::init([](const CrossingSkeleton& s) { return build_field(s); }), py::arg("skeleton"))
      .def_property_readonly("level", &UpcrossingField::level)
      .def_property_readonly("min_index", &UpcrossingField::min_index)
      .def_property_readonly("max_index", &UpcrossingField::max_index)
      .def("upcrossings_before", &UpcrossingField::upcrossings_before, py::arg("j"), py::arg("t"))
      .def("U", &UpcrossingField::U_value, py::arg("t"), py::arg("x"));

  py::class_<DeviationStatistics>(m, "DeviationStatistics")
      .def_readonly("level", &DeviationStatistics::level)
      .def_readonly("proxy_level", &DeviationStatistics::proxy_level)
      .def_readonly("horizon", &DeviationStatistics::horizon)
      .def_readonly("sup_deviation", &DeviationStatistics::sup_deviation)
      .def_readonly("normalizer", &DeviationStatistics::normalizer)
      .def_readonly("rate_statistic", &DeviationStatistics::rate_statistic)
      .def_readonly("local_time_sup", &DeviationStatistics::local_time_sup)
      .def_readonly("centered_statistic", &DeviationStatistics::centered_statistic)
      .def_readonly("f_statistic", &DeviationStatistics::f_statistic);

  m.def(
      "sup_deviation",
      [](const CrossingSkeleton& fine, int k, double T, double log_base) {
        return sup_deviation(build_field(coarsen(fine, k)), build_proxy(build_field(fine)), T, log_base);
      },
      py::arg("fine"), py::arg("k"), py::arg("T"), py::arg("log_base") = std::numbers::e,
      "Statistics of U^k against the fine skeleton's own field as local-time proxy.");
  m.def("normalizer", &normalizer, py::arg("k"), py::arg("log_base") = std::numbers::e);

  m.def(
      "pvar_sequence",
      [](const std::vector<double>& values, double q) {
        const VariationResult r = pvar_sequence(values, q);
        return py::make_tuple(r.value, r.indices);
      },
      py::arg("values"), py::arg("q"));
  m.def("pvar_field", [](const UpcrossingField& f, double t, double q, int m_) { return pvar_field(f, t, q, m_).value; },
        py::arg("field"), py::arg("t"), py::arg("q"), py::arg("m"));
  m.def("sup_pvar_over_time", &sup_pvar_over_time, py::arg("field"), py::arg("q"), py::arg("m"), py::arg("T"));

  m.def(
      "ks_two_sample",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        const KsResult r = ks_two_sample(a, b);
        return py::make_tuple(r.statistic, r.p_value);
      },
      py::arg("a"), py::arg("b"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("seed", &ExperimentConfig::master_seed)
      .def_readwrite("paths", &ExperimentConfig::paths)
      .def_readwrite("levels", &ExperimentConfig::levels)
      .def_readwrite("proxy_offset", &ExperimentConfig::proxy_offset)
      .def_readwrite("horizons", &ExperimentConfig::horizons)
      .def_readwrite("eta", &ExperimentConfig::eta)
      .def_readwrite("delta", &ExperimentConfig::delta)
      .def_readwrite("m", &ExperimentConfig::m)
      .def_readwrite("lambda_", &ExperimentConfig::lambda)
      .def_readwrite("mode", &ExperimentConfig::mode)
      .def_readwrite("log_base", &ExperimentConfig::log_base)
      .def_readwrite("step_budget", &ExperimentConfig::step_budget)
      .def_readwrite("threads", &ExperimentConfig::threads)
      .def("set", &apply_setting, py::arg("key"), py::arg("value"), "Apply one key = value setting.")
      .def("echo", &ExperimentConfig::echo);

  py::class_<ExperimentReport>(m, "ExperimentReport")
      .def_readonly("experiment", &ExperimentReport::experiment)
      .def_readonly("wall_seconds", &ExperimentReport::wall_seconds)
      .def_readonly("config_echo", &ExperimentReport::config_echo)
      .def_property_readonly("passed", &ExperimentReport::passed)
      .def_property_readonly("rows",
                             [](const ExperimentReport& r) {
                               py::list out;
                               for (const auto& row : r.rows) out.append(row_dict(row));
                               return out;
                             })
      .def_property_readonly("verdicts",
                             [](const ExperimentReport& r) {
                               py::list out;
                               for (const auto& v : r.verdicts) out.append(py::make_tuple(v.name, v.passed, v.detail));
                               return out;
                             })
      .def("to_csv", &to_csv)
      .def("to_json", &to_json);

  // Long runs release the GIL.
  auto run = [&m](const char* name, ExperimentReport (*fn)(const ExperimentConfig&)) {
    m.def(name, fn, py::arg("config"), py::call_guard<py::gil_scoped_release>());
  };
  run("run_sup_rate", &run_sup_rate);
  run("run_lp_rate", &run_lp_rate);
  run("run_variation", &run_variation);
  run("run_scaling_test", &run_scaling_test);
  run("run_subadditivity", &run_subadditivity);
  run("run_selftest", &run_selftest);

  py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);
}
