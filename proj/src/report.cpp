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

#include "upcross/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace upcross {
namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace

ReportRow make_row(const std::string& experiment, int k, double T, const std::string& statistic,
                   std::span<const double> sample, std::uint64_t seed) {
  const Summary s = summarize(sample);
  return {experiment, k, T, statistic, s.mean, s.stderr_, s.median, s.q10, s.q90, s.n, seed};
}

ReportRow scalar_row(const std::string& experiment, int k, double T, const std::string& statistic, double value,
                     std::size_t n_paths, std::uint64_t seed) {
  return {experiment, k, T, statistic, value, 0.0, value, value, value, n_paths, seed};
}

bool ExperimentReport::passed() const {
  for (const auto& v : verdicts) {
    if (!v.passed) return false;
  }
  return true;
}

const ReportRow& ExperimentReport::row(int k, double T, const std::string& statistic) const {
  for (const auto& r : rows) {
    if (r.k == k && r.T == T && r.statistic == statistic) return r;
  }
  throw std::out_of_range("no row for k=" + std::to_string(k) + " T=" + g17(T) + " statistic=" + statistic);
}

std::string to_csv(const ExperimentReport& report) {
  std::string out = "experiment,k,T,statistic,mean,stderr,median,q10,q90,n_paths,seed\n";
  for (const auto& r : report.rows) {
    out += r.experiment + ',' + std::to_string(r.k) + ',' + g17(r.T) + ',' + r.statistic + ',' + g17(r.mean) + ',' +
           g17(r.stderr_) + ',' + g17(r.median) + ',' + g17(r.q10) + ',' + g17(r.q90) + ',' +
           std::to_string(r.n_paths) + ',' + std::to_string(r.seed) + '\n';
  }
  return out;
}

std::string to_json(const ExperimentReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"experiment", r.experiment},
                    {"k", r.k},
                    {"T", number(r.T)},
                    {"statistic", r.statistic},
                    {"mean", number(r.mean)},
                    {"stderr", number(r.stderr_)},
                    {"median", number(r.median)},
                    {"q10", number(r.q10)},
                    {"q90", number(r.q90)},
                    {"n_paths", r.n_paths},
                    {"seed", r.seed}});
  }
  nlohmann::json verdicts = nlohmann::json::array();
  for (const auto& v : report.verdicts) verdicts.push_back({{"name", v.name}, {"passed", v.passed}, {"detail", v.detail}});
  nlohmann::json doc = {{"experiment", report.experiment},
                        {"passed", report.passed()},
                        {"rows", rows},
                        {"verdicts", verdicts},
                        {"metadata",
                         {{"config", report.config_echo},
                          {"version", report.version},
                          {"wall_seconds", number(report.wall_seconds)}}}};
  return doc.dump(2) + '\n';
}

void write_report(const ExperimentReport& report, const std::string& base) {
  std::string stem = base;
  if (ends_with(stem, ".csv")) stem.resize(stem.size() - 4);
  else if (ends_with(stem, ".json")) stem.resize(stem.size() - 5);
  write_file(stem + ".csv", to_csv(report));
  write_file(stem + ".json", to_json(report));
}

}  // namespace upcross
