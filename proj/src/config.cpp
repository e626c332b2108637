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

#include "upcross/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace upcross {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) throw std::invalid_argument(key + ": not a number: '" + text + "'");
  return v;
}

long long to_integer(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) throw std::invalid_argument(key + ": not an integer: '" + text + "'");
  return v;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> out;
  for (const auto& part : split(text, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(static_cast<int>(to_integer("levels", part)));
      continue;
    }
    const auto a = static_cast<int>(to_integer("levels", trim(part.substr(0, dots))));
    const auto b = static_cast<int>(to_integer("levels", trim(part.substr(dots + 2))));
    if (b < a) throw std::invalid_argument("levels: empty range '" + part + "'");
    for (int k = a; k <= b; ++k) out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw std::invalid_argument("levels: empty list");
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(to_double("horizons", part));
  if (out.empty()) throw std::invalid_argument("horizons: empty list");
  return out;
}

void apply_setting(ExperimentConfig& c, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "seed") {
    c.master_seed = std::stoull(value);
  } else if (key == "paths") {
    const auto n = to_integer(key, value);
    if (n < 0) throw std::invalid_argument("paths must be nonnegative");
    c.paths = static_cast<std::size_t>(n);
  } else if (key == "levels") {
    c.levels = parse_levels(value);
  } else if (key == "proxy-offset") {
    c.proxy_offset = static_cast<int>(to_integer(key, value));
  } else if (key == "horizons") {
    c.horizons = parse_doubles(value);
    std::sort(c.horizons.begin(), c.horizons.end());
    c.horizons.erase(std::unique(c.horizons.begin(), c.horizons.end()), c.horizons.end());
  } else if (key == "eta") {
    c.eta = to_double(key, value);
  } else if (key == "delta") {
    c.delta = to_double(key, value);
  } else if (key == "m") {
    c.m = static_cast<int>(to_integer(key, value));
  } else if (key == "lambda") {
    c.lambda = to_double(key, value);
  } else if (key == "threads") {
    c.threads = static_cast<unsigned>(to_integer(key, value));
  } else if (key == "out") {
    c.output = value;
  } else if (key == "mode") {
    c.mode = parse_duration_mode(value);
  } else if (key == "log-base") {
    c.log_base = value == "e" ? std::numbers::e : to_double(key, value);
  } else if (key == "step-budget") {
    c.step_budget = to_double(key, value);
  } else {
    throw std::invalid_argument("unknown setting '" + key + "'");
  }
}

void apply_config_text(ExperimentConfig& config, const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  apply_config_text(base, buf.str());
  return base;
}

void ExperimentConfig::validate() const {
  if (paths < 1) throw std::invalid_argument("paths must be >= 1");
  if (levels.empty()) throw std::invalid_argument("levels must not be empty");
  for (int k : levels) {
    if (k < 1) throw std::invalid_argument("levels must be >= 1");
  }
  if (proxy_offset < 0) throw std::invalid_argument("proxy-offset must be >= 0");
  if (levels.back() + proxy_offset > 30) throw std::invalid_argument("reference level above 30 is not supported");
  if (horizons.empty()) throw std::invalid_argument("horizons must not be empty");
  for (double T : horizons) {
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("horizons must be positive");
  }
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(log_base > 0.0) || log_base == 1.0) throw std::invalid_argument("log-base must be positive and != 1");
  if (!(step_budget > 0.0)) throw std::invalid_argument("step-budget must be positive");
}

std::string ExperimentConfig::echo() const {
  std::string levels_text;
  for (std::size_t i = 0; i < levels.size(); ++i) levels_text += (i ? "," : "") + std::to_string(levels[i]);
  std::string horizons_text;
  for (std::size_t i = 0; i < horizons.size(); ++i) horizons_text += (i ? "," : "") + format_double(horizons[i]);
  std::ostringstream out;
  out << "seed = " << master_seed << '\n'
      << "paths = " << paths << '\n'
      << "levels = " << levels_text << '\n'
      << "proxy-offset = " << proxy_offset << '\n'
      << "horizons = " << horizons_text << '\n'
      << "eta = " << format_double(eta) << '\n'
      << "delta = " << format_double(delta) << '\n'
      << "m = " << m << '\n'
      << "lambda = " << format_double(lambda) << '\n'
      << "mode = " << to_string(mode) << '\n'
      << "log-base = " << (log_base == std::numbers::e ? std::string("e") : format_double(log_base)) << '\n'
      << "step-budget = " << format_double(step_budget) << '\n';
  return out.str();
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("UPCROSS_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace upcross
