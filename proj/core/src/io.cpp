// Copyright 2026 The qcoop Authors
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

#include "qcoop/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qcoop/error.hpp"

namespace qcoop::io {

namespace {

using json = nlohmann::json;

json parse(std::string_view text, std::string_view what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line number.
    const std::size_t at = std::min<std::size_t>(e.byte, text.size());
    const long line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(at), '\n');
    throw ConfigError(std::string(what) + ": parse error at line " +
                      std::to_string(line) + ": " + e.what());
  }
}

void require_keys(const json& j, std::string_view what,
                  const std::set<std::string>& required,
                  const std::set<std::string>& optional = {}) {
  if (!j.is_object()) throw ConfigError(std::string(what) + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!required.count(k) && !optional.count(k))
      throw ConfigError(std::string(what) + ": unknown key '" + k + "'");
  }
  for (const auto& k : required) {
    if (!j.contains(k))
      throw ConfigError(std::string(what) + ": missing key '" + k + "'");
  }
}

template <typename T>
T get(const json& j, const std::string& key, std::string_view what) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(what) + ": field '" + key + "': " + e.what());
  }
}

Eigen::MatrixXd matrix_from(const json& j, const std::string& key, int n,
                            std::string_view what) {
  const auto rows = get<std::vector<std::vector<double>>>(j, key, what);
  if (static_cast<int>(rows.size()) != n)
    throw ConfigError(std::string(what) + ": field '" + key + "' must have " +
                      std::to_string(n) + " rows");
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != n)
      throw ConfigError(std::string(what) + ": field '" + key + "' row " +
                        std::to_string(r) + " must have " + std::to_string(n) +
                        " entries");
    for (int c = 0; c < n; ++c) m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  return m;
}

template <typename M>
json matrix_to(const M& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

}  // namespace

std::string system_to_text(const LevelSystem& s) {
  json j;
  j["name"] = s.name;
  j["n_levels"] = s.n_levels();
  j["energies"] = std::vector<double>(s.energies.data(), s.energies.data() + s.energies.size());
  j["dipole"] = matrix_to(s.dipole);
  j["gamma_rates"] = matrix_to(s.gamma_rates);
  if (s.rate_groups.size() != 0 && s.rate_groups.maxCoeff() > 0)
    j["rate_groups"] = matrix_to(s.rate_groups);
  j["initial_state"] = s.initial_state;
  j["target_state"] = s.target_state;
  return j.dump(2) + "\n";
}

LevelSystem system_from_text(std::string_view text) {
  constexpr std::string_view what = "system";
  const json j = parse(text, what);
  require_keys(j, what,
               {"n_levels", "energies", "dipole", "gamma_rates", "initial_state",
                "target_state"},
               {"name", "rate_groups"});
  LevelSystem s;
  const int n = get<int>(j, "n_levels", what);
  if (n < 2) throw ConfigError("system: n_levels must be >= 2");
  const auto e = get<std::vector<double>>(j, "energies", what);
  if (static_cast<int>(e.size()) != n)
    throw ConfigError("system: field 'energies' must have n_levels entries");
  s.name = j.contains("name") ? get<std::string>(j, "name", what) : "custom";
  s.energies = Eigen::Map<const Eigen::VectorXd>(e.data(), n);
  s.dipole = matrix_from(j, "dipole", n, what);
  s.gamma_rates = matrix_from(j, "gamma_rates", n, what);
  s.rate_groups = j.contains("rate_groups")
                      ? Eigen::MatrixXi(matrix_from(j, "rate_groups", n, what).cast<int>())
                      : Eigen::MatrixXi::Zero(n, n);
  s.initial_state = get<int>(j, "initial_state", what);
  s.target_state = get<int>(j, "target_state", what);
  s.validate();
  return s;
}

std::string field_to_text(const ControlField& f) {
  json j;
  json comps = json::array();
  for (const auto& c : f.components)
    comps.push_back({{"amplitude", c.amplitude}, {"phase", c.phase}, {"carrier", c.carrier}});
  j["components"] = comps;
  j["center_time"] = f.center_time;
  j["width"] = f.width;
  j["horizon"] = f.horizon;
  return j.dump(2) + "\n";
}

ControlField field_from_text(std::string_view text) {
  constexpr std::string_view what = "field";
  const json j = parse(text, what);
  require_keys(j, what, {"components", "center_time", "width", "horizon"});
  ControlField f;
  const json& comps = j.at("components");
  if (!comps.is_array()) throw ConfigError("field: 'components' must be an array");
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string where = "field.components[" + std::to_string(i) + "]";
    require_keys(comps[i], where, {"amplitude", "phase", "carrier"});
    f.components.push_back({get<double>(comps[i], "amplitude", where),
                            get<double>(comps[i], "phase", where),
                            get<double>(comps[i], "carrier", where)});
  }
  f.center_time = get<double>(j, "center_time", what);
  f.width = get<double>(j, "width", what);
  f.horizon = get<double>(j, "horizon", what);
  f.validate();
  return f;
}

perturb::LadderSpec ladder_from_text(std::string_view text) {
  constexpr std::string_view what = "ladder";
  const json j = parse(text, what);
  require_keys(j, what, {"frequencies", "dipoles", "rates", "amplitudes", "phases"},
               {"center_time", "width", "horizon"});
  perturb::LadderSpec l;
  l.frequencies = get<std::vector<double>>(j, "frequencies", what);
  l.dipoles = get<std::vector<double>>(j, "dipoles", what);
  l.rates = get<std::vector<double>>(j, "rates", what);
  l.amplitudes = get<std::vector<double>>(j, "amplitudes", what);
  l.phases = get<std::vector<double>>(j, "phases", what);
  if (j.contains("center_time")) l.center_time = get<double>(j, "center_time", what);
  if (j.contains("width")) l.width = get<double>(j, "width", what);
  if (j.contains("horizon")) l.horizon = get<double>(j, "horizon", what);
  l.validate();
  return l;
}

std::string ladder_to_text(const perturb::LadderSpec& l) {
  json j;
  j["frequencies"] = l.frequencies;
  j["dipoles"] = l.dipoles;
  j["rates"] = l.rates;
  j["amplitudes"] = l.amplitudes;
  j["phases"] = l.phases;
  j["center_time"] = l.center_time;
  j["width"] = l.width;
  j["horizon"] = l.horizon;
  return j.dump(2) + "\n";
}

std::string cooperation_to_text(const CooperationReport& r) {
  json j;
  j["yield_both_percent"] = 100.0 * r.yield_both;
  j["yield_field_only_percent"] = 100.0 * r.yield_field_only;
  j["yield_decoherence_only_percent"] = 100.0 * r.yield_decoherence_only;
  j["sum_percent"] = 100.0 * r.sum;
  j["fluence"] = r.fluence;
  j["cooperates"] = r.cooperates;
  return j.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          bool off_diagonal) {
  if (traj.states.empty()) return;
  const Eigen::Index n = traj.states.front().rows();
  os << "t";
  for (Eigen::Index l = 0; l < n; ++l) os << ",rho_" << l << l;
  if (off_diagonal)
    for (Eigen::Index l = 0; l < n; ++l)
      for (Eigen::Index m = l + 1; m < n; ++m) os << ",abs_rho_" << l << m;
  os << "\n";
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const auto& rho = traj.states[i];
    os << csv_number(traj.times[i]);
    for (Eigen::Index l = 0; l < n; ++l) os << "," << csv_number(rho(l, l).real());
    if (off_diagonal)
      for (Eigen::Index l = 0; l < n; ++l)
        for (Eigen::Index m = l + 1; m < n; ++m)
          os << "," << csv_number(std::abs(rho(l, m)));
    os << "\n";
  }
}

void write_spectrum_csv(std::ostream& os, const Spectrum& s) {
  os << "omega,re,im,power\n";
  for (std::size_t i = 0; i < s.omega.size(); ++i) {
    os << csv_number(s.omega[i]) << "," << csv_number(s.value[i].real()) << ","
       << csv_number(s.value[i].imag()) << "," << csv_number(s.power(i)) << "\n";
  }
}

void write_record_csv(std::ostream& os, const OptimizationRecord& r) {
  os << "generation,J,O_percent,F\n";
  for (const auto& g : r.history) {
    os << g.generation << "," << csv_number(g.best_cost) << ","
       << csv_number(100.0 * g.best_yield) << "," << csv_number(g.best_fluence) << "\n";
  }
}

void write_sweep_csv(std::ostream& os, const std::vector<perturb::SweepRow>& rows,
                     const std::vector<double>& lab) {
  os << "lambda,gamma,O_perturbative,O_oracle,rel_error";
  if (!lab.empty()) os << ",O_lab";
  os << "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    os << csv_number(r.lambda) << "," << csv_number(r.gamma) << ","
       << csv_number(r.perturbative) << "," << csv_number(r.oracle) << ","
       << csv_number(r.rel_error);
    if (!lab.empty()) os << "," << csv_number(lab.at(i));
    os << "\n";
  }
}

}  // namespace qcoop::io
