#include "cyldrift/output.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace cyldrift {

using nlohmann::json;

namespace {

json finite_or_sentinel(double v) {
  if (std::isfinite(v)) return v;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return "nan";
}

json fit_to_json(const StabilizationFit& f) {
  return {{"K", f.K},
          {"gamma", finite_or_sentinel(f.gamma)},
          {"r_squared", f.r_squared},
          {"poor_fit", f.poor_fit},
          {"windows_used", f.windows_used}};
}

json tail_to_json(const TailFit& t) {
  if (t.kind == TailFit::Kind::ExponentialRate)
    return {{"kind", "exponential"}, {"delta", finite_or_sentinel(t.rate)}};
  return {{"kind", "periodic-stabilization"},
          {"sup_distance", t.sup_distance},
          {"reference_scale", t.reference_scale}};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValueError("cannot open for writing: " + path);
  out << text;
  if (!out) throw ValueError("write failed: " + path);
}

} // namespace

std::string ResultBundle::to_json_text() const {
  json j;
  j["config_hash"] = config_hash;
  j["drifts"] = {{"b_minus", drifts.b_minus}, {"b_plus", drifts.b_plus}};
  j["regime"] = {{"tag", to_string(regime.tag)},
                 {"left_is_zero", regime.left_is_zero},
                 {"right_is_zero", regime.right_is_zero},
                 {"eps_drift", regime.eps_drift}};
  json conv = json::array();
  for (std::size_t i = 0; i < solution.k_values.size(); ++i) {
    json row = {{"k", solution.k_values[i]}};
    row["sup_diff"] = i == 0 ? json(nullptr) : json(solution.conv_history[i - 1]);
    conv.push_back(row);
  }
  j["convergence"] = conv;
  j["converged"] = solution.converged;
  j["fit_left"] = fit_to_json(solution.fit_left);
  j["fit_right"] = fit_to_json(solution.fit_right);
  if (solution.adjoint) {
    j["adjoint"] = {{"residual", solution.adjoint->residual},
                    {"left", tail_to_json(solution.adjoint->left)},
                    {"right", tail_to_json(solution.adjoint->right)}};
  }
  if (solution.compat) {
    j["compatibility"] = {{"functional", solution.compat->functional_value},
                          {"r_k", solution.compat->r_k},
                          {"corrected_residual", solution.compat->corrected_residual},
                          {"data_norm", solution.compat->data_norm}};
  }
  if (!solution.base_maxima.empty()) {
    json bm = json::array();
    for (const auto& row : solution.base_maxima)
      bm.push_back({{"k", row[0]}, {"left_max", row[1]}, {"right_max", row[2]}});
    j["base_maxima"] = bm;
    j["base_decay_rate"] = solution.base_decay_rate;
    j["base_check_applicable"] = solution.base_check_applicable;
  }
  j["m_weighted_norm"] = solution.m_weighted_norm;
  j["flags"] = {{"hypothesis_violated", solution.hypothesis_violated},
                {"boundary_case", solution.boundary_case}};
  j["warnings"] = warnings;
  // window profile of the final solution
  json prof = json::array();
  for (std::size_t i = 0; i < solution.window_x1.size(); ++i)
    prof.push_back({solution.window_x1[i],
                    solution.window_samples.empty()
                        ? 0.0
                        : solution.window_samples.back()[static_cast<int>(i)]});
  j["window_profile"] = prof;
  return j.dump(2) + "\n";
}

void emit_json(const ResultBundle& bundle, const std::string& path) {
  write_file(path, bundle.to_json_text());
}

void emit_profile_csv(const CylinderGrid& grid, const Vector& values, const std::string& path) {
  std::string out = "x1,cross_index,value\n";
  char buf[96];
  for (int c = 0; c < grid.cell_count(); ++c) {
    std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g\n", grid.center(c)[0], grid.core.cross_of(c),
                  values[c]);
    out += buf;
  }
  write_file(path, out);
}

void emit_decay_csv(const std::vector<std::pair<double, double>>& rows, const std::string& path) {
  std::string out = "n,window_norm\n";
  char buf[80];
  for (const auto& [n, v] : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", n, v);
    out += buf;
  }
  write_file(path, out);
}

void emit_meta(const std::string& config_hash, const std::string& path) {
  const auto now = std::chrono::system_clock::now();
  const auto t = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  json j = {{"config_hash", config_hash}, {"unix_time", t}};
  write_file(path, j.dump(2) + "\n");
}

} // namespace cyldrift
