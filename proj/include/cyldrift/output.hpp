#pragma once

#include <string>
#include <vector>

#include "cyldrift/cell.hpp"
#include "cyldrift/cylinder.hpp"

namespace cyldrift {

/// Machine-readable results of a solve run. Data files carry no timestamps
/// (metadata goes to a separate sidecar) so identical configs give
/// byte-identical outputs.
struct ResultBundle {
  std::string config_hash;
  DriftPair drifts;
  RegimeCase regime;
  CylinderSolution solution;   // grid+u used for profile emission
  std::vector<std::string> warnings;

  std::string to_json_text() const;
};

void emit_json(const ResultBundle& bundle, const std::string& path);

/// Profile CSV: columns x1, cross_index, value (17 significant digits).
void emit_profile_csv(const CylinderGrid& grid, const Vector& values, const std::string& path);

/// Decay-table CSV: columns n, window_norm.
void emit_decay_csv(const std::vector<std::pair<double, double>>& rows, const std::string& path);

/// Run metadata sidecar (timestamps live here, not in the data files).
void emit_meta(const std::string& config_hash, const std::string& path);

} // namespace cyldrift
