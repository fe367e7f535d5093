#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cyldrift/cell.hpp"
#include "cyldrift/coefficients.hpp"
#include "cyldrift/cylinder.hpp"

namespace cyldrift {

struct SweepAxis {
  std::string path;              // JSON pointer into the config
  std::vector<double> values;
};

struct SemiSpec {
  FieldSum phi;                  // inlet data phi(x') (axial part ignored)
  double K = 0.0;
  double k = 8.0;
};

/// Parsed and validated run configuration.
struct RunConfig {
  CoefficientModel model;
  SolveInfiniteOptions solve;
  std::optional<RegimeTag> regime_override;
  std::optional<SemiSpec> semi;
  std::vector<SweepAxis> sweep;
  std::vector<std::string> warnings;   // e.g. Fourier aliasing
  std::string config_hash;             // FNV-1a of the canonical config text
  std::string canonical_text;
};

/// Parse a JSON config. Unknown keys are errors (strict mode); value errors
/// name the offending path.
RunConfig parse_config(const std::string& text);

/// Load + parse a config file.
RunConfig load_config_file(const std::string& path);

/// FNV-1a 64-bit hash, hex-encoded.
std::string fnv1a_hex(const std::string& data);

} // namespace cyldrift
