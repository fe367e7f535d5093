#include "cyldrift/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cyldrift {

using nlohmann::json;

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& why) {
  throw SchemaError(path + ": " + why);
}

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) schema_fail(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) schema_fail(path + "." + it.key(), "unknown key");
}

double require_number(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) schema_fail(path + "." + key, "missing");
  if (!obj[key].is_number()) schema_fail(path + "." + key, "expected a number");
  return obj[key].get<double>();
}

double number_or(const json& obj, const std::string& key, double dflt) {
  if (!obj.contains(key)) return dflt;
  return obj[key].get<double>();
}

ScalarField parse_field(const json& j, const std::string& path) {
  if (!j.is_object()) schema_fail(path, "expected a field object");
  if (!j.contains("kind")) schema_fail(path + ".kind", "missing");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "constant") {
    check_keys(j, path, {"kind", "value"});
    return ScalarField::constant(require_number(j, path, "value"));
  }
  if (kind == "sign") {
    check_keys(j, path, {"kind", "scale"});
    return ScalarField::sign_axial(require_number(j, path, "scale"));
  }
  if (kind == "indicator") {
    check_keys(j, path, {"kind", "lo", "hi", "value"});
    const double lo = require_number(j, path, "lo");
    const double hi = require_number(j, path, "hi");
    if (!(hi > lo)) throw ValueError(path + ": hi <= lo");
    return ScalarField::indicator_axial(lo, hi, require_number(j, path, "value"));
  }
  if (kind == "fourier") {
    check_keys(j, path, {"kind", "modes", "cross"});
    if (!j.contains("modes") || !j["modes"].is_array())
      schema_fail(path + ".modes", "expected an array of modes");
    std::vector<FourierMode> modes;
    int mi = 0;
    for (const auto& m : j["modes"]) {
      const std::string mpath = path + ".modes[" + std::to_string(mi++) + "]";
      check_keys(m, mpath, {"m", "cos", "sin"});
      FourierMode fm;
      fm.m = static_cast<int>(require_number(m, mpath, "m"));
      fm.cos_amp = number_or(m, "cos", 0.0);
      fm.sin_amp = number_or(m, "sin", 0.0);
      modes.push_back(fm);
    }
    CrossProfile cp;
    if (j.contains("cross")) {
      const auto& c = j["cross"];
      check_keys(c, path + ".cross", {"constant", "modes"});
      cp.constant = number_or(c, "constant", 1.0);
      if (c.contains("modes"))
        for (const auto& m : c["modes"]) cp.modes.push_back(m.get<int>());
    }
    return ScalarField::fourier(std::move(modes), std::move(cp));
  }
  if (kind == "tabulated") {
    check_keys(j, path, {"kind", "x0", "dx", "values"});
    if (!j.contains("values") || !j["values"].is_array())
      schema_fail(path + ".values", "expected an array");
    std::vector<double> vals;
    for (const auto& v : j["values"]) vals.push_back(v.get<double>());
    return ScalarField::tabulated(require_number(j, path, "x0"), require_number(j, path, "dx"),
                                  std::move(vals));
  }
  schema_fail(path + ".kind", "unknown field kind '" + kind + "'");
}

FieldSum parse_field_sum(const json& j, const std::string& path) {
  FieldSum fs;
  if (j.is_array()) {
    int i = 0;
    for (const auto& t : j) fs.terms.push_back(parse_field(t, path + "[" + std::to_string(i++) + "]"));
  } else {
    fs.terms.push_back(parse_field(j, path));
  }
  return fs;
}

std::vector<ScalarField> parse_field_list(const json& j, const std::string& path, int expect) {
  if (!j.is_array()) schema_fail(path, "expected an array of d field objects");
  std::vector<ScalarField> out;
  int i = 0;
  for (const auto& t : j) out.push_back(parse_field(t, path + "[" + std::to_string(i++) + "]"));
  if (static_cast<int>(out.size()) != expect)
    throw ValueError(path + ": expected " + std::to_string(expect) + " entries");
  return out;
}

ZoneCoefficients parse_zone(const json& j, const std::string& path, int dim) {
  check_keys(j, path, {"a", "b"});
  ZoneCoefficients z;
  if (!j.contains("a")) schema_fail(path + ".a", "missing");
  if (!j.contains("b")) schema_fail(path + ".b", "missing");
  z.a_diag = parse_field_list(j["a"], path + ".a", dim);
  z.b = parse_field_list(j["b"], path + ".b", dim);
  return z;
}

int max_mode_in_zone(const ZoneCoefficients& z) {
  int m = 0;
  for (const auto& f : z.a_diag) m = std::max(m, f.max_axial_mode());
  for (const auto& f : z.b) m = std::max(m, f.max_axial_mode());
  return m;
}

} // namespace

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  check_keys(j, "$",
             {"dimension", "cross_section", "resolution", "cell_resolution", "k_sequence",
              "window", "tol", "eps_drift", "scheme", "coefficients", "f", "g", "K_minus",
              "K_plus", "regime_override", "solver", "semi", "sweep", "declared_lambda",
              "decay", "jobs"});

  RunConfig rc;
  CoefficientModel& model = rc.model;
  model.dim = static_cast<int>(number_or(j, "dimension", 1));
  if (model.dim < 1) throw ValueError("$.dimension: must be >= 1");

  if (model.dim > 1) {
    if (!j.contains("cross_section")) schema_fail("$.cross_section", "missing for dimension > 1");
    const auto& cs = j["cross_section"];
    check_keys(cs, "$.cross_section", {"extents", "cells"});
    if (!cs.contains("extents") || !cs["extents"].is_array())
      schema_fail("$.cross_section.extents", "expected an array of [lo,hi] pairs");
    int i = 0;
    for (const auto& e : cs["extents"]) {
      if (!e.is_array() || e.size() != 2)
        schema_fail("$.cross_section.extents[" + std::to_string(i) + "]", "expected [lo, hi]");
      const double lo = e[0].get<double>(), hi = e[1].get<double>();
      if (!(hi > lo))
        throw ValueError("cross_section.extents[" + std::to_string(i) + "]: hi <= lo");
      model.cross_section.extents.emplace_back(lo, hi);
      ++i;
    }
    if (!cs.contains("cells")) schema_fail("$.cross_section.cells", "missing");
    for (const auto& c : cs["cells"])
      model.cross_section.cells_per_axis.push_back(c.get<int>());
  }
  if (model.cross_section.dim() != model.dim - 1)
    throw ValueError("cross_section: expected " + std::to_string(model.dim - 1) + " axes");

  if (!j.contains("coefficients")) schema_fail("$.coefficients", "missing");
  const auto& co = j["coefficients"];
  check_keys(co, "$.coefficients", {"left", "middle", "right"});
  for (const char* z : {"left", "middle", "right"})
    if (!co.contains(z)) schema_fail(std::string("$.coefficients.") + z, "missing");
  model.left = parse_zone(co["left"], "$.coefficients.left", model.dim);
  model.middle = parse_zone(co["middle"], "$.coefficients.middle", model.dim);
  model.right = parse_zone(co["right"], "$.coefficients.right", model.dim);

  if (j.contains("f")) model.f = parse_field_sum(j["f"], "$.f");
  if (j.contains("g")) model.g = parse_field_sum(j["g"], "$.g");
  model.declared_lambda = number_or(j, "declared_lambda", 0.0);
  if (j.contains("decay")) {
    check_keys(j["decay"], "$.decay", {"c0", "gamma0"});
    model.decay_c0 = number_or(j["decay"], "c0", 0.0);
    model.decay_gamma0 = number_or(j["decay"], "gamma0", 0.0);
  }
  model.validate();

  SolveInfiniteOptions& so = rc.solve;
  so.cells_per_unit = static_cast<int>(number_or(j, "resolution", 64));
  if (so.cells_per_unit < 1) throw ValueError("$.resolution: cells per unit must be >= 1");
  so.cell_resolution = static_cast<int>(number_or(j, "cell_resolution", 256));
  if (j.contains("k_sequence")) {
    so.k_sequence.clear();
    for (const auto& k : j["k_sequence"]) so.k_sequence.push_back(k.get<double>());
    for (std::size_t i = 0; i + 1 < so.k_sequence.size(); ++i)
      if (!(so.k_sequence[i] < so.k_sequence[i + 1]))
        throw ValueError("$.k_sequence: must be strictly increasing");
  }
  so.window = number_or(j, "window", 4.0);
  so.tol = number_or(j, "tol", 1e-4);
  so.eps_drift = number_or(j, "eps_drift", 1e-6);
  so.K_minus = number_or(j, "K_minus", 0.0);
  so.K_plus = number_or(j, "K_plus", 0.0);
  so.jobs = static_cast<int>(number_or(j, "jobs", 1));
  if (j.contains("scheme")) {
    const std::string s = j["scheme"].get<std::string>();
    if (s == "upwind")
      so.scheme = Scheme::Upwind;
    else if (s == "central")
      so.scheme = Scheme::Central;
    else
      throw ValueError("$.scheme: expected 'upwind' or 'central'");
  }
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    check_keys(s, "$.solver", {"method", "tol", "max_iter"});
    if (s.contains("method")) {
      const std::string m = s["method"].get<std::string>();
      if (m == "direct")
        so.solver.method = SolveMethod::DirectBanded;
      else if (m == "iterative")
        so.solver.method = SolveMethod::Iterative;
      else
        throw ValueError("$.solver.method: expected 'direct' or 'iterative'");
    }
    so.solver.tol = number_or(s, "tol", 1e-10);
    if (!(so.solver.tol > 0)) throw ValueError("$.solver.tol: must be > 0");
    so.solver.max_iter = static_cast<int>(number_or(s, "max_iter", 10000));
  }
  if (j.contains("regime_override")) {
    const std::string r = j["regime_override"].get<std::string>();
    if (r == "two-parameter")
      rc.regime_override = RegimeTag::TwoParameter;
    else if (r == "one-parameter-left")
      rc.regime_override = RegimeTag::OneParameterLeft;
    else if (r == "one-parameter-right")
      rc.regime_override = RegimeTag::OneParameterRight;
    else if (r == "compatibility")
      rc.regime_override = RegimeTag::Compatibility;
    else
      throw ValueError("$.regime_override: unknown regime '" + r + "'");
  }
  if (j.contains("semi")) {
    const auto& s = j["semi"];
    check_keys(s, "$.semi", {"phi", "K", "k"});
    SemiSpec spec;
    if (s.contains("phi")) {
      if (s["phi"].is_number())
        spec.phi.terms.push_back(ScalarField::constant(s["phi"].get<double>()));
      else
        spec.phi = parse_field_sum(s["phi"], "$.semi.phi");
    }
    spec.K = number_or(s, "K", 0.0);
    spec.k = number_or(s, "k", 8.0);
    rc.semi = std::move(spec);
  }
  if (j.contains("sweep")) {
    if (!j["sweep"].is_array()) schema_fail("$.sweep", "expected an array of axes");
    int i = 0;
    for (const auto& ax : j["sweep"]) {
      const std::string path = "$.sweep[" + std::to_string(i++) + "]";
      check_keys(ax, path, {"path", "values"});
      SweepAxis sa;
      if (!ax.contains("path")) schema_fail(path + ".path", "missing");
      sa.path = ax["path"].get<std::string>();
      if (!ax.contains("values") || !ax["values"].is_array() || ax["values"].empty())
        schema_fail(path + ".values", "expected a non-empty array");
      for (const auto& v : ax["values"]) sa.values.push_back(v.get<double>());
      rc.sweep.push_back(std::move(sa));
    }
  }

  // Fourier aliasing: a mode m needs > 2m samples per period
  int mm = std::max({max_mode_in_zone(model.left), max_mode_in_zone(model.middle),
                     max_mode_in_zone(model.right), model.f.max_axial_mode(),
                     model.g.max_axial_mode()});
  if (mm > 0 && 2 * mm >= so.cells_per_unit)
    rc.warnings.push_back("resolution " + std::to_string(so.cells_per_unit) +
                          " cells/unit under-resolves Fourier mode " + std::to_string(mm) +
                          " (aliasing)");

  rc.canonical_text = j.dump();
  rc.config_hash = fnv1a_hex(rc.canonical_text);
  return rc;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValueError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

} // namespace cyldrift
