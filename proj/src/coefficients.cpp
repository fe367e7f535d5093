#include "cyldrift/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

namespace cyldrift {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sign0(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }
} // namespace

double CrossProfile::eval(const Point& x, const CrossSection& cs) const {
  double v = constant;
  for (std::size_t a = 0; a < modes.size() && a < static_cast<std::size_t>(cs.dim()); ++a) {
    if (modes[a] == 0) continue;
    const auto& [lo, hi] = cs.extents[a];
    v *= std::cos(std::numbers::pi * modes[a] * (x[1 + a] - lo) / (hi - lo));
  }
  return v;
}

ScalarField ScalarField::constant(double c) {
  ScalarField f;
  f.kind_ = Kind::Constant;
  f.value = c;
  return f;
}

ScalarField ScalarField::fourier(std::vector<FourierMode> modes, CrossProfile cross) {
  ScalarField f;
  f.kind_ = Kind::FourierAxial;
  f.modes = std::move(modes);
  f.cross = std::move(cross);
  return f;
}

ScalarField ScalarField::sign_axial(double scale) {
  ScalarField f;
  f.kind_ = Kind::SignAxial;
  f.value = scale;
  return f;
}

ScalarField ScalarField::indicator_axial(double lo, double hi, double value) {
  if (!(hi > lo)) throw ValueError("indicator field: hi <= lo");
  ScalarField f;
  f.kind_ = Kind::IndicatorAxial;
  f.lo = lo;
  f.hi = hi;
  f.value = value;
  return f;
}

ScalarField ScalarField::tabulated(double x0, double dx, std::vector<double> values) {
  if (values.size() < 2) throw ValueError("tabulated field: need >= 2 samples");
  if (!(dx > 0)) throw ValueError("tabulated field: dx must be > 0");
  for (double v : values)
    if (!std::isfinite(v)) throw ValueError("tabulated field: non-finite sample");
  ScalarField f;
  f.kind_ = Kind::Tabulated;
  f.tab_x0 = x0;
  f.tab_dx = dx;
  f.tab_values = std::move(values);
  return f;
}

double ScalarField::eval(const Point& x, const CrossSection& cs) const {
  switch (kind_) {
    case Kind::Constant:
      return value;
    case Kind::FourierAxial: {
      double s = 0.0;
      for (const auto& m : modes)
        s += m.cos_amp * std::cos(kTwoPi * m.m * x[0]) + m.sin_amp * std::sin(kTwoPi * m.m * x[0]);
      return s * cross.eval(x, cs);
    }
    case Kind::SignAxial:
      return value * sign0(x[0]);
    case Kind::IndicatorAxial:
      return (x[0] >= lo && x[0] <= hi) ? value : 0.0;
    case Kind::Tabulated: {
      const double t = (x[0] - tab_x0) / tab_dx;
      const auto nseg = static_cast<double>(tab_values.size() - 1);
      if (t <= 0.0) return tab_values.front();
      if (t >= nseg) return tab_values.back();
      const auto i = static_cast<std::size_t>(t);
      const double w = t - static_cast<double>(i);
      return (1.0 - w) * tab_values[i] + w * tab_values[i + 1];
    }
  }
  return 0.0;
}

int ScalarField::max_axial_mode() const {
  int mm = 0;
  for (const auto& m : modes) mm = std::max(mm, std::abs(m.m));
  return mm;
}

double FieldSum::eval(const Point& x, const CrossSection& cs) const {
  double s = 0.0;
  for (const auto& t : terms) s += t.eval(x, cs);
  return s;
}

int FieldSum::max_axial_mode() const {
  int mm = 0;
  for (const auto& t : terms) mm = std::max(mm, t.max_axial_mode());
  return mm;
}

const ZoneCoefficients& CoefficientModel::zone(Zone z) const {
  switch (z) {
    case Zone::Left: return left;
    case Zone::Right: return right;
    default: return middle;
  }
}

double CoefficientModel::a_in_zone(Zone z, int axis, const Point& x) const {
  return zone(z).a_diag[axis].eval(x, cross_section);
}

double CoefficientModel::b_in_zone(Zone z, int axis, const Point& x) const {
  return zone(z).b[axis].eval(x, cross_section);
}

double CoefficientModel::a(int axis, const Point& x) const {
  return a_in_zone(zone_of(x[0]), axis, x);
}

double CoefficientModel::b(int axis, const Point& x) const {
  return b_in_zone(zone_of(x[0]), axis, x);
}

void CoefficientModel::validate() const {
  if (dim < 1) throw ValueError("model dimension must be >= 1");
  if (dim != cross_section.dim() + 1)
    throw ValueError("model dimension inconsistent with cross-section");
  cross_section.validate();
  for (Zone z : {Zone::Left, Zone::Middle, Zone::Right}) {
    const auto& zc = zone(z);
    if (static_cast<int>(zc.a_diag.size()) != dim || static_cast<int>(zc.b.size()) != dim)
      throw ValueError("zone coefficients must have d entries for a_diag and b");
  }
  if (dim == 1 && !g.empty())
    throw ValueError("g is a lateral source and must be absent for d = 1");

  // 1-periodicity of the Left/Right zone fields, checked by sampling.
  std::mt19937 rng(0x9e3779b9u);
  std::uniform_real_distribution<double> ax(-3.0, 3.0);
  for (Zone z : {Zone::Left, Zone::Right}) {
    const auto& zc = zone(z);
    for (int probe = 0; probe < 16; ++probe) {
      Point x{};
      x[0] = ax(rng);
      for (int a = 0; a < cross_section.dim(); ++a) {
        const auto& [lo, hi] = cross_section.extents[a];
        x[1 + a] = lo + (hi - lo) * std::uniform_real_distribution<double>(0, 1)(rng);
      }
      Point xs = x;
      xs[0] += 1.0;
      for (int axis = 0; axis < dim; ++axis) {
        const double da = zc.a_diag[axis].eval(x, cross_section) -
                          zc.a_diag[axis].eval(xs, cross_section);
        const double db = zc.b[axis].eval(x, cross_section) - zc.b[axis].eval(xs, cross_section);
        if (std::abs(da) > 1e-12 || std::abs(db) > 1e-12)
          throw ValueError(std::string(z == Zone::Left ? "left" : "right") +
                           " zone field is not 1-periodic in x1");
      }
    }
  }
}

namespace {

CoefficientTable sample_core(const GridCore& core,
                             const std::function<double(int, const Point&)>& a_at,
                             const std::function<double(int, const Point&)>& b_at,
                             const std::function<double(const Point&)>& f_at,
                             const std::function<double(const Point&)>& g_at) {
  CoefficientTable t;
  const auto& faces = core.faces;
  t.a_face.resize(faces.size());
  t.b_face.resize(faces.size());
  t.g_face.assign(faces.size(), 0.0);
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const Face& f = faces[i];
    double a;
    if (f.minus_cell >= 0 && f.plus_cell >= 0) {
      a = 0.5 * (a_at(f.axis, core.cell_centers[f.minus_cell]) +
                 a_at(f.axis, core.cell_centers[f.plus_cell]));
    } else {
      const int c = f.minus_cell >= 0 ? f.minus_cell : f.plus_cell;
      a = a_at(f.axis, core.cell_centers[c]);
    }
    t.a_face[i] = a;
    t.b_face[i] = b_at(f.axis, f.center);
    if (f.kind == FaceKind::Lateral) t.g_face[i] = g_at(f.center);
  }
  t.f_cell.resize(core.cell_count());
  for (int c = 0; c < core.cell_count(); ++c) t.f_cell[c] = f_at(core.cell_centers[c]);
  return t;
}

} // namespace

CoefficientTable sample_on_grid(const CoefficientModel& model, const CylinderGrid& grid) {
  if (model.dim != grid.dim())
    throw ValueError("sample_on_grid: model and grid dimensions differ");
  const auto& cs = model.cross_section;
  return sample_core(
      grid.core, [&](int axis, const Point& x) { return model.a(axis, x); },
      [&](int axis, const Point& x) { return model.b(axis, x); },
      [&](const Point& x) { return model.f.eval(x, cs); },
      [&](const Point& x) { return model.g.eval(x, cs); });
}

CoefficientTable sample_zone_on_cell(const CoefficientModel& model, Zone zone,
                                     const CellGrid& grid) {
  if (model.dim != grid.dim())
    throw ValueError("sample_zone_on_cell: model and grid dimensions differ");
  if (zone == Zone::Middle)
    throw ValueError("cell problems are posed for the periodic Left/Right zones only");
  const auto& cs = model.cross_section;
  return sample_core(
      grid.core, [&](int axis, const Point& x) { return model.a_in_zone(zone, axis, x); },
      [&](int axis, const Point& x) { return model.b_in_zone(zone, axis, x); },
      [](const Point&) { return 0.0; }, [](const Point&) { return 0.0; });
}

double verify_ellipticity(const CoefficientTable& table) {
  double mn = std::numeric_limits<double>::infinity();
  for (double a : table.a_face) mn = std::min(mn, a);
  if (!(mn > 0.0)) throw NonElliptic(mn);
  return mn;
}

DecayReport verify_decay(const CoefficientModel& model, const CylinderGrid& grid) {
  DecayReport rep;
  const double k = grid.half_length;
  const int nk = static_cast<int>(std::floor(k + 1e-9));
  if (nk < 4) throw ValueError("verify_decay: need >= 4 unit windows per side");
  const auto& cs = model.cross_section;

  // window norms over G_n^{n+1} (f, cells) and Sigma_n^{n+1} (g, lateral faces)
  for (int n = -nk; n < nk; ++n) {
    double f2 = 0.0, g2 = 0.0;
    for (int c = 0; c < grid.cell_count(); ++c) {
      const double x1 = grid.center(c)[0];
      if (x1 > n && x1 < n + 1) {
        const double fv = model.f.eval(grid.center(c), cs);
        f2 += fv * fv * grid.volume(c);
      }
    }
    for (const auto& f : grid.faces()) {
      if (f.kind != FaceKind::Lateral) continue;
      if (f.center[0] > n && f.center[0] < n + 1) {
        const double gv = model.g.eval(f.center, cs);
        g2 += gv * gv * f.area;
      }
    }
    rep.window_norms.push_back({static_cast<double>(n), std::sqrt(f2), std::sqrt(g2)});
  }

  // fit log(total window norm) vs |n| over the outer windows |n| >= 1
  std::vector<double> xs, ys;
  bool any_outer_nonzero = false;
  for (const auto& w : rep.window_norms) {
    const double n = w[0];
    const double an = std::min(std::abs(n), std::abs(n + 1));   // |n| of the window
    if (an < 1.0) continue;
    const double norm = w[1] + w[2];
    if (norm > 1e-13) {
      any_outer_nonzero = true;
      xs.push_back(an);
      ys.push_back(std::log(norm));
    }
  }
  if (!any_outer_nonzero) {
    rep.compact_support = true;
    rep.passes = true;
    rep.fitted_gamma0 = std::numeric_limits<double>::infinity();
    rep.fitted_c0 = 0.0;
    return rep;
  }
  if (xs.size() < 2) {
    rep.passes = false;
    return rep;
  }
  // least squares line ys = c - gamma*xs
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  rep.fitted_gamma0 = -slope;
  rep.fitted_c0 = std::exp(intercept);
  rep.passes = rep.fitted_gamma0 > 1e-6;
  return rep;
}

} // namespace cyldrift
