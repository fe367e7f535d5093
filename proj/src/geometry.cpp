#include "cyldrift/geometry.hpp"

#include <cmath>

namespace cyldrift {

int CrossSection::cell_count() const {
  int n = 1;
  for (int c : cells_per_axis) n *= c;
  return n;
}

double CrossSection::area() const {
  double a = 1.0;
  for (auto& [lo, hi] : extents) a *= (hi - lo);
  return a;
}

double CrossSection::spacing(int axis) const {
  return (extents[axis].second - extents[axis].first) / cells_per_axis[axis];
}

void CrossSection::validate() const {
  if (extents.size() != cells_per_axis.size())
    throw ValueError("cross_section: extents and cells_per_axis lengths differ");
  if (dim() > kMaxDim - 1)
    throw ValueError("cross_section: dimension exceeds supported maximum");
  for (std::size_t i = 0; i < extents.size(); ++i) {
    if (!(extents[i].second > extents[i].first))
      throw ValueError("cross_section.extents[" + std::to_string(i) + "]: hi <= lo");
    if (cells_per_axis[i] < 1)
      throw ValueError("cross_section.cells_per_axis[" + std::to_string(i) + "]: must be >= 1");
  }
}

Zone zone_of(double x1) {
  if (x1 < -1.0) return Zone::Left;
  if (x1 > 1.0) return Zone::Right;
  return Zone::Middle;
}

namespace {

// Decode a cross linear index into per-axis indices (row-major).
void cross_multi_index(const CrossSection& cs, int lin, int* idx) {
  for (int a = cs.dim() - 1; a >= 0; --a) {
    idx[a] = lin % cs.cells_per_axis[a];
    lin /= cs.cells_per_axis[a];
  }
}

int cross_linear_index(const CrossSection& cs, const int* idx) {
  int lin = 0;
  for (int a = 0; a < cs.dim(); ++a) lin = lin * cs.cells_per_axis[a] + idx[a];
  return lin;
}

} // namespace

void GridCore::build() {
  cross_section.validate();
  const int nc = cross_section.cell_count();
  const int n = cell_count();
  const double h = axial_spacing();
  const int cd = cross_section.dim();

  double cross_vol = 1.0;
  for (int a = 0; a < cd; ++a) cross_vol *= cross_section.spacing(a);

  cell_centers.assign(n, Point{});
  cell_volumes.assign(n, h * cross_vol);
  int idx[kMaxDim] = {0};
  for (int ax = 0; ax < axial_cells; ++ax) {
    for (int c = 0; c < nc; ++c) {
      Point p{};
      p[0] = axial_lo + (ax + 0.5) * h;
      cross_multi_index(cross_section, c, idx);
      for (int a = 0; a < cd; ++a)
        p[1 + a] = cross_section.extents[a].first + (idx[a] + 0.5) * cross_section.spacing(a);
      cell_centers[cell_index(ax, c)] = p;
    }
  }

  faces.clear();
  // Axial faces: planes j = 0..axial_cells (wrapped for the torus).
  const int axial_planes = axial_periodic ? axial_cells : axial_cells + 1;
  for (int j = 0; j < axial_planes; ++j) {
    for (int c = 0; c < nc; ++c) {
      Face f;
      f.axis = 0;
      f.area = cross_vol;
      f.spacing = h;
      cross_multi_index(cross_section, c, idx);
      f.center[0] = axial_lo + j * h;
      for (int a = 0; a < cd; ++a)
        f.center[1 + a] = cross_section.extents[a].first + (idx[a] + 0.5) * cross_section.spacing(a);
      if (axial_periodic) {
        f.minus_cell = cell_index((j + axial_cells - 1) % axial_cells, c);
        f.plus_cell = cell_index(j, c);
      } else if (j == 0) {
        f.plus_cell = cell_index(0, c);
        f.kind = FaceKind::BaseLeft;
        f.spacing = h / 2.0;   // cell center to base plane
      } else if (j == axial_cells) {
        f.minus_cell = cell_index(axial_cells - 1, c);
        f.kind = FaceKind::BaseRight;
        f.spacing = h / 2.0;
      } else {
        f.minus_cell = cell_index(j - 1, c);
        f.plus_cell = cell_index(j, c);
      }
      faces.push_back(f);
    }
  }
  // Cross faces per cross axis; boundary planes are the lateral boundary.
  for (int a = 0; a < cd; ++a) {
    const double ha = cross_section.spacing(a);
    double face_area = h;
    for (int b = 0; b < cd; ++b)
      if (b != a) face_area *= cross_section.spacing(b);
    for (int ax = 0; ax < axial_cells; ++ax) {
      for (int c = 0; c < nc; ++c) {
        cross_multi_index(cross_section, c, idx);
        // minus-side plane of every cell; cells on the top row also emit the
        // closing boundary plane
        const int nplanes = (idx[a] == cross_section.cells_per_axis[a] - 1) ? 2 : 1;
        for (int side = 0; side < nplanes; ++side) {
          const int plane = idx[a] + side;   // 0..cells
          Face f;
          f.axis = 1 + a;
          f.area = face_area;
          f.spacing = ha;
          f.center[0] = axial_lo + (ax + 0.5) * h;
          for (int b = 0; b < cd; ++b)
            f.center[1 + b] = cross_section.extents[b].first +
                              (b == a ? plane : idx[b] + 0.5) * cross_section.spacing(b);
          if (plane == 0) {
            f.plus_cell = cell_index(ax, c);
            f.kind = FaceKind::Lateral;
            f.spacing = ha / 2.0;
          } else if (plane == cross_section.cells_per_axis[a]) {
            f.minus_cell = cell_index(ax, c);
            f.kind = FaceKind::Lateral;
            f.spacing = ha / 2.0;
          } else {
            int nb[kMaxDim];
            for (int b = 0; b < cd; ++b) nb[b] = idx[b];
            nb[a] = plane - 1;
            f.minus_cell = cell_index(ax, cross_linear_index(cross_section, nb));
            f.plus_cell = cell_index(ax, c);
          }
          faces.push_back(f);
        }
      }
    }
  }
}

std::vector<const Face*> CylinderGrid::lateral_faces() const {
  std::vector<const Face*> out;
  for (const auto& f : core.faces)
    if (f.kind == FaceKind::Lateral) out.push_back(&f);
  return out;
}

std::vector<const Face*> CylinderGrid::base_faces_left() const {
  std::vector<const Face*> out;
  for (const auto& f : core.faces)
    if (f.kind == FaceKind::BaseLeft) out.push_back(&f);
  return out;
}

std::vector<const Face*> CylinderGrid::base_faces_right() const {
  std::vector<const Face*> out;
  for (const auto& f : core.faces)
    if (f.kind == FaceKind::BaseRight) out.push_back(&f);
  return out;
}

CylinderGrid build_cylinder_grid(double k, int axial_cells, const CrossSection& cs) {
  if (k < 2.0) throw ValueError("half_length k must be >= 2 (zones degenerate otherwise)");
  if (axial_cells < 4) throw ValueError("axial_cells must be >= 4");
  const double m = axial_cells / (2.0 * k);   // cells per unit axial length
  if (std::abs(m - std::round(m)) > 1e-9 || m < 1.0 - 1e-9)
    throw ValueError("axial_cells per unit length must be a positive integer "
                     "(grid must resolve the unit period)");
  const double km = k * std::round(m);
  if (std::abs(km - std::round(km)) > 1e-9)
    throw ValueError("k * cells_per_unit must be integral so x1 = +-1 are grid faces");

  CylinderGrid g;
  g.half_length = k;
  g.core.axial_lo = -k;
  g.core.axial_hi = k;
  g.core.axial_cells = axial_cells;
  g.core.axial_periodic = false;
  g.core.cross_section = cs;
  g.core.build();
  g.zone_of_cell.resize(g.cell_count());
  for (int i = 0; i < g.cell_count(); ++i)
    g.zone_of_cell[i] = zone_of(g.core.cell_centers[i][0]);
  return g;
}

CylinderGrid build_axial_grid(double lo, double hi, int axial_cells, const CrossSection& cs) {
  if (!(hi > lo)) throw ValueError("axial interval: hi <= lo");
  if (axial_cells < 2) throw ValueError("axial_cells must be >= 2");
  CylinderGrid g;
  g.half_length = (hi - lo) / 2.0;
  g.core.axial_lo = lo;
  g.core.axial_hi = hi;
  g.core.axial_cells = axial_cells;
  g.core.axial_periodic = false;
  g.core.cross_section = cs;
  g.core.build();
  g.zone_of_cell.resize(g.cell_count());
  for (int i = 0; i < g.cell_count(); ++i)
    g.zone_of_cell[i] = zone_of(g.core.cell_centers[i][0]);
  return g;
}

CellGrid build_cell_grid(int axial_cells, const CrossSection& cs) {
  if (axial_cells < 2) throw ValueError("cell grid: axial_cells must be >= 2");
  CellGrid g;
  g.core.axial_lo = 0.0;
  g.core.axial_hi = 1.0;
  g.core.axial_cells = axial_cells;
  g.core.axial_periodic = true;
  g.core.cross_section = cs;
  g.core.build();
  return g;
}

} // namespace cyldrift
