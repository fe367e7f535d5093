#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cyldrift/errors.hpp"

namespace cyldrift {

/// Hard cap on the space dimension d = 1 + cross-section dim.
inline constexpr int kMaxDim = 4;

/// A point x = (x1, x') with runtime dimension <= kMaxDim.
using Point = std::array<double, kMaxDim>;

enum class Zone : std::uint8_t { Left, Middle, Right };

/// Axis-aligned box cross-section Q in R^{d-1} with a uniform tensor grid.
/// dim == 0 encodes the degenerate 1D cylinder (Q a point, no lateral boundary).
struct CrossSection {
  std::vector<std::pair<double, double>> extents;   // (lo, hi) per axis
  std::vector<int> cells_per_axis;

  int dim() const { return static_cast<int>(extents.size()); }
  int cell_count() const;
  double area() const;                 // |Q| (1 for dim 0)
  double spacing(int axis) const;
  void validate() const;
};

enum class FaceKind : std::uint8_t { Interior, Lateral, BaseLeft, BaseRight };

/// One grid face. `minus_cell`/`plus_cell` are the cells on the -axis/+axis
/// side; boundary faces have exactly one of them set (the other is -1).
struct Face {
  int axis = 0;          // normal axis, 0 = axial
  int minus_cell = -1;
  int plus_cell = -1;
  double area = 0.0;
  double spacing = 0.0;  // center-to-center distance (cell-to-face x2 at bases)
  Point center{};
  FaceKind kind = FaceKind::Interior;
};

/// Shared tensor-grid machinery for the finite cylinder and the periodicity cell.
struct GridCore {
  double axial_lo = 0.0, axial_hi = 0.0;
  int axial_cells = 0;
  bool axial_periodic = false;
  CrossSection cross_section;

  std::vector<Point> cell_centers;
  std::vector<double> cell_volumes;
  std::vector<Face> faces;

  int dim() const { return 1 + cross_section.dim(); }
  int cell_count() const { return axial_cells * cross_section.cell_count(); }
  double axial_spacing() const { return (axial_hi - axial_lo) / axial_cells; }
  /// cell id = axial_index * cross_count + cross_linear_index
  int cell_index(int axial, int cross) const { return axial * cross_section.cell_count() + cross; }
  int axial_of(int cell) const { return cell / cross_section.cell_count(); }
  int cross_of(int cell) const { return cell % cross_section.cell_count(); }

  void build();   // fills centers, volumes, faces
};

/// Finite cylinder G_{-k}^{k} = (-k,k) x Q with (H1) zone labels at x1 = +-1.
struct CylinderGrid {
  double half_length = 0.0;   // k
  GridCore core;
  std::vector<Zone> zone_of_cell;

  int cell_count() const { return core.cell_count(); }
  int dim() const { return core.dim(); }
  double axial_spacing() const { return core.axial_spacing(); }
  const std::vector<Face>& faces() const { return core.faces; }
  const Point& center(int cell) const { return core.cell_centers[cell]; }
  double volume(int cell) const { return core.cell_volumes[cell]; }

  std::vector<const Face*> lateral_faces() const;
  std::vector<const Face*> base_faces_left() const;
  std::vector<const Face*> base_faces_right() const;
};

/// Periodicity cell Y = T^1 x Q: axially wrapped unit-period grid.
struct CellGrid {
  GridCore core;

  int cell_count() const { return core.cell_count(); }
  int dim() const { return core.dim(); }
  double axial_spacing() const { return core.axial_spacing(); }
  const std::vector<Face>& faces() const { return core.faces; }
  const Point& center(int cell) const { return core.cell_centers[cell]; }
  double volume(int cell) const { return core.cell_volumes[cell]; }
};

/// Uniform grid on (-k,k) x Q. Requires k >= 2, axial_cells >= 4, an integer
/// number of cells per unit axial length, and k*m integral so that the zone
/// interfaces x1 = +-1 are grid faces.
CylinderGrid build_cylinder_grid(double k, int axial_cells, const CrossSection& cs);

/// Uniform grid on a general interval (lo,hi) x Q with Dirichlet/Neumann-style
/// bases (used by the semi-infinite mode; zone labels still split at +-1).
CylinderGrid build_axial_grid(double lo, double hi, int axial_cells, const CrossSection& cs);

/// Torus grid on (0,1) x Q.
CellGrid build_cell_grid(int axial_cells, const CrossSection& cs);

Zone zone_of(double x1);

} // namespace cyldrift
