#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cyldrift/geometry.hpp"

namespace cyldrift {

struct FourierMode {
  int m = 0;
  double cos_amp = 0.0;
  double sin_amp = 0.0;
};

/// Transverse factor for Fourier fields: constant, or a product of
/// cos(pi * n_a * (x_a - lo_a) / L_a) over the cross axes (zero normal
/// derivative on the box boundary).
struct CrossProfile {
  double constant = 1.0;
  std::vector<int> modes;   // empty => constant profile

  double eval(const Point& x, const CrossSection& cs) const;
};

/// Scalar coefficient field. The axial-discontinuous kinds (Sign, Indicator)
/// exist for the built-in demo data; everything else is smooth.
class ScalarField {
public:
  enum class Kind { Constant, FourierAxial, SignAxial, IndicatorAxial, Tabulated };

  static ScalarField constant(double c);
  static ScalarField fourier(std::vector<FourierMode> modes, CrossProfile cross = {});
  static ScalarField sign_axial(double scale);
  static ScalarField indicator_axial(double lo, double hi, double value);
  static ScalarField tabulated(double x0, double dx, std::vector<double> values);

  double eval(const Point& x, const CrossSection& cs) const;
  Kind kind() const { return kind_; }
  /// Largest axial Fourier mode (0 for non-Fourier kinds); used for the
  /// sampling/aliasing warning.
  int max_axial_mode() const;

  double value = 0.0;          // Constant value / Sign scale / Indicator value
  double lo = 0.0, hi = 0.0;   // Indicator support
  std::vector<FourierMode> modes;
  CrossProfile cross;
  double tab_x0 = 0.0, tab_dx = 1.0;
  std::vector<double> tab_values;

private:
  Kind kind_ = Kind::Constant;
};

/// Sum of scalar fields (f and g are supplied as sums of primitive terms).
struct FieldSum {
  std::vector<ScalarField> terms;

  bool empty() const { return terms.empty(); }
  double eval(const Point& x, const CrossSection& cs) const;
  int max_axial_mode() const;
};

struct ZoneCoefficients {
  std::vector<ScalarField> a_diag;   // d entries
  std::vector<ScalarField> b;        // d entries
};

/// Piecewise-periodic data (a, b, f, g) of the problem. The Left/Right zones
/// must be 1-periodic in x1; this is checked at validation time by sampling.
struct CoefficientModel {
  int dim = 1;                       // d >= 1
  CrossSection cross_section;        // dim-1 axes
  ZoneCoefficients left, middle, right;
  FieldSum f;
  FieldSum g;                        // lateral source; must be empty for dim == 1
  double declared_lambda = 0.0;      // optional declared ellipticity bound
  std::optional<double> decay_c0;    // optional declared (H3) constants
  std::optional<double> decay_gamma0;

  const ZoneCoefficients& zone(Zone z) const;
  double a(int axis, const Point& x) const;    // zone picked from x[0]
  double b(int axis, const Point& x) const;
  double a_in_zone(Zone z, int axis, const Point& x) const;
  double b_in_zone(Zone z, int axis, const Point& x) const;

  /// Checks shapes, and 1-periodicity of the Left/Right zone fields by
  /// sampling x1 and x1+1 at random probes (tolerance 1e-12). Throws.
  void validate() const;
};

/// Coefficients sampled on a grid: a and b at faces, f at cell centers,
/// g at lateral face centers. Face arrays are indexed like grid.faces.
struct CoefficientTable {
  std::vector<double> a_face;
  std::vector<double> b_face;   // normal component at the face center
  std::vector<double> f_cell;
  std::vector<double> g_face;   // nonzero only on lateral faces
};

/// Sample a model on the finite cylinder. Face diffusion uses the arithmetic
/// mean of the two adjacent cell-center values; drift is evaluated at face
/// centers (sign(0) = 0 at jump planes).
CoefficientTable sample_on_grid(const CoefficientModel& model, const CylinderGrid& grid);

/// Sample one periodic zone (Left or Right) on the periodicity cell.
CoefficientTable sample_zone_on_cell(const CoefficientModel& model, Zone zone,
                                     const CellGrid& grid);

/// Minimum sampled diagonal diffusion entry; throws NonElliptic if <= 0.
double verify_ellipticity(const CoefficientTable& table);

struct DecayReport {
  double fitted_c0 = 0.0;
  double fitted_gamma0 = 0.0;
  bool passes = false;
  bool compact_support = false;
  // (n, ||f||_{L2(G_n^{n+1})}, ||g||_{L2(Sigma_n^{n+1})}) per unit window
  std::vector<std::array<double, 3>> window_norms;
};

/// Advisory (H3) check: least-squares fit of log(window norm) against |n|
/// over windows with norm > 1e-13. Never throws; failure is a report flag.
DecayReport verify_decay(const CoefficientModel& model, const CylinderGrid& grid);

} // namespace cyldrift
