#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "cyldrift/cell.hpp"
#include "cyldrift/coefficients.hpp"
#include "cyldrift/discretize.hpp"
#include "cyldrift/geometry.hpp"
#include "cyldrift/linalg.hpp"

namespace cyldrift {

enum class Side { Left, Right };

/// One truncated-cylinder problem G_{-k}^{k} with its sampled data.
struct TruncatedProblem {
  CylinderGrid grid;
  CoefficientTable table;
  BaseCondition bc;
  Scheme scheme = Scheme::Upwind;
  RegimeCase regime;
};

TruncatedProblem make_truncated_problem(const CoefficientModel& model, double k,
                                        int cells_per_unit, BaseCondition bc,
                                        Scheme scheme, RegimeCase regime);

/// Tail behavior of the adjoint ground state on one side.
struct TailFit {
  enum class Kind { ExponentialRate, PeriodicStabilization };
  Kind kind = Kind::ExponentialRate;
  double rate = 0.0;           // delta, for ExponentialRate
  double sup_distance = 0.0;   // for PeriodicStabilization
  double reference_scale = 0.0;
};

/// Adjoint ground state p^k on a truncated cylinder. Both normalizations of
/// the same vector are kept: MaxOne for reporting, IntegralOne for the r^k
/// correction.
struct AdjointState {
  Vector p_max_one;
  Vector p_integral_one;
  double residual = 0.0;
  TailFit left, right;
};

struct CompatibilityReport {
  double functional_value = 0.0;    // sum f p vol + sum g p area
  double r_k = 0.0;
  double corrected_residual = 0.0;  // same functional for (f + r_k chi, g)
  double data_norm = 0.0;           // ||f||_L2 + ||g||_L2
};

/// Least-squares stabilization fit on one side.
struct StabilizationFit {
  double K = 0.0;
  double gamma = 0.0;          // +inf sentinel when all windows are flat
  double r_squared = 1.0;
  bool poor_fit = false;       // r_squared < 0.995 over the clean windows
  int windows_used = 0;
};

struct SolveInfiniteOptions {
  std::vector<double> k_sequence = {4, 6, 8, 12, 16};
  double window = 4.0;             // reporting window G_{-w}^{w}
  double tol = 1e-4;               // successive-k convergence + compatibility gate
  int cells_per_unit = 64;
  int cell_resolution = 256;       // axial cells for the periodicity-cell problems
  Scheme scheme = Scheme::Upwind;
  double eps_drift = 1e-6;
  double K_minus = 0.0, K_plus = 0.0;   // prescribed limits (TwoParameter only)
  SolveOptions solver;
  int jobs = 1;
  bool force_full_sequence = false;     // disable early termination (demos/studies)
};

struct CylinderSolution {
  RegimeCase regime;
  std::vector<double> k_values;
  std::vector<double> conv_history;        // sup-diff on the window between consecutive k
  bool converged = false;
  std::vector<double> window_x1;           // axial centers of the reporting window
  std::vector<Vector> window_samples;      // one per k, ordered like the final grid
  std::shared_ptr<CylinderGrid> grid;      // final-k grid
  Vector u;                                // final-k solution
  StabilizationFit fit_left, fit_right;
  std::optional<CompatibilityReport> compat;
  std::optional<AdjointState> adjoint;     // Compatibility regime only
  std::vector<std::array<double, 3>> base_maxima;   // (k, left max, right max)
  double base_decay_rate = 0.0;            // fitted from base_maxima (0 if skipped)
  bool base_check_applicable = false;
  double m_weighted_norm = 0.0;            // ||(1+x1^2) f|| + ||(1+x1^2) g||
  bool hypothesis_violated = false;        // (H3) fit failed (advisory)
  bool boundary_case = false;              // some |drift| <= eps_drift
};

/// Dirichlet truncation u(+-k, x') = K^{+-} (homogeneous lateral data handled
/// by the table's g).
Vector solve_truncated_dirichlet(const TruncatedProblem& prob, double K_minus, double K_plus,
                                 const SolveOptions& opts = {});

/// Adjoint ground state of the conormal-zero truncation, with per-side tail
/// analysis driven by the regime's drift signs.
AdjointState solve_adjoint_truncated(const TruncatedProblem& prob, const CoefficientModel& model,
                                     const SolveOptions& opts = {});

/// Discrete compatibility functional sum f p vol + sum g p area.
double compatibility_residual(const Vector& p, const CylinderGrid& grid,
                              const CoefficientTable& table);

/// Conormal-zero truncation with the r^k correction and the window anchor
/// int_{G_0^1} u = 0. The corrected functional is machine-zero by construction.
std::pair<Vector, CompatibilityReport> solve_truncated_neumann(
    const TruncatedProblem& prob, const CoefficientModel& model, const SolveOptions& opts = {},
    const AdjointState* precomputed = nullptr);

struct SemiInfiniteResult {
  Vector v;
  std::shared_ptr<CylinderGrid> grid;
  double drift = 0.0;               // right-zone effective drift
  int drift_sign = 0;               // classified with eps_drift
  double fitted_constant = 0.0;     // C_phi^inf (drift>0), K-limit (drift<0)
  double fitted_gamma = 0.0;
  double linear_deviation = 0.0;    // drift == 0: max deviation from linear fit
};

/// Dirichlet phi at S_0, Dirichlet K at S_k on the half-cylinder (0,k) x Q.
/// The axial zone layout gives the "compact perturbation near 0" (middle-zone
/// data on (0,1], right-zone periodic data beyond).
SemiInfiniteResult solve_semi_infinite(const CoefficientModel& model,
                                       const std::function<double(const Point&)>& phi, double K,
                                       double k, int cells_per_unit,
                                       const SolveOptions& opts = {}, double eps_drift = 1e-6);

/// Growing-k orchestration with regime-correct boundary conditions.
CylinderSolution solve_infinite(const CoefficientModel& model, const RegimeCase& regime,
                                const SolveInfiniteOptions& opts);

/// K from the far-window mean (with a geometric bias correction) and gamma
/// from the log window-norm slope. Needs >= 6 unit windows on the side.
StabilizationFit fit_stabilization(const CylinderGrid& grid, const Vector& u, Side side);

struct MonotonicityProfile {
  double beta_estimate = 0.0;
  std::vector<std::pair<double, double>> bins;   // (|x1| bin center, cross-section max)
};

/// Diagnostic for the adjoint state's axial monotonicity envelope.
MonotonicityProfile monotonicity_profile(const AdjointState& p, const CylinderGrid& grid);

struct BaseSmallness {
  bool applicable = false;   // both drifts nonzero in the Compatibility regime
  double left_max = 0.0;
  double right_max = 0.0;
};

BaseSmallness base_smallness_check(const AdjointState& p, const CylinderGrid& grid,
                                   const RegimeCase& regime);

/// ||f||_{L2(G)} + ||g||_{L2(Sigma)} on the grid (plain and (1+x1^2)-weighted).
double data_norm(const CylinderGrid& grid, const CoefficientTable& table);
double weighted_data_norm(const CylinderGrid& grid, const CoefficientTable& table);

} // namespace cyldrift
