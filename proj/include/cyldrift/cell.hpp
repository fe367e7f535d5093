#pragma once

#include <string>

#include "cyldrift/coefficients.hpp"
#include "cyldrift/discretize.hpp"
#include "cyldrift/geometry.hpp"
#include "cyldrift/linalg.hpp"

namespace cyldrift {

enum class Normalization { IntegralOne, MaxOne };

/// Positive solution of the periodic adjoint cell problem on Y = T^1 x Q.
struct PeriodicGroundState {
  Vector values;   // per cell, strictly positive
  Normalization normalization = Normalization::IntegralOne;
  double residual = 0.0;
};

enum class RegimeTag { TwoParameter, OneParameterLeft, OneParameterRight, Compatibility };

/// Sign classification of the effective drifts (b-^-, b-^+).
struct RegimeCase {
  RegimeTag tag = RegimeTag::Compatibility;
  double b_minus = 0.0;
  double b_plus = 0.0;
  bool left_is_zero = false;   // |b-^-| <= eps_drift
  bool right_is_zero = false;
  double eps_drift = 1e-6;
};

std::string to_string(RegimeTag tag);

/// Solve the adjoint periodic cell problem for one zone; IntegralOne-normalized.
PeriodicGroundState solve_cell_ground_state(Zone zone, const CoefficientModel& model,
                                            const CellGrid& grid,
                                            const SolveOptions& opts = {});

/// Effective axial drift: midpoint quadrature of a11 d1p + b1 p over Y, with
/// face-centered differences for d1p. Requires IntegralOne normalization.
double effective_drift(const PeriodicGroundState& ps, Zone zone, const CoefficientModel& model,
                       const CellGrid& grid);

/// Sign trichotomy with the boundary (zero) conventions of the theory:
/// zeros on the compatibility side belong to Compatibility.
RegimeCase classify_regime(double b_minus, double b_plus, double eps_drift = 1e-6);

struct DriftPair {
  double b_minus = 0.0;
  double b_plus = 0.0;
};

/// Solve both cell problems at the given axial resolution and return the drifts.
DriftPair compute_drifts(const CoefficientModel& model, int cell_axial_cells,
                         const SolveOptions& opts = {});

/// Classify, re-checking near-zero drifts on a once-refined cell grid before
/// committing (misclassification switches the whole solve strategy).
RegimeCase classify_with_refinement(const CoefficientModel& model, int cell_axial_cells,
                                    double eps_drift = 1e-6, const SolveOptions& opts = {});

} // namespace cyldrift
