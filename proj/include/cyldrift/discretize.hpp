#pragma once

#include <functional>
#include <optional>
#include <variant>

#include "cyldrift/coefficients.hpp"
#include "cyldrift/geometry.hpp"
#include "cyldrift/linalg.hpp"

namespace cyldrift {

enum class Scheme { Upwind, Central };

/// Dirichlet base data: a value field on the base cross-section.
struct DirichletValue {
  std::function<double(const Point&)> value;   // evaluated at base face centers

  static DirichletValue constant(double K) {
    return DirichletValue{[K](const Point&) { return K; }};
  }
};

struct ConormalZero {};

using BaseSide = std::variant<DirichletValue, ConormalZero>;

struct BaseCondition {
  BaseSide left = ConormalZero{};
  BaseSide right = ConormalZero{};

  static BaseCondition dirichlet(double K_minus, double K_plus) {
    return {DirichletValue::constant(K_minus), DirichletValue::constant(K_plus)};
  }
  static BaseCondition conormal_zero() { return {}; }
  bool both_conormal() const {
    return std::holds_alternative<ConormalZero>(left) &&
           std::holds_alternative<ConormalZero>(right);
  }
};

/// Volume-integrated finite-volume operator: row i is the net flux balance of
/// cell i, weights W are the cell volumes. The weighted transpose
/// W^{-1} A^T W is the discrete adjoint (see discrete_adjoint).
struct DiscreteOperator {
  SparseMat matrix;
  Vector weights;
  Scheme scheme = Scheme::Upwind;
  bool conormal_bases = false;   // true if assembled with ConormalZero on both bases
  bool is_adjoint = false;

  int size() const { return static_cast<int>(matrix.rows()); }
};

/// Assemble -div(a grad u) + b . grad u on a finite cylinder.
/// Fluxes: two-point diffusion with face-averaged a; convection in advective
/// form q_out * (u_f - u_i) with donor-cell (Upwind) or face-average (Central)
/// u_f. Lateral faces carry zero flux (homogeneous Neumann is built in; g
/// enters through the right-hand side only). Dirichlet bases are eliminated
/// against ghost values at half spacing.
DiscreteOperator assemble_primal(const CylinderGrid& grid, const CoefficientTable& table,
                                 const BaseCondition& bc, Scheme scheme = Scheme::Upwind);

/// Same operator on the periodicity cell (axially wrapped, lateral Neumann).
DiscreteOperator assemble_cell_primal(const CellGrid& grid, const CoefficientTable& table,
                                      Scheme scheme = Scheme::Upwind);

/// Volume-integrated right-hand side: f by the midpoint rule, g as a lateral
/// surface source, plus the Dirichlet elimination terms of `bc` (the scheme
/// fixes which advective base terms were eliminated).
Vector assemble_rhs(const CylinderGrid& grid, const CoefficientTable& table,
                    const BaseCondition& bc, Scheme scheme = Scheme::Upwind);

/// Weighted transpose W^{-1} A^T W: the unique discrete operator with
/// <A u, p>_W == <u, A* p>_W. Requires conormal-zero bases (the adjoint of the
/// Dirichlet variant is not used by the truncation schemes and is rejected).
DiscreteOperator discrete_adjoint(const DiscreteOperator& op);

} // namespace cyldrift
