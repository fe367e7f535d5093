#include "cyldrift/cell.hpp"

#include <cmath>

namespace cyldrift {

std::string to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::TwoParameter: return "two-parameter";
    case RegimeTag::OneParameterLeft: return "one-parameter-left";
    case RegimeTag::OneParameterRight: return "one-parameter-right";
    case RegimeTag::Compatibility: return "compatibility";
  }
  return "?";
}

PeriodicGroundState solve_cell_ground_state(Zone zone, const CoefficientModel& model,
                                            const CellGrid& grid, const SolveOptions& opts) {
  const CoefficientTable table = sample_zone_on_cell(model, zone, grid);
  verify_ellipticity(table);
  const DiscreteOperator primal = assemble_cell_primal(grid, table, Scheme::Upwind);
  const DiscreteOperator adj = discrete_adjoint(primal);
  GroundStateResult gs = ground_state(adj, opts);

  PeriodicGroundState ps;
  double mass = 0.0;
  for (int c = 0; c < grid.cell_count(); ++c) mass += gs.vector[c] * grid.volume(c);
  ps.values = gs.vector / mass;
  ps.normalization = Normalization::IntegralOne;
  ps.residual = gs.residual;
  return ps;
}

double effective_drift(const PeriodicGroundState& ps, Zone zone, const CoefficientModel& model,
                       const CellGrid& grid) {
  if (ps.normalization != Normalization::IntegralOne)
    throw ValueError("effective_drift expects an IntegralOne-normalized cell state");
  const Vector& p = ps.values;
  double sum = 0.0, comp = 0.0;
  // one axial face per cell on the torus; each carries the cell's share h*A
  for (const auto& f : grid.faces()) {
    if (f.axis != 0) continue;
    const int L = f.minus_cell, R = f.plus_cell;
    const double a =
        0.5 * (model.a_in_zone(zone, 0, grid.center(L)) + model.a_in_zone(zone, 0, grid.center(R)));
    const double b1 = model.b_in_zone(zone, 0, f.center);
    const double dp = (p[R] - p[L]) / grid.axial_spacing();
    const double pf = 0.5 * (p[L] + p[R]);
    const double term = (a * dp + b1 * pf) * f.area * grid.axial_spacing();
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

RegimeCase classify_regime(double b_minus, double b_plus, double eps_drift) {
  if (!(eps_drift > 0.0)) throw ValueError("eps_drift must be > 0");
  RegimeCase rc;
  rc.b_minus = b_minus;
  rc.b_plus = b_plus;
  rc.eps_drift = eps_drift;
  rc.left_is_zero = std::abs(b_minus) <= eps_drift;
  rc.right_is_zero = std::abs(b_plus) <= eps_drift;
  const double bm = rc.left_is_zero ? 0.0 : b_minus;
  const double bp = rc.right_is_zero ? 0.0 : b_plus;
  if (bp < 0.0 && bm > 0.0)
    rc.tag = RegimeTag::TwoParameter;
  else if (bm <= 0.0 && bp < 0.0)
    rc.tag = RegimeTag::OneParameterLeft;
  else if (bm > 0.0 && bp >= 0.0)
    rc.tag = RegimeTag::OneParameterRight;
  else   // bp >= 0 && bm <= 0
    rc.tag = RegimeTag::Compatibility;
  return rc;
}

DriftPair compute_drifts(const CoefficientModel& model, int cell_axial_cells,
                         const SolveOptions& opts) {
  const CellGrid grid = build_cell_grid(cell_axial_cells, model.cross_section);
  DriftPair d;
  const PeriodicGroundState pl = solve_cell_ground_state(Zone::Left, model, grid, opts);
  d.b_minus = effective_drift(pl, Zone::Left, model, grid);
  const PeriodicGroundState pr = solve_cell_ground_state(Zone::Right, model, grid, opts);
  d.b_plus = effective_drift(pr, Zone::Right, model, grid);
  return d;
}

RegimeCase classify_with_refinement(const CoefficientModel& model, int cell_axial_cells,
                                    double eps_drift, const SolveOptions& opts) {
  DriftPair d = compute_drifts(model, cell_axial_cells, opts);
  if (std::abs(d.b_minus) <= eps_drift || std::abs(d.b_plus) <= eps_drift) {
    const DriftPair fine = compute_drifts(model, 2 * cell_axial_cells, opts);
    d = fine;
  }
  return classify_regime(d.b_minus, d.b_plus, eps_drift);
}

} // namespace cyldrift
