#include "cyldrift/discretize.hpp"

#include <vector>

namespace cyldrift {

namespace {

struct Triplets {
  std::vector<Eigen::Triplet<double>> t;
  void add(int i, int j, double v) { t.emplace_back(i, j, v); }
};

// Advective-form convection through one interior face: contributes
// q_out (u_f - u_i) to each adjacent cell's balance.
void convect_interior(Triplets& T, const Face& f, double q, Scheme scheme) {
  const int L = f.minus_cell, R = f.plus_cell;
  if (scheme == Scheme::Upwind) {
    if (q >= 0.0) {   // donor L; only R sees an inflow term -q (u_L - u_R)
      T.add(R, L, -q);
      T.add(R, R, q);
    } else {          // donor R
      T.add(L, R, q);
      T.add(L, L, -q);
    }
  } else {            // central face average
    T.add(L, L, -q / 2);
    T.add(L, R, q / 2);
    T.add(R, L, -q / 2);
    T.add(R, R, q / 2);
  }
}

} // namespace

DiscreteOperator assemble_primal(const CylinderGrid& grid, const CoefficientTable& table,
                                 const BaseCondition& bc, Scheme scheme) {
  const int n = grid.cell_count();
  Triplets T;
  const auto& faces = grid.faces();
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    const Face& f = faces[fi];
    const double a = table.a_face[fi];
    const double q = table.b_face[fi] * f.area;   // volumetric drift flux, minus -> plus
    if (f.kind == FaceKind::Interior) {
      const int L = f.minus_cell, R = f.plus_cell;
      const double t = a * f.area / f.spacing;
      T.add(L, L, t);
      T.add(L, R, -t);
      T.add(R, R, t);
      T.add(R, L, -t);
      convect_interior(T, f, q, scheme);
    } else if (f.kind == FaceKind::Lateral) {
      // zero-flux: diffusion handled by the Neumann condition (g in the rhs),
      // advective face value u_f = u_i gives no term
    } else {
      const bool left = f.kind == FaceKind::BaseLeft;
      const BaseSide& side = left ? bc.left : bc.right;
      if (std::holds_alternative<ConormalZero>(side)) continue;
      const int i = left ? f.plus_cell : f.minus_cell;
      const double t = a * f.area / f.spacing;   // ghost elimination, half spacing
      T.add(i, i, t);
      const double q_out = left ? -q : q;
      // u_f is the boundary value: Central always uses it; Upwind only on
      // inflow (outflow donor is the interior cell)
      if (scheme == Scheme::Central || q_out < 0.0) T.add(i, i, -q_out);
    }
  }
  DiscreteOperator op;
  op.matrix = SparseMat(n, n);
  op.matrix.setFromTriplets(T.t.begin(), T.t.end());
  op.weights = Vector::Zero(n);
  for (int c = 0; c < n; ++c) op.weights[c] = grid.volume(c);
  op.scheme = scheme;
  op.conormal_bases = bc.both_conormal();
  return op;
}

DiscreteOperator assemble_cell_primal(const CellGrid& grid, const CoefficientTable& table,
                                      Scheme scheme) {
  const int n = grid.cell_count();
  Triplets T;
  const auto& faces = grid.faces();
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    const Face& f = faces[fi];
    if (f.kind == FaceKind::Lateral) continue;
    const double t = table.a_face[fi] * f.area / f.spacing;
    const int L = f.minus_cell, R = f.plus_cell;
    T.add(L, L, t);
    T.add(L, R, -t);
    T.add(R, R, t);
    T.add(R, L, -t);
    convect_interior(T, f, table.b_face[fi] * f.area, scheme);
  }
  DiscreteOperator op;
  op.matrix = SparseMat(n, n);
  op.matrix.setFromTriplets(T.t.begin(), T.t.end());
  op.weights = Vector::Zero(n);
  for (int c = 0; c < n; ++c) op.weights[c] = grid.volume(c);
  op.scheme = scheme;
  op.conormal_bases = true;   // torus + lateral Neumann: no Dirichlet anywhere
  return op;
}

Vector assemble_rhs(const CylinderGrid& grid, const CoefficientTable& table,
                    const BaseCondition& bc, Scheme scheme) {
  const int n = grid.cell_count();
  Vector rhs = Vector::Zero(n);
  for (int c = 0; c < n; ++c) rhs[c] = table.f_cell[c] * grid.volume(c);
  const auto& faces = grid.faces();
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    const Face& f = faces[fi];
    if (f.kind == FaceKind::Lateral) {
      const int i = f.minus_cell >= 0 ? f.minus_cell : f.plus_cell;
      rhs[i] += table.g_face[fi] * f.area;
    } else if (f.kind == FaceKind::BaseLeft || f.kind == FaceKind::BaseRight) {
      const bool left = f.kind == FaceKind::BaseLeft;
      const BaseSide& side = left ? bc.left : bc.right;
      if (std::holds_alternative<ConormalZero>(side)) continue;
      const double K = std::get<DirichletValue>(side).value(f.center);
      const int i = left ? f.plus_cell : f.minus_cell;
      rhs[i] += table.a_face[fi] * f.area / f.spacing * K;
      const double q_out = (left ? -1.0 : 1.0) * table.b_face[fi] * f.area;
      // rhs part of the advective boundary term q_out (K - u_i); mirrors the
      // face-value rule in assemble_primal
      if (scheme == Scheme::Central || q_out < 0.0) rhs[i] += -q_out * K;
    }
  }
  return rhs;
}

DiscreteOperator discrete_adjoint(const DiscreteOperator& op) {
  if (!op.conormal_bases) throw AdjointOfDirichlet();
  DiscreteOperator adj;
  SparseMat t = SparseMat(op.matrix.transpose());
  // W^{-1} A^T W
  const Vector& w = op.weights;
  for (int i = 0; i < t.rows(); ++i)
    for (SparseMat::InnerIterator it(t, i); it; ++it)
      it.valueRef() *= w[it.col()] / w[i];
  adj.matrix = std::move(t);
  adj.weights = op.weights;
  adj.scheme = op.scheme;
  adj.conormal_bases = true;
  adj.is_adjoint = !op.is_adjoint;
  return adj;
}

} // namespace cyldrift
