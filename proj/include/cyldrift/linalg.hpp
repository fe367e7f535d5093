#pragma once

#include <optional>
#include <vector>

#include <Eigen/SparseCore>

#include "cyldrift/errors.hpp"

namespace cyldrift {

using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

enum class SolveMethod { DirectBanded, Iterative };

struct SolveOptions {
  SolveMethod method = SolveMethod::DirectBanded;
  double tol = 1e-10;
  int max_iter = 10000;
};

/// Mean-value constraint for singular pure-Neumann systems:
/// sum_i weights[i] * x[indices[i]] / sum_i weights[i] == target.
struct Anchor {
  std::vector<int> indices;
  std::vector<double> weights;
  double target = 0.0;
};

struct GroundStateResult {
  Vector vector;      // strictly positive, max-norm 1
  double residual = 0.0;   // ||A* p||_inf after normalization
  int iterations = 0;
};

/// Forward declaration; defined in discretize.hpp.
struct DiscreteOperator;

/// Solves op.matrix * x = rhs. Without an anchor the system must be
/// nonsingular; a singular conormal-zero system needs an anchor, which is
/// enforced exactly (the solve is grounded at one cell and then shifted by a
/// constant, which leaves the residual of a zero-row-sum matrix unchanged).
Vector solve_linear(const DiscreteOperator& op, const Vector& rhs, const SolveOptions& opts = {},
                    const std::optional<Anchor>& anchor = std::nullopt);

/// Principal kernel vector of a singular adjoint operator via inverse power
/// iteration on (A* + sigma I), sigma = 1e-8 * ||A*||_inf, started from the
/// all-ones vector and renormalized in max norm each step.
GroundStateResult ground_state(const DiscreteOperator& adj, const SolveOptions& opts = {});

/// Compensated (Kahan) dot product of u, W v for the volume weights W.
double weighted_dot(const Vector& u, const Vector& v, const Vector& weights);

} // namespace cyldrift
