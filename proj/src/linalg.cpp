#include "cyldrift/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include "cyldrift/discretize.hpp"

namespace cyldrift {

namespace {

double inf_norm_rows(const SparseMat& m) {
  double mx = 0.0;
  for (int i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (SparseMat::InnerIterator it(m, i); it; ++it) s += std::abs(it.value());
    mx = std::max(mx, s);
  }
  return mx;
}

Vector direct_solve(const SparseMat& m, const Vector& rhs, bool* singular = nullptr) {
  Eigen::SparseMatrix<double> col = m;   // SparseLU wants column-major
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(col);
  if (lu.info() != Eigen::Success) {
    if (singular) {
      *singular = true;
      return Vector();
    }
    throw SingularWithoutAnchor();
  }
  if (singular) *singular = false;
  return lu.solve(rhs);
}

Vector iterative_solve(const SparseMat& m, const Vector& rhs, const SolveOptions& opts) {
  Eigen::BiCGSTAB<SparseMat, Eigen::DiagonalPreconditioner<double>> solver;
  solver.setTolerance(opts.tol * 1e-2);   // headroom for the inf-norm contract
  solver.setMaxIterations(opts.max_iter);
  solver.compute(m);
  Vector x = solver.solve(rhs);
  if (solver.info() != Eigen::Success)
    throw IterationLimitExceeded("BiCGStab after " + std::to_string(solver.iterations()) +
                                 " iterations, residual " + std::to_string(solver.error()));
  return x;
}

} // namespace

double weighted_dot(const Vector& u, const Vector& v, const Vector& weights) {
  double sum = 0.0, comp = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    const double term = u[i] * weights[i] * v[i];
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

Vector solve_linear(const DiscreteOperator& op, const Vector& rhs, const SolveOptions& opts,
                    const std::optional<Anchor>& anchor) {
  const SparseMat& A = op.matrix;
  Vector x;
  if (!anchor) {
    // both-conormal operators annihilate constants, so they are singular
    if (op.conormal_bases) throw SingularWithoutAnchor();
    x = (opts.method == SolveMethod::DirectBanded) ? direct_solve(A, rhs)
                                                   : iterative_solve(A, rhs, opts);
  } else {
    // Ground one anchor cell (identity row), solve, then shift by a constant
    // to meet the anchor exactly. Row sums of A are zero, so the shift does
    // not change the residual.
    if (anchor->indices.empty()) throw ValueError("anchor: empty index set");
    const int i0 = anchor->indices[anchor->indices.size() / 2];
    SparseMat Ag = A;
    double scale = Ag.coeff(i0, i0);
    if (!(scale > 0.0)) scale = 1.0;
    for (SparseMat::InnerIterator it(Ag, i0); it; ++it)
      it.valueRef() = (it.col() == i0) ? scale : 0.0;
    Ag.prune(0.0);
    Vector rg = rhs;
    rg[i0] = 0.0;
    x = (opts.method == SolveMethod::DirectBanded) ? direct_solve(Ag, rg)
                                                   : iterative_solve(Ag, rg, opts);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < anchor->indices.size(); ++j) {
      num += anchor->weights[j] * x[anchor->indices[j]];
      den += anchor->weights[j];
    }
    x.array() += anchor->target - num / den;
  }
  const double rnorm = (A * x - rhs).lpNorm<Eigen::Infinity>();
  const double scale = rhs.lpNorm<Eigen::Infinity>();
  if (anchor && scale == 0.0) return x;   // homogeneous anchored solve: exact zero
  if (rnorm > opts.tol * std::max(scale, 1e-300)) {
    // grounded singular solves hide incompatible data in the grounded row;
    // surface it as a solver failure rather than returning a bogus solution
    throw IterationLimitExceeded("linear solve residual " + std::to_string(rnorm) +
                                 " exceeds tolerance for rhs scale " + std::to_string(scale));
  }
  return x;
}

GroundStateResult ground_state(const DiscreteOperator& adj, const SolveOptions& opts) {
  const SparseMat& A = adj.matrix;
  const int n = static_cast<int>(A.rows());
  const double anorm = inf_norm_rows(A);
  const double sigma = 1e-8 * anorm;

  SparseMat M = A;
  for (int i = 0; i < n; ++i) M.coeffRef(i, i) += sigma;

  Eigen::SparseMatrix<double> col = M;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(col);
  if (lu.info() != Eigen::Success)
    throw IterationLimitExceeded("ground state: shifted operator not factorizable");

  Vector p = Vector::Ones(n);
  int it = 0;
  const int max_it = std::max(50, opts.max_iter);
  double residual = std::numeric_limits<double>::infinity();
  int settled_rounds = 0;
  while (it < max_it) {
    ++it;
    Vector y = lu.solve(p);
    const double m = y.lpNorm<Eigen::Infinity>();
    if (!(m > 0.0) || !std::isfinite(m))
      throw IterationLimitExceeded("ground state: iteration collapsed");
    y /= m;
    const double diff = (y - p).lpNorm<Eigen::Infinity>();
    p = y;
    if (diff < opts.tol) {
      residual = (A * p).lpNorm<Eigen::Infinity>();
      if (residual <= opts.tol) break;
      if (++settled_rounds >= 5) break;   // residual is at its floor
    }
  }
  if (!(residual <= opts.tol))
    throw IterationLimitExceeded("ground state residual " + std::to_string(residual));
  // fix the sign so the iterate is positive, then demand strict positivity
  if (p.sum() < 0.0) p = -p;
  if ((p.array() <= 0.0).any()) throw NonPositiveGroundState();
  GroundStateResult res;
  res.vector = std::move(p);
  res.residual = residual;
  res.iterations = it;
  return res;
}

} // namespace cyldrift
