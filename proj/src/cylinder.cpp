#include "cyldrift/cylinder.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

namespace cyldrift {

namespace {

double frac_unit(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f -= 1.0;
  return f;
}

// least-squares line y = a + b x; returns (a, b)
std::pair<double, double> lsq_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  const double b = (n * sxy - sx * sy) / denom;
  const double a = (sy - b * sx) / n;
  return {a, b};
}

double r_squared(const std::vector<double>& x, const std::vector<double>& y, double a, double b) {
  double mean = 0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (a + b * x[i]);
    ss_res += e * e;
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  return 1.0 - ss_res / std::max(ss_tot, 1e-300);
}

CoefficientTable zero_data(const CoefficientTable& t) {
  CoefficientTable z = t;
  std::fill(z.f_cell.begin(), z.f_cell.end(), 0.0);
  std::fill(z.g_face.begin(), z.g_face.end(), 0.0);
  return z;
}

double side_distance(Side side, double x1) { return side == Side::Right ? x1 : -x1; }

} // namespace

TruncatedProblem make_truncated_problem(const CoefficientModel& model, double k,
                                        int cells_per_unit, BaseCondition bc, Scheme scheme,
                                        RegimeCase regime) {
  const double cells = 2.0 * k * cells_per_unit;
  if (std::abs(cells - std::round(cells)) > 1e-9)
    throw ValueError("k and cells_per_unit must give an integral axial cell count");
  TruncatedProblem prob{build_cylinder_grid(k, static_cast<int>(std::round(cells)),
                                            model.cross_section),
                        {}, std::move(bc), scheme, regime};
  prob.table = sample_on_grid(model, prob.grid);
  verify_ellipticity(prob.table);
  return prob;
}

Vector solve_truncated_dirichlet(const TruncatedProblem& prob, double K_minus, double K_plus,
                                 const SolveOptions& opts) {
  const BaseCondition bc = BaseCondition::dirichlet(K_minus, K_plus);
  const DiscreteOperator op = assemble_primal(prob.grid, prob.table, bc, prob.scheme);
  const Vector rhs = assemble_rhs(prob.grid, prob.table, bc, prob.scheme);
  return solve_linear(op, rhs, opts);
}

double compatibility_residual(const Vector& p, const CylinderGrid& grid,
                              const CoefficientTable& table) {
  double sum = 0.0, comp = 0.0;
  auto acc = [&](double term) {
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  for (int c = 0; c < grid.cell_count(); ++c) acc(table.f_cell[c] * p[c] * grid.volume(c));
  const auto& faces = grid.faces();
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    const Face& f = faces[fi];
    if (f.kind != FaceKind::Lateral || table.g_face[fi] == 0.0) continue;
    const int i = f.minus_cell >= 0 ? f.minus_cell : f.plus_cell;
    acc(table.g_face[fi] * p[i] * f.area);
  }
  return sum;
}

double data_norm(const CylinderGrid& grid, const CoefficientTable& table) {
  double f2 = 0, g2 = 0;
  for (int c = 0; c < grid.cell_count(); ++c)
    f2 += table.f_cell[c] * table.f_cell[c] * grid.volume(c);
  const auto& faces = grid.faces();
  for (std::size_t fi = 0; fi < faces.size(); ++fi)
    if (faces[fi].kind == FaceKind::Lateral)
      g2 += table.g_face[fi] * table.g_face[fi] * faces[fi].area;
  return std::sqrt(f2) + std::sqrt(g2);
}

double weighted_data_norm(const CylinderGrid& grid, const CoefficientTable& table) {
  double f2 = 0, g2 = 0;
  for (int c = 0; c < grid.cell_count(); ++c) {
    const double x1 = grid.center(c)[0];
    const double w = 1.0 + x1 * x1;
    f2 += w * w * table.f_cell[c] * table.f_cell[c] * grid.volume(c);
  }
  const auto& faces = grid.faces();
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    const Face& f = faces[fi];
    if (f.kind != FaceKind::Lateral) continue;
    const double w = 1.0 + f.center[0] * f.center[0];
    g2 += w * w * table.g_face[fi] * table.g_face[fi] * f.area;
  }
  return std::sqrt(f2) + std::sqrt(g2);
}

namespace {

// cross-section max of a cell vector per axial slab, with the slab's |x1|
struct SlabMax {
  std::vector<double> s;     // side distance of slab center
  std::vector<double> maxv;
};

SlabMax slab_maxima(const CylinderGrid& grid, const Vector& v, Side side) {
  SlabMax out;
  const int nc = grid.core.cross_section.cell_count();
  for (int ax = 0; ax < grid.core.axial_cells; ++ax) {
    const double x1 = grid.center(grid.core.cell_index(ax, 0))[0];
    const double s = side_distance(side, x1);
    if (s <= 0) continue;
    double mx = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < nc; ++c) mx = std::max(mx, v[grid.core.cell_index(ax, c)]);
    out.s.push_back(s);
    out.maxv.push_back(mx);
  }
  return out;
}

TailFit analyze_tail(const CylinderGrid& grid, const Vector& p_max_one, Side side,
                     bool drift_is_zero, Zone zone, const CoefficientModel& model,
                     const SolveOptions& opts) {
  const double k = grid.half_length;
  TailFit fit;
  if (!drift_is_zero) {
    // log of cross-section max vs |x1| over the outer half, skipping the
    // outermost unit window (truncation pollution)
    fit.kind = TailFit::Kind::ExponentialRate;
    SlabMax sm = slab_maxima(grid, p_max_one, side);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < sm.s.size(); ++i) {
      if (sm.s[i] >= k / 2 && sm.s[i] <= k - 1 && sm.maxv[i] > 0) {
        xs.push_back(sm.s[i]);
        ys.push_back(std::log(sm.maxv[i]));
      }
    }
    if (xs.size() >= 2) {
      auto [a, b] = lsq_line(xs, ys);
      (void)a;
      fit.rate = -b;
    }
    return fit;
  }
  // zero-drift side: compare the tail with the periodic cell ground state on
  // the outermost full period
  fit.kind = TailFit::Kind::PeriodicStabilization;
  const int cpu = static_cast<int>(std::round(grid.core.axial_cells / (2.0 * k)));
  const CellGrid cell = build_cell_grid(std::max(cpu, 2), model.cross_section);
  const PeriodicGroundState ps = solve_cell_ground_state(zone, model, cell, opts);
  const double hc = cell.axial_spacing();
  double num = 0, den = 0;
  std::vector<std::pair<int, double>> pairs;   // (cylinder cell, reference value)
  for (int c = 0; c < grid.cell_count(); ++c) {
    const double s = side_distance(side, grid.center(c)[0]);
    if (s <= k - 1 || s >= k) continue;
    const double y = frac_unit(grid.center(c)[0]);
    const int iy = std::min(static_cast<int>(y / hc), cell.core.axial_cells - 1);
    const double ref = ps.values[cell.core.cell_index(iy, grid.core.cross_of(c))];
    pairs.emplace_back(c, ref);
    num += p_max_one[c] * ref * grid.volume(c);
    den += ref * ref * grid.volume(c);
  }
  const double alpha = den > 0 ? num / den : 0.0;
  double dist = 0.0;
  for (auto& [c, ref] : pairs) dist = std::max(dist, std::abs(p_max_one[c] - alpha * ref));
  fit.reference_scale = alpha;
  fit.sup_distance = dist;
  return fit;
}

} // namespace

AdjointState solve_adjoint_truncated(const TruncatedProblem& prob, const CoefficientModel& model,
                                     const SolveOptions& opts) {
  if (!prob.bc.both_conormal())
    throw ValueError("solve_adjoint_truncated requires conormal-zero bases");
  if (prob.scheme != Scheme::Upwind)
    throw ValueError("adjoint ground states require the Upwind (M-matrix) scheme");
  const DiscreteOperator op =
      assemble_primal(prob.grid, zero_data(prob.table), prob.bc, prob.scheme);
  const DiscreteOperator adj = discrete_adjoint(op);
  GroundStateResult gs = ground_state(adj, opts);

  AdjointState st;
  st.p_max_one = gs.vector;   // ground_state returns max-norm 1
  double mass = 0;
  for (int c = 0; c < prob.grid.cell_count(); ++c)
    mass += gs.vector[c] * prob.grid.volume(c);
  st.p_integral_one = gs.vector / mass;
  st.residual = gs.residual;
  st.left = analyze_tail(prob.grid, st.p_max_one, Side::Left, prob.regime.left_is_zero,
                         Zone::Left, model, opts);
  st.right = analyze_tail(prob.grid, st.p_max_one, Side::Right, prob.regime.right_is_zero,
                          Zone::Right, model, opts);
  return st;
}

std::pair<Vector, CompatibilityReport> solve_truncated_neumann(const TruncatedProblem& prob,
                                                               const CoefficientModel& model,
                                                               const SolveOptions& opts,
                                                               const AdjointState* precomputed) {
  if (!prob.bc.both_conormal())
    throw ValueError("solve_truncated_neumann requires conormal-zero bases");
  AdjointState local;
  if (!precomputed) {
    local = solve_adjoint_truncated(prob, model, opts);
    precomputed = &local;
  }
  const Vector& p = precomputed->p_integral_one;
  const CylinderGrid& grid = prob.grid;

  CompatibilityReport rep;
  rep.functional_value = compatibility_residual(p, grid, prob.table);
  rep.data_norm = data_norm(grid, prob.table);

  double denom = 0.0;
  for (int c = 0; c < grid.cell_count(); ++c)
    if (std::abs(grid.center(c)[0]) < 1.0) denom += p[c] * grid.volume(c);
  rep.r_k = -rep.functional_value / denom;

  CoefficientTable corrected = prob.table;
  for (int c = 0; c < grid.cell_count(); ++c)
    if (std::abs(grid.center(c)[0]) < 1.0) corrected.f_cell[c] += rep.r_k;
  rep.corrected_residual = compatibility_residual(p, grid, corrected);

  const DiscreteOperator op = assemble_primal(grid, prob.table, prob.bc, prob.scheme);
  const Vector rhs = assemble_rhs(grid, corrected, prob.bc, prob.scheme);

  Anchor anchor;
  for (int c = 0; c < grid.cell_count(); ++c) {
    const double x1 = grid.center(c)[0];
    if (x1 > 0.0 && x1 < 1.0) {
      anchor.indices.push_back(c);
      anchor.weights.push_back(grid.volume(c));
    }
  }
  anchor.target = 0.0;
  Vector u = solve_linear(op, rhs, opts, anchor);
  return {std::move(u), rep};
}

SemiInfiniteResult solve_semi_infinite(const CoefficientModel& model,
                                       const std::function<double(const Point&)>& phi, double K,
                                       double k, int cells_per_unit, const SolveOptions& opts,
                                       double eps_drift) {
  if (!(k > 2.0)) throw ValueError("semi-infinite mode needs k > 2");
  const double cells = k * cells_per_unit;
  if (std::abs(cells - std::round(cells)) > 1e-9)
    throw ValueError("k * cells_per_unit must be integral");
  SemiInfiniteResult res;
  res.grid = std::make_shared<CylinderGrid>(
      build_axial_grid(0.0, k, static_cast<int>(std::round(cells)), model.cross_section));
  const CylinderGrid& grid = *res.grid;
  const CoefficientTable table = sample_on_grid(model, grid);
  verify_ellipticity(table);

  BaseCondition bc{DirichletValue{phi}, DirichletValue::constant(K)};
  const DiscreteOperator op = assemble_primal(grid, table, bc, Scheme::Upwind);
  const Vector rhs = assemble_rhs(grid, table, bc, Scheme::Upwind);
  res.v = solve_linear(op, rhs, opts);

  const CellGrid cell = build_cell_grid(256, model.cross_section);
  const PeriodicGroundState ps = solve_cell_ground_state(Zone::Right, model, cell, opts);
  res.drift = effective_drift(ps, Zone::Right, model, cell);
  res.drift_sign = std::abs(res.drift) <= eps_drift ? 0 : (res.drift > 0 ? 1 : -1);

  // cross-section averages per axial slab
  const int nc = model.cross_section.cell_count();
  std::vector<double> xs(grid.core.axial_cells), um(grid.core.axial_cells, 0.0);
  for (int ax = 0; ax < grid.core.axial_cells; ++ax) {
    xs[ax] = grid.center(grid.core.cell_index(ax, 0))[0];
    for (int c = 0; c < nc; ++c) um[ax] += res.v[grid.core.cell_index(ax, c)];
    um[ax] /= nc;
  }

  if (res.drift_sign == 0) {
    auto [a, b] = lsq_line(xs, um);
    res.fitted_constant = a + b * k / 2;   // midpoint value of the linear profile
    double dev = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
      dev = std::max(dev, std::abs(um[i] - (a + b * xs[i])));
    res.linear_deviation = dev;
  } else if (res.drift_sign > 0) {
    // interior plateau C_phi^inf over the middle third
    double sum = 0;
    int cnt = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (xs[i] > k / 3 && xs[i] < 2 * k / 3) {
        sum += um[i];
        ++cnt;
      }
    res.fitted_constant = cnt ? sum / cnt : 0.0;
  } else {
    // stabilizes to K away from the inlet: reuse the side-fit machinery with
    // the inlet distance as the side coordinate
    StabilizationFit fit = fit_stabilization(grid, res.v, Side::Right);
    res.fitted_constant = fit.K;
    res.fitted_gamma = fit.gamma;
  }
  return res;
}

// ---------------------------------------------------------------------------
// stabilization fit (two-pass with geometric bias correction of K)
// ---------------------------------------------------------------------------

namespace {

struct WindowData {
  std::vector<std::vector<int>> cells;   // per unit window
  int count() const { return static_cast<int>(cells.size()); }
};

WindowData side_windows(const CylinderGrid& grid, Side side) {
  // windows [n, n+1) measured in side distance from the axial origin of the
  // side: right side uses x1, left side uses -x1
  WindowData w;
  double lo0 = 0.0, hi0 = 0.0;
  if (side == Side::Right) {
    hi0 = grid.core.axial_hi;
  } else {
    hi0 = -grid.core.axial_lo;
  }
  const int nwin = static_cast<int>(std::floor(hi0 - lo0 + 1e-9));
  w.cells.assign(nwin, {});
  for (int c = 0; c < grid.cell_count(); ++c) {
    const double s = side_distance(side, grid.center(c)[0]);
    if (s <= 0 || s >= nwin) continue;
    w.cells[static_cast<int>(s)].push_back(c);
  }
  return w;
}

double window_l2(const CylinderGrid& grid, const Vector& u, const std::vector<int>& cells,
                 double K) {
  double s = 0;
  for (int c : cells) s += (u[c] - K) * (u[c] - K) * grid.volume(c);
  return std::sqrt(s);
}

double window_mean(const CylinderGrid& grid, const Vector& u, const std::vector<int>& cells) {
  double s = 0, w = 0;
  for (int c : cells) {
    s += u[c] * grid.volume(c);
    w += grid.volume(c);
  }
  return s / w;
}

struct GammaPass {
  double gamma = std::numeric_limits<double>::infinity();
  double r2 = 1.0;
  double intercept = 0.0;
  std::vector<int> cand;
};

GammaPass gamma_pass(const CylinderGrid& grid, const Vector& u, const WindowData& wd, double K,
                     int nK) {
  GammaPass out;
  const double nuK = window_l2(grid, u, wd.cells[nK], K);
  const double floor_v = std::max(1e-12, 10.0 * nuK);
  std::vector<double> norms(nK);
  for (int n = 0; n < nK; ++n) norms[n] = window_l2(grid, u, wd.cells[n], K);
  const int lo = static_cast<int>(std::ceil(2.0 * nK / 3.0));
  for (int n = lo; n < nK; ++n)
    if (norms[n] > floor_v) out.cand.push_back(n);
  int j = (out.cand.empty() ? nK : out.cand.front()) - 1;
  while (static_cast<int>(out.cand.size()) < 3 && j >= 0) {
    if (norms[j] > floor_v) out.cand.insert(out.cand.begin(), j);
    --j;
  }
  if (out.cand.size() < 2) return out;
  std::vector<double> xs, ys;
  for (int n : out.cand) {
    xs.push_back(n + 0.5);
    ys.push_back(std::log(norms[n]));
  }
  auto [a, b] = lsq_line(xs, ys);
  out.gamma = -b;
  out.intercept = a;
  // fit quality over all clean windows
  std::vector<double> xc, yc;
  for (int n = 0; n < nK; ++n)
    if (norms[n] > floor_v) {
      xc.push_back(n + 0.5);
      yc.push_back(std::log(norms[n]));
    }
  if (xc.size() >= 3) {
    auto [a2, b2] = lsq_line(xc, yc);
    out.r2 = r_squared(xc, yc, a2, b2);
  }
  return out;
}

} // namespace

StabilizationFit fit_stabilization(const CylinderGrid& grid, const Vector& u, Side side) {
  WindowData wd = side_windows(grid, side);
  if (wd.count() < 6) throw InsufficientWindows(wd.count());
  const int k = wd.count();
  const int dist = std::max(1, static_cast<int>(std::round(k / 4.0)));
  const int nK = k - dist;

  StabilizationFit fit;
  fit.K = window_mean(grid, u, wd.cells[nK]);
  GammaPass p1 = gamma_pass(grid, u, wd, fit.K, nK);
  fit.gamma = p1.gamma;
  fit.r_squared = p1.r2;
  fit.windows_used = static_cast<int>(p1.cand.size());
  if (!std::isfinite(p1.gamma) || p1.gamma <= 0) {
    fit.poor_fit = std::isfinite(p1.gamma) && p1.r2 < 0.995;
    return fit;
  }
  // geometric bias correction of K from the two outermost candidate windows
  if (p1.cand.size() >= 2) {
    const int n1 = p1.cand[p1.cand.size() - 2];
    const int n2 = p1.cand[p1.cand.size() - 1];
    const double m1 = window_mean(grid, u, wd.cells[n1]) - fit.K;
    const double m2 = window_mean(grid, u, wd.cells[n2]) - fit.K;
    if (std::abs(m1) > 0 && std::abs(m2) > 0 && m1 * m2 > 0) {
      const double rho = m2 / m1;
      if (rho > 0 && rho < 1) fit.K -= m2 * std::pow(rho, (nK - n2) / double(n2 - n1));
    }
  }
  GammaPass p2 = gamma_pass(grid, u, wd, fit.K, nK);
  if (std::isfinite(p2.gamma) && p2.gamma > 0) {
    fit.gamma = p2.gamma;
    fit.r_squared = p2.r2;
    fit.windows_used = static_cast<int>(p2.cand.size());
  }
  fit.poor_fit = fit.r_squared < 0.995;
  return fit;
}

MonotonicityProfile monotonicity_profile(const AdjointState& p, const CylinderGrid& grid) {
  MonotonicityProfile out;
  const int k = static_cast<int>(std::floor(grid.half_length + 1e-9));
  std::vector<double> bin_max(k, -std::numeric_limits<double>::infinity());
  std::vector<double> bin_min(k, std::numeric_limits<double>::infinity());
  for (int c = 0; c < grid.cell_count(); ++c) {
    const double ax = std::abs(grid.center(c)[0]);
    if (ax >= k) continue;
    const int bin = static_cast<int>(ax);
    bin_max[bin] = std::max(bin_max[bin], p.p_max_one[c]);
    bin_min[bin] = std::min(bin_min[bin], p.p_max_one[c]);
  }
  for (int b = 0; b < k; ++b) out.bins.emplace_back(b + 0.5, bin_max[b]);
  double beta = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (bin_min[i] > 0) beta = std::max(beta, bin_max[j] / bin_min[i]);
  out.beta_estimate = beta;
  return out;
}

BaseSmallness base_smallness_check(const AdjointState& p, const CylinderGrid& grid,
                                   const RegimeCase& regime) {
  BaseSmallness out;
  out.applicable = regime.tag == RegimeTag::Compatibility && !regime.left_is_zero &&
                   !regime.right_is_zero;
  const int nc = grid.core.cross_section.cell_count();
  for (int c = 0; c < nc; ++c) {
    out.left_max = std::max(out.left_max, p.p_max_one[grid.core.cell_index(0, c)]);
    out.right_max = std::max(
        out.right_max, p.p_max_one[grid.core.cell_index(grid.core.axial_cells - 1, c)]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// growing-k orchestration
// ---------------------------------------------------------------------------

namespace {

struct KSolve {
  Vector u;
  std::optional<CompatibilityReport> compat;
  std::optional<AdjointState> adjoint;
  std::shared_ptr<CylinderGrid> grid;
  std::shared_ptr<CoefficientTable> table;
};

KSolve solve_one_k(const CoefficientModel& model, const RegimeCase& regime, double k,
                   const SolveInfiniteOptions& opts) {
  KSolve out;
  switch (regime.tag) {
    case RegimeTag::TwoParameter: {
      TruncatedProblem prob = make_truncated_problem(
          model, k, opts.cells_per_unit,
          BaseCondition::dirichlet(opts.K_minus, opts.K_plus), opts.scheme, regime);
      // homogeneous part with the user constants, plus the zero-Dirichlet
      // nonhomogeneous part, summed
      TruncatedProblem hom = prob;
      hom.table = zero_data(prob.table);
      const Vector u_hom = solve_truncated_dirichlet(hom, opts.K_minus, opts.K_plus, opts.solver);
      const Vector u_inh = solve_truncated_dirichlet(prob, 0.0, 0.0, opts.solver);
      out.u = u_hom + u_inh;
      out.grid = std::make_shared<CylinderGrid>(std::move(prob.grid));
      out.table = std::make_shared<CoefficientTable>(std::move(prob.table));
      break;
    }
    case RegimeTag::OneParameterLeft:
    case RegimeTag::OneParameterRight: {
      TruncatedProblem prob =
          make_truncated_problem(model, k, opts.cells_per_unit,
                                 BaseCondition::dirichlet(0.0, 0.0), opts.scheme, regime);
      out.u = solve_truncated_dirichlet(prob, 0.0, 0.0, opts.solver);
      out.grid = std::make_shared<CylinderGrid>(std::move(prob.grid));
      out.table = std::make_shared<CoefficientTable>(std::move(prob.table));
      break;
    }
    case RegimeTag::Compatibility: {
      TruncatedProblem prob = make_truncated_problem(
          model, k, opts.cells_per_unit, BaseCondition::conormal_zero(), opts.scheme, regime);
      AdjointState adj = solve_adjoint_truncated(prob, model, opts.solver);
      const double functional = compatibility_residual(adj.p_integral_one, prob.grid, prob.table);
      const double norm = data_norm(prob.grid, prob.table);
      if (std::abs(functional) > opts.tol * std::max(norm, 1e-300))
        throw IncompatibleData(functional, norm);
      auto [u, rep] = solve_truncated_neumann(prob, model, opts.solver, &adj);
      out.u = std::move(u);
      out.compat = rep;
      out.adjoint = std::move(adj);
      out.grid = std::make_shared<CylinderGrid>(std::move(prob.grid));
      out.table = std::make_shared<CoefficientTable>(std::move(prob.table));
      break;
    }
  }
  return out;
}

std::vector<int> window_cells(const CylinderGrid& grid, double window) {
  std::vector<int> cells;
  for (int c = 0; c < grid.cell_count(); ++c)
    if (std::abs(grid.center(c)[0]) < window) cells.push_back(c);
  return cells;
}

} // namespace

CylinderSolution solve_infinite(const CoefficientModel& model, const RegimeCase& regime,
                                const SolveInfiniteOptions& opts) {
  if (opts.k_sequence.empty()) throw ValueError("k_sequence must not be empty");
  for (std::size_t i = 0; i + 1 < opts.k_sequence.size(); ++i)
    if (!(opts.k_sequence[i] < opts.k_sequence[i + 1]))
      throw ValueError("k_sequence must be strictly increasing");
  for (double k : opts.k_sequence)
    if (!(k >= opts.window + 2))
      throw ValueError("every k must satisfy k >= window + 2");

  CylinderSolution sol;
  sol.regime = regime;
  sol.boundary_case = regime.left_is_zero || regime.right_is_zero;

  std::vector<KSolve> solves;
  const auto& ks = opts.k_sequence;
  if (opts.jobs > 1) {
    std::vector<std::future<KSolve>> futs;
    for (double k : ks)
      futs.push_back(std::async(std::launch::async,
                                [&, k] { return solve_one_k(model, regime, k, opts); }));
    for (auto& f : futs) solves.push_back(f.get());
  }

  std::vector<int> prev_window;
  Vector prev_samples;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    KSolve s = opts.jobs > 1 ? std::move(solves[i]) : solve_one_k(model, regime, ks[i], opts);
    const auto wc = window_cells(*s.grid, opts.window);
    Vector samples(wc.size());
    for (std::size_t j = 0; j < wc.size(); ++j) samples[j] = s.u[wc[j]];

    sol.k_values.push_back(ks[i]);
    sol.window_samples.push_back(samples);
    if (s.adjoint) {
      const BaseSmallness bs = base_smallness_check(*s.adjoint, *s.grid, regime);
      sol.base_maxima.push_back({ks[i], bs.left_max, bs.right_max});
      sol.base_check_applicable = bs.applicable;
    }
    if (i > 0) {
      const double diff = (samples - prev_samples).lpNorm<Eigen::Infinity>();
      sol.conv_history.push_back(diff);
    }
    prev_samples = samples;

    const bool is_last = i + 1 == ks.size();
    const bool converged = !sol.conv_history.empty() && sol.conv_history.back() < opts.tol;
    if ((converged && !opts.force_full_sequence) || is_last) {
      sol.converged = converged;
      sol.grid = s.grid;
      sol.u = std::move(s.u);
      sol.compat = s.compat;
      sol.adjoint = std::move(s.adjoint);
      sol.window_x1.clear();
      for (int c : wc) sol.window_x1.push_back(s.grid->center(c)[0]);
      sol.m_weighted_norm = weighted_data_norm(*s.grid, *s.table);
      const DecayReport dr = verify_decay(model, *s.grid);
      sol.hypothesis_violated = !dr.passes;
      break;
    }
  }

  try {
    sol.fit_left = fit_stabilization(*sol.grid, sol.u, Side::Left);
    sol.fit_right = fit_stabilization(*sol.grid, sol.u, Side::Right);
  } catch (const InsufficientWindows&) {
    // short cylinders: leave default fits
  }

  if (sol.base_check_applicable && sol.base_maxima.size() >= 2) {
    std::vector<double> xs, ys;
    for (auto& [k, bl, br] : sol.base_maxima) {
      xs.push_back(k);
      ys.push_back(std::log(std::max(bl, br)));
    }
    auto [a, b] = lsq_line(xs, ys);
    (void)a;
    sol.base_decay_rate = -b;
  }
  return sol;
}

} // namespace cyldrift
