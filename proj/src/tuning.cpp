#include "phmc/tuning.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace phmc {

MinimizeResult minimize_potential(const SplitPotential& pot, const Vec& start,
                                  double tolerance, int max_iterations) {
  double lip = pot.f_lipschitz.value_or(0.0);
  if (lip <= 0.0) {
    // crude power-iteration-free fallback: finite-difference curvature probe
    Vec probe = Vec::Random(pot.dim) * 1e-3;
    lip = std::max(1.0, (pot.f_gradient(start + probe) - pot.f_gradient(start))
                                .norm() /
                            probe.norm());
  }
  const double step = 1.0 / lip;

  Vec x = start;
  Vec z = x;
  double t = 1.0;
  MinimizeResult res;
  for (int k = 1; k <= max_iterations; ++k) {
    Vec x_next = pot.g_prox(z - step * pot.f_gradient(z), step);
    const double dx = (x_next - x).norm() / std::max(x.norm(), 1.0);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    z = x_next + ((t - 1.0) / t_next) * (x_next - x);
    x = std::move(x_next);
    t = t_next;
    res.iterations = k;
    if (dx < tolerance) {
      res.converged = true;
      break;
    }
  }
  res.objective = pot.u_value(x);
  res.point = std::move(x);
  return res;
}

std::vector<double> default_lambda_grid() {
  const int n = 40;
  const double lo = std::log(1e-6), hi = std::log(10.0);
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i)
    grid[i] = std::exp(lo + (hi - lo) * i / (n - 1.0));
  grid.front() = 1e-6;  // pin the endpoints exactly
  grid.back() = 10.0;
  return grid;
}

LambdaSweepResult lambda_sweep(const SplitPotential& pot, const Vec& x0,
                               const std::vector<double>& grid, double eps,
                               int leapfrog_steps, std::uint64_t seed) {
  if (grid.empty()) throw std::domain_error("lambda_sweep: empty grid");
  for (size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1])
      throw std::domain_error("lambda_sweep: grid must be strictly increasing");

  LambdaSweepResult out;
  out.grid = grid;
  out.x0 = x0;
  out.probe_eps = eps;

  // one fixed momentum draw shared by every grid point
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  out.p0 = Vec(pot.dim);
  for (int i = 0; i < pot.dim; ++i) out.p0[i] = normal(rng);

  const Vec mass;  // identity
  const double h0 = hamiltonian(x0, out.p0, pot, mass);
  double denom = std::abs(h0);
  if (denom < 1e-12) {
    denom = 1.0;
    out.degenerate_h0 = true;
  }

  const Vec inv_mass = Vec::Ones(pot.dim);
  out.r_values.reserve(grid.size());
  for (double lg : grid) {
    auto force = [&pot, lg](const Vec& x) {
      return pot.smoothed_gradient(x, lg);
    };
    PhaseState s{x0, out.p0};
    Vec grad = force(x0);
    for (int l = 0; l < leapfrog_steps; ++l)
      s = leapfrog_step(s, force, eps, inv_mass, grad);
    const double h1 = hamiltonian(s.x, s.p, pot, mass);
    out.r_values.push_back(std::abs((h0 - h1) / denom));
  }
  return out;
}

LambdaChoice choose_lambda(const LambdaSweepResult& result, double threshold) {
  if (result.grid.empty()) throw std::domain_error("choose_lambda: empty grid");
  LambdaChoice c;
  for (size_t i = 0; i < result.grid.size(); ++i)
    if (result.r_values[i] <= threshold) c.lambda_g = result.grid[i];
  if (c.lambda_g == 0.0) {
    c.lambda_g = result.grid.front();
    c.none_below_threshold = true;
  }
  return c;
}

AssumptionAudit assumption_audit(const SplitPotential& pot, double lambda_g,
                                 int n_rays, double max_radius, int n_radii,
                                 std::uint64_t seed) {
  if (lambda_g <= 0.0) throw std::domain_error("assumption_audit: lambda_g");
  AssumptionAudit a;
  a.radii.resize(n_radii);
  const double lo = std::log(1.0), hi = std::log(max_radius);
  for (int r = 0; r < n_radii; ++r)
    a.radii[r] = std::exp(lo + (hi - lo) * r / (n_radii - 1.0));

  a.grad_f_norm = Mat::Zero(n_rays, n_radii);
  a.grad_f_over_radius = Mat::Zero(n_rays, n_radii);
  a.inward_cosine = Mat::Zero(n_rays, n_radii);
  a.envelope_ratio = Mat::Zero(n_rays, n_radii);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<char> skipped(n_rays, 0);
  for (int j = 0; j < n_rays; ++j) {
    Vec u(pot.dim);
    for (int i = 0; i < pot.dim; ++i) u[i] = normal(rng);
    u.normalize();
    for (int r = 0; r < n_radii; ++r) {
      const Vec x = a.radii[r] * u;
      if (!std::isfinite(pot.u_value(x))) {
        skipped[j] = 1;
        break;
      }
      const Vec gf = pot.f_gradient(x);
      const Vec gg = (x - pot.g_prox(x, lambda_g)) / lambda_g;
      const double gfn = gf.norm();
      a.grad_f_norm(j, r) = gfn;
      a.grad_f_over_radius(j, r) = gfn / a.radii[r];
      a.inward_cosine(j, r) = gf.dot(x) / (gfn * a.radii[r]);
      a.envelope_ratio(j, r) = gg.norm() / gfn;
    }
  }
  for (int j = 0; j < n_rays; ++j)
    if (skipped[j]) a.skipped_rays.push_back(j);

  // tail behaviour: compare the last radius against one decade before it
  int r_ref = n_radii - 1;
  while (r_ref > 0 && a.radii[r_ref] > max_radius / 10.0) --r_ref;
  const int r_end = n_radii - 1;

  bool diverges = true, sublinear = true, inward = true, dominated = true;
  bool any_ray = false;
  for (int j = 0; j < n_rays; ++j) {
    if (skipped[j]) continue;
    any_ray = true;
    if (a.grad_f_norm(j, r_end) < 2.0 * a.grad_f_norm(j, r_ref))
      diverges = false;
    if (a.grad_f_over_radius(j, r_end) > 2.0 * a.grad_f_over_radius(j, r_ref))
      sublinear = false;
    for (int r = r_ref; r <= r_end; ++r)
      if (a.inward_cosine(j, r) <= 0.01) inward = false;
    if (a.envelope_ratio(j, r_end) >= 0.9 ||
        a.envelope_ratio(j, r_end) > a.envelope_ratio(j, r_ref))
      dominated = false;
  }
  a.grad_f_diverges = any_ray && diverges;
  a.grad_f_sublinear = any_ray && sublinear;
  a.inward_convergent = any_ray && inward;
  a.envelope_dominated = any_ray && dominated;
  return a;
}

StepSizeChoice tune_step_size(MethodKind kind, const SplitPotential& pot,
                              const Vec& x0, SamplerConfig cfg,
                              double target_acceptance,
                              const std::vector<double>& grid,
                              long pilot_iterations) {
  StepSizeChoice best;
  double best_gap = std::numeric_limits<double>::infinity();
  cfg.n_iterations = pilot_iterations;
  for (double s : grid) {
    cfg.step_size = s;
    if (kind == MethodKind::RWM) cfg.proposal_scale = s;
    ChainTrace t = run_chain(kind, x0, pot, cfg);
    const double acc = t.acceptance_rate();
    const double gap = std::abs(acc - target_acceptance);
    if (gap < best_gap) {
      best_gap = gap;
      best.step_size = s;
      best.acceptance = acc;
    }
  }
  return best;
}

}  // namespace phmc
