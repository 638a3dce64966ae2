#pragma once

#include <cstdint>
#include <vector>

#include "phmc/sampler.hpp"

namespace phmc {

struct MinimizeResult {
  Vec point;
  int iterations = 0;
  bool converged = false;
  double objective = 0.0;
};

/// Minimizes U = f + g by FISTA-accelerated proximal gradient descent;
/// used for MAP starting points and the sweep anchor ("0 in dU(x0)").
MinimizeResult minimize_potential(const SplitPotential& pot, const Vec& start,
                                  double tolerance = 1e-10,
                                  int max_iterations = 10000);

struct LambdaSweepResult {
  std::vector<double> grid;      // strictly increasing lambda_g values
  std::vector<double> r_values;  // relative Hamiltonian error per grid point
  Vec x0;                        // probe state at (near) a minimizer of U
  Vec p0;
  double probe_eps = 1e-7;
  bool degenerate_h0 = false;    // |H(x0,p0)| ~ 0, denominator clamped to 1
};

/// Default grid: 40 log-spaced points in [1e-6, 10].
std::vector<double> default_lambda_grid();

/// For each lambda_g, takes one leapfrog step of length eps from (x0, p0)
/// with force grad f + grad g^{lambda_g} and records the relative change in
/// the exact Hamiltonian.
LambdaSweepResult lambda_sweep(const SplitPotential& pot, const Vec& x0,
                               const std::vector<double>& grid,
                               double eps = 1e-7, int leapfrog_steps = 1,
                               std::uint64_t seed = 0);

struct LambdaChoice {
  double lambda_g = 0.0;
  bool none_below_threshold = false;  // fell back to the smallest grid value
};

/// Largest grid value with R below the threshold; smallest value + warning
/// if none qualify.
LambdaChoice choose_lambda(const LambdaSweepResult& result,
                           double threshold = 1e-3);

struct AssumptionAudit {
  std::vector<double> radii;
  // one row per ray, one column per radius
  Mat grad_f_norm;
  Mat grad_f_over_radius;
  Mat inward_cosine;        // <grad f, x> / (||grad f|| ||x||)
  Mat envelope_ratio;       // ||grad g^lambda_g|| / ||grad f||
  std::vector<int> skipped_rays;  // U infinite somewhere along the ray

  // tail behaviour over the last decade of radii
  bool grad_f_diverges = false;      // condition (a)
  bool grad_f_sublinear = false;     // condition (b)
  bool inward_convergent = false;    // condition (c)
  bool envelope_dominated = false;   // condition (d)
  bool all_pass() const {
    return grad_f_diverges && grad_f_sublinear && inward_convergent &&
           envelope_dominated;
  }
};

/// Probes the four geometric-ergodicity conditions numerically along random
/// unit-sphere rays, with radii log-spaced up to max_radius.
AssumptionAudit assumption_audit(const SplitPotential& pot, double lambda_g,
                                 int n_rays = 32, double max_radius = 1e4,
                                 int n_radii = 24, std::uint64_t seed = 7);

struct StepSizeChoice {
  double step_size = 0.0;
  double acceptance = 0.0;
};

/// Short pilot runs over a log-spaced step-size grid; returns the grid value
/// whose empirical acceptance is closest to the target.
StepSizeChoice tune_step_size(MethodKind kind, const SplitPotential& pot,
                              const Vec& x0, SamplerConfig cfg,
                              double target_acceptance,
                              const std::vector<double>& grid,
                              long pilot_iterations = 200);

}  // namespace phmc
