#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "phmc/target.hpp"

namespace phmc {

struct PhaseState {
  Vec x;
  Vec p;
};

enum class MethodKind { PHMC, NSHMC, PMALA, MYMALA, RWM };

std::string method_name(MethodKind m);
MethodKind method_from_name(const std::string& name);

struct SamplerConfig {
  double step_size = 0.1;       // leapfrog epsilon, or h for MALA variants
  int leapfrog_steps = 10;      // L, or L_max when randomized
  bool randomize_leapfrog = false;  // draw L uniform on {1..leapfrog_steps}
  double lambda = 1.0;          // lambda_g (p-HMC, my-MALA) or lambda (ns-HMC)
  double proposal_scale = 0.1;  // RWM standard deviation
  Vec mass_diagonal;            // empty means identity
  long n_iterations = 10000;
  // Discarded warmup iterations before recording or timing starts. HMC
  // kernels warm up with short randomized trajectories (L <= 10).
  long burn_in = 0;
  std::uint64_t seed = 0;

  void validate(int dim) const;
};

struct ChainTrace {
  Mat samples;                   // N x d
  std::vector<char> accepted;
  std::vector<double> energy_error;  // delta H per proposal (HMC kernels)
  double wall_time = 0.0;            // seconds, kernel loop only
  long nonfinite_rejections = 0;

  long n() const { return samples.rows(); }
  double acceptance_rate() const;
};

/// One leapfrog epsilon-transition: half kick, drift, half kick.
/// grad_x0 must hold grad(x) on entry and holds grad of the new position on
/// exit, so force evaluations are shared between consecutive steps.
template <typename Grad>
PhaseState leapfrog_step(const PhaseState& s, Grad&& grad, double eps,
                         const Vec& inv_mass, Vec& grad_x0) {
  PhaseState out;
  Vec p_half = s.p - (eps / 2.0) * grad_x0;
  out.x = s.x + eps * inv_mass.cwiseProduct(p_half);
  grad_x0 = grad(out.x);
  out.p = p_half - (eps / 2.0) * grad_x0;
  return out;
}

/// Convenience overload evaluating the gradient at both endpoints.
PhaseState leapfrog_step(const PhaseState& s,
                         const std::function<Vec(const Vec&)>& grad, double eps,
                         const Vec& mass_diagonal);

/// H(x, p) = U(x) + p^T M^{-1} p / 2 with the exact potential U = f + g.
double hamiltonian(const Vec& x, const Vec& p, const SplitPotential& pot,
                   const Vec& mass_diagonal);

struct StepResult {
  Vec x;
  bool accepted = false;
  double delta_h = 0.0;
  bool nonfinite = false;
};

StepResult phmc_step(const Vec& x0, const SplitPotential& pot,
                     const SamplerConfig& cfg, std::mt19937_64& rng);
StepResult nshmc_step(const Vec& x0, const SplitPotential& pot,
                      const SamplerConfig& cfg, std::mt19937_64& rng);
StepResult pmala_step(const Vec& x0, const SplitPotential& pot,
                      const SamplerConfig& cfg, std::mt19937_64& rng);
StepResult mymala_step(const Vec& x0, const SplitPotential& pot,
                       const SamplerConfig& cfg, std::mt19937_64& rng);
StepResult rwm_step(const Vec& x0, const SplitPotential& pot,
                    const SamplerConfig& cfg, std::mt19937_64& rng);

StepResult kernel_step(MethodKind kind, const Vec& x0,
                       const SplitPotential& pot, const SamplerConfig& cfg,
                       std::mt19937_64& rng);

/// Runs n_iterations sequential kernel applications from x_init.
/// Deterministic given cfg.seed.
ChainTrace run_chain(MethodKind kind, const Vec& x_init,
                     const SplitPotential& pot, const SamplerConfig& cfg);

}  // namespace phmc
