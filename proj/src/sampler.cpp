#include "phmc/sampler.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace phmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Vec ones_if_empty(const Vec& mass, int dim) {
  if (mass.size() == 0) return Vec::Ones(dim);
  return mass;
}

Vec draw_momentum(const Vec& mass, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec p(mass.size());
  for (Eigen::Index i = 0; i < p.size(); ++i)
    p[i] = std::sqrt(mass[i]) * normal(rng);
  return p;
}

int draw_leapfrog_count(const SamplerConfig& cfg, std::mt19937_64& rng) {
  if (!cfg.randomize_leapfrog) return cfg.leapfrog_steps;
  std::uniform_int_distribution<int> u(1, cfg.leapfrog_steps);
  return u(rng);
}

// Shared HMC proposal: L leapfrog steps under `force`, MHG acceptance with
// the exact potential. A non-finite trajectory rejects with delta H = +inf.
template <typename Force>
StepResult hmc_kernel(const Vec& x0, const SplitPotential& pot,
                      const SamplerConfig& cfg, std::mt19937_64& rng,
                      Force&& force) {
  const Vec mass = ones_if_empty(cfg.mass_diagonal, pot.dim);
  const Vec inv_mass = mass.cwiseInverse();
  const Vec p0 = draw_momentum(mass, rng);
  const int steps = draw_leapfrog_count(cfg, rng);
  // the uniform for the accept decision is drawn last so the RNG stream does
  // not depend on L
  PhaseState s{x0, p0};
  Vec grad = force(x0);
  bool finite = grad.allFinite();
  for (int l = 0; l < steps && finite; ++l) {
    s = leapfrog_step(s, force, cfg.step_size, inv_mass, grad);
    finite = s.x.allFinite() && s.p.allFinite() && grad.allFinite();
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);

  StepResult res;
  if (!finite) {
    res.x = x0;
    res.delta_h = kInf;
    res.nonfinite = true;
    return res;
  }
  const double h0 = hamiltonian(x0, p0, pot, mass);
  const double h1 = hamiltonian(s.x, s.p, pot, mass);
  res.delta_h = h1 - h0;
  if (std::isfinite(res.delta_h) && u <= std::exp(-res.delta_h)) {
    res.x = s.x;
    res.accepted = true;
  } else {
    res.x = x0;
    if (!std::isfinite(res.delta_h)) res.nonfinite = !std::isfinite(h1);
  }
  return res;
}

// Shared MALA kernel: Gaussian proposal with drift -(h/2) G, MH-corrected
// against the exact potential with the asymmetric proposal density ratio.
template <typename DriftGrad>
StepResult mala_kernel(const Vec& x0, const SplitPotential& pot,
                       const SamplerConfig& cfg, std::mt19937_64& rng,
                       DriftGrad&& drift_grad) {
  const double h = cfg.step_size;
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec zeta(x0.size());
  for (Eigen::Index i = 0; i < zeta.size(); ++i) zeta[i] = normal(rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);

  StepResult res;
  res.delta_h = kNaN;
  res.x = x0;

  const Vec g0 = drift_grad(x0);
  if (!g0.allFinite()) {
    res.nonfinite = true;
    return res;
  }
  const Vec mean_fwd = x0 - (h / 2.0) * g0;
  const Vec xs = mean_fwd + std::sqrt(h) * zeta;
  const Vec g1 = drift_grad(xs);
  if (!xs.allFinite() || !g1.allFinite()) {
    res.nonfinite = true;
    return res;
  }
  const Vec mean_rev = xs - (h / 2.0) * g1;
  const double log_q_fwd = -(xs - mean_fwd).squaredNorm() / (2.0 * h);
  const double log_q_rev = -(x0 - mean_rev).squaredNorm() / (2.0 * h);
  const double log_alpha =
      pot.u_value(x0) - pot.u_value(xs) + log_q_rev - log_q_fwd;
  if (std::isfinite(log_alpha) && std::log(u) <= log_alpha) {
    res.x = xs;
    res.accepted = true;
  }
  return res;
}

}  // namespace

std::string method_name(MethodKind m) {
  switch (m) {
    case MethodKind::PHMC: return "phmc";
    case MethodKind::NSHMC: return "nshmc";
    case MethodKind::PMALA: return "pmala";
    case MethodKind::MYMALA: return "mymala";
    case MethodKind::RWM: return "rwm";
  }
  throw std::logic_error("method_name: unknown kind");
}

MethodKind method_from_name(const std::string& name) {
  if (name == "phmc") return MethodKind::PHMC;
  if (name == "nshmc") return MethodKind::NSHMC;
  if (name == "pmala") return MethodKind::PMALA;
  if (name == "mymala") return MethodKind::MYMALA;
  if (name == "rwm") return MethodKind::RWM;
  throw std::invalid_argument("unknown method '" + name + "'");
}

void SamplerConfig::validate(int dim) const {
  if (step_size <= 0.0) throw std::domain_error("step_size must be > 0");
  if (leapfrog_steps < 1) throw std::domain_error("leapfrog_steps must be >= 1");
  if (lambda <= 0.0) throw std::domain_error("lambda must be > 0");
  if (proposal_scale <= 0.0) throw std::domain_error("proposal_scale must be > 0");
  if (n_iterations < 0) throw std::domain_error("n_iterations must be >= 0");
  if (burn_in < 0) throw std::domain_error("burn_in must be >= 0");
  if (mass_diagonal.size() != 0) {
    if (mass_diagonal.size() != dim)
      throw std::domain_error("mass_diagonal has wrong dimension");
    if (mass_diagonal.minCoeff() <= 0.0)
      throw std::domain_error("mass_diagonal entries must be > 0");
  }
}

double ChainTrace::acceptance_rate() const {
  if (accepted.empty()) return 0.0;
  long acc = 0;
  for (char a : accepted) acc += a;
  return static_cast<double>(acc) / static_cast<double>(accepted.size());
}

PhaseState leapfrog_step(const PhaseState& s,
                         const std::function<Vec(const Vec&)>& grad, double eps,
                         const Vec& mass_diagonal) {
  if (eps <= 0.0) throw std::domain_error("leapfrog_step: eps must be > 0");
  const Vec mass = ones_if_empty(mass_diagonal, static_cast<int>(s.x.size()));
  Vec g = grad(s.x);
  return leapfrog_step(s, grad, eps, Vec(mass.cwiseInverse()), g);
}

double hamiltonian(const Vec& x, const Vec& p, const SplitPotential& pot,
                   const Vec& mass_diagonal) {
  const Vec mass = ones_if_empty(mass_diagonal, static_cast<int>(x.size()));
  const double kinetic = 0.5 * p.cwiseQuotient(mass).dot(p);
  return pot.u_value(x) + kinetic;
}

StepResult phmc_step(const Vec& x0, const SplitPotential& pot,
                     const SamplerConfig& cfg, std::mt19937_64& rng) {
  const double lg = cfg.lambda;
  return hmc_kernel(x0, pot, cfg, rng, [&pot, lg](const Vec& x) {
    return pot.smoothed_gradient(x, lg);
  });
}

StepResult nshmc_step(const Vec& x0, const SplitPotential& pot,
                      const SamplerConfig& cfg, std::mt19937_64& rng) {
  if (!pot.has_full_prox())
    throw std::domain_error("nshmc_step: target has no full_prox");
  const double lam = cfg.lambda;
  return hmc_kernel(x0, pot, cfg, rng, [&pot, lam](const Vec& x) {
    return pot.full_envelope_gradient(x, lam);
  });
}

StepResult pmala_step(const Vec& x0, const SplitPotential& pot,
                      const SamplerConfig& cfg, std::mt19937_64& rng) {
  if (!pot.has_full_prox())
    throw std::domain_error("pmala_step: target has no full_prox");
  const double lam = cfg.step_size / 2.0;  // lambda = h/2
  return mala_kernel(x0, pot, cfg, rng, [&pot, lam](const Vec& x) {
    return pot.full_envelope_gradient(x, lam);
  });
}

StepResult mymala_step(const Vec& x0, const SplitPotential& pot,
                       const SamplerConfig& cfg, std::mt19937_64& rng) {
  const double lg = cfg.lambda;
  return mala_kernel(x0, pot, cfg, rng, [&pot, lg](const Vec& x) {
    return pot.smoothed_gradient(x, lg);
  });
}

StepResult rwm_step(const Vec& x0, const SplitPotential& pot,
                    const SamplerConfig& cfg, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec xs(x0.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i)
    xs[i] = x0[i] + cfg.proposal_scale * normal(rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);

  StepResult res;
  res.delta_h = kNaN;
  res.x = x0;
  const double du = pot.u_value(xs) - pot.u_value(x0);
  if (std::isfinite(du) ? (std::log(u) <= -du) : false) {
    res.x = xs;
    res.accepted = true;
  }
  return res;
}

StepResult kernel_step(MethodKind kind, const Vec& x0,
                       const SplitPotential& pot, const SamplerConfig& cfg,
                       std::mt19937_64& rng) {
  switch (kind) {
    case MethodKind::PHMC: return phmc_step(x0, pot, cfg, rng);
    case MethodKind::NSHMC: return nshmc_step(x0, pot, cfg, rng);
    case MethodKind::PMALA: return pmala_step(x0, pot, cfg, rng);
    case MethodKind::MYMALA: return mymala_step(x0, pot, cfg, rng);
    case MethodKind::RWM: return rwm_step(x0, pot, cfg, rng);
  }
  throw std::logic_error("kernel_step: unknown kind");
}

ChainTrace run_chain(MethodKind kind, const Vec& x_init,
                     const SplitPotential& pot, const SamplerConfig& cfg) {
  cfg.validate(pot.dim);
  if (x_init.size() != pot.dim)
    throw std::domain_error("run_chain: x_init has wrong dimension");
  if (!x_init.allFinite() || !std::isfinite(pot.u_value(x_init)))
    throw std::domain_error("run_chain: invalid initial point");

  const long n = cfg.n_iterations;
  ChainTrace trace;
  trace.samples = Mat(n, pot.dim);
  trace.accepted.resize(n, 0);
  trace.energy_error.resize(n, 0.0);

  std::mt19937_64 rng(cfg.seed);
  Vec x = x_init;
  if (cfg.burn_in > 0) {
    // Warmup uses short randomized trajectories for the HMC kernels: from a
    // cold start on a nonsmooth mode the exact-potential acceptance test
    // systematically rejects full-length trajectories, so a chain cannot
    // thermalize through its own long-trajectory kernel.
    SamplerConfig w = cfg;
    w.leapfrog_steps = std::min(10, cfg.leapfrog_steps);
    w.randomize_leapfrog = true;
    for (long t = 0; t < cfg.burn_in; ++t) {
      StepResult r = kernel_step(kind, x, pot, w, rng);
      x = std::move(r.x);
    }
  }
  const auto t0 = std::chrono::steady_clock::now();
  for (long t = 0; t < n; ++t) {
    StepResult r = kernel_step(kind, x, pot, cfg, rng);
    x = std::move(r.x);
    trace.samples.row(t) = x.transpose();
    trace.accepted[t] = r.accepted ? 1 : 0;
    trace.energy_error[t] = r.delta_h;
    if (r.nonfinite) ++trace.nonfinite_rejections;
  }
  const auto t1 = std::chrono::steady_clock::now();
  trace.wall_time = std::chrono::duration<double>(t1 - t0).count();
  return trace;
}

}  // namespace phmc
