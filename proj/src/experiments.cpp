#include "phmc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace phmc {

namespace fs = std::filesystem;

void ExperimentConfig::validate() const {
  if (experiment != "toy" && experiment != "logistic" &&
      experiment != "lowrank") {
    throw std::domain_error("unknown experiment: " + experiment);
  }
  if (methods.empty()) throw std::domain_error("no methods requested");
  for (const auto& m : methods) {
    try {
      method_from_name(m);
    } catch (const std::exception&) {
      throw std::domain_error("unknown method: " + m);
    }
  }
  if (iters < 0) throw std::domain_error("iters must be nonnegative");
  if (burnin < 0) throw std::domain_error("burnin must be nonnegative");
  if (reps < 1) throw std::domain_error("reps must be positive");
  if (eps < 0 || lambda < 0) {
    throw std::domain_error("eps and lambda must be nonnegative");
  }
  if (threads < 0) throw std::domain_error("threads must be nonnegative");
}

BuiltTarget build_experiment_target(const ExperimentConfig& cfg) {
  cfg.validate();
  BuiltTarget out;
  if (cfg.experiment == "toy") {
    out.pot = toy_target(cfg.seed);
    out.note = "toy lasso, n=100, y ~ N(1, 0.5)";
  } else if (cfg.experiment == "logistic") {
    LogisticTarget data;
    if (!cfg.data_path.empty()) {
      data = load_pima(cfg.data_path, cfg.alpha);
      out.note = "logistic regression on " + cfg.data_path;
    } else {
      data = make_synthetic_logistic(cfg.seed, 200, cfg.alpha);
      out.note = "logistic regression, synthetic Pima-shaped data";
    }
    out.pot = logistic_target(data);
  } else {
    double sigma2 = 0.01;
    MatrixTarget data = make_checkerboard_target(
        cfg.seed, cfg.matrix_size, cfg.matrix_block, sigma2, 1.15 / sigma2);
    out.rows = cfg.matrix_size;
    out.cols = cfg.matrix_size;
    out.truth = data.X_true;
    out.observed = data.Y;
    out.pot = matrix_target(data);
    out.note = "low-rank checkerboard denoising, size " +
               std::to_string(cfg.matrix_size);
  }
  Vec start = Vec::Zero(out.pot.dim);
  MinimizeResult map = minimize_potential(out.pot, start);
  out.map = map.point;
  return out;
}

SamplerConfig default_sampler_config(const std::string& experiment,
                                     MethodKind method) {
  SamplerConfig cfg;
  cfg.leapfrog_steps = 10;
  cfg.randomize_leapfrog =
      (method == MethodKind::PHMC || method == MethodKind::NSHMC);
  if (experiment == "toy") {
    switch (method) {
      case MethodKind::PHMC: cfg.step_size = 0.1; cfg.lambda = 0.01; break;
      case MethodKind::NSHMC: cfg.step_size = 0.01; cfg.lambda = 1.0; break;
      case MethodKind::PMALA: cfg.step_size = 0.01; break;
      case MethodKind::MYMALA: cfg.step_size = 0.01; cfg.lambda = 0.01; break;
      case MethodKind::RWM: cfg.proposal_scale = 0.25; break;
    }
  } else if (experiment == "logistic") {
    switch (method) {
      case MethodKind::PHMC: cfg.step_size = 0.00192; cfg.lambda = 0.01; break;
      case MethodKind::NSHMC: cfg.step_size = 0.00014; cfg.lambda = 1.0; break;
      case MethodKind::PMALA: cfg.step_size = 1e-4; break;
      case MethodKind::MYMALA: cfg.step_size = 1e-3; cfg.lambda = 0.01; break;
      case MethodKind::RWM: cfg.proposal_scale = 0.05; break;
    }
  } else {  // lowrank
    // The nuclear-norm kink zones cap every kernel's usable move size; these
    // values sit just under each kernel's empirical acceptance collapse.
    // p-HMC alone sustains long trajectories (its exact-potential acceptance
    // penalty is a bounded Moreau-gap difference), so it runs fixed L = 200;
    // the discarded warmup phase handles thermalization with short moves.
    // A warm start is discarded: chains begin at the MAP, where a band of
    // singular values sits exactly on the kink and early moves pay a one-time
    // envelope-gap cost that misstates stationary acceptance.
    cfg.burn_in = 3000;
    switch (method) {
      case MethodKind::PHMC:
        cfg.step_size = 1.5e-4;
        cfg.lambda = 1e-4;
        cfg.leapfrog_steps = 200;
        cfg.randomize_leapfrog = false;
        break;
      // ns-HMC runs at the same trajectory length as p-HMC (the comparison
      // convention used on the logistic target) with its own stable step;
      // randomized lengths are kept because only its short draws accept.
      case MethodKind::NSHMC:
        cfg.step_size = 1e-4;
        cfg.lambda = 1.0;
        cfg.leapfrog_steps = 200;
        break;
      case MethodKind::PMALA: cfg.step_size = 1e-8; break;
      case MethodKind::MYMALA: cfg.step_size = 1e-8; cfg.lambda = 1e-4; break;
      case MethodKind::RWM: cfg.proposal_scale = 1e-4; break;
    }
  }
  if (method == MethodKind::PMALA) cfg.lambda = cfg.step_size / 2.0;
  return cfg;
}

SamplerConfig resolve_sampler_config(const ExperimentConfig& cfg,
                                     MethodKind method) {
  SamplerConfig s = default_sampler_config(cfg.experiment, method);
  if (cfg.eps > 0) {
    s.step_size = cfg.eps;
    if (method == MethodKind::RWM) s.proposal_scale = cfg.eps;
    if (method == MethodKind::PMALA) s.lambda = cfg.eps / 2.0;
  }
  if (cfg.leapfrog > 0) s.leapfrog_steps = cfg.leapfrog;
  if (cfg.lambda > 0 && method != MethodKind::PMALA) s.lambda = cfg.lambda;
  s.n_iterations = cfg.iters;
  if (cfg.burnin > 0) s.burn_in = cfg.burnin;
  return s;
}

namespace {

// Distinct, reproducible seed per (method, replication).
std::uint64_t rep_seed(std::uint64_t base, std::size_t method_idx, int rep) {
  return base + 1000003ull * method_idx + 7919ull * (rep + 1);
}

void run_reps_threaded(int n_threads, int reps,
                       const std::function<void(int)>& body) {
  if (n_threads <= 1 || reps == 1) {
    for (int r = 0; r < reps; ++r) body(r);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int t = 0; t < std::min(n_threads, reps); ++t) {
    pool.emplace_back([&] {
      for (int r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) body(r);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  BuiltTarget target = build_experiment_target(cfg);
  fs::create_directories(cfg.out_dir);

  int n_threads = cfg.threads > 0
                      ? cfg.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;

  ExperimentResult out;
  for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
    MethodKind kind = method_from_name(cfg.methods[mi]);
    std::vector<ChainTrace> traces(cfg.reps);
    std::vector<SamplerConfig> configs(cfg.reps);
    run_reps_threaded(n_threads, cfg.reps, [&](int r) {
      SamplerConfig s = resolve_sampler_config(cfg, kind);
      s.seed = rep_seed(cfg.seed, mi, r);
      configs[r] = s;
      traces[r] = run_chain(kind, target.map, target.pot, s);
    });

    std::vector<EssReport> reports;
    reports.reserve(cfg.reps);
    for (int r = 0; r < cfg.reps; ++r) {
      std::string stem = cfg.out_dir + "/" + cfg.experiment + "_" +
                         cfg.methods[mi] + "_rep" + std::to_string(r);
      save_trace_binary(stem + ".bin", traces[r].samples);
      save_trace_sidecar(stem + ".json", cfg.experiment, cfg.methods[mi],
                         configs[r], traces[r], target.note);
      if (traces[r].n() >= 100) reports.push_back(ess(traces[r]));
    }
    if (!reports.empty()) {
      out.summary.push_back(summarize(cfg.methods[mi], reports));
    }
    if (traces[0].n() >= 2) {
      int max_lag = static_cast<int>(std::min<long>(traces[0].n() - 1, 200));
      save_acf_csv(cfg.out_dir + "/" + cfg.experiment + "_" + cfg.methods[mi] +
                       "_acf.csv",
                   acf(traces[0], max_lag));
    }
  }

  out.summary_path = cfg.out_dir + "/" + cfg.experiment + "_summary.csv";
  save_summary_csv(out.summary_path, out.summary);
  return out;
}

TuneResult tune_experiment(const ExperimentConfig& cfg, double eps,
                           double threshold) {
  BuiltTarget target = build_experiment_target(cfg);
  fs::create_directories(cfg.out_dir);
  TuneResult out;
  out.sweep = lambda_sweep(target.pot, target.map, default_lambda_grid(), eps,
                           1, cfg.seed);
  out.choice = choose_lambda(out.sweep, threshold);
  out.csv_path = cfg.out_dir + "/" + cfg.experiment + "_lambda_sweep.csv";
  save_lambda_sweep_csv(out.csv_path, out.sweep.grid, out.sweep.r_values);
  return out;
}

TrajectoryResult trajectory_command(const ExperimentConfig& cfg, double eps,
                                    int leapfrog,
                                    std::vector<double> lambda_grid) {
  if (cfg.experiment != "toy") {
    throw std::domain_error("trajectory visualization is 1D (toy) only");
  }
  BuiltTarget target = build_experiment_target(cfg);
  if (lambda_grid.empty()) lambda_grid = {0.001, 0.01, 0.1, 1.0};
  fs::create_directories(cfg.out_dir);

  const double map = target.map(0);
  // One start displaced in position, one kicked in momentum.
  std::vector<PhaseState> starts;
  starts.push_back({Vec::Constant(1, map + 0.25), Vec::Zero(1)});
  starts.push_back({Vec::Constant(1, map), Vec::Constant(1, 2.5)});

  Vec unit_mass = Vec::Ones(1);
  TrajectoryResult out;
  auto record_path = [&](const std::string& method, double lambda,
                         int start_index, const std::function<Vec(const Vec&)>& grad) {
    PhaseState s = starts[start_index];
    double h0 = hamiltonian(s.x, s.p, target.pot, unit_mass);
    Vec g = grad(s.x);
    for (int step = 0; step <= leapfrog; ++step) {
      double h = hamiltonian(s.x, s.p, target.pot, unit_mass);
      out.steps.push_back({method, lambda, start_index, step, s.x(0), s.p(0), h,
                           std::abs(h - h0)});
      if (step < leapfrog) s = leapfrog_step(s, grad, eps, unit_mass, g);
    }
  };

  for (int si = 0; si < static_cast<int>(starts.size()); ++si) {
    for (double lg : lambda_grid) {
      record_path("phmc", lg, si, [&](const Vec& x) {
        return target.pot.smoothed_gradient(x, lg);
      });
    }
    record_path("nshmc", 1.0, si, [&](const Vec& x) {
      return target.pot.full_envelope_gradient(x, 1.0);
    });
  }

  out.path_csv = cfg.out_dir + "/toy_trajectories.csv";
  {
    std::ofstream f(out.path_csv);
    f << "method,lambda,start,step,x,p,H,abs_dH\n";
    char buf[256];
    for (const auto& s : out.steps) {
      std::snprintf(buf, sizeof(buf), "%s,%.17g,%d,%d,%.17g,%.17g,%.17g,%.17g\n",
                    s.method.c_str(), s.lambda, s.start_index, s.step, s.x, s.p,
                    s.hamiltonian_value, s.abs_delta_h);
      f << buf;
    }
  }

  // exp(-H) over an (x, p) grid around the mode, for contour plots.
  out.contour_csv = cfg.out_dir + "/toy_contour.csv";
  {
    std::ofstream f(out.contour_csv);
    f << "x,p,exp_neg_H\n";
    double h_map = target.pot.u_value(target.map);
    char buf[160];
    for (int i = 0; i < 81; ++i) {
      double x = map - 0.5 + i * (1.0 / 80.0);
      Vec xv = Vec::Constant(1, x);
      for (int j = 0; j < 81; ++j) {
        double p = -3.0 + j * (6.0 / 80.0);
        double h = target.pot.u_value(xv) + p * p / 2.0;
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", x, p,
                      std::exp(-(h - h_map)));
        f << buf;
      }
    }
  }
  return out;
}

AuditResult audit_command(const ExperimentConfig& cfg) {
  BuiltTarget target = build_experiment_target(cfg);
  fs::create_directories(cfg.out_dir);
  AuditResult out;
  out.lambda_g = cfg.lambda > 0
                     ? cfg.lambda
                     : default_sampler_config(cfg.experiment, MethodKind::PHMC)
                           .lambda;
  int n_rays = target.pot.dim > 512 ? 8 : 32;
  out.audit = assumption_audit(target.pot, out.lambda_g, n_rays);

  out.csv_path = cfg.out_dir + "/" + cfg.experiment + "_audit.csv";
  std::ofstream f(out.csv_path);
  f << "ray,radius,grad_f_norm,grad_f_over_radius,inward_cosine,envelope_ratio\n";
  char buf[256];
  for (int i = 0; i < out.audit.grad_f_norm.rows(); ++i) {
    for (int j = 0; j < static_cast<int>(out.audit.radii.size()); ++j) {
      std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", i,
                    out.audit.radii[j], out.audit.grad_f_norm(i, j),
                    out.audit.grad_f_over_radius(i, j),
                    out.audit.inward_cosine(i, j),
                    out.audit.envelope_ratio(i, j));
      f << buf;
    }
  }
  return out;
}

}  // namespace phmc
