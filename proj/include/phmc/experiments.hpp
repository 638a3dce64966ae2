#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phmc/diagnostics.hpp"
#include "phmc/io.hpp"
#include "phmc/sampler.hpp"
#include "phmc/tuning.hpp"

namespace phmc {

/// Wiring for the three experiments: toy 1D lasso, sparse logistic
/// regression, and low-rank matrix denoising.
struct ExperimentConfig {
  std::string experiment = "toy";  // toy | logistic | lowrank
  std::vector<std::string> methods = {"phmc"};
  long iters = 10000;
  long burnin = 0;  // discarded warmup iterations per chain
  int reps = 10;
  std::uint64_t seed = 1;
  double eps = 0.0;     // 0 means the per-method experiment default
  int leapfrog = 0;     // 0 means default (10)
  double lambda = 0.0;  // 0 means the per-method experiment default
  std::string out_dir = "out";
  std::string data_path;  // logistic CSV; empty synthesizes a dataset
  int threads = 0;        // 0 means available parallelism
  double alpha = 1.0;     // logistic prior scale
  int matrix_size = 64;
  int matrix_block = 8;

  void validate() const;
};

struct BuiltTarget {
  SplitPotential pot;
  Vec map;  // proximal-gradient minimizer of U, the chain start
  int rows = 0, cols = 0;  // lowrank shape, 0 otherwise
  RowMat truth;            // lowrank ground truth
  RowMat observed;
  std::string note;  // provenance recorded in output sidecars
};

BuiltTarget build_experiment_target(const ExperimentConfig& cfg);

/// Experiment defaults (step sizes, lambda, leapfrog count) per method,
/// before any command-line overrides.
SamplerConfig default_sampler_config(const std::string& experiment,
                                     MethodKind method);

/// Applies cfg overrides (eps, leapfrog, lambda, iters) on top of defaults.
SamplerConfig resolve_sampler_config(const ExperimentConfig& cfg,
                                     MethodKind method);

struct ExperimentResult {
  std::vector<MethodSummary> summary;
  std::string summary_path;
};

/// Runs each method for the configured replications from the MAP, persists
/// traces with sidecars, and writes the ESS/sec summary CSV.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct TuneResult {
  LambdaSweepResult sweep;
  LambdaChoice choice;
  std::string csv_path;
};

TuneResult tune_experiment(const ExperimentConfig& cfg, double eps = 1e-7,
                           double threshold = 1e-3);

struct TrajectoryStep {
  std::string method;
  double lambda = 0.0;
  int start_index = 0;
  int step = 0;
  double x = 0.0, p = 0.0;
  double hamiltonian_value = 0.0;
  double abs_delta_h = 0.0;
};

struct TrajectoryResult {
  std::vector<TrajectoryStep> steps;
  std::string path_csv;
  std::string contour_csv;
};

/// Leapfrog paths for p-HMC (over a lambda_g grid) and ns-HMC (lambda = 1)
/// on the 1D toy target, plus an (x, p, exp(-H)) contour grid.
TrajectoryResult trajectory_command(const ExperimentConfig& cfg,
                                    double eps = 0.01, int leapfrog = 20,
                                    std::vector<double> lambda_grid = {});

struct AuditResult {
  AssumptionAudit audit;
  double lambda_g = 0.0;
  std::string csv_path;
};

AuditResult audit_command(const ExperimentConfig& cfg);

}  // namespace phmc
