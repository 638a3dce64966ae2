#pragma once

#include <string>
#include <vector>

#include "phmc/sampler.hpp"

namespace phmc {

struct AcfCurve {
  int max_lag = 0;
  Mat values;                     // (max_lag + 1) x d, lag 0 row is all ones
  std::vector<char> degenerate;   // zero-variance components, flagged
};

/// Sample autocorrelation with the biased (1/N) covariance estimator,
/// per component. Degenerate components get rho(0) = 1 and 0 elsewhere.
AcfCurve acf(const Mat& samples, int max_lag);
AcfCurve acf(const ChainTrace& trace, int max_lag);

struct EssReport {
  Vec ess;             // per component
  Vec iact;            // integrated autocorrelation time per component
  Vec ess_per_second;
  double min_ess_per_second = 0.0;
  double median_ess_per_second = 0.0;
  double max_ess_per_second = 0.0;
};

/// ESS = N / (1 + 2 sum rho(l)) with Geyer's initial-positive-sequence
/// truncation: consecutive-lag pairs are summed while positive. ESS may
/// exceed N for antithetic chains; no clipping.
EssReport ess(const ChainTrace& trace);
EssReport ess(const Mat& samples, double wall_time);

struct CredibleIntervals {
  Vec lo;
  Vec hi;
  Vec width;
  std::vector<int> widest;  // indices of the ceil(5%) widest components
};

/// Per-component empirical quantiles at (1-level)/2 and 1-(1-level)/2.
CredibleIntervals credible_intervals(const Mat& samples, double level = 0.95);

struct MethodSummary {
  std::string method;
  double min_ess_per_second = 0.0;
  double median_ess_per_second = 0.0;
  double max_ess_per_second = 0.0;
};

/// Per-component ESS/sec averaged over replications first, then min/median/
/// max taken over components.
MethodSummary summarize(const std::string& method,
                        const std::vector<EssReport>& replications);

double median(std::vector<double> v);

}  // namespace phmc
