#include "phmc/diagnostics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace phmc {

namespace {

// FFTW planning is not thread safe; plan creation is serialized, execution
// through fftw_execute_* on distinct arrays is safe.
std::mutex fftw_mutex;

// Full biased autocovariance of one centered series via zero-padded FFT.
std::vector<double> autocovariance(const Vec& column) {
  const int n = static_cast<int>(column.size());
  int m = 1;
  while (m < 2 * n) m *= 2;
  const int nc = m / 2 + 1;

  double* in = fftw_alloc_real(m);
  fftw_complex* freq = fftw_alloc_complex(nc);
  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    fwd = fftw_plan_dft_r2c_1d(m, in, freq, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(m, freq, in, FFTW_ESTIMATE);
  }
  const double mean = column.mean();
  for (int i = 0; i < n; ++i) in[i] = column[i] - mean;
  for (int i = n; i < m; ++i) in[i] = 0.0;
  fftw_execute(fwd);
  for (int i = 0; i < nc; ++i) {
    freq[i][0] = freq[i][0] * freq[i][0] + freq[i][1] * freq[i][1];
    freq[i][1] = 0.0;
  }
  fftw_execute(bwd);
  std::vector<double> gamma(n);
  for (int l = 0; l < n; ++l)
    gamma[l] = in[l] / (static_cast<double>(m) * n);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  fftw_free(in);
  fftw_free(freq);
  return gamma;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * (sorted.size() - 1);
  const size_t i = static_cast<size_t>(pos);
  if (i + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(i);
  return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
}

}  // namespace

AcfCurve acf(const Mat& samples, int max_lag) {
  const int n = static_cast<int>(samples.rows());
  const int d = static_cast<int>(samples.cols());
  if (n <= max_lag) throw std::domain_error("acf: need N > max_lag");
  AcfCurve c;
  c.max_lag = max_lag;
  c.values = Mat::Zero(max_lag + 1, d);
  c.degenerate.assign(d, 0);
  for (int j = 0; j < d; ++j) {
    const auto gamma = autocovariance(samples.col(j));
    if (gamma[0] <= 0.0) {
      c.degenerate[j] = 1;
      c.values(0, j) = 1.0;
      continue;
    }
    for (int l = 0; l <= max_lag; ++l) c.values(l, j) = gamma[l] / gamma[0];
  }
  return c;
}

AcfCurve acf(const ChainTrace& trace, int max_lag) {
  return acf(trace.samples, max_lag);
}

EssReport ess(const Mat& samples, double wall_time) {
  const int n = static_cast<int>(samples.rows());
  const int d = static_cast<int>(samples.cols());
  if (n < 100) throw std::domain_error("ess: need N >= 100");

  EssReport rep;
  rep.ess = Vec(d);
  rep.iact = Vec(d);
  rep.ess_per_second = Vec(d);
  for (int j = 0; j < d; ++j) {
    const auto gamma = autocovariance(samples.col(j));
    double iact;
    if (gamma[0] <= 0.0) {
      iact = static_cast<double>(n);  // constant component: no information
    } else {
      // Geyer: sum pairs Gamma_m = rho(2m) + rho(2m+1) while positive
      double sum_pairs = 0.0;
      for (int m = 0; 2 * m + 1 < n; ++m) {
        const double pair = (gamma[2 * m] + gamma[2 * m + 1]) / gamma[0];
        if (pair <= 0.0) break;
        sum_pairs += pair;
      }
      iact = std::max(2.0 * sum_pairs - 1.0, 1e-12);
    }
    rep.iact[j] = iact;
    rep.ess[j] = static_cast<double>(n) / iact;
    rep.ess_per_second[j] =
        wall_time > 0.0 ? rep.ess[j] / wall_time : rep.ess[j];
  }
  std::vector<double> eps(rep.ess_per_second.data(),
                          rep.ess_per_second.data() + d);
  rep.min_ess_per_second = *std::min_element(eps.begin(), eps.end());
  rep.max_ess_per_second = *std::max_element(eps.begin(), eps.end());
  rep.median_ess_per_second = median(eps);
  return rep;
}

EssReport ess(const ChainTrace& trace) {
  return ess(trace.samples, trace.wall_time);
}

CredibleIntervals credible_intervals(const Mat& samples, double level) {
  if (level <= 0.0 || level >= 1.0)
    throw std::domain_error("credible_intervals: level must be in (0,1)");
  const int n = static_cast<int>(samples.rows());
  const int d = static_cast<int>(samples.cols());
  if (n < 100) throw std::domain_error("credible_intervals: need N >= 100");

  CredibleIntervals ci;
  ci.lo = Vec(d);
  ci.hi = Vec(d);
  ci.width = Vec(d);
  const double tail = (1.0 - level) / 2.0;
  std::vector<double> col(n);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < n; ++i) col[i] = samples(i, j);
    std::sort(col.begin(), col.end());
    ci.lo[j] = quantile_sorted(col, tail);
    ci.hi[j] = quantile_sorted(col, 1.0 - tail);
    ci.width[j] = ci.hi[j] - ci.lo[j];
  }
  const int n_widest = static_cast<int>(std::ceil(0.05 * d));
  std::vector<int> order(d);
  for (int j = 0; j < d; ++j) order[j] = j;
  std::partial_sort(order.begin(), order.begin() + n_widest, order.end(),
                    [&ci](int a, int b) { return ci.width[a] > ci.width[b]; });
  ci.widest.assign(order.begin(), order.begin() + n_widest);
  return ci;
}

MethodSummary summarize(const std::string& method,
                        const std::vector<EssReport>& replications) {
  if (replications.empty())
    throw std::domain_error("summarize: no replications");
  const Eigen::Index d = replications.front().ess_per_second.size();
  Vec avg = Vec::Zero(d);
  for (const auto& rep : replications) {
    if (rep.ess_per_second.size() != d)
      throw std::domain_error("summarize: mismatched dimensions");
    avg += rep.ess_per_second;
  }
  avg /= static_cast<double>(replications.size());

  MethodSummary s;
  s.method = method;
  std::vector<double> v(avg.data(), avg.data() + d);
  s.min_ess_per_second = *std::min_element(v.begin(), v.end());
  s.max_ess_per_second = *std::max_element(v.begin(), v.end());
  s.median_ess_per_second = median(v);
  return s;
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::domain_error("median: empty");
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace phmc
