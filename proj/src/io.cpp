#include "phmc/io.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include <json.hpp>

namespace phmc {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

void save_trace_binary(const std::string& path, const Mat& samples) {
  auto out = open_out(path, std::ios::binary);
  const std::uint64_t d = static_cast<std::uint64_t>(samples.cols());
  out.write(reinterpret_cast<const char*>(&d), sizeof(d));
  std::vector<double> row(samples.cols());
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    for (Eigen::Index j = 0; j < samples.cols(); ++j) row[j] = samples(i, j);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Mat load_trace_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("cannot open: " + path);
  const auto size = static_cast<std::uint64_t>(in.tellg());
  in.seekg(0);
  std::uint64_t d = 0;
  in.read(reinterpret_cast<char*>(&d), sizeof(d));
  if (d == 0 || (size - sizeof(d)) % (d * sizeof(double)) != 0)
    throw std::runtime_error("malformed trace file: " + path);
  const std::uint64_t n = (size - sizeof(d)) / (d * sizeof(double));
  Mat samples(n, d);
  std::vector<double> row(d);
  for (std::uint64_t i = 0; i < n; ++i) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(d * sizeof(double)));
    for (std::uint64_t j = 0; j < d; ++j) samples(i, j) = row[j];
  }
  if (!in) throw std::runtime_error("read failed: " + path);
  return samples;
}

void save_trace_sidecar(const std::string& path, const std::string& experiment,
                        const std::string& method, const SamplerConfig& cfg,
                        const ChainTrace& trace,
                        const std::string& extra_note) {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["method"] = method;
  j["code_version"] = "phmc-0.1.0";
  j["config"] = {
      {"step_size", cfg.step_size},
      {"leapfrog_steps", cfg.leapfrog_steps},
      {"randomize_leapfrog", cfg.randomize_leapfrog},
      {"lambda", cfg.lambda},
      {"proposal_scale", cfg.proposal_scale},
      {"n_iterations", cfg.n_iterations},
      {"burn_in", cfg.burn_in},
      {"seed", cfg.seed},
  };
  j["acceptance_rate"] = trace.acceptance_rate();
  j["wall_time_seconds"] = trace.wall_time;
  j["nonfinite_rejections"] = trace.nonfinite_rejections;
  if (!extra_note.empty()) j["note"] = extra_note;
  auto out = open_out(path, std::ios::out);
  out << j.dump(2) << "\n";
}

void save_trace_csv(const std::string& path, const Mat& samples) {
  auto out = open_out(path, std::ios::out);
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    for (Eigen::Index j = 0; j < samples.cols(); ++j) {
      if (j) out << ',';
      out << samples(i, j);
    }
    out << '\n';
  }
}

void save_lambda_sweep_csv(const std::string& path,
                           const std::vector<double>& grid,
                           const std::vector<double>& r_values) {
  auto out = open_out(path, std::ios::out);
  out << std::setprecision(17) << "lambda_g,R\n";
  for (size_t i = 0; i < grid.size(); ++i)
    out << grid[i] << ',' << r_values[i] << '\n';
}

void save_summary_csv(const std::string& path,
                      const std::vector<MethodSummary>& rows) {
  auto out = open_out(path, std::ios::out);
  out << "method,min_ess_per_second,median_ess_per_second,max_ess_per_second\n";
  out << std::setprecision(17);
  for (const auto& r : rows)
    out << r.method << ',' << r.min_ess_per_second << ','
        << r.median_ess_per_second << ',' << r.max_ess_per_second << '\n';
}

void save_acf_csv(const std::string& path, const AcfCurve& curve) {
  auto out = open_out(path, std::ios::out);
  out << "lag,component,value\n" << std::setprecision(17);
  for (int l = 0; l <= curve.max_lag; ++l)
    for (Eigen::Index j = 0; j < curve.values.cols(); ++j)
      out << l << ',' << j << ',' << curve.values(l, j) << '\n';
}

void save_mask_csv(const std::string& path, const std::vector<int>& indices,
                   int rows, int cols) {
  std::vector<char> mask(static_cast<size_t>(rows) * cols, 0);
  for (int idx : indices) {
    if (idx < 0 || idx >= rows * cols)
      throw std::domain_error("save_mask_csv: index out of range");
    mask[idx] = 1;
  }
  auto out = open_out(path, std::ios::out);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (j) out << ',';
      out << static_cast<int>(mask[static_cast<size_t>(i) * cols + j]);
    }
    out << '\n';
  }
}

}  // namespace phmc
