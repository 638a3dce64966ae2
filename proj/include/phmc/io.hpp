#pragma once

#include <string>
#include <vector>

#include "phmc/diagnostics.hpp"
#include "phmc/sampler.hpp"

namespace phmc {

/// Writes samples as float64 row-major binary with an 8-byte (uint64,
/// little-endian) dimension header giving d; N follows from the file size.
void save_trace_binary(const std::string& path, const Mat& samples);
Mat load_trace_binary(const std::string& path);

/// JSON sidecar with full config, seed, acceptance rate and wall time.
void save_trace_sidecar(const std::string& path, const std::string& experiment,
                        const std::string& method, const SamplerConfig& cfg,
                        const ChainTrace& trace,
                        const std::string& extra_note = "");

void save_trace_csv(const std::string& path, const Mat& samples);

void save_lambda_sweep_csv(const std::string& path,
                           const std::vector<double>& grid,
                           const std::vector<double>& r_values);

void save_summary_csv(const std::string& path,
                      const std::vector<MethodSummary>& rows);

void save_acf_csv(const std::string& path, const AcfCurve& curve);

/// 0/1 grid marking the widest-interval components of a rows x cols state.
void save_mask_csv(const std::string& path, const std::vector<int>& indices,
                   int rows, int cols);

}  // namespace phmc
