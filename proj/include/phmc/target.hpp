#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "phmc/prox.hpp"

namespace phmc {

/// A target potential U = f + g with Lipschitz-differentiable f and convex,
/// lower-semicontinuous g. Kernels consume f, grad f, g, prox_g and, where
/// available, prox_U.
struct SplitPotential {
  int dim = 0;
  std::function<double(const Vec&)> f_value;
  std::function<Vec(const Vec&)> f_gradient;
  std::function<double(const Vec&)> g_value;          // may return +inf
  std::function<Vec(const Vec&, double)> g_prox;      // prox_g^lambda
  std::function<Vec(const Vec&, double)> full_prox;   // prox_U^lambda, optional
  std::optional<double> f_lipschitz;

  // bumped when an iterative full_prox stops before reaching tolerance
  std::shared_ptr<long> fista_warnings = std::make_shared<long>(0);

  bool has_full_prox() const { return static_cast<bool>(full_prox); }

  double u_value(const Vec& x) const { return f_value(x) + g_value(x); }

  /// grad U^{lambda_g}(x) = grad f(x) + (x - prox_g^{lambda_g}(x)) / lambda_g
  Vec smoothed_gradient(const Vec& x, double lambda_g) const {
    return f_gradient(x) + (x - g_prox(x, lambda_g)) / lambda_g;
  }

  /// grad U^{lambda}(x) = (x - prox_U^{lambda}(x)) / lambda
  Vec full_envelope_gradient(const Vec& x, double lambda) const {
    return (x - full_prox(x, lambda)) / lambda;
  }
};

/// y_i iid N(1, 0.5), n = 100; U(x) = 1/2 sum (y_i - x)^2 + |x|.
struct ToyData {
  Vec y;
};

ToyData make_toy_data(std::uint64_t seed, int n = 100);
SplitPotential toy_target(const ToyData& data);
SplitPotential toy_target(std::uint64_t seed);

struct LogisticTarget {
  Mat X;             // n x d, standardized covariates with intercept column
  Eigen::VectorXi y; // binary responses
  double alpha = 1.0;
  Vec column_means;  // standardization constants on the original scale
  Vec column_sds;
};

/// Sparse logistic regression: f(b) = sum log(1 + exp(x_i.b)) - y_i x_i.b,
/// g(b) = alpha ||b||_1; full_prox via FISTA.
SplitPotential logistic_target(const LogisticTarget& data,
                               const FistaSettings& fista = {});

/// Parses a CSV with a header row, 7 numeric covariate columns and one label
/// column ({0,1} or {No,Yes}); standardizes columns and prepends an intercept.
LogisticTarget load_pima(const std::string& path, double alpha = 1.0);

/// Synthetic data with the same shape as Pima.tr (n rows, 7 covariates,
/// binary label) from a sparse ground-truth coefficient vector.
LogisticTarget make_synthetic_logistic(std::uint64_t seed, int n = 200,
                                       double alpha = 1.0);

struct MatrixTarget {
  RowMat Y;          // observed noisy matrix
  RowMat X_true;     // for synthetic error reporting only
  double sigma2 = 0.01;
  double alpha = 115.0;
};

/// Low-rank estimation: f(X) = ||Y - X||_F^2 / (2 sigma^2), g(X) = alpha ||X||_*,
/// over row-major flattened state vectors. Both proxes are closed-form SVT.
SplitPotential matrix_target(const MatrixTarget& data);

/// {0,1} block checkerboard; rank 2 for block < size.
RowMat make_checkerboard(int size, int block);

/// Checkerboard truth plus iid N(0, sigma2) noise.
MatrixTarget make_checkerboard_target(std::uint64_t seed, int size = 64,
                                      int block = 8, double sigma2 = 0.01,
                                      double alpha = 115.0);

}  // namespace phmc
