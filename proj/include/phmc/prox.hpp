#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>

namespace phmc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Element-wise soft thresholding: component i maps to
/// sign(x_i) * max(|x_i| - tau, 0). The exact boundary |x_i| = tau maps to 0.
Vec soft_threshold(const Vec& x, double tau);

/// Singular value soft thresholding: X = B S D^T maps to B max(S - tau, 0) D^T.
Mat svt(const Mat& X, double tau);

enum class StepSizeRule { FixedFromLipschitz, Backtracking };

struct FistaSettings {
  int max_iterations = 500;
  double tolerance = 1e-8;  // relative change in iterate, Euclidean
  StepSizeRule step_size_rule = StepSizeRule::FixedFromLipschitz;
};

struct FistaResult {
  Vec point;
  int iterations = 0;
  bool converged = false;
  double objective = 0.0;
};

using SmoothValueGrad = std::function<double(const Vec&, Vec&)>;
using ProxFn = std::function<Vec(const Vec&, double)>;  // prox_g with parameter t
using ValueFn = std::function<double(const Vec&)>;

/// Approximately solves argmin_z { f(z) + g(z) + ||anchor - z||^2 / (2 lambda) }
/// by FISTA on the smooth part f + quadratic, with g handled through its prox.
/// smooth_lipschitz is a bound on the Lipschitz constant of grad f.
FistaResult fista_prox(const SmoothValueGrad& smooth_value_grad,
                       const ProxFn& nonsmooth_prox,
                       const ValueFn& nonsmooth_value,
                       const Vec& anchor, double lambda,
                       double smooth_lipschitz,
                       const FistaSettings& settings = {});

enum class ProxKind { L1, NuclearNorm, ToyFullPotential, CompositeIterative };

/// A named proximal mapping prox_psi^lambda together with psi itself, so the
/// Moreau-Yosida envelope psi^lambda and its gradient can be evaluated.
class ProxOperator {
 public:
  static ProxOperator l1(double scale, int dim);
  static ProxOperator nuclear_norm(double scale, int rows, int cols);
  /// psi = U for the 1D lasso-like toy potential; closed-form prox.
  static ProxOperator toy_full_potential(const Vec& data_y);
  static ProxOperator composite(const SmoothValueGrad& smooth,
                                const ProxFn& nonsmooth_prox,
                                const ValueFn& nonsmooth_value,
                                double smooth_lipschitz, int dim,
                                const FistaSettings& settings = {});

  ProxKind kind() const { return kind_; }
  double scale() const { return scale_; }
  int dim() const { return dim_; }

  Vec prox(const Vec& x, double lambda) const;
  double value(const Vec& x) const;  // psi(x)

  /// psi^lambda(x) = psi(prox(x)) + ||prox(x) - x||^2 / (2 lambda)
  double envelope_value(double lambda, const Vec& x) const;
  /// grad psi^lambda(x) = (x - prox(x)) / lambda
  Vec envelope_gradient(double lambda, const Vec& x) const;

 private:
  ProxOperator(ProxKind kind, double scale, int dim)
      : kind_(kind), scale_(scale), dim_(dim) {}

  ProxKind kind_;
  double scale_;
  int dim_;
  int rows_ = 0, cols_ = 0;         // NuclearNorm shape
  Vec data_y_;                      // ToyFullPotential data
  SmoothValueGrad smooth_;          // CompositeIterative pieces
  ProxFn nonsmooth_prox_;
  ValueFn nonsmooth_value_;
  double smooth_lipschitz_ = 0.0;
  FistaSettings fista_;
};

}  // namespace phmc
