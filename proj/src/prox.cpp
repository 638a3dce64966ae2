#include "phmc/prox.hpp"

#include <cmath>
#include <stdexcept>

namespace phmc {

Vec soft_threshold(const Vec& x, double tau) {
  if (tau < 0.0) throw std::domain_error("soft_threshold: tau must be >= 0");
  Vec out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x[i]) - tau;
    out[i] = a > 0.0 ? (x[i] > 0.0 ? a : -a) : 0.0;
  }
  return out;
}

namespace {

// Singular-value shrinkage factors for svt: sigma -> max(sigma - tau, 0) /
// sigma, with a floor guarding division by (numerically) zero.
Vec svt_factors(const Vec& sigma, double tau) {
  Vec factor(sigma.size());
  const double floor = 1e-14 * std::max(sigma.maxCoeff(), 1.0);
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    const double shrunk = std::max(sigma[i] - tau, 0.0);
    factor[i] = sigma[i] > floor ? shrunk / sigma[i] : 0.0;
  }
  return factor;
}

// svt via the eigendecomposition of the smaller Gram matrix: shrinkage is a
// spectral function, so svt(X) = X Q diag(factor) Q^T with Q the eigenvectors
// of X^T X (tall case); the left singular vectors are never formed. Much
// faster than a full SVD. Templated so the 64x64 sampling hot path can use
// fixed-size matrices.
template <typename MatT>
MatT svt_gram(const MatT& X, double tau, bool tall) {
  MatT G = tall ? MatT(X.transpose() * X) : MatT(X * X.transpose());
  Eigen::SelfAdjointEigenSolver<MatT> es(G);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("svt: Gram eigensolver failed");
  Vec sigma = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Vec factor = svt_factors(sigma, tau);
  MatT S = es.eigenvectors() * factor.asDiagonal() *
           es.eigenvectors().transpose();
  return tall ? MatT(X * S) : MatT(S * X);
}

}  // namespace

Mat svt(const Mat& X, double tau) {
  if (tau < 0.0) throw std::domain_error("svt: tau must be >= 0");
  if (!X.allFinite()) throw std::domain_error("svt: non-finite entries");
  using M64 = Eigen::Matrix<double, 64, 64>;
  if (X.rows() == 64 && X.cols() == 64) {  // the experiments' hot path
    M64 Xf = X;
    return svt_gram<M64>(Xf, tau, true);
  }
  return svt_gram<Mat>(X, tau, X.rows() >= X.cols());
}

FistaResult fista_prox(const SmoothValueGrad& smooth_value_grad,
                       const ProxFn& nonsmooth_prox,
                       const ValueFn& nonsmooth_value,
                       const Vec& anchor, double lambda,
                       double smooth_lipschitz,
                       const FistaSettings& settings) {
  if (lambda <= 0.0) throw std::domain_error("fista_prox: lambda must be > 0");
  if (settings.max_iterations < 1 || settings.tolerance <= 0.0)
    throw std::domain_error("fista_prox: invalid settings");

  // Smooth part of the composite objective: F(z) = f(z) + ||anchor - z||^2/(2 lambda),
  // with Lipschitz gradient bound C_f + 1/lambda.
  const double lip = smooth_lipschitz + 1.0 / lambda;
  double step = 1.0 / lip;

  auto smooth_full = [&](const Vec& z, Vec& grad) {
    double v = smooth_value_grad(z, grad);
    const Vec diff = z - anchor;
    grad += diff / lambda;
    return v + diff.squaredNorm() / (2.0 * lambda);
  };

  Vec x = anchor;
  Vec z = x;  // extrapolated point
  double t = 1.0;
  Vec grad(x.size());

  FistaResult res;
  for (int k = 1; k <= settings.max_iterations; ++k) {
    double fz = smooth_full(z, grad);
    Vec x_next;
    if (settings.step_size_rule == StepSizeRule::Backtracking) {
      // halve until the quadratic upper model holds at the prox point
      for (;;) {
        x_next = nonsmooth_prox(z - step * grad, step);
        Vec d = x_next - z;
        Vec gtmp(x.size());
        double fx = smooth_full(x_next, gtmp);
        if (fx <= fz + grad.dot(d) + d.squaredNorm() / (2.0 * step) + 1e-12)
          break;
        step *= 0.5;
      }
    } else {
      x_next = nonsmooth_prox(z - step * grad, step);
    }
    const double dx = (x_next - x).norm();
    const double scale = std::max(x.norm(), 1.0);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    z = x_next + ((t - 1.0) / t_next) * (x_next - x);
    x = x_next;
    t = t_next;
    res.iterations = k;
    if (dx / scale < settings.tolerance) {
      res.converged = true;
      break;
    }
  }
  Vec gtmp(x.size());
  res.objective = smooth_full(x, gtmp) + nonsmooth_value(x);
  res.point = std::move(x);
  return res;
}

ProxOperator ProxOperator::l1(double scale, int dim) {
  if (scale < 0.0 || dim < 1) throw std::domain_error("l1: bad scale or dim");
  return ProxOperator(ProxKind::L1, scale, dim);
}

ProxOperator ProxOperator::nuclear_norm(double scale, int rows, int cols) {
  if (scale < 0.0 || rows < 1 || cols < 1)
    throw std::domain_error("nuclear_norm: bad scale or shape");
  ProxOperator op(ProxKind::NuclearNorm, scale, rows * cols);
  op.rows_ = rows;
  op.cols_ = cols;
  return op;
}

ProxOperator ProxOperator::toy_full_potential(const Vec& data_y) {
  if (data_y.size() < 1 || !data_y.allFinite())
    throw std::domain_error("toy_full_potential: bad data");
  ProxOperator op(ProxKind::ToyFullPotential, 1.0, 1);
  op.data_y_ = data_y;
  return op;
}

ProxOperator ProxOperator::composite(const SmoothValueGrad& smooth,
                                     const ProxFn& nonsmooth_prox,
                                     const ValueFn& nonsmooth_value,
                                     double smooth_lipschitz, int dim,
                                     const FistaSettings& settings) {
  ProxOperator op(ProxKind::CompositeIterative, 1.0, dim);
  op.smooth_ = smooth;
  op.nonsmooth_prox_ = nonsmooth_prox;
  op.nonsmooth_value_ = nonsmooth_value;
  op.smooth_lipschitz_ = smooth_lipschitz;
  op.fista_ = settings;
  return op;
}

Vec ProxOperator::prox(const Vec& x, double lambda) const {
  if (lambda <= 0.0) throw std::domain_error("prox: lambda must be > 0");
  switch (kind_) {
    case ProxKind::L1:
      return soft_threshold(x, scale_ * lambda);
    case ProxKind::NuclearNorm: {
      // state vectors are row-major flattenings of the matrix
      Mat X = Eigen::Map<const RowMat>(x.data(), rows_, cols_);
      RowMat Z = svt(X, scale_ * lambda);
      return Eigen::Map<Vec>(Z.data(), Z.size());
    }
    case ProxKind::ToyFullPotential: {
      // prox of U(x) = 1/2 sum (y_i - x)^2 + |x| in closed form
      const double n = static_cast<double>(data_y_.size());
      const double w = (x[0] + lambda * data_y_.sum()) / (1.0 + n * lambda);
      const double tau = lambda / (1.0 + n * lambda);
      const double a = std::abs(w) - tau;
      Vec out(1);
      out[0] = a > 0.0 ? (w > 0.0 ? a : -a) : 0.0;
      return out;
    }
    case ProxKind::CompositeIterative:
      return fista_prox(smooth_, nonsmooth_prox_, nonsmooth_value_, x, lambda,
                        smooth_lipschitz_, fista_)
          .point;
  }
  throw std::logic_error("prox: unknown kind");
}

double ProxOperator::value(const Vec& x) const {
  switch (kind_) {
    case ProxKind::L1:
      return scale_ * x.lpNorm<1>();
    case ProxKind::NuclearNorm: {
      // sqrt of Gram eigenvalues is too inaccurate for near-zero singular
      // values, and the value feeds finite-difference checks; use a real SVD
      Mat X = Eigen::Map<const RowMat>(x.data(), rows_, cols_);
      Eigen::BDCSVD<Mat> svd(X);
      return scale_ * svd.singularValues().sum();
    }
    case ProxKind::ToyFullPotential: {
      const Vec d = data_y_.array() - x[0];
      return 0.5 * d.squaredNorm() + std::abs(x[0]);
    }
    case ProxKind::CompositeIterative: {
      Vec g(x.size());
      return smooth_(x, g) + nonsmooth_value_(x);
    }
  }
  throw std::logic_error("value: unknown kind");
}

double ProxOperator::envelope_value(double lambda, const Vec& x) const {
  if (lambda <= 0.0)
    throw std::domain_error("envelope_value: lambda must be > 0");
  const Vec p = prox(x, lambda);
  return value(p) + (p - x).squaredNorm() / (2.0 * lambda);
}

Vec ProxOperator::envelope_gradient(double lambda, const Vec& x) const {
  if (lambda <= 0.0)
    throw std::domain_error("envelope_gradient: lambda must be > 0");
  return (x - prox(x, lambda)) / lambda;
}

}  // namespace phmc
