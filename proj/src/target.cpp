#include "phmc/target.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace phmc {

namespace {

double log1pexp(double t) {
  // log(1 + e^t) without overflow
  return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)));
}

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// Standardize columns to zero mean, unit variance; prepend intercept column.
LogisticTarget standardize(const Mat& raw, const Eigen::VectorXi& y,
                           double alpha) {
  const Eigen::Index n = raw.rows(), p = raw.cols();
  LogisticTarget out;
  out.alpha = alpha;
  out.y = y;
  out.column_means = raw.colwise().mean();
  out.column_sds = Vec(p);
  out.X = Mat(n, p + 1);
  out.X.col(0).setOnes();
  for (Eigen::Index j = 0; j < p; ++j) {
    Vec c = raw.col(j).array() - out.column_means[j];
    double sd = std::sqrt(c.squaredNorm() / static_cast<double>(n));
    if (sd <= 0.0)
      throw std::domain_error("constant covariate column " + std::to_string(j));
    out.column_sds[j] = sd;
    out.X.col(j + 1) = c / sd;
  }
  return out;
}

}  // namespace

ToyData make_toy_data(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(1.0, std::sqrt(0.5));
  ToyData d;
  d.y = Vec(n);
  for (int i = 0; i < n; ++i) d.y[i] = normal(rng);
  return d;
}

SplitPotential toy_target(const ToyData& data) {
  const Vec y = data.y;
  const double n = static_cast<double>(y.size());
  const double sum_y = y.sum();
  const double sum_y2 = y.squaredNorm();

  SplitPotential t;
  t.dim = 1;
  t.f_lipschitz = n;
  t.f_value = [n, sum_y, sum_y2](const Vec& x) {
    return 0.5 * (n * x[0] * x[0] - 2.0 * x[0] * sum_y + sum_y2);
  };
  t.f_gradient = [n, sum_y](const Vec& x) {
    Vec g(1);
    g[0] = n * x[0] - sum_y;
    return g;
  };
  t.g_value = [](const Vec& x) { return std::abs(x[0]); };
  t.g_prox = [](const Vec& x, double lam) { return soft_threshold(x, lam); };
  ProxOperator full = ProxOperator::toy_full_potential(y);
  t.full_prox = [full](const Vec& x, double lam) { return full.prox(x, lam); };
  return t;
}

SplitPotential toy_target(std::uint64_t seed) {
  return toy_target(make_toy_data(seed));
}

SplitPotential logistic_target(const LogisticTarget& data,
                               const FistaSettings& fista) {
  if (data.X.rows() != data.y.size())
    throw std::domain_error("logistic_target: X and y dimensions disagree");
  const Mat X = data.X;
  const Vec y = data.y.cast<double>();
  const double alpha = data.alpha;
  const int d = static_cast<int>(X.cols());

  // ||X^T X||_2 / 4 bounds the Lipschitz constant of grad f
  Eigen::SelfAdjointEigenSolver<Mat> es(X.transpose() * X);
  const double lip = es.eigenvalues().maxCoeff() / 4.0;

  SplitPotential t;
  t.dim = d;
  t.f_lipschitz = lip;
  t.f_value = [X, y](const Vec& b) {
    const Vec eta = X * b;
    double v = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i)
      v += log1pexp(eta[i]) - y[i] * eta[i];
    return v;
  };
  t.f_gradient = [X, y](const Vec& b) {
    Vec eta = X * b;
    for (Eigen::Index i = 0; i < eta.size(); ++i)
      eta[i] = sigmoid(eta[i]) - y[i];
    return Vec(X.transpose() * eta);
  };
  t.g_value = [alpha](const Vec& b) { return alpha * b.lpNorm<1>(); };
  t.g_prox = [alpha](const Vec& b, double lam) {
    return soft_threshold(b, alpha * lam);
  };

  auto warnings = t.fista_warnings;
  auto f_value = t.f_value;
  auto f_gradient = t.f_gradient;
  t.full_prox = [f_value, f_gradient, alpha, lip, fista, warnings](
                    const Vec& b, double lam) {
    auto smooth = [&](const Vec& z, Vec& grad) {
      grad = f_gradient(z);
      return f_value(z);
    };
    auto res = fista_prox(
        smooth,
        [alpha](const Vec& z, double t_) { return soft_threshold(z, alpha * t_); },
        [alpha](const Vec& z) { return alpha * z.lpNorm<1>(); }, b, lam, lip,
        fista);
    if (!res.converged) ++*warnings;
    return res.point;
  };
  return t;
}

LogisticTarget load_pima(const std::string& path, double alpha) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_pima: cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("load_pima: empty file " + path);

  std::vector<std::array<double, 7>> rows;
  std::vector<int> labels;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::array<double, 7> row{};
    for (int j = 0; j < 7; ++j) {
      if (!std::getline(ss, cell, ','))
        throw std::runtime_error("load_pima: row " + std::to_string(lineno) +
                                 " has fewer than 8 columns");
      try {
        size_t pos = 0;
        row[j] = std::stod(cell, &pos);
      } catch (const std::exception&) {
        throw std::runtime_error("load_pima: row " + std::to_string(lineno) +
                                 " column " + std::to_string(j + 1) +
                                 " is not numeric: '" + cell + "'");
      }
    }
    if (!std::getline(ss, cell, ','))
      throw std::runtime_error("load_pima: row " + std::to_string(lineno) +
                               " is missing the label column");
    // trim whitespace
    cell.erase(0, cell.find_first_not_of(" \t\r"));
    cell.erase(cell.find_last_not_of(" \t\r") + 1);
    int lab;
    if (cell == "0" || cell == "No" || cell == "no")
      lab = 0;
    else if (cell == "1" || cell == "Yes" || cell == "yes")
      lab = 1;
    else
      throw std::runtime_error("load_pima: row " + std::to_string(lineno) +
                               " has non-binary label '" + cell + "'");
    rows.push_back(row);
    labels.push_back(lab);
  }
  if (rows.empty())
    throw std::runtime_error("load_pima: no data rows in " + path);

  Mat raw(rows.size(), 7);
  Eigen::VectorXi y(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < 7; ++j) raw(i, j) = rows[i][j];
    y[i] = labels[i];
  }
  return standardize(raw, y, alpha);
}

LogisticTarget make_synthetic_logistic(std::uint64_t seed, int n,
                                       double alpha) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // covariates on heterogeneous scales, mimicking raw clinical measurements
  const Vec mu = (Vec(7) << 3.5, 120.0, 70.0, 29.0, 32.0, 0.45, 32.0).finished();
  const Vec sd = (Vec(7) << 3.0, 30.0, 11.0, 10.0, 6.0, 0.3, 10.0).finished();
  const Vec beta_std =
      (Vec(7) << 1.1, 0.0, 0.0, 0.6, 0.0, 0.4, -0.8).finished();
  const double intercept = -0.4;

  Mat raw(n, 7);
  Eigen::VectorXi y(n);
  for (int i = 0; i < n; ++i) {
    double eta = intercept;
    for (int j = 0; j < 7; ++j) {
      const double z = normal(rng);
      raw(i, j) = mu[j] + sd[j] * z;
      eta += beta_std[j] * z;
    }
    y[i] = unif(rng) < sigmoid(eta) ? 1 : 0;
  }
  return standardize(raw, y, alpha);
}

SplitPotential matrix_target(const MatrixTarget& data) {
  if (data.sigma2 <= 0.0 || data.alpha <= 0.0)
    throw std::domain_error("matrix_target: sigma2 and alpha must be > 0");
  const int m = static_cast<int>(data.Y.rows());
  const int k = static_cast<int>(data.Y.cols());
  const double sigma2 = data.sigma2;
  const double alpha = data.alpha;
  const Vec yvec = Eigen::Map<const Vec>(data.Y.data(), data.Y.size());
  ProxOperator nuc = ProxOperator::nuclear_norm(alpha, m, k);

  SplitPotential t;
  t.dim = m * k;
  t.f_lipschitz = 1.0 / sigma2;
  t.f_value = [yvec, sigma2](const Vec& x) {
    return (x - yvec).squaredNorm() / (2.0 * sigma2);
  };
  t.f_gradient = [yvec, sigma2](const Vec& x) {
    return Vec((x - yvec) / sigma2);
  };
  t.g_value = [nuc](const Vec& x) { return nuc.value(x); };
  t.g_prox = [nuc](const Vec& x, double lam) { return nuc.prox(x, lam); };
  t.full_prox = [yvec, sigma2, alpha, m, k](const Vec& x, double lam) {
    if (x.size() != static_cast<Eigen::Index>(m) * k)
      throw std::domain_error("matrix full_prox: shape mismatch");
    const double wy = lam / (lam + sigma2);
    const double wx = sigma2 / (lam + sigma2);
    const Vec anchor = wy * yvec + wx * x;
    Mat A = Eigen::Map<const RowMat>(anchor.data(), m, k);
    RowMat Z = svt(A, alpha * lam * sigma2 / (lam + sigma2));
    return Vec(Eigen::Map<Vec>(Z.data(), Z.size()));
  };
  return t;
}

RowMat make_checkerboard(int size, int block) {
  if (block < 1 || size < 1 || size % block != 0)
    throw std::domain_error("make_checkerboard: block must divide size");
  RowMat out(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j)
      out(i, j) = static_cast<double>((i / block + j / block) % 2);
  return out;
}

MatrixTarget make_checkerboard_target(std::uint64_t seed, int size, int block,
                                      double sigma2, double alpha) {
  MatrixTarget t;
  t.sigma2 = sigma2;
  t.alpha = alpha;
  t.X_true = make_checkerboard(size, block);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(sigma2));
  t.Y = t.X_true;
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) t.Y(i, j) += normal(rng);
  return t;
}

}  // namespace phmc
