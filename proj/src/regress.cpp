#include "proxtext/regress.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace proxtext::regress {

namespace {

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) throw FitError(std::string("non-finite value in ") + what);
}

// log(1 + exp(x)) without overflow.
double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

/// Centered and scaled copy of the design with a leading intercept column.
/// Fitting in these coordinates keeps the Newton system well conditioned
/// when raw features differ by orders of magnitude.
struct ScaledDesign {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd center;
  Eigen::VectorXd scale;

  explicit ScaledDesign(const DesignMatrix& x) {
    const auto& v = x.values();
    const Eigen::Index n = v.rows();
    const Eigen::Index p = v.cols();
    center = v.colwise().mean().transpose();
    scale.resize(p);
    matrix.resize(n, p + 1);
    matrix.col(0).setOnes();
    for (Eigen::Index j = 0; j < p; ++j) {
      const Eigen::ArrayXd c = v.col(j).array() - center(j);
      const double sd = std::sqrt(c.square().mean());
      if (!(sd > 0.0)) {
        throw FitError("rank-deficient design: column '" + x.names()[j] + "' is constant");
      }
      scale(j) = sd;
      matrix.col(j + 1) = c / sd;
    }
  }

  // Maps scaled-coordinate parameters back to (intercept, coefficients).
  std::pair<double, Eigen::VectorXd> unscale(const Eigen::VectorXd& beta) const {
    Eigen::VectorXd coef = beta.tail(beta.size() - 1).cwiseQuotient(scale);
    const double intercept = beta(0) - coef.dot(center);
    return {intercept, coef};
  }
};

double weighted_loglik(const Eigen::VectorXd& eta, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& w) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) ll += w(i) * (y(i) * eta(i) - softplus(eta(i)));
  return ll;
}

double find_coefficient(const std::vector<std::string>& names, const Eigen::VectorXd& coef,
                        const std::string& name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw FitError("model has no coefficient named '" + name + "'");
  return coef(it - names.begin());
}

}  // namespace

DesignMatrix::DesignMatrix(std::vector<std::string> names, Eigen::MatrixXd values)
    : names_(std::move(names)), values_(std::move(values)) {
  if (names_.size() != static_cast<std::size_t>(values_.cols())) {
    throw FitError("design matrix: name count does not match column count");
  }
  require_finite(values_, "design matrix");
}

DesignMatrix DesignMatrix::from_columns(std::vector<std::string> names,
                                        const std::vector<std::span<const double>>& columns) {
  if (names.size() != columns.size()) throw FitError("design matrix: names/columns mismatch");
  const std::size_t n = columns.empty() ? 0 : columns.front().size();
  Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != n) throw FitError("design matrix: column lengths differ");
    for (std::size_t i = 0; i < n; ++i) values(i, j) = columns[j][i];
  }
  return DesignMatrix(std::move(names), std::move(values));
}

double LinearModel::coefficient(const std::string& name) const {
  return find_coefficient(names, coefficients, name);
}

Eigen::VectorXd LinearModel::predict(const DesignMatrix& x) const {
  if (x.names() != names) throw FitError("feature names do not match the fitted model");
  return (x.values() * coefficients).array() + intercept;
}

double LogisticModel::coefficient(const std::string& name) const {
  return find_coefficient(names, coefficients, name);
}

const char* to_string(ClassWeighting w) {
  return w == ClassWeighting::balanced ? "balanced" : "none";
}

double expit(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::vector<double> standardize(std::span<const double> values) {
  if (values.size() < 2) throw FitError("standardize: need at least two values");
  for (double v : values)
    if (!std::isfinite(v)) throw FitError("standardize: non-finite value");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / n);
  if (!(sd > 0.0)) throw FitError("standardize: constant column");
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(),
                 [&](double v) { return (v - mean) / sd; });
  return out;
}

LinearModel ols_fit(const DesignMatrix& x, std::span<const double> y) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (y.size() != n) throw FitError("ols_fit: response length does not match design rows");
  if (n < p + 1) throw FitError("ols_fit: need at least p + 1 rows");
  const Eigen::Map<const Eigen::VectorXd> target(y.data(), static_cast<Eigen::Index>(n));
  require_finite(target, "response");

  const ScaledDesign design(x);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.matrix);
  qr.setThreshold(1e-10);
  if (qr.rank() < static_cast<Eigen::Index>(p + 1)) {
    throw FitError("ols_fit: rank-deficient design");
  }
  const Eigen::VectorXd beta = qr.solve(target);
  auto [intercept, coef] = design.unscale(beta);
  return LinearModel{intercept, x.names(), std::move(coef)};
}

std::vector<double> class_weights(std::span<const int> y, ClassWeighting weighting) {
  std::vector<double> w(y.size(), 1.0);
  if (weighting == ClassWeighting::none) return w;
  const auto positives = static_cast<double>(std::count(y.begin(), y.end(), 1));
  const auto n = static_cast<double>(y.size());
  const double w1 = n / (2.0 * positives);
  const double w0 = n / (2.0 * (n - positives));
  for (std::size_t i = 0; i < y.size(); ++i) w[i] = y[i] == 1 ? w1 : w0;
  return w;
}

LogisticModel logistic_fit(const DesignMatrix& x, std::span<const int> y,
                           ClassWeighting weighting, const LogisticOptions& options) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (y.size() != n) throw FitError("logistic_fit: response length does not match design rows");
  if (n < p + 1) throw FitError("logistic_fit: need at least p + 1 rows");
  std::size_t positives = 0;
  for (int v : y) {
    if (v != 0 && v != 1) throw FitError("logistic_fit: response must be 0/1");
    positives += static_cast<std::size_t>(v);
  }
  if (positives == 0 || positives == n) throw FitError("logistic_fit: response has a single class");

  const ScaledDesign design(x);
  const Eigen::MatrixXd& xs = design.matrix;
  const auto rows = static_cast<Eigen::Index>(n);
  Eigen::VectorXd target(rows);
  for (Eigen::Index i = 0; i < rows; ++i) target(i) = y[i];
  const auto wv = class_weights(y, weighting);
  const Eigen::Map<const Eigen::VectorXd> weights(wv.data(), rows);

  LogisticModel model;
  model.names = x.names();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p + 1));
  Eigen::VectorXd eta = xs * beta;
  double ll = weighted_loglik(eta, target, weights);

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    model.iterations = iter;
    Eigen::VectorXd mu(rows), curvature(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
      mu(i) = expit(eta(i));
      curvature(i) = weights(i) * mu(i) * (1.0 - mu(i));
    }
    const Eigen::VectorXd resid = weights.cwiseProduct(target - mu);
    const Eigen::VectorXd score = xs.transpose() * resid;
    // Convergence is judged on the score in the caller's units, not the scaled ones.
    const double raw_score = std::max(std::abs(resid.sum()), (x.values().transpose() * resid).cwiseAbs().maxCoeff());
    if (raw_score <= options.score_tolerance) {
      model.converged = true;
      break;
    }
    const Eigen::MatrixXd hessian = xs.transpose() * (xs.array().colwise() * curvature.array()).matrix();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hessian);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      throw FitError("logistic_fit: singular information matrix");
    }
    const Eigen::VectorXd step = ldlt.solve(score);
    if (!step.allFinite()) throw FitError("logistic_fit: singular information matrix");

    // Step halving until the log-likelihood does not decrease.
    double t = 1.0;
    Eigen::VectorXd candidate = beta + step;
    Eigen::VectorXd candidate_eta = xs * candidate;
    double candidate_ll = weighted_loglik(candidate_eta, target, weights);
    const double slack = 1e-12 * std::max(1.0, std::abs(ll));
    for (int h = 0; h < 40 && !(candidate_ll >= ll - slack); ++h) {
      t *= 0.5;
      candidate = beta + t * step;
      candidate_eta = xs * candidate;
      candidate_ll = weighted_loglik(candidate_eta, target, weights);
    }
    beta = std::move(candidate);
    eta = std::move(candidate_eta);
    ll = candidate_ll;

    auto [intercept, coef] = design.unscale(beta);
    const double largest = std::max(std::abs(intercept), coef.cwiseAbs().maxCoeff());
    if (largest > options.coefficient_bound) {
      const double b = options.coefficient_bound;
      model.separation_detected = true;
      model.intercept = std::clamp(intercept, -b, b);
      model.coefficients = coef.cwiseMax(-b).cwiseMin(b);
      return model;
    }
    if ((t * step).norm() <= options.step_tolerance) {
      model.converged = true;
      break;
    }
  }

  auto [intercept, coef] = design.unscale(beta);
  model.intercept = intercept;
  model.coefficients = std::move(coef);
  return model;
}

double logistic_loglik(const DesignMatrix& x, std::span<const int> y, std::span<const double> weights,
                       double intercept, const Eigen::VectorXd& coefficients) {
  if (y.size() != x.rows() || weights.size() != x.rows()) throw FitError("logistic_loglik: length mismatch");
  const Eigen::VectorXd eta = (x.values() * coefficients).array() + intercept;
  double ll = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    ll += weights[i] * (y[i] * eta(r) - softplus(eta(r)));
  }
  return ll;
}

Eigen::VectorXd logistic_score(const DesignMatrix& x, std::span<const int> y,
                               std::span<const double> weights, double intercept,
                               const Eigen::VectorXd& coefficients) {
  if (y.size() != x.rows() || weights.size() != x.rows()) throw FitError("logistic_score: length mismatch");
  const Eigen::VectorXd eta = (x.values() * coefficients).array() + intercept;
  Eigen::VectorXd residual(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) residual(i) = weights[i] * (y[i] - expit(eta(i)));
  Eigen::VectorXd score(coefficients.size() + 1);
  score(0) = residual.sum();
  score.tail(coefficients.size()) = x.values().transpose() * residual;
  return score;
}

std::vector<double> predict_proba(const LogisticModel& model, const DesignMatrix& x) {
  if (x.names() != model.names) throw FitError("feature names do not match the fitted model");
  const Eigen::VectorXd eta = (x.values() * model.coefficients).array() + model.intercept;
  std::vector<double> out(x.rows());
  // Keep outputs strictly inside (0, 1) even for saturated scores.
  constexpr double lo = std::numeric_limits<double>::min();
  const double hi = std::nextafter(1.0, 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::clamp(expit(eta(static_cast<Eigen::Index>(i))), lo, hi);
  }
  return out;
}

}  // namespace proxtext::regress
