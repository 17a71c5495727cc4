#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace proxtext::regress {

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Named feature columns. The intercept is never a column; fitters add it.
class DesignMatrix {
 public:
  DesignMatrix() = default;
  DesignMatrix(std::vector<std::string> names, Eigen::MatrixXd values);

  /// Builds a matrix from equal-length columns.
  static DesignMatrix from_columns(std::vector<std::string> names,
                                   const std::vector<std::span<const double>>& columns);

  std::size_t rows() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values_.cols()); }
  const std::vector<std::string>& names() const { return names_; }
  const Eigen::MatrixXd& values() const { return values_; }

 private:
  std::vector<std::string> names_;
  Eigen::MatrixXd values_;
};

struct LinearModel {
  double intercept = 0.0;
  std::vector<std::string> names;
  Eigen::VectorXd coefficients;

  double coefficient(const std::string& name) const;
  Eigen::VectorXd predict(const DesignMatrix& x) const;
};

enum class ClassWeighting { none, balanced };

const char* to_string(ClassWeighting w);

struct LogisticModel {
  double intercept = 0.0;
  std::vector<std::string> names;
  Eigen::VectorXd coefficients;
  bool converged = false;
  bool separation_detected = false;
  int iterations = 0;

  double coefficient(const std::string& name) const;
};

struct LogisticOptions {
  int max_iterations = 100;
  double score_tolerance = 1e-8;
  double step_tolerance = 1e-10;
  double coefficient_bound = 30.0;
};

/// Numerically stable logistic function.
double expit(double x);

/// (x - mean) / population stddev. Throws FitError on a constant column.
std::vector<double> standardize(std::span<const double> values);

/// Least squares with intercept. Throws FitError when the design is rank
/// deficient after intercept augmentation.
LinearModel ols_fit(const DesignMatrix& x, std::span<const double> y);

/// Unpenalized (optionally class-balanced) logistic regression by damped
/// Newton iterations. Balanced weighting gives each row of class k the
/// weight n / (2 n_k). Coefficients crossing the bound stop the solver with
/// separation_detected set and are clamped to the bound.
LogisticModel logistic_fit(const DesignMatrix& x, std::span<const int> y,
                           ClassWeighting weighting, const LogisticOptions& options = {});

/// Weighted Bernoulli log-likelihood at (intercept, coefficients).
double logistic_loglik(const DesignMatrix& x, std::span<const int> y, std::span<const double> weights,
                       double intercept, const Eigen::VectorXd& coefficients);

/// Gradient of logistic_loglik; entry 0 is the intercept.
Eigen::VectorXd logistic_score(const DesignMatrix& x, std::span<const int> y,
                               std::span<const double> weights, double intercept,
                               const Eigen::VectorXd& coefficients);

/// Per-row weights used by logistic_fit.
std::vector<double> class_weights(std::span<const int> y, ClassWeighting weighting);

/// expit(intercept + x * coefficients); feature names must match the model.
std::vector<double> predict_proba(const LogisticModel& model, const DesignMatrix& x);

}  // namespace proxtext::regress
