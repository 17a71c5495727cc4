#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace proxtext {

using BinaryColumn = std::vector<int>;
using RealColumn = std::vector<double>;

class DataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a proxy column takes a single value.
class DegenerateProxyError : public DataError {
 public:
  using DataError::DataError;
};

struct NamedColumn {
  std::string name;
  RealColumn values;
};

/// n x k realisation of the feature variables standing in for one text instance.
struct FeatureBlock {
  std::vector<std::string> names;
  Eigen::MatrixXd values;

  RealColumn column(const std::string& name) const;
};

/// Column-role table: treatment A, outcome Y, covariates C, optional proxies
/// W/Z, optional oracle U, feature blocks and any other numeric columns.
struct Dataset {
  BinaryColumn a;
  RealColumn y;
  std::vector<NamedColumn> covariates;
  std::optional<BinaryColumn> w;
  std::optional<BinaryColumn> z;
  std::optional<BinaryColumn> u;
  std::map<std::string, FeatureBlock> blocks;
  std::map<std::string, RealColumn> extra;

  std::size_t size() const { return y.size(); }

  /// Throws DataError on length mismatches, non-binary or non-finite values,
  /// and DegenerateProxyError when both proxies are present and one is constant.
  void validate() const;

  std::vector<std::string> covariate_names() const;
  const RealColumn& covariate(const std::string& name) const;

  /// Resolves A, Y, W, Z, U, a covariate or an extra column as reals.
  RealColumn numeric_column(const std::string& name) const;

  /// Row subset (with repetition) of every column except feature blocks
  /// and extras, which bootstrap estimators never read.
  Dataset take_rows(std::span<const std::size_t> rows) const;
};

bool is_binary(std::span<const double> values);
bool is_constant(std::span<const int> values);
void require_binary(std::span<const int> values, const std::string& name);
void require_nondegenerate(std::span<const int> values, const std::string& name);
BinaryColumn to_binary(std::span<const double> values, const std::string& name);
RealColumn to_real(std::span<const int> values);

}  // namespace proxtext

namespace proxtext {

/// Block names produced by the fully synthetic generator: two training and
/// two inference realisations of the feature variables.
inline const std::vector<std::string>& standard_block_names() {
  static const std::vector<std::string> names = {"train1", "train2", "inf1", "inf2"};
  return names;
}

}  // namespace proxtext
