#include "proxtext/dataset.hpp"

#include <algorithm>
#include <cmath>

namespace proxtext {

namespace {

void check_length(std::size_t got, std::size_t n, const std::string& name) {
  if (got != n) {
    throw DataError("column '" + name + "' has " + std::to_string(got) + " rows, expected " +
                    std::to_string(n));
  }
}

void check_finite(std::span<const double> values, const std::string& name) {
  for (double v : values)
    if (!std::isfinite(v)) throw DataError("column '" + name + "' contains a non-finite value");
}

template <typename T>
std::vector<T> gather(const std::vector<T>& src, std::span<const std::size_t> rows) {
  std::vector<T> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(src[r]);
  return out;
}

}  // namespace

RealColumn FeatureBlock::column(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw DataError("feature block has no column '" + name + "'");
  const auto j = static_cast<Eigen::Index>(it - names.begin());
  return RealColumn(values.col(j).data(), values.col(j).data() + values.rows());
}

void Dataset::validate() const {
  const std::size_t n = size();
  check_length(a.size(), n, "A");
  require_binary(a, "A");
  check_finite(y, "Y");
  for (const auto& c : covariates) {
    check_length(c.values.size(), n, c.name);
    check_finite(c.values, c.name);
  }
  auto check_binary = [&](const std::optional<BinaryColumn>& col, const char* name) {
    if (!col) return;
    check_length(col->size(), n, name);
    require_binary(*col, name);
  };
  check_binary(w, "W");
  check_binary(z, "Z");
  check_binary(u, "U");
  if (w && z) {
    require_nondegenerate(*w, "W");
    require_nondegenerate(*z, "Z");
  }
  for (const auto& [name, block] : blocks) {
    check_length(static_cast<std::size_t>(block.values.rows()), n, "block " + name);
    if (!block.values.allFinite()) throw DataError("block '" + name + "' contains a non-finite value");
  }
  for (const auto& [name, col] : extra) {
    check_length(col.size(), n, name);
    check_finite(col, name);
  }
}

std::vector<std::string> Dataset::covariate_names() const {
  std::vector<std::string> names;
  for (const auto& c : covariates) names.push_back(c.name);
  return names;
}

const RealColumn& Dataset::covariate(const std::string& name) const {
  for (const auto& c : covariates)
    if (c.name == name) return c.values;
  throw DataError("dataset has no covariate '" + name + "'");
}

RealColumn Dataset::numeric_column(const std::string& name) const {
  auto binary = [&](const std::optional<BinaryColumn>& col) {
    if (col) return to_real(*col);
    // A column literally named W/Z/U that was not given a role.
    if (auto it = extra.find(name); it != extra.end()) return it->second;
    throw DataError("dataset has no column '" + name + "'");
  };
  if (name == "A") return to_real(a);
  if (name == "Y") return y;
  if (name == "W") return binary(w);
  if (name == "Z") return binary(z);
  if (name == "U") return binary(u);
  for (const auto& c : covariates)
    if (c.name == name) return c.values;
  if (auto it = extra.find(name); it != extra.end()) return it->second;
  throw DataError("dataset has no column '" + name + "'");
}

Dataset Dataset::take_rows(std::span<const std::size_t> rows) const {
  Dataset out;
  out.a = gather(a, rows);
  out.y = gather(y, rows);
  for (const auto& c : covariates) out.covariates.push_back({c.name, gather(c.values, rows)});
  if (w) out.w = gather(*w, rows);
  if (z) out.z = gather(*z, rows);
  if (u) out.u = gather(*u, rows);
  return out;
}

bool is_binary(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0 || v == 1.0; });
}

bool is_constant(std::span<const int> values) {
  return values.empty() ||
         std::all_of(values.begin(), values.end(), [&](int v) { return v == values.front(); });
}

void require_binary(std::span<const int> values, const std::string& name) {
  for (int v : values)
    if (v != 0 && v != 1) throw DataError("column '" + name + "' must contain only 0/1");
}

void require_nondegenerate(std::span<const int> values, const std::string& name) {
  if (is_constant(values)) throw DegenerateProxyError("degenerate proxy: column '" + name + "' is constant");
}

BinaryColumn to_binary(std::span<const double> values, const std::string& name) {
  BinaryColumn out;
  out.reserve(values.size());
  for (double v : values) {
    if (v != 0.0 && v != 1.0) throw DataError("column '" + name + "' must contain only 0/1");
    out.push_back(v == 1.0 ? 1 : 0);
  }
  return out;
}

RealColumn to_real(std::span<const int> values) {
  return RealColumn(values.begin(), values.end());
}

}  // namespace proxtext
