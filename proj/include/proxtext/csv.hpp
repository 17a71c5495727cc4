#pragma once

#include "proxtext/dataset.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace proxtext::csv {

inline constexpr const char* kSchemaTag = "proxtext.table/1";

/// Numeric CSV: one header row, comma separated, `#` lines are comments.
/// A `#schema=<tag>` comment carries the format version.
struct Table {
  std::vector<std::string> header;
  std::vector<RealColumn> columns;
  std::string schema;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  bool has(std::string_view name) const;
  const RealColumn& column(std::string_view name) const;
  void add(std::string name, RealColumn values);
};

Table parse(std::string_view text);
Table read(const std::filesystem::path& path);
/// Values are printed in shortest round-trip form, so read(write(t)) == t.
std::string format(const Table& table);
void write(const std::filesystem::path& path, const Table& table);

struct ColumnRoles {
  std::string treatment = "A";
  std::string outcome = "Y";
  std::vector<std::string> covariates;
  std::optional<std::string> w;
  std::optional<std::string> z;
  std::optional<std::string> u;
};

/// Maps table columns onto dataset roles. Columns named `<feature>_<block>`
/// for a standard block name become feature blocks; everything else not
/// claimed by a role is kept in Dataset::extra.
Dataset to_dataset(const Table& table, const ColumnRoles& roles);
Table from_dataset(const Dataset& data);

}  // namespace proxtext::csv
