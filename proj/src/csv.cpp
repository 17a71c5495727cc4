#include "proxtext/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace proxtext::csv {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && field.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last) {
    throw DataError("csv line " + std::to_string(line_no) + ": cannot parse '" +
                    std::string(field) + "' as a number");
  }
  return value;
}

void append_number(std::string& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

}  // namespace

bool Table::has(std::string_view name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

const RealColumn& Table::column(std::string_view name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw DataError("csv has no column '" + std::string(name) + "'");
  return columns[static_cast<std::size_t>(it - header.begin())];
}

void Table::add(std::string name, RealColumn values) {
  if (has(name)) throw DataError("duplicate csv column '" + name + "'");
  if (!columns.empty() && values.size() != rows()) {
    throw DataError("csv column '" + name + "' has a different row count");
  }
  header.push_back(std::move(name));
  columns.push_back(std::move(values));
}

Table parse(std::string_view text) {
  Table table;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view key = "#schema=";
      if (line.substr(0, key.size()) == key) table.schema = std::string(trim(line.substr(key.size())));
      continue;
    }
    const auto fields = split(line);
    if (!have_header) {
      std::set<std::string_view> seen;
      for (auto f : fields) {
        if (f.empty()) throw DataError("csv header has an empty column name");
        if (!seen.insert(f).second) throw DataError("duplicate csv column '" + std::string(f) + "'");
        table.header.emplace_back(f);
      }
      table.columns.resize(table.header.size());
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw DataError("csv line " + std::to_string(line_no) + ": expected " +
                      std::to_string(table.header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) table.columns[j].push_back(parse_number(fields[j], line_no));
  }
  if (!have_header) throw DataError("csv input has no header row");
  return table;
}

Table read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::string format(const Table& table) {
  std::string out = std::string("#schema=") + kSchemaTag + "\n";
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (j) out += ',';
    out += table.header[j];
  }
  out += '\n';
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
      if (j) out += ',';
      append_number(out, table.columns[j][i]);
    }
    out += '\n';
  }
  return out;
}

void write(const std::filesystem::path& path, const Table& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << format(table);
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

Dataset to_dataset(const Table& table, const ColumnRoles& roles) {
  Dataset data;
  std::set<std::string> claimed;
  auto take = [&](const std::string& name) -> const RealColumn& {
    claimed.insert(name);
    return table.column(name);
  };
  data.a = to_binary(take(roles.treatment), roles.treatment);
  data.y = take(roles.outcome);
  for (const auto& c : roles.covariates) data.covariates.push_back({c, take(c)});
  if (roles.w) data.w = to_binary(take(*roles.w), *roles.w);
  if (roles.z) data.z = to_binary(take(*roles.z), *roles.z);
  if (roles.u) data.u = to_binary(take(*roles.u), *roles.u);

  for (const auto& block : standard_block_names()) {
    const std::string suffix = "_" + block;
    std::vector<std::string> features;
    std::vector<const RealColumn*> cols;
    for (std::size_t j = 0; j < table.header.size(); ++j) {
      const auto& h = table.header[j];
      if (claimed.count(h) || h.size() <= suffix.size() ||
          h.compare(h.size() - suffix.size(), suffix.size(), suffix) != 0) {
        continue;
      }
      features.push_back(h.substr(0, h.size() - suffix.size()));
      cols.push_back(&table.columns[j]);
      claimed.insert(h);
    }
    if (features.empty()) continue;
    FeatureBlock fb;
    fb.names = features;
    fb.values.resize(static_cast<Eigen::Index>(table.rows()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < table.rows(); ++i) fb.values(i, j) = (*cols[j])[i];
    data.blocks.emplace(block, std::move(fb));
  }
  for (std::size_t j = 0; j < table.header.size(); ++j)
    if (!claimed.count(table.header[j])) data.extra.emplace(table.header[j], table.columns[j]);

  data.validate();
  return data;
}

Table from_dataset(const Dataset& data) {
  Table table;
  table.schema = kSchemaTag;
  table.add("A", to_real(data.a));
  table.add("Y", data.y);
  if (data.u) table.add("U", to_real(*data.u));
  if (data.w) table.add("W", to_real(*data.w));
  if (data.z) table.add("Z", to_real(*data.z));
  for (const auto& c : data.covariates) table.add(c.name, c.values);
  auto add_block = [&](const std::string& name, const FeatureBlock& block) {
    for (std::size_t j = 0; j < block.names.size(); ++j) table.add(block.names[j] + "_" + name, block.column(block.names[j]));
  };
  for (const auto& name : standard_block_names())
    if (auto it = data.blocks.find(name); it != data.blocks.end()) add_block(name, it->second);
  for (const auto& [name, block] : data.blocks) {
    const auto& std_names = standard_block_names();
    if (std::find(std_names.begin(), std_names.end(), name) == std_names.end()) add_block(name, block);
  }
  for (const auto& [name, col] : data.extra) table.add(name, col);
  return table;
}

}  // namespace proxtext::csv
