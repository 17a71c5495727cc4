#pragma once

#include "proxtext/csv.hpp"
#include "proxtext/dag.hpp"
#include "proxtext/oddsratio.hpp"
#include "proxtext/proximal.hpp"
#include "proxtext/proxies.hpp"
#include "proxtext/synth.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace proxtext::pipeline {

inline constexpr const char* kReportSchema = "proxtext.report/1";
inline constexpr const char* kVersion = "0.1.0";

/// Error raised by a pipeline stage: load, structure, proxies, odds_ratio,
/// estimate or diagnostics.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, const std::string& message);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct CsvSource {
  std::filesystem::path path;
  csv::ColumnRoles roles;
};
struct SynthSource {
  synth::SynthParams params;
};
using DataSource = std::variant<CsvSource, SynthSource>;

/// Where a proxy column comes from. Textual forms:
///   col:NAME                        column already in the data
///   file:PATH:COLUMN                column of a predictions CSV
///   logistic:BLOCK                  classifier trained on train1+train2, applied to BLOCK
///   threshold:BLOCK:FEATURE:CUTOFF  1{FEATURE > CUTOFF} on BLOCK
struct ProxySource {
  enum class Kind { column, file, logistic, threshold };
  Kind kind = Kind::column;
  std::string column;
  std::filesystem::path file;
  std::string block;
  std::string feature;
  double cutoff = 0.0;

  static ProxySource parse(const std::string& text);
  std::string to_string() const;
  /// Identity of the text (or stored column) the proxy is read from.
  std::string text_identity() const;
};

struct StructureSpec {
  dag::CausalDag graph;
  dag::RoleAssignment roles;
};

struct PipelineConfig {
  DataSource data;
  ProxySource w;
  ProxySource z;
  bool allow_same_source = false;
  double gamma_high = 2.0;
  std::size_t n_boot = 200;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  proximal::Stage1 stage1 = proximal::Stage1::logistic;
  std::optional<StructureSpec> structure;

  /// Throws PipelineError("config", ...) on an invalid combination.
  void validate() const;
  /// Canonical JSON form; its hash is recorded in every report.
  nlohmann::json to_json() const;
};

struct PipelineReport {
  std::uint64_t seed = 0;
  std::string config_hash;
  nlohmann::json config;
  std::optional<dag::ConditionReport> conditions;
  std::optional<oddsratio::OddsRatioResult> odds_ratio;
  oddsratio::GateDecision gate;
  std::optional<proximal::AceEstimate> ace;
  std::optional<proxies::DiagnosticsReport> diagnostics;
};

/// Data → proxies → odds-ratio CI → gate → (on proceed) proximal ACE with CI.
/// A stop decision never carries an ACE. Diagnostics are added when the data
/// has the oracle U.
PipelineReport run_pipeline(const PipelineConfig& config);

/// Attaches W and Z to `data` according to the sources.
void attach_proxies(Dataset& data, const ProxySource& w, const ProxySource& z);

/// Lowercase hex FNV-1a 64 of the text.
std::string fnv1a_hex(std::string_view text);

nlohmann::json to_json(const dag::ConditionReport& r);
nlohmann::json to_json(const oddsratio::OddsRatioResult& r);
nlohmann::json to_json(const oddsratio::GateDecision& d);
nlohmann::json to_json(const proximal::AceEstimate& e);
nlohmann::json to_json(const proxies::DiagnosticsReport& r);
nlohmann::json to_json(const PipelineReport& r);

}  // namespace proxtext::pipeline
