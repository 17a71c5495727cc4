#include "proxtext/pipeline.hpp"

#include "proxtext/rng.hpp"

#include <charconv>
#include <cstdio>
#include <set>

namespace proxtext::pipeline {

using nlohmann::json;

namespace {

// Same stream tags as the experiment runners, so a pipeline run on the
// synthetic generator reproduces the corresponding experiment row.
constexpr std::uint64_t kGammaStream = 1;
constexpr std::uint64_t kAceStream = 2;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) return parts;
    start = pos + 1;
  }
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw PipelineError("config", "bad number for " + what + ": '" + s + "'");
  return v;
}

json synth_json(const synth::SynthParams& p) {
  return {{"kind", "synthetic"},
          {"n", p.n},
          {"seed", p.seed},
          {"true_ace", p.true_ace},
          {"u_prob", p.u_prob},
          {"x1", {p.x1_u, p.x1_c}},
          {"x2", {p.x2_exp, p.x2_u, p.x2_c}},
          {"x3", {p.x3_u, p.x3_c}},
          {"x4", {p.x4_sq, p.x4_cube, p.x4_u, p.x4_c}},
          {"a", {p.a_u, p.a_c, p.a_intercept}},
          {"y", {p.y_u, p.y_c}}};
}

json roles_json(const csv::ColumnRoles& r) {
  json j{{"treatment", r.treatment}, {"outcome", r.outcome}, {"covariates", r.covariates}};
  j["w"] = r.w ? json(*r.w) : json(nullptr);
  j["z"] = r.z ? json(*r.z) : json(nullptr);
  j["u"] = r.u ? json(*r.u) : json(nullptr);
  return j;
}

BinaryColumn proxy_column(const Dataset& data, const ProxySource& src,
                          const std::optional<proxies::TrainedLogistic>& trained) {
  switch (src.kind) {
    case ProxySource::Kind::column:
      return to_binary(data.numeric_column(src.column), src.column);
    case ProxySource::Kind::file: {
      const auto table = csv::read(src.file);
      if (table.rows() != data.size()) {
        throw DataError("predictions file " + src.file.string() + " has " + std::to_string(table.rows()) +
                        " rows, data has " + std::to_string(data.size()));
      }
      return to_binary(table.column(src.column), src.column);
    }
    case ProxySource::Kind::logistic:
      return proxies::predict(*trained, data, src.block);
    case ProxySource::Kind::threshold:
      return proxies::predict(proxies::Threshold{src.feature, src.cutoff}, data, src.block);
  }
  throw DataError("unknown proxy source");
}

Dataset load(const DataSource& source) {
  if (const auto* c = std::get_if<CsvSource>(&source)) {
    return csv::to_dataset(csv::read(c->path), c->roles);
  }
  return synth::generate_fully_synthetic(std::get<SynthSource>(source).params);
}

template <class F>
auto staged(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(stage, e.what());
  }
}

}  // namespace

PipelineError::PipelineError(std::string stage, const std::string& message)
    : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}

ProxySource ProxySource::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw PipelineError("config", "proxy source needs a kind prefix: '" + text + "'");
  const auto kind = text.substr(0, colon);
  const auto rest = text.substr(colon + 1);
  ProxySource s;
  if (kind == "col") {
    s.kind = Kind::column;
    s.column = rest;
  } else if (kind == "file") {
    // The column is after the last colon so that paths may contain colons.
    const auto last = rest.rfind(':');
    if (last == std::string::npos) throw PipelineError("config", "file source needs PATH:COLUMN: '" + text + "'");
    s.kind = Kind::file;
    s.file = rest.substr(0, last);
    s.column = rest.substr(last + 1);
  } else if (kind == "logistic") {
    s.kind = Kind::logistic;
    s.block = rest;
  } else if (kind == "threshold") {
    const auto parts = split(rest, ':');
    if (parts.size() != 3) throw PipelineError("config", "threshold source needs BLOCK:FEATURE:CUTOFF: '" + text + "'");
    s.kind = Kind::threshold;
    s.block = parts[0];
    s.feature = parts[1];
    s.cutoff = parse_double(parts[2], "threshold cutoff");
  } else {
    throw PipelineError("config", "unknown proxy source kind '" + kind + "'");
  }
  if (s.column.empty() && s.block.empty()) throw PipelineError("config", "empty proxy source: '" + text + "'");
  return s;
}

std::string ProxySource::to_string() const {
  switch (kind) {
    case Kind::column: return "col:" + column;
    case Kind::file: return "file:" + file.string() + ":" + column;
    case Kind::logistic: return "logistic:" + block;
    case Kind::threshold: {
      char buf[64];
      const auto r = std::to_chars(buf, buf + sizeof buf, cutoff);
      return "threshold:" + block + ":" + feature + ":" + std::string(buf, r.ptr);
    }
  }
  return {};
}

std::string ProxySource::text_identity() const {
  switch (kind) {
    case Kind::column: return "col:" + column;
    case Kind::file: return "file:" + file.string() + ":" + column;
    case Kind::logistic:
    case Kind::threshold: return "block:" + block;
  }
  return {};
}

void PipelineConfig::validate() const {
  if (!allow_same_source && w.text_identity() == z.text_identity()) {
    throw PipelineError("config", "W and Z read the same source (" + w.text_identity() +
                                      "); pass --allow-same-source to run this deliberately");
  }
  if (!(gamma_high > 1.0)) throw PipelineError("config", "gamma_high must exceed 1");
  if (n_boot < 2) throw PipelineError("config", "n_boot must be at least 2");
  if (const auto* s = std::get_if<SynthSource>(&data)) {
    staged("config", [&] {
      s->params.validate();
      return 0;
    });
  }
}

json PipelineConfig::to_json() const {
  json j;
  if (const auto* c = std::get_if<CsvSource>(&data)) {
    j["data"] = {{"kind", "csv"}, {"path", c->path.string()}, {"roles", roles_json(c->roles)}};
  } else {
    j["data"] = synth_json(std::get<SynthSource>(data).params);
  }
  j["w"] = w.to_string();
  j["z"] = z.to_string();
  j["allow_same_source"] = allow_same_source;
  j["gamma_high"] = gamma_high;
  j["n_boot"] = n_boot;
  j["seed"] = seed;
  j["stage1"] = stage1 == proximal::Stage1::logistic ? "logistic" : "linear";
  if (structure) {
    const auto& r = structure->roles;
    j["structure"] = {{"edges", dag::to_edge_list(structure->graph)},
                      {"treatment", r.treatment},
                      {"outcome", r.outcome},
                      {"unmeasured", r.unmeasured},
                      {"covariates", r.observed_covariates},
                      {"w", r.proxy_w},
                      {"z", r.proxy_z}};
  }
  // Thread count is deliberately absent: it never changes the results.
  return j;
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void attach_proxies(Dataset& data, const ProxySource& w, const ProxySource& z) {
  std::optional<proxies::TrainedLogistic> trained;
  if (w.kind == ProxySource::Kind::logistic || z.kind == ProxySource::Kind::logistic) {
    trained = proxies::train_logistic_proxy(data, "train1", "train2");
  }
  auto wc = proxy_column(data, w, trained);
  auto zc = proxy_column(data, z, trained);
  data.w = std::move(wc);
  data.z = std::move(zc);
}

PipelineReport run_pipeline(const PipelineConfig& config) {
  config.validate();
  PipelineReport report;
  report.seed = config.seed;
  report.config = config.to_json();
  report.config_hash = fnv1a_hex(report.config.dump());
  report.gate = oddsratio::degenerate_gate(config.gamma_high);
  const bootstrap::Parallelism par{config.threads};

  if (config.structure) {
    report.conditions = staged("structure", [&] {
      return dag::check_proximal_structure(config.structure->graph, config.structure->roles);
    });
  }

  auto data = staged("load", [&] { return load(config.data); });

  const bool degenerate = staged("proxies", [&] {
    attach_proxies(data, config.w, config.z);
    return is_constant(*data.w) || is_constant(*data.z);
  });

  if (data.u && !degenerate && !is_constant(*data.u)) {
    report.diagnostics = staged("diagnostics", [&] { return proxies::proxy_diagnostics(data); });
  }
  if (degenerate) return report;

  report.odds_ratio = staged("odds_ratio", [&] {
    return oddsratio::gamma_ci(data, {config.n_boot, derive_seed(config.seed, kGammaStream), par});
  });
  report.gate = oddsratio::gate(*report.odds_ratio, config.gamma_high);
  if (report.gate.verdict != oddsratio::Verdict::proceed) return report;

  report.ace = staged("estimate", [&] {
    proximal::AceSpec spec = proximal::AceSpec::proximal_default();
    spec.stage1 = config.stage1;
    return proximal::ace_ci(data, spec, {config.n_boot, derive_seed(config.seed, kAceStream), par});
  });
  return report;
}

json to_json(const dag::ConditionReport& r) {
  json witnesses = json::object();
  for (const auto& [k, path] : r.witness_paths) witnesses[k] = path;
  return {{"p1", r.p1_holds},
          {"p2", r.p2_holds},
          {"p3", r.p3_holds},
          {"p4_cardinality", r.p4_cardinality_ok},
          {"witness_paths", witnesses}};
}

json to_json(const oddsratio::OddsRatioResult& r) {
  return {{"gamma_point", r.gamma_point},
          {"ci_low", r.ci_low},
          {"ci_high", r.ci_high},
          {"n_boot", r.n_boot},
          {"n_nonconverged", r.n_nonconverged},
          {"n_excluded", r.n_excluded},
          {"point_separation", r.point_separation},
          {"weighting_used", regress::to_string(r.weighting_used)}};
}

json to_json(const oddsratio::GateDecision& d) {
  return {{"verdict", oddsratio::to_string(d.verdict)},
          {"reason", oddsratio::to_string(d.reason)},
          {"gamma_high", d.gamma_high_used}};
}

json to_json(const proximal::AceEstimate& e) {
  return {{"point", e.point},
          {"ci_low", e.ci_low},
          {"ci_high", e.ci_high},
          {"method", proximal::to_string(e.method)},
          {"adjust", e.adjust},
          {"n_boot", e.n_boot},
          {"n_failed", e.n_failed},
          {"split_seed", e.split_seed},
          {"warnings", e.warnings}};
}

namespace {
json scores_json(const proxies::ClassificationScores& s) {
  return {{"accuracy", s.accuracy}, {"precision", s.precision}, {"recall", s.recall}, {"positivity", s.positivity}};
}
}  // namespace

json to_json(const proxies::DiagnosticsReport& r) {
  return {{"w", scores_json(r.w)},
          {"z", scores_json(r.z)},
          {"agreement", r.agreement},
          {"gamma_wu_c", r.gamma_wu_c},
          {"gamma_zu_c", r.gamma_zu_c},
          {"gamma_wu_separation", r.gamma_wu_separation},
          {"gamma_zu_separation", r.gamma_zu_separation}};
}

json to_json(const PipelineReport& r) {
  json j;
  j["schema"] = kReportSchema;
  j["provenance"] = {{"seed", r.seed}, {"config_hash", r.config_hash}, {"version", kVersion}, {"config", r.config}};
  if (r.conditions) j["conditions"] = to_json(*r.conditions);
  j["odds_ratio"] = r.odds_ratio ? to_json(*r.odds_ratio) : json(nullptr);
  j["gate"] = to_json(r.gate);
  // A stopped analysis has no "ace" key at all.
  if (r.ace) j["ace"] = to_json(*r.ace);
  if (r.diagnostics) j["diagnostics"] = to_json(*r.diagnostics);
  return j;
}

}  // namespace proxtext::pipeline
