#include "proxtext/dag.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <sstream>

namespace proxtext::dag {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<bool> membership(const CausalDag& g, const NodeSet& set, const char* label) {
  std::vector<bool> in(g.size(), false);
  for (const auto& name : set) {
    if (!g.contains(name)) {
      throw GraphError(std::string("unknown node '") + name + "' in " + label + " set");
    }
    in[g.index_of(name)] = true;
  }
  return in;
}

void check_query(const CausalDag& g, const NodeSet& xs, const NodeSet& ys, const NodeSet& zs) {
  if (xs.empty() || ys.empty()) throw GraphError("d-separation query needs nonempty xs and ys");
  membership(g, xs, "x");
  membership(g, ys, "y");
  membership(g, zs, "conditioning");
  auto overlaps = [](const NodeSet& a, const NodeSet& b) {
    return std::any_of(a.begin(), a.end(), [&](const std::string& v) { return b.count(v) > 0; });
  };
  if (overlaps(xs, ys) || overlaps(xs, zs) || overlaps(ys, zs)) {
    throw GraphError("d-separation query sets must be pairwise disjoint");
  }
}

struct PathSearch {
  const CausalDag& g;
  const std::vector<bool>& in_y;
  const std::vector<bool>& in_z;
  const std::vector<bool>& anc_z;
  std::vector<bool> on_path;
  std::vector<std::size_t> path;

  // Middle node `mid` with neighbours prev/next on the path.
  bool passes(std::size_t prev, std::size_t mid, std::size_t next) const {
    const bool collider = g.has_edge(prev, mid) && g.has_edge(next, mid);
    return collider ? anc_z[mid] : !in_z[mid];
  }

  bool extend() {
    const std::size_t here = path.back();
    if (path.size() > 1 && in_y[here]) return true;
    std::vector<std::size_t> nbrs = g.parents(here);
    nbrs.insert(nbrs.end(), g.children(here).begin(), g.children(here).end());
    std::sort(nbrs.begin(), nbrs.end());
    for (std::size_t next : nbrs) {
      if (on_path[next]) continue;
      if (path.size() > 1 && !passes(path[path.size() - 2], here, next)) continue;
      on_path[next] = true;
      path.push_back(next);
      if (extend()) return true;
      path.pop_back();
      on_path[next] = false;
    }
    return false;
  }
};

}  // namespace

CausalDag CausalDag::from_edges(const std::vector<std::string>& nodes,
                                const std::vector<Edge>& edges) {
  std::set<std::string> all;
  for (const auto& n : nodes) {
    if (n.empty()) throw GraphError("empty node name");
    if (!all.insert(n).second) throw GraphError("duplicate node '" + n + "'");
  }
  for (const auto& [from, to] : edges) {
    if (from.empty() || to.empty()) throw GraphError("empty node name in edge");
    all.insert(from);
    all.insert(to);
  }

  CausalDag g;
  g.names_.assign(all.begin(), all.end());
  g.parents_.resize(g.names_.size());
  g.children_.resize(g.names_.size());
  for (const auto& [from, to] : edges) {
    if (from == to) throw GraphError("self-loop on '" + from + "'");
    const auto f = g.index_of(from);
    const auto t = g.index_of(to);
    if (g.has_edge(f, t)) throw GraphError("duplicate edge " + from + " -> " + to);
    g.children_[f].push_back(t);
    g.parents_[t].push_back(f);
  }
  for (auto& v : g.parents_) std::sort(v.begin(), v.end());
  for (auto& v : g.children_) std::sort(v.begin(), v.end());

  // Kahn's algorithm; leftover nodes sit on a cycle.
  std::vector<std::size_t> indegree(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) indegree[i] = g.parents_[i].size();
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (indegree[i] == 0) ready.push_back(i);
  std::size_t seen = 0;
  while (!ready.empty()) {
    const auto v = ready.front();
    ready.pop_front();
    ++seen;
    for (auto c : g.children_[v])
      if (--indegree[c] == 0) ready.push_back(c);
  }
  if (seen != g.size()) throw GraphError("graph contains a directed cycle");
  return g;
}

std::vector<Edge> CausalDag::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < size(); ++i)
    for (auto c : children_[i]) out.emplace_back(names_[i], names_[c]);
  return out;
}

bool CausalDag::contains(std::string_view name) const {
  return std::binary_search(names_.begin(), names_.end(), name);
}

std::size_t CausalDag::index_of(std::string_view name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) {
    throw GraphError("unknown node '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - names_.begin());
}

bool CausalDag::has_edge(std::size_t from, std::size_t to) const {
  return std::binary_search(children_[from].begin(), children_[from].end(), to);
}

std::vector<bool> CausalDag::ancestors_of(const std::vector<bool>& targets) const {
  std::vector<bool> anc = targets;
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < size(); ++i)
    if (targets[i]) stack.push_back(i);
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (auto p : parents_[v]) {
      if (!anc[p]) {
        anc[p] = true;
        stack.push_back(p);
      }
    }
  }
  return anc;
}

CausalDag CausalDag::with_isolated_node(const std::string& name) const {
  auto nodes = names_;
  nodes.push_back(name);
  return from_edges(nodes, edges());
}

bool d_separated(const CausalDag& g, const NodeSet& xs, const NodeSet& ys, const NodeSet& zs) {
  check_query(g, xs, ys, zs);
  const auto in_y = membership(g, ys, "y");
  const auto in_z = membership(g, zs, "conditioning");
  const auto anc_z = g.ancestors_of(in_z);

  // Reachability over (node, direction): `up` means we arrived from a child,
  // `down` from a parent.
  enum Dir : std::size_t { kUp = 0, kDown = 1 };
  std::vector<std::array<bool, 2>> visited(g.size(), {false, false});
  std::deque<std::pair<std::size_t, Dir>> queue;
  for (const auto& x : xs) queue.emplace_back(g.index_of(x), kUp);

  while (!queue.empty()) {
    const auto [v, dir] = queue.front();
    queue.pop_front();
    if (visited[v][dir]) continue;
    visited[v][dir] = true;
    if (!in_z[v] && in_y[v]) return false;

    if (dir == kUp && !in_z[v]) {
      for (auto p : g.parents(v)) queue.emplace_back(p, kUp);
      for (auto c : g.children(v)) queue.emplace_back(c, kDown);
    } else if (dir == kDown) {
      if (!in_z[v])
        for (auto c : g.children(v)) queue.emplace_back(c, kDown);
      if (anc_z[v])
        for (auto p : g.parents(v)) queue.emplace_back(p, kUp);
    }
  }
  return true;
}

Path find_open_path(const CausalDag& g, const NodeSet& xs, const NodeSet& ys, const NodeSet& zs) {
  check_query(g, xs, ys, zs);
  const auto in_y = membership(g, ys, "y");
  const auto in_z = membership(g, zs, "conditioning");
  const auto anc_z = g.ancestors_of(in_z);

  for (const auto& x : xs) {
    PathSearch search{g, in_y, in_z, anc_z, std::vector<bool>(g.size(), false), {}};
    const auto start = g.index_of(x);
    search.on_path[start] = true;
    search.path.push_back(start);
    if (search.extend()) {
      Path out;
      for (auto i : search.path) out.push_back(g.name(i));
      return out;
    }
  }
  return {};
}

void validate_roles(const CausalDag& g, const RoleAssignment& roles) {
  const std::vector<std::pair<const char*, const std::string*>> scalars = {
      {"treatment", &roles.treatment}, {"outcome", &roles.outcome},
      {"unmeasured", &roles.unmeasured}, {"proxy-w", &roles.proxy_w},
      {"proxy-z", &roles.proxy_z}};
  NodeSet seen;
  for (const auto& [label, name] : scalars) {
    if (!g.contains(*name)) {
      throw GraphError(std::string(label) + " role names unknown node '" + *name + "'");
    }
    if (!seen.insert(*name).second) {
      throw GraphError("role nodes must be distinct; '" + *name + "' used twice");
    }
  }
  for (const auto& c : roles.observed_covariates) {
    if (!g.contains(c)) throw GraphError("covariate names unknown node '" + c + "'");
    if (seen.count(c)) throw GraphError("covariate '" + c + "' overlaps a scalar role");
  }
}

ConditionReport check_proximal_structure(const CausalDag& g, const RoleAssignment& roles) {
  validate_roles(g, roles);
  NodeSet uc = roles.observed_covariates;
  uc.insert(roles.unmeasured);
  NodeSet auc = uc;
  auc.insert(roles.treatment);

  ConditionReport report;
  auto check = [&](const char* key, const std::string& x, const std::string& y,
                   const NodeSet& given, bool& holds) {
    holds = d_separated(g, {x}, {y}, given);
    if (!holds) report.witness_paths[key] = find_open_path(g, {x}, {y}, given);
  };
  check("P1", roles.proxy_w, roles.proxy_z, uc, report.p1_holds);
  check("P2", roles.proxy_w, roles.treatment, uc, report.p2_holds);
  check("P3", roles.proxy_z, roles.outcome, auc, report.p3_holds);
  report.p4_cardinality_ok =
      std::min(roles.proxy_w_levels, roles.proxy_z_levels) >= roles.unmeasured_levels;
  return report;
}

RoleAssignment standard_roles() {
  RoleAssignment roles;
  roles.treatment = "A";
  roles.outcome = "Y";
  roles.unmeasured = "U";
  roles.observed_covariates = {"C"};
  roles.proxy_w = "W";
  roles.proxy_z = "Z";
  return roles;
}

namespace {

// A -> Y, U -> {A, Y}, C -> {A, Y, U}
std::vector<Edge> confounding_core() {
  return {{"A", "Y"}, {"U", "A"}, {"U", "Y"}, {"C", "A"}, {"C", "Y"}, {"C", "U"}};
}

std::vector<Edge> with(std::vector<Edge> base, std::initializer_list<Edge> extra) {
  base.insert(base.end(), extra.begin(), extra.end());
  return base;
}

}  // namespace

CausalDag builtin_graph(std::string_view name) {
  const auto core = confounding_core();
  if (name == "fig2a") return CausalDag::from_edges({}, core);
  if (name == "fig2b") {
    return CausalDag::from_edges(
        {}, with(core, {{"C", "W"}, {"C", "Z"}, {"U", "W"}, {"U", "Z"}}));
  }
  if (name == "fig3a") {
    return CausalDag::from_edges(
        {}, with(core, {{"C", "T"}, {"U", "T"}, {"Y", "T"}, {"T", "Z"}, {"T", "W"}}));
  }
  if (name == "fig3b") {
    return CausalDag::from_edges(
        {}, with(core, {{"C", "T_pre"}, {"U", "T_pre"}, {"T_pre", "Z"}, {"T_pre", "W"}}));
  }
  if (name == "fig3c" || name == "fig3d") {
    // (c) and (d) differ only in whether one or two models label the texts,
    // which the graph does not encode.
    return CausalDag::from_edges(
        {}, with(core, {{"C", "T1"}, {"U", "T1"}, {"C", "T2"}, {"U", "T2"},
                        {"T1", "Z"}, {"T2", "W"}}));
  }
  if (name == "fig5_posttreat") {
    return CausalDag::from_edges(
        {}, with(core, {{"C", "T_post"}, {"C", "T_pre"}, {"U", "T_pre"}, {"U", "T_post"},
                        {"A", "T_post"}, {"T_post", "Z"}, {"T_pre", "W"}}));
  }
  if (name == "fig6_actionable") {
    return CausalDag::from_edges(
        {}, with(core, {{"C", "T_act"}, {"C", "T_pre"}, {"U", "T_pre"}, {"U", "T_act"},
                        {"T_act", "A"}, {"T_act", "Z"}, {"T_pre", "W"}}));
  }
  throw GraphError("unknown builtin graph '" + std::string(name) + "'");
}

std::vector<std::string> builtin_graph_names() {
  return {"fig2a", "fig2b", "fig3a", "fig3b", "fig3c", "fig3d", "fig5_posttreat",
          "fig6_actionable"};
}

CausalDag parse_edge_list(std::string_view text) {
  std::vector<std::string> nodes;
  std::vector<Edge> edges;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const auto line = trim(raw);
    if (line.empty()) continue;
    const auto arrow = line.find("->");
    if (arrow == std::string::npos) {
      if (line.find_first_of(" \t") != std::string::npos) {
        throw GraphError("line " + std::to_string(line_no) + ": expected 'parent -> child' or a node name");
      }
      nodes.push_back(line);
      continue;
    }
    auto from = trim(std::string_view(line).substr(0, arrow));
    auto to = trim(std::string_view(line).substr(arrow + 2));
    if (from.empty() || to.empty() || to.find("->") != std::string::npos) {
      throw GraphError("line " + std::to_string(line_no) + ": malformed edge");
    }
    edges.emplace_back(std::move(from), std::move(to));
  }
  return CausalDag::from_edges(nodes, edges);
}

std::string to_edge_list(const CausalDag& g) {
  std::ostringstream out;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.parents(i).empty() && g.children(i).empty()) out << g.name(i) << '\n';
  for (const auto& [from, to] : g.edges()) out << from << " -> " << to << '\n';
  return out.str();
}

}  // namespace proxtext::dag
