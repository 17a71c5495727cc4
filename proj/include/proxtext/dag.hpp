#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace proxtext::dag {

using NodeSet = std::set<std::string>;
using Edge = std::pair<std::string, std::string>;
using Path = std::vector<std::string>;

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Immutable directed acyclic graph over named nodes. Node indices follow
/// lexicographic name order, so every traversal is deterministic.
class CausalDag {
 public:
  CausalDag() = default;

  /// Validates and builds the graph. Edge endpoints are declared implicitly.
  /// Throws GraphError on self-loops, duplicate edges or cycles.
  static CausalDag from_edges(const std::vector<std::string>& nodes,
                              const std::vector<Edge>& edges);

  const std::vector<std::string>& nodes() const { return names_; }
  std::vector<Edge> edges() const;
  std::size_t size() const { return names_.size(); }

  bool contains(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;
  const std::string& name(std::size_t i) const { return names_[i]; }

  const std::vector<std::size_t>& parents(std::size_t i) const { return parents_[i]; }
  const std::vector<std::size_t>& children(std::size_t i) const { return children_[i]; }

  /// Nodes with a directed path to any member of `targets`, targets included.
  std::vector<bool> ancestors_of(const std::vector<bool>& targets) const;
  bool has_edge(std::size_t from, std::size_t to) const;

  /// Copy of this graph with one extra isolated node.
  CausalDag with_isolated_node(const std::string& name) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
};

/// True iff every path between xs and ys is blocked given zs.
bool d_separated(const CausalDag& g, const NodeSet& xs, const NodeSet& ys,
                 const NodeSet& zs);

/// First open path from any x to any y given zs, exploring neighbors in node
/// name order. Empty when the sets are d-separated.
Path find_open_path(const CausalDag& g, const NodeSet& xs, const NodeSet& ys,
                    const NodeSet& zs);

struct RoleAssignment {
  std::string treatment;
  std::string outcome;
  std::string unmeasured;
  NodeSet observed_covariates;
  std::string proxy_w;
  std::string proxy_z;
  // Support sizes; the binary setting is the default.
  std::size_t unmeasured_levels = 2;
  std::size_t proxy_w_levels = 2;
  std::size_t proxy_z_levels = 2;
};

struct ConditionReport {
  bool p1_holds = false;
  bool p2_holds = false;
  bool p3_holds = false;
  bool p4_cardinality_ok = false;
  /// Keyed by "P1", "P2", "P3"; present only for failed conditions.
  std::map<std::string, Path> witness_paths;
};

void validate_roles(const CausalDag& g, const RoleAssignment& roles);

ConditionReport check_proximal_structure(const CausalDag& g, const RoleAssignment& roles);

/// Builtin design graphs: fig2a, fig2b, fig3a..fig3d,
/// fig5_posttreat, fig6_actionable.
CausalDag builtin_graph(std::string_view name);
std::vector<std::string> builtin_graph_names();

/// Role assignment matching the builtin graphs' node naming.
RoleAssignment standard_roles();

/// Edge-list text: one `parent -> child` per line, a bare name declares a
/// node, `#` starts a comment.
CausalDag parse_edge_list(std::string_view text);
std::string to_edge_list(const CausalDag& g);

}  // namespace proxtext::dag
