#include <doctest.h>

#include "oracles/dsep_bruteforce.hpp"
#include "proxtext/dag.hpp"
#include "proxtext/rng.hpp"

using namespace proxtext::dag;

namespace {

std::vector<bool> mask(const CausalDag& g, const NodeSet& s) {
  std::vector<bool> m(g.size(), false);
  for (const auto& v : s) m[g.index_of(v)] = true;
  return m;
}

NodeSet subset(const CausalDag& g, unsigned bits, std::size_t skip_a, std::size_t skip_b) {
  NodeSet s;
  for (std::size_t i = 0; i < g.size(); ++i)
    if ((bits >> i) & 1u && i != skip_a && i != skip_b) s.insert(g.name(i));
  return s;
}

}  // namespace

TEST_CASE("graph construction rejects malformed input") {
  CHECK_THROWS_AS(CausalDag::from_edges({}, {{"A", "A"}}), GraphError);
  CHECK_THROWS_AS(CausalDag::from_edges({}, {{"A", "B"}, {"A", "B"}}), GraphError);
  CHECK_THROWS_AS(CausalDag::from_edges({}, {{"A", "B"}, {"B", "C"}, {"C", "A"}}), GraphError);
  CHECK_THROWS_AS(CausalDag::from_edges({"A", "A"}, {}), GraphError);
  const auto g = CausalDag::from_edges({"Q"}, {{"A", "B"}});
  CHECK(g.size() == 3);
  CHECK(g.contains("Q"));
}

TEST_CASE("d_separated: reference examples") {
  SUBCASE("post-treatment text leaves Y -> T -> Z open") {
    const auto g = builtin_graph("fig3a");
    CHECK_FALSE(d_separated(g, {"Z"}, {"Y"}, {"A", "U", "C"}));
    const auto path = find_open_path(g, {"Z"}, {"Y"}, {"A", "U", "C"});
    CHECK(path == Path{"Z", "T", "Y"});
  }
  SUBCASE("distinct text instances make W and Z independent given U, C") {
    CHECK(d_separated(builtin_graph("fig3d"), {"W"}, {"Z"}, {"U", "C"}));
  }
  SUBCASE("edgeless pair") {
    const auto g = CausalDag::from_edges({"A", "B"}, {});
    CHECK(d_separated(g, {"A"}, {"B"}, {}));
  }
}

TEST_CASE("d_separated: collider semantics") {
  // A -> M <- B, M -> D
  const auto g = CausalDag::from_edges({}, {{"A", "M"}, {"B", "M"}, {"M", "D"}});
  CHECK(d_separated(g, {"A"}, {"B"}, {}));
  CHECK_FALSE(d_separated(g, {"A"}, {"B"}, {"M"}));
  CHECK_FALSE(d_separated(g, {"A"}, {"B"}, {"D"}));
}

TEST_CASE("d_separated: errors") {
  const auto g = builtin_graph("fig2a");
  CHECK_THROWS_AS(d_separated(g, {"A"}, {"Nope"}, {}), GraphError);
  CHECK_THROWS_AS(d_separated(g, {"A"}, {"Y"}, {"A"}), GraphError);
  CHECK_THROWS_AS(d_separated(g, {"A"}, {"A"}, {}), GraphError);
  CHECK_THROWS_AS(d_separated(g, {}, {"Y"}, {}), GraphError);
}

TEST_CASE("check_proximal_structure on the design graphs") {
  const auto roles = standard_roles();
  SUBCASE("same text instance violates P1") {
    const auto r = check_proximal_structure(builtin_graph("fig3b"), roles);
    CHECK_FALSE(r.p1_holds);
    CHECK(r.p2_holds);
    CHECK(r.p3_holds);
    REQUIRE(r.witness_paths.count("P1") == 1);
    CHECK(r.witness_paths.at("P1") == Path{"W", "T_pre", "Z"});
  }
  SUBCASE("post-treatment text violates P2 and P3") {
    const auto r = check_proximal_structure(builtin_graph("fig3a"), roles);
    CHECK_FALSE(r.p2_holds);
    CHECK_FALSE(r.p3_holds);
    CHECK(r.witness_paths.count("P2") == 1);
    CHECK(r.witness_paths.count("P3") == 1);
  }
  for (const char* name : {"fig2b", "fig3c", "fig3d", "fig5_posttreat", "fig6_actionable"}) {
    CAPTURE(name);
    const auto r = check_proximal_structure(builtin_graph(name), roles);
    CHECK(r.p1_holds);
    CHECK(r.p2_holds);
    CHECK(r.p3_holds);
    CHECK(r.p4_cardinality_ok);
    CHECK(r.witness_paths.empty());
  }
  SUBCASE("cardinality condition") {
    auto three_level_u = roles;
    three_level_u.unmeasured_levels = 3;
    CHECK_FALSE(check_proximal_structure(builtin_graph("fig3d"), three_level_u).p4_cardinality_ok);
  }
  SUBCASE("invalid roles") {
    auto bad = roles;
    bad.proxy_z = "W";
    CHECK_THROWS_AS(check_proximal_structure(builtin_graph("fig3d"), bad), GraphError);
    bad = roles;
    bad.observed_covariates.insert("A");
    CHECK_THROWS_AS(check_proximal_structure(builtin_graph("fig3d"), bad), GraphError);
    CHECK_THROWS_AS(check_proximal_structure(builtin_graph("fig2a"), roles), GraphError);
  }
}

TEST_CASE("witness paths are consistent with verdicts") {
  for (const auto& name : builtin_graph_names()) {
    if (name == "fig2a") continue;
    const auto r = check_proximal_structure(builtin_graph(name), standard_roles());
    CHECK(r.p1_holds == (r.witness_paths.count("P1") == 0));
    CHECK(r.p2_holds == (r.witness_paths.count("P2") == 0));
    CHECK(r.p3_holds == (r.witness_paths.count("P3") == 0));
    for (const auto& [key, path] : r.witness_paths) CHECK(path.size() >= 2);
  }
}

TEST_CASE("builtin graphs have the expected edges") {
  const auto d = builtin_graph("fig3d");
  const std::vector<Edge> expected = {
      {"A", "Y"}, {"C", "A"}, {"C", "T1"}, {"C", "T2"}, {"C", "U"}, {"C", "Y"},
      {"T1", "Z"}, {"T2", "W"}, {"U", "A"}, {"U", "T1"}, {"U", "T2"}, {"U", "Y"}};
  CHECK(d.edges() == expected);

  const auto a = builtin_graph("fig2a");
  CHECK(a.size() == 4);
  CHECK(a.edges().size() == 6);

  const auto post = builtin_graph("fig5_posttreat");
  CHECK(post.has_edge(post.index_of("A"), post.index_of("T_post")));
  CHECK(post.has_edge(post.index_of("T_post"), post.index_of("Z")));

  CHECK_THROWS_AS(builtin_graph("fig9"), GraphError);
}

TEST_CASE("edge-list format") {
  const auto g = parse_edge_list("# comment\nA -> Y\n  U->A \nlonely\nU -> Y # trailing\n");
  CHECK(g.size() == 4);
  CHECK(g.edges().size() == 3);
  CHECK(g.contains("lonely"));
  const auto again = parse_edge_list(to_edge_list(g));
  CHECK(again.nodes() == g.nodes());
  CHECK(again.edges() == g.edges());
  CHECK_THROWS_AS(parse_edge_list("A -> \n"), GraphError);
  CHECK_THROWS_AS(parse_edge_list("A B\n"), GraphError);
  CHECK_THROWS_AS(parse_edge_list("A -> B\nB -> A\n"), GraphError);
}

TEST_CASE("reachability agrees with path enumeration on random graphs") {
  proxtext::Rng rng(20240611);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng.index(6);  // 2..7 nodes
    const auto g = oracle::random_dag(n, 0.4, rng);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = x + 1; y < n; ++y) {
        for (unsigned bits = 0; bits < (1u << n); ++bits) {
          if ((bits >> x) & 1u || (bits >> y) & 1u) continue;
          const auto zs = subset(g, bits, x, y);
          const bool fast = d_separated(g, {g.name(x)}, {g.name(y)}, zs);
          const bool slow = oracle::d_separated(g, x, y, mask(g, zs));
          REQUIRE(fast == slow);
          // symmetry
          REQUIRE(fast == d_separated(g, {g.name(y)}, {g.name(x)}, zs));
          // the witness search finds a path exactly when not separated
          REQUIRE(find_open_path(g, {g.name(x)}, {g.name(y)}, zs).empty() == fast);
        }
      }
    }
  }
}

TEST_CASE("isolated nodes never change verdicts") {
  proxtext::Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + rng.index(3);
    const auto g = oracle::random_dag(n, 0.5, rng);
    const auto h = g.with_isolated_node("Isolated");
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        if (x == y) continue;
        for (unsigned bits = 0; bits < (1u << n); ++bits) {
          if ((bits >> x) & 1u || (bits >> y) & 1u) continue;
          const auto zs = subset(g, bits, x, y);
          CHECK(d_separated(g, {g.name(x)}, {g.name(y)}, zs) ==
                d_separated(h, {g.name(x)}, {g.name(y)}, zs));
        }
      }
  }
}
