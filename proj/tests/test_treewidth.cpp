#include <doctest.h>

#include "lowtw/generators.hpp"
#include "lowtw/tree_decomposition.hpp"
#include "support.hpp"

using namespace lowtw;
using lowtw::testing::unit_path;

namespace {

WeightedGraph clique(Vertex n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v, 1.0});
  return WeightedGraph(n, std::move(edges));
}

}  // namespace

TEST_CASE("verifier on hand-made decompositions") {
  WeightedGraph p = unit_path(4);
  TreeDecomposition one{{{0, 1, 2, 3}}, {}, 0};
  TdReport r1 = verify_tree_decomposition(p, one);
  CHECK(r1.valid);
  CHECK(r1.width == 3);
  TreeDecomposition chain{{{0, 1}, {1, 2}, {2, 3}}, {{0, 1}, {1, 2}}, 0};
  TdReport r2 = verify_tree_decomposition(p, chain);
  CHECK(r2.valid);
  CHECK(r2.width == 1);
  TreeDecomposition broken{{{0, 1}, {2, 3}}, {{0, 1}}, 0};
  TdReport r3 = verify_tree_decomposition(p, broken);
  CHECK_FALSE(r3.valid);
  CHECK_FALSE(r3.violations.empty());
  // vertex 1 in two bags that are not adjacent through bags holding it
  TreeDecomposition gap{{{0, 1}, {2}, {1, 2, 3}}, {{0, 1}, {1, 2}}, 0};
  CHECK_FALSE(verify_tree_decomposition(p, gap).valid);
}

TEST_CASE("min-fill heuristic") {
  WeightedGraph tree(7, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}, {1, 4, 1}, {2, 5, 1}, {2, 6, 1}});
  TreeDecomposition td = heuristic_tree_decomposition(tree);
  CHECK(verify_tree_decomposition(tree, td).valid);
  CHECK(td.width() == 1);
  TreeDecomposition k4 = heuristic_tree_decomposition(clique(4));
  CHECK(verify_tree_decomposition(clique(4), k4).valid);
  CHECK(k4.width() == 3);
  WeightedGraph g44 = grid_graph(4, 4);
  TreeDecomposition gd = heuristic_tree_decomposition(g44);
  CHECK(verify_tree_decomposition(g44, gd).valid);
  CHECK(gd.width() >= 4);
  RandomSource rng(3);
  for (int t = 0; t < 30; ++t) {
    WeightedGraph g = lowtw::testing::random_graph(12, 0.3, rng);
    TreeDecomposition h = heuristic_tree_decomposition(g);
    CHECK(verify_tree_decomposition(g, h).valid);
    CHECK(h.width() >= exact_treewidth(g));
  }
}

TEST_CASE("exact treewidth oracle") {
  CHECK(exact_treewidth(unit_path(6)) == 1);
  CHECK(exact_treewidth(grid_graph(4, 4)) == 4);
  CHECK(exact_treewidth(clique(5)) == 4);
  CHECK(exact_treewidth(WeightedGraph(3)) == 0);
  CHECK(exact_treewidth(grid_graph(3, 3)) == 3);
  CHECK_THROWS_AS(exact_treewidth(grid_graph(5, 5)), GraphError);
}

TEST_CASE("balanced separator examples") {
  SeparatorRequest req;
  req.size_cap = 1;
  req.method = SeparatorMethod::Exhaustive;
  req.weights = {1, 1, 1};
  auto s = weighted_balanced_separator(unit_path(3), req);
  REQUIRE(s);
  CHECK(*s == std::vector<Vertex>{1});
  req.weights = {1, 1, 1, 1, 1};
  auto c = weighted_balanced_separator(star_graph(5), req);
  REQUIRE(c);
  CHECK(*c == std::vector<Vertex>{0});
  req.weights = {1, 1, 1, 1};
  CHECK_FALSE(weighted_balanced_separator(clique(4), req).has_value());
  req.weights = {0, 0, 0, 0};
  CHECK_THROWS_AS(weighted_balanced_separator(clique(4), req), GraphError);
  req.weights = {1, 1};
  CHECK_THROWS_AS(weighted_balanced_separator(clique(4), req), GraphError);
}

TEST_CASE("exhaustive and heuristic separators are both valid") {
  RandomSource rng(17);
  int compared = 0;
  for (int t = 0; t < 100; ++t) {
    Vertex n = 3 + static_cast<Vertex>(rng.index(10));
    WeightedGraph g = lowtw::testing::random_graph(n, 0.35, rng);
    SeparatorRequest req;
    req.size_cap = n;
    for (Vertex v = 0; v < n; ++v) req.weights.push_back(rng.uniform() < 0.2 ? 0.0 : rng.uniform(0.5, 2.0));
    if (*std::max_element(req.weights.begin(), req.weights.end()) == 0.0) req.weights[0] = 1.0;
    req.method = SeparatorMethod::Exhaustive;
    auto ex = weighted_balanced_separator(g, req);
    req.method = SeparatorMethod::BagScan;
    auto bs = weighted_balanced_separator(g, req);
    REQUIRE(ex);
    REQUIRE(bs);
    CHECK(is_balanced_separator(g, *ex, req.weights));
    CHECK(is_balanced_separator(g, *bs, req.weights));
    // exhaustive search returns a minimum one
    CHECK(ex->size() <= bs->size());
    ++compared;
  }
  CHECK(compared == 100);
}
