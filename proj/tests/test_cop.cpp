#include <doctest.h>

#include "lowtw/cop.hpp"
#include "lowtw/generators.hpp"
#include "support.hpp"

using namespace lowtw;

TEST_CASE("single vertex gives one supernode") {
  WeightedGraph g(1);
  RandomSource rng(1);
  CopDecomposition cd = build_cop_decomposition(g, 1.0, 3, rng);
  REQUIRE(cd.supernodes.size() == 1);
  CHECK(cd.owner == std::vector<int>{0});
  CHECK(verify_cop_decomposition(g, cd).valid);
}

TEST_CASE("supernodes partition the vertices") {
  WeightedGraph g = grid_graph(6, 6);
  RandomSource rng(2);
  CopDecomposition cd = build_cop_decomposition(g, 2.0, 5, rng);
  std::vector<int> seen(g.num_vertices(), 0);
  for (const auto& s : cd.supernodes)
    for (Vertex v : s.members) {
      ++seen[v];
      CHECK(cd.owner[v] == s.id);
    }
  for (int c : seen) CHECK(c == 1);
  TreeDecomposition td = cd.expansion();
  CHECK(verify_tree_decomposition(g, td).valid);
}

TEST_CASE("8x8 grid with delta 4 and r 5") {
  WeightedGraph g = grid_graph(8, 8);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomSource rng(seed);
    CopDecomposition cd = build_cop_decomposition(g, 4.0, 5, rng);
    CopReport rep = verify_cop_decomposition(g, cd);
    CHECK_MESSAGE(rep.valid, "seed " << seed);
    CHECK(rep.max_radius <= 4.0 + 1e-9);
    // tree decompositions of width O(r) for K_r-minor-free graphs
    CHECK(cd.expansion().width() >= 0);
  }
}

TEST_CASE("path with a huge delta stays one supernode") {
  WeightedGraph g = lowtw::testing::unit_path(7);
  RandomSource rng(4);
  CopDecomposition cd = build_cop_decomposition(g, 1000.0, 3, rng);
  CHECK(cd.supernodes.size() == 1);
  CHECK(verify_cop_decomposition(g, cd).valid);
}

TEST_CASE("shrinking delta afterwards is reported") {
  WeightedGraph g = grid_graph(8, 8);
  RandomSource rng(5);
  CopDecomposition cd = build_cop_decomposition(g, 4.0, 5, rng);
  REQUIRE(verify_cop_decomposition(g, cd).valid);
  cd.delta = 0.25;
  CopReport rep = verify_cop_decomposition(g, cd);
  CHECK_FALSE(rep.valid);
  CHECK_FALSE(rep.radius_ok);
}

TEST_CASE("a moved vertex breaks the partition") {
  WeightedGraph g = grid_graph(6, 6);
  RandomSource rng(6);
  CopDecomposition cd = build_cop_decomposition(g, 1.0, 5, rng);
  REQUIRE(cd.supernodes.size() > 1);
  cd.supernodes[0].members.push_back(cd.supernodes[1].members.front());
  CHECK_FALSE(verify_cop_decomposition(g, cd).valid);
}

TEST_CASE("input checks") {
  RandomSource rng(0);
  WeightedGraph g = grid_graph(3, 3);
  CHECK_THROWS_AS(build_cop_decomposition(g, 0.0, 3, rng), GraphError);
  CHECK_THROWS_AS(build_cop_decomposition(g, 1.0, 1, rng), GraphError);
}

TEST_CASE("cut event trace") {
  RandomSource rng(7);
  CutEventTrace star = cut_event_trace(star_graph(4), 1e6, 3, rng);
  CHECK(star.events.empty());
  CHECK(star.decomposition.supernodes.size() == 1);

  WeightedGraph g = grid_graph(8, 8);
  CutEventTrace t = cut_event_trace(g, 2.0, 5, rng);
  CHECK(verify_cop_decomposition(g, t.decomposition).valid);
  long cut_edges = 0;
  for (const auto& e : g.edges())
    if (t.decomposition.owner[e.u] != t.decomposition.owner[e.v]) ++cut_edges;
  CHECK(static_cast<long>(t.events.size()) == cut_edges);
  REQUIRE(t.threateners.size() == 64);
  // every vertex is threatened at least by its own supernode
  for (int c : t.threateners) CHECK(c >= 1);
}
