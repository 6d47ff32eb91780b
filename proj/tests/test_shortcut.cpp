#include <doctest.h>

#include "lowtw/generators.hpp"
#include "lowtw/shortcut.hpp"
#include "support.hpp"

using namespace lowtw;

TEST_CASE("single vertex") {
  WeightedGraph g(1);
  RandomSource rng(1);
  ShortcutPartition sp = shortcut_partition(g, 0.5, 3, rng);
  CHECK(sp.clustering.size() == 1);
  CHECK(verify_shortcut_partition(g, sp).valid);
}

TEST_CASE("10x10 grid with epsilon one half") {
  WeightedGraph g = grid_graph(10, 10);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RandomSource rng(seed);
    ShortcutPartition sp = shortcut_partition(g, 0.5, 5, rng);
    ShortcutReport rep = verify_shortcut_partition(g, sp);
    CHECK(rep.valid);
    CHECK(sp.diameter == 18.0);
    CHECK(rep.max_cluster_diameter <= 9.0 + 1e-9);
  }
}

TEST_CASE("a merged clustering fails the diameter check") {
  WeightedGraph g = grid_graph(10, 10);
  RandomSource rng(3);
  ShortcutPartition sp = shortcut_partition(g, 0.25, 5, rng);
  REQUIRE(verify_shortcut_partition(g, sp).valid);
  sp.clustering = VertexPartition::whole(g.num_vertices());
  sp.centers = {0};
  sp.cluster_supernode = {0};
  CHECK_FALSE(verify_shortcut_partition(g, sp).valid);
}

TEST_CASE("low hop on trivial inputs") {
  WeightedGraph g = grid_graph(5, 5);
  RandomSource rng(2);
  ShortcutPartition one = shortcut_partition(g, 1.0, 5, rng);
  one.clustering = VertexPartition::whole(25);
  LowHopReport r = verify_low_hop(g, one, -1.0);
  CHECK(r.quotient_hop_diameter == 0);

  WeightedGraph path = lowtw::testing::unit_path(6);
  ShortcutPartition sp = shortcut_partition(path, 0.1, 3, rng);
  REQUIRE(sp.clustering.size() == 6);
  LowHopReport rp = verify_low_hop(path, sp, -1.0);
  CHECK(rp.valid);
  CHECK(rp.quotient_hop_diameter == 5);
  CHECK(rp.h_hat >= 1.0);
  CHECK(verify_low_hop(path, sp, rp.h_hat).valid);
}

TEST_CASE("low hop on grids") {
  WeightedGraph g = grid_graph(8, 8);
  RandomSource rng(9);
  for (double eps : {0.25, 0.5}) {
    ShortcutPartition sp = shortcut_partition(g, eps, 5, rng);
    LowHopReport rep = verify_low_hop(g, sp, -1.0);
    CHECK(rep.pairs_checked > 0);
    CHECK(rep.h_hat > 0.0);
    CHECK(rep.h_hat < 64.0);
  }
  CHECK_THROWS_AS(verify_low_hop(grid_graph(15, 15), shortcut_partition(grid_graph(15, 15), 0.5, 5, rng), -1.0),
                  GraphError);
}

TEST_CASE("cut probability table") {
  RandomSource rng(4);
  EdgeFrequencyTable empty = estimate_shortcut_cut_probability(WeightedGraph(1), 0.5, 3, 5, rng);
  CHECK(empty.edges.empty());
  WeightedGraph g = grid_graph(6, 6);
  EdgeFrequencyTable t = estimate_shortcut_cut_probability(g, 0.5, 5, 40, rng);
  REQUIRE(t.edges.size() == g.num_edges());
  for (double f : t.frequency) {
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
  }
  CHECK(t.beta_hat >= 0.0);
}
