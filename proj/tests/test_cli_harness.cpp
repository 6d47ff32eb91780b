#include <doctest.h>

#include "lowtw/generators.hpp"
#include "lowtw/pipeline.hpp"
#include "lowtw/serialize.hpp"
#include "support.hpp"

using namespace lowtw;

TEST_CASE("generators") {
  WeightedGraph g = grid_graph(2, 2);
  CHECK(g.num_vertices() == 4);
  CHECK(g.num_edges() == 4);
  WeightedGraph p = path_graph(5);
  CHECK(p.num_vertices() == 5);
  CHECK(p.num_edges() == 4);
  WeightedGraph s = star_graph(6);
  CHECK(s.degree(0) == 5);
  for (int n : {3, 10, 60, 200}) {
    WeightedGraph r = random_planar_graph(n, 3);
    CHECK(r.num_vertices() == n);
    CHECK(static_cast<long>(r.num_edges()) <= 3L * n - 6);
    CHECK(is_connected(r));
  }
  CHECK(generate_graph("grid:3,4").num_vertices() == 12);
  CHECK(generate_graph("grid:2,2,2.5").edges()[0].len == 2.5);
  CHECK(generate_graph("path:7").num_edges() == 6);
  CHECK(generate_graph("random_planar:30,5").num_edges() == random_planar_graph(30, 5).num_edges());
  CHECK_THROWS_AS(generate_graph("torus:3"), GraphError);
  CHECK_THROWS_AS(generate_graph("grid:3"), GraphError);
}

TEST_CASE("pipeline edge cases") {
  ExperimentConfig cfg;
  cfg.graph = grid_graph(6, 6);
  cfg.seeds = 0;
  PipelineResult none = run_pipeline(cfg);
  CHECK(none.records.empty());

  cfg.graph = WeightedGraph(1);
  cfg.seeds = 2;
  PipelineResult one = run_pipeline(cfg);
  REQUIRE(one.records.size() == 2);
  for (const auto& r : one.records) CHECK(r.ok);
}

TEST_CASE("pipeline records are sorted and independent of jobs") {
  ExperimentConfig cfg;
  cfg.graph = grid_graph(8, 8, 3.0);
  cfg.seeds = 6;
  cfg.base_seed = 40;
  cfg.jobs = 1;
  PipelineResult a = run_pipeline(cfg);
  cfg.jobs = 3;
  PipelineResult b = run_pipeline(cfg);
  CHECK(a.scale == doctest::Approx(1.0 / 3.0));
  REQUIRE(a.records.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(a.records[i].seed == 40 + i);
    CHECK(a.records[i].ok);
    CHECK(a.records[i].width == b.records[i].width);
    CHECK(a.records[i].mean_excess == b.records[i].mean_excess);
    CHECK(a.records[i].tau == b.records[i].tau);
  }
  std::string csv = records_csv(a);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
}

TEST_CASE("artifact round trips") {
  WeightedGraph g = grid_graph(7, 7);
  RandomSource rng(9);
  ClusteringChain chain = build_chain(g, 5, rng);
  Json cj = to_json(chain);
  CHECK(cj["kind"] == "chain");
  CHECK(dump(to_json(chain_from_json(cj))) == dump(cj));
  CHECK(verify_artifact(g, cj).valid);

  CopDecomposition cd = build_cop_decomposition(g, 2.0, 5, rng);
  Json dj = to_json(cd);
  CHECK(dump(to_json(cop_from_json(dj))) == dump(dj));
  CHECK(verify_artifact(g, dj).valid);

  ShortcutPartition sp = shortcut_partition(g, 0.5, 5, rng);
  Json sj = to_json(sp);
  CHECK(dump(to_json(shortcut_from_json(sj))) == dump(sj));
  CHECK(verify_artifact(g, sj).valid);

  ClusterTree tree = ClusterTree::from_chain(chain);
  CutFamilyArtifact cfa{chain, std::vector<double>(49, 1.0), {}};
  cfa.family = build_cut_family(g, tree, tree.root, cfa.weights, {}, 4, 2, 49);
  Json fj = to_json(cfa);
  CHECK(dump(to_json(cut_family_from_json(fj))) == dump(fj));
  CHECK(verify_artifact(g, fj).valid);

  EmbeddingResult er = embed(g, EmbedConfig{}, rng);
  Json ej = to_json(er);
  CHECK(dump(to_json(embedding_from_json(ej))) == dump(ej));
  CHECK(verify_artifact(g, ej).valid);

  CHECK(dump(to_json(graph_from_json(to_json(g)))) == dump(to_json(g)));
  Json bogus = {{"kind", "teapot"}};
  CHECK_THROWS(verify_artifact(g, bogus));
}

TEST_CASE("tampered artifacts fail verification") {
  WeightedGraph g = grid_graph(7, 7);
  RandomSource rng(2);
  Json cj = to_json(build_chain(g, 5, rng));
  // merge two level-1 clusters far apart by moving a vertex
  Json bad = cj;
  auto& lvl = bad["levels"][1];
  REQUIRE(lvl.size() >= 2);
  Json moved = lvl[0][0];
  lvl[0].erase(0);
  lvl[lvl.size() - 1].push_back(moved);
  VerifyOutcome out;
  bool threw = false;
  try {
    out = verify_artifact(g, bad);
  } catch (const std::exception&) {
    threw = true;
  }
  CHECK((threw || !out.valid));

  Json ej = to_json(embed(g, EmbedConfig{}, rng));
  ej["host"]["edges"][0][2] = 1e-3;
  CHECK_FALSE(verify_artifact(g, ej).valid);
}

TEST_CASE("serialization is deterministic") {
  WeightedGraph g = random_planar_graph(40, 1);
  NormalizedGraph ng = normalize(g);
  RandomSource a(5), b(5);
  CHECK(dump(to_json(embed(ng.graph, EmbedConfig{}, a))) == dump(to_json(embed(ng.graph, EmbedConfig{}, b))));
}
