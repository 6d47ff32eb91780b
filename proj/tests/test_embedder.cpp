#include <doctest.h>

#include <cmath>

#include "lowtw/embedder.hpp"
#include "lowtw/generators.hpp"
#include "support.hpp"

using namespace lowtw;

namespace {

EmbedConfig fixed_tau(int tau, int psi = 4) {
  EmbedConfig cfg;
  cfg.psi = psi;
  cfg.tau.automatic = false;
  cfg.tau.fixed = tau;
  return cfg;
}

}  // namespace

TEST_CASE("tau spec parsing") {
  TauSpec a = TauSpec::parse("12");
  CHECK_FALSE(a.automatic);
  CHECK(a.fixed == 12);
  TauSpec b = TauSpec::parse("auto");
  CHECK(b.automatic);
  CHECK(b.c_tau == 1.0 / 128.0);
  TauSpec c = TauSpec::parse("auto:0.25");
  CHECK(c.automatic);
  CHECK(c.c_tau == 0.25);
  CHECK(TauSpec::parse(c.to_string()).c_tau == 0.25);
  CHECK(TauSpec::parse(a.to_string()).fixed == 12);
  CHECK_THROWS(TauSpec::parse("auto:-1"));
  CHECK_THROWS(TauSpec::parse("0"));
  CHECK_THROWS(TauSpec::parse("seven"));
}

TEST_CASE("single vertex") {
  RandomSource rng(1);
  EmbeddingResult r = embed(WeightedGraph(1), fixed_tau(1), rng);
  CHECK(r.host.num_vertices() == 1);
  CHECK(r.decomposition.width() == 0);
  CHECK(verify_embedding(WeightedGraph(1), r).valid);
}

TEST_CASE("base case is an exact clique") {
  WeightedGraph g = grid_graph(3, 3);
  RandomSource rng(2);
  EmbeddingResult r = embed(g, fixed_tau(3), rng);
  REQUIRE(r.calls.size() == 1);
  CHECK(r.calls[0].base_case);
  CHECK(r.host.num_edges() == 36);
  EmbeddingReport rep = verify_embedding(g, r);
  CHECK(rep.valid);
  CHECK(rep.width == 8);
  DistortionStats d = measure_distortion(g, {r});
  CHECK(d.max_distortion == doctest::Approx(1.0));
  CHECK(d.min_ratio == doctest::Approx(1.0));
  CHECK(d.mean_excess == doctest::Approx(0.0));
}

TEST_CASE("12x12 grid embeddings verify") {
  WeightedGraph g = grid_graph(12, 12);
  std::vector<EmbeddingResult> runs;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    EmbedConfig cfg;
    cfg.psi = 8;
    cfg.verify_cuts = true;
    RandomSource rng(seed);
    EmbeddingResult r = embed(g, cfg, rng);
    EmbeddingReport rep = verify_embedding(g, r);
    CHECK_MESSAGE(rep.valid, "seed " << seed << ": " << (rep.violations.empty() ? "" : rep.violations[0]));
    CHECK(rep.noncontraction_ok);
    CHECK(rep.potential_ok);
    CHECK(rep.boundary_ok);
    CHECK(rep.root_bag_ok);
    CHECK(rep.min_ratio >= 1.0 - 1e-9);
    CHECK(r.stats.cut_failures == 0);
    CHECK(r.stats.cut_checks > 0);
    CHECK(r.calls.size() > 1);
    runs.push_back(std::move(r));
  }
  DistortionStats d = measure_distortion(g, runs);
  CHECK(d.pairs.size() == g.num_edges());
  CHECK(d.min_ratio >= 1.0 - 1e-9);
  CHECK(d.expected_distortion >= 1.0);
  CHECK(d.run_mean_excess.size() == 6);
}

TEST_CASE("call records are consistent") {
  WeightedGraph g = grid_graph(10, 10);
  RandomSource rng(7);
  EmbedConfig cfg;
  EmbeddingResult r = embed(g, cfg, rng);
  REQUIRE_FALSE(r.calls.empty());
  CHECK(r.calls[0].kind == CallKind::Root);
  CHECK(r.calls[0].parent == -1);
  for (const auto& c : r.calls) {
    if (c.parent < 0) continue;
    const auto& p = r.calls[c.parent];
    CHECK(c.depth == p.depth + 1);
    CHECK(c.phi <= p.phi - 1.0 + 1e-9);
    CHECK(c.terminals >= 1);
    if (!c.base_case) CHECK_FALSE(c.cut.empty());
  }
  CHECK(r.stats.n_calls == static_cast<int>(r.calls.size()));
  CHECK(std::string(to_string(CallKind::Component)) == "component");
}

TEST_CASE("tampering is detected") {
  WeightedGraph g = grid_graph(8, 8);
  RandomSource rng(3);
  EmbeddingResult r = embed(g, EmbedConfig{}, rng);
  REQUIRE(verify_embedding(g, r).valid);

  EmbeddingResult light = r;
  std::vector<Edge> edges = light.host.edges();
  REQUIRE_FALSE(edges.empty());
  // shrink the longest host edge below its graph distance
  auto it = std::max_element(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.len < b.len; });
  it->len = 0.5;
  light.host = WeightedGraph(light.host.num_vertices(), edges);
  EmbeddingReport rep = verify_embedding(g, light);
  CHECK_FALSE(rep.valid);
  CHECK_FALSE(rep.noncontraction_ok);

  EmbeddingResult holes = r;
  holes.decomposition.bags[holes.decomposition.root].clear();
  for (auto& b : holes.decomposition.bags) b.erase(std::remove(b.begin(), b.end(), 0), b.end());
  CHECK_FALSE(verify_embedding(g, holes).valid);
}

TEST_CASE("same seed gives the same embedding") {
  WeightedGraph g = grid_graph(9, 9);
  RandomSource a(11), b(11);
  EmbeddingResult x = embed(g, EmbedConfig{}, a);
  EmbeddingResult y = embed(g, EmbedConfig{}, b);
  REQUIRE(x.host.num_edges() == y.host.num_edges());
  for (std::size_t i = 0; i < x.host.num_edges(); ++i) {
    CHECK(x.host.edges()[i].u == y.host.edges()[i].u);
    CHECK(x.host.edges()[i].v == y.host.edges()[i].v);
    CHECK(x.host.edges()[i].len == y.host.edges()[i].len);
  }
  CHECK(x.decomposition.bags == y.decomposition.bags);
}
