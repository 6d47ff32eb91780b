#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "lowtw/graph.hpp"
#include "lowtw/random.hpp"

namespace lowtw::testing {

// Shortest u-v length by enumerating every simple path.
inline double brute_force_distance(const WeightedGraph& g, Vertex u, Vertex v) {
  if (u == v) return 0.0;
  double best = kInfinity;
  std::vector<char> on(g.num_vertices(), 0);
  std::function<void(Vertex, double)> walk = [&](Vertex x, double len) {
    if (x == v) {
      best = std::min(best, len);
      return;
    }
    on[x] = 1;
    for (const Arc& a : g.neighbors(x))
      if (!on[a.to]) walk(a.to, len + a.len);
    on[x] = 0;
  };
  walk(u, 0.0);
  return best;
}

// G(n, p) with lengths in [1, 4); not necessarily connected.
inline WeightedGraph random_graph(Vertex n, double p, RandomSource& rng) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (rng.uniform() < p) edges.push_back({u, v, rng.uniform(1.0, 4.0)});
  return WeightedGraph(n, std::move(edges));
}

inline WeightedGraph random_connected_graph(Vertex n, double p, RandomSource& rng) {
  std::vector<Edge> edges;
  for (Vertex v = 1; v < n; ++v) edges.push_back({static_cast<Vertex>(rng.index(v)), v, rng.uniform(1.0, 4.0)});
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (rng.uniform() < p) edges.push_back({u, v, rng.uniform(1.0, 4.0)});
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  edges.erase(std::unique(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v; }),
              edges.end());
  return WeightedGraph(n, std::move(edges));
}

inline WeightedGraph unit_path(Vertex n) {
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, 1.0});
  return WeightedGraph(n, std::move(edges));
}

}  // namespace lowtw::testing
