#include "lowtw/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <sstream>

namespace lowtw {

WeightedGraph::WeightedGraph(Vertex n, std::vector<Edge> edges) : n_(n) {
  if (n < 0) throw GraphError("negative vertex count");
  for (auto& e : edges) {
    if (!valid_vertex(e.u) || !valid_vertex(e.v))
      throw GraphError("edge endpoint out of range: " + std::to_string(e.u) + " " + std::to_string(e.v));
    if (e.u == e.v) throw GraphError("self-loop at vertex " + std::to_string(e.u));
    if (!(e.len > 0.0) || !std::isfinite(e.len))
      throw GraphError("edge length must be positive and finite");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
      throw GraphError("parallel edge " + std::to_string(edges[i].u) + " " + std::to_string(edges[i].v));
  edges_ = std::move(edges);

  offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (Vertex v = 0; v < n_; ++v) offsets_[v + 1] += offsets_[v];
  arcs_.resize(offsets_[n_]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    arcs_[fill[e.u]++] = {e.v, e.len};
    arcs_[fill[e.v]++] = {e.u, e.len};
  }
  for (Vertex v = 0; v < n_; ++v)
    std::sort(arcs_.begin() + offsets_[v], arcs_.begin() + offsets_[v + 1],
              [](const Arc& a, const Arc& b) { return a.to < b.to; });
}

double WeightedGraph::edge_length(Vertex u, Vertex v) const {
  auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v, [](const Arc& a, Vertex x) { return a.to < x; });
  return (it != nb.end() && it->to == v) ? it->len : kInfinity;
}

double WeightedGraph::min_edge_length() const {
  double m = kInfinity;
  for (const auto& e : edges_) m = std::min(m, e.len);
  return m;
}

VertexMask make_mask(Vertex n, std::span<const Vertex> vertices) {
  VertexMask mask(n, 0);
  for (Vertex v : vertices) mask[v] = 1;
  return mask;
}

Subgraph induced_subgraph(const WeightedGraph& g, std::span<const Vertex> vertices) {
  Subgraph sub;
  sub.to_parent.assign(vertices.begin(), vertices.end());
  std::sort(sub.to_parent.begin(), sub.to_parent.end());
  std::vector<Vertex> local(g.num_vertices(), -1);
  for (std::size_t i = 0; i < sub.to_parent.size(); ++i) {
    Vertex v = sub.to_parent[i];
    if (!g.valid_vertex(v)) throw GraphError("induced_subgraph: invalid vertex");
    if (local[v] != -1) throw GraphError("induced_subgraph: repeated vertex");
    local[v] = static_cast<Vertex>(i);
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < sub.to_parent.size(); ++i) {
    for (const Arc& a : g.neighbors(sub.to_parent[i])) {
      Vertex j = local[a.to];
      if (j > static_cast<Vertex>(i)) edges.push_back({static_cast<Vertex>(i), j, a.len});
    }
  }
  sub.graph = WeightedGraph(static_cast<Vertex>(sub.to_parent.size()), std::move(edges));
  return sub;
}

// ── Distances ──

namespace {

void check_vertex(const WeightedGraph& g, Vertex v) {
  if (!g.valid_vertex(v)) throw GraphError("invalid vertex id " + std::to_string(v));
}

}  // namespace

ShortestPathTree shortest_path_tree(const WeightedGraph& g, std::span<const Vertex> sources,
                                    const VertexMask* allowed) {
  const Vertex n = g.num_vertices();
  ShortestPathTree t{std::vector<double>(n, kInfinity), std::vector<Vertex>(n, -1)};
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  for (Vertex s : sources) {
    check_vertex(g, s);
    if (allowed && !(*allowed)[s]) continue;
    if (t.dist[s] > 0.0) {
      t.dist[s] = 0.0;
      pq.emplace(0.0, s);
    }
  }
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > t.dist[v]) continue;
    for (const Arc& a : g.neighbors(v)) {
      if (allowed && !(*allowed)[a.to]) continue;
      double nd = d + a.len;
      if (nd < t.dist[a.to]) {
        t.dist[a.to] = nd;
        t.pred[a.to] = v;
        pq.emplace(nd, a.to);
      }
    }
  }
  return t;
}

std::vector<double> dijkstra(const WeightedGraph& g, std::span<const Vertex> sources,
                             const VertexMask* allowed) {
  return shortest_path_tree(g, sources, allowed).dist;
}

std::vector<double> dijkstra(const WeightedGraph& g, Vertex source, const VertexMask* allowed) {
  return dijkstra(g, std::span<const Vertex>(&source, 1), allowed);
}

double shortest_path_distance(const WeightedGraph& g, Vertex u, Vertex v) {
  check_vertex(g, u);
  check_vertex(g, v);
  if (u == v) return 0.0;
  return dijkstra(g, u)[v];
}

std::vector<std::vector<double>> all_pairs_distances(const WeightedGraph& g) {
  std::vector<std::vector<double>> d(g.num_vertices());
  for (Vertex v = 0; v < g.num_vertices(); ++v) d[v] = dijkstra(g, v);
  return d;
}

std::vector<Vertex> extract_path(const ShortestPathTree& spt, Vertex v) {
  std::vector<Vertex> path;
  if (spt.dist[v] == kInfinity) return path;
  for (Vertex x = v; x != -1; x = spt.pred[x]) path.push_back(x);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<int> hop_distances(const WeightedGraph& g, Vertex source, const VertexMask* allowed) {
  check_vertex(g, source);
  std::vector<int> hops(g.num_vertices(), -1);
  if (allowed && !(*allowed)[source]) return hops;
  std::deque<Vertex> q{source};
  hops[source] = 0;
  while (!q.empty()) {
    Vertex v = q.front();
    q.pop_front();
    for (const Arc& a : g.neighbors(v)) {
      if (hops[a.to] != -1 || (allowed && !(*allowed)[a.to])) continue;
      hops[a.to] = hops[v] + 1;
      q.push_back(a.to);
    }
  }
  return hops;
}

int hop_diameter(const WeightedGraph& g) {
  int best = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    for (int h : hop_distances(g, v)) {
      if (h < 0) throw GraphError("hop_diameter: graph is disconnected");
      best = std::max(best, h);
    }
  }
  return best;
}

double strong_diameter(const WeightedGraph& g, std::span<const Vertex> cluster) {
  if (cluster.empty()) throw GraphError("strong_diameter: empty cluster");
  for (Vertex v : cluster) check_vertex(g, v);
  VertexMask mask = make_mask(g.num_vertices(), cluster);
  double diam = 0.0;
  for (Vertex s : cluster) {
    auto d = dijkstra(g, s, &mask);
    for (Vertex v : cluster) {
      if (d[v] == kInfinity) throw GraphError("strong_diameter: cluster is not connected");
      diam = std::max(diam, d[v]);
    }
  }
  return diam;
}

double graph_diameter(const WeightedGraph& g) {
  if (g.num_vertices() == 0) return 0.0;
  double diam = 0.0;
  for (Vertex s = 0; s < g.num_vertices(); ++s) {
    for (double x : dijkstra(g, s)) {
      if (x == kInfinity) throw GraphError("graph is disconnected");
      diam = std::max(diam, x);
    }
  }
  return diam;
}

bool is_connected(const WeightedGraph& g) {
  if (g.num_vertices() <= 1) return true;
  for (int h : hop_distances(g, 0))
    if (h < 0) return false;
  return true;
}

bool induces_connected(const WeightedGraph& g, std::span<const Vertex> vertices) {
  if (vertices.empty()) return false;
  VertexMask mask = make_mask(g.num_vertices(), vertices);
  auto hops = hop_distances(g, vertices.front(), &mask);
  for (Vertex v : vertices)
    if (hops[v] < 0) return false;
  return true;
}

// ── Partitions ──

VertexPartition VertexPartition::from_clusters(Vertex n, std::vector<std::vector<Vertex>> clusters) {
  VertexPartition p;
  p.cluster_of.assign(n, -1);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (clusters[c].empty()) throw GraphError("partition contains an empty cluster");
    std::sort(clusters[c].begin(), clusters[c].end());
    for (Vertex v : clusters[c]) {
      if (v < 0 || v >= n) throw GraphError("partition vertex out of range");
      if (p.cluster_of[v] != -1) throw GraphError("partition clusters overlap at vertex " + std::to_string(v));
      p.cluster_of[v] = static_cast<int>(c);
    }
  }
  for (Vertex v = 0; v < n; ++v)
    if (p.cluster_of[v] == -1) throw GraphError("partition misses vertex " + std::to_string(v));
  p.clusters = std::move(clusters);
  return p;
}

VertexPartition VertexPartition::singletons(Vertex n) {
  std::vector<std::vector<Vertex>> c(n);
  for (Vertex v = 0; v < n; ++v) c[v] = {v};
  return from_clusters(n, std::move(c));
}

VertexPartition VertexPartition::whole(Vertex n) {
  std::vector<Vertex> all(n);
  for (Vertex v = 0; v < n; ++v) all[v] = v;
  if (n == 0) return from_clusters(0, {});
  return from_clusters(n, {all});
}

Quotient contract_clusters(const WeightedGraph& g, const VertexPartition& p, QuotientLengths lengths) {
  if (static_cast<Vertex>(p.cluster_of.size()) != g.num_vertices())
    throw GraphError("contract_clusters: partition size mismatch");
  for (const auto& c : p.clusters)
    if (!induces_connected(g, c)) throw GraphError("contract_clusters: cluster is not connected");
  std::map<std::pair<int, int>, double> best;
  for (const auto& e : g.edges()) {
    int a = p.cluster_of[e.u], b = p.cluster_of[e.v];
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    auto [it, fresh] = best.emplace(std::make_pair(a, b), e.len);
    if (!fresh) it->second = std::min(it->second, e.len);
  }
  std::vector<Edge> edges;
  edges.reserve(best.size());
  for (const auto& [key, len] : best)
    edges.push_back({key.first, key.second, lengths == QuotientLengths::Unit ? 1.0 : len});
  return {WeightedGraph(static_cast<Vertex>(p.clusters.size()), std::move(edges)), p.cluster_of};
}

std::vector<std::vector<Vertex>> components_within(const WeightedGraph& g, std::span<const Vertex> subset) {
  VertexMask in = make_mask(g.num_vertices(), subset);
  std::vector<Vertex> order(subset.begin(), subset.end());
  std::sort(order.begin(), order.end());
  std::vector<std::vector<Vertex>> comps;
  std::vector<Vertex> stack;
  for (Vertex s : order) {
    if (!in[s]) continue;
    std::vector<Vertex> comp;
    in[s] = 0;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (const Arc& a : g.neighbors(v)) {
        if (in[a.to]) {
          in[a.to] = 0;
          stack.push_back(a.to);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

std::vector<std::vector<Vertex>> connected_components(const WeightedGraph& g, std::span<const Vertex> removed) {
  VertexMask gone = make_mask(g.num_vertices(), removed);
  std::vector<Vertex> keep;
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (!gone[v]) keep.push_back(v);
  return components_within(g, keep);
}

// ── Metrics ──

int ceil_log2(double x) {
  int k = 0;
  while (std::ldexp(1.0, k) < x * (1.0 - 1e-12)) ++k;
  return k;
}

GraphMetrics compute_metrics(const WeightedGraph& g) {
  GraphMetrics m;
  if (g.num_vertices() <= 1) return m;
  m.diameter = graph_diameter(g);
  m.min_distance = g.min_edge_length();
  m.aspect_ratio = m.diameter / m.min_distance;
  m.k = ceil_log2(m.aspect_ratio);
  return m;
}

WeightedGraph scale_lengths(const WeightedGraph& g, double factor) {
  std::vector<Edge> edges = g.edges();
  for (auto& e : edges) e.len *= factor;
  return WeightedGraph(g.num_vertices(), std::move(edges));
}

NormalizedGraph normalize(const WeightedGraph& g) {
  if (!is_connected(g)) throw GraphError("normalize: graph is disconnected");
  NormalizedGraph out;
  if (g.num_edges() == 0) {
    out.graph = g;
    out.metrics = compute_metrics(g);
    return out;
  }
  double mn = g.min_edge_length();
  out.scale = 1.0 / mn;
  if (mn == 1.0) {
    out.graph = g;
  } else {
    std::vector<Edge> edges = g.edges();
    for (auto& e : edges) e.len = (e.len == mn) ? 1.0 : e.len / mn;
    out.graph = WeightedGraph(g.num_vertices(), std::move(edges));
  }
  out.metrics = compute_metrics(out.graph);
  return out;
}

// ── Edge lists ──

std::string format_length(double len) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, len);
  return std::string(buf, res.ptr);
}

WeightedGraph read_edge_list(std::istream& in) {
  long long n = 0, m = 0;
  if (!(in >> n >> m) || n < 0 || m < 0) throw GraphError("edge list: malformed header");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    long long u, v;
    double len;
    if (!(in >> u >> v >> len)) throw GraphError("edge list: malformed edge line " + std::to_string(i + 2));
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), len});
  }
  return WeightedGraph(static_cast<Vertex>(n), std::move(edges));
}

WeightedGraph read_edge_list_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw GraphError("cannot open " + path);
  return read_edge_list(f);
}

void write_edge_list(std::ostream& out, const WeightedGraph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << ' ' << format_length(e.len) << '\n';
}

}  // namespace lowtw
