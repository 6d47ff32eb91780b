#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lowtw {

using Vertex = std::int32_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  Vertex u;
  Vertex v;
  double len;
};

struct Arc {
  Vertex to;
  double len;
};

// Undirected graph with strictly positive edge lengths. Immutable once built;
// edges are stored with u < v in lexicographic order and adjacency lists are
// sorted by neighbour id, so every traversal is deterministic.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(Vertex n) : WeightedGraph(n, {}) {}
  WeightedGraph(Vertex n, std::vector<Edge> edges);

  Vertex num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Arc> neighbors(Vertex v) const {
    return {arcs_.data() + offsets_[v], arcs_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  bool valid_vertex(Vertex v) const { return v >= 0 && v < n_; }
  // infinity when {u,v} is not an edge
  double edge_length(Vertex u, Vertex v) const;
  double min_edge_length() const;

 private:
  Vertex n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Arc> arcs_;
};

// Membership flags indexed by vertex id. Algorithms taking an optional mask
// only visit vertices whose flag is set.
using VertexMask = std::vector<char>;

VertexMask make_mask(Vertex n, std::span<const Vertex> vertices);

struct Subgraph {
  WeightedGraph graph;
  std::vector<Vertex> to_parent;  // local id -> ambient id
};

// Local ids follow the ascending order of the ambient ids.
Subgraph induced_subgraph(const WeightedGraph& g, std::span<const Vertex> vertices);

// ── Distances ──

struct ShortestPathTree {
  std::vector<double> dist;
  std::vector<Vertex> pred;  // -1 at sources and unreachable vertices
};

ShortestPathTree shortest_path_tree(const WeightedGraph& g, std::span<const Vertex> sources,
                                    const VertexMask* allowed = nullptr);
std::vector<double> dijkstra(const WeightedGraph& g, std::span<const Vertex> sources,
                             const VertexMask* allowed = nullptr);
std::vector<double> dijkstra(const WeightedGraph& g, Vertex source,
                             const VertexMask* allowed = nullptr);
double shortest_path_distance(const WeightedGraph& g, Vertex u, Vertex v);
std::vector<std::vector<double>> all_pairs_distances(const WeightedGraph& g);
// vertices of the path from the tree source to v, source first
std::vector<Vertex> extract_path(const ShortestPathTree& spt, Vertex v);

// BFS hop counts, -1 where unreachable
std::vector<int> hop_distances(const WeightedGraph& g, Vertex source,
                               const VertexMask* allowed = nullptr);
int hop_diameter(const WeightedGraph& g);

double strong_diameter(const WeightedGraph& g, std::span<const Vertex> cluster);
double graph_diameter(const WeightedGraph& g);
bool is_connected(const WeightedGraph& g);
bool induces_connected(const WeightedGraph& g, std::span<const Vertex> vertices);

// ── Partitions and quotients ──

struct VertexPartition {
  std::vector<int> cluster_of;
  std::vector<std::vector<Vertex>> clusters;

  // sorts members; throws unless the clusters partition 0..n-1
  static VertexPartition from_clusters(Vertex n, std::vector<std::vector<Vertex>> clusters);
  static VertexPartition singletons(Vertex n);
  static VertexPartition whole(Vertex n);
  std::size_t size() const { return clusters.size(); }
};

enum class QuotientLengths { Unit, MinCrossing };

struct Quotient {
  WeightedGraph graph;
  std::vector<int> eta;  // vertex -> supervertex
};

Quotient contract_clusters(const WeightedGraph& g, const VertexPartition& p,
                           QuotientLengths lengths = QuotientLengths::Unit);

// Components of g minus `removed`, each sorted, ordered by minimum vertex.
std::vector<std::vector<Vertex>> connected_components(const WeightedGraph& g,
                                                      std::span<const Vertex> removed);
// Components of the subgraph induced by `subset`, same ordering.
std::vector<std::vector<Vertex>> components_within(const WeightedGraph& g,
                                                   std::span<const Vertex> subset);

// ── Metrics ──

struct GraphMetrics {
  double diameter = 0.0;
  double min_distance = 1.0;
  double aspect_ratio = 1.0;
  int k = 0;
};

// smallest k >= 0 with 2^k >= x, tolerant to rounding just above a power of two
int ceil_log2(double x);

GraphMetrics compute_metrics(const WeightedGraph& g);

struct NormalizedGraph {
  WeightedGraph graph;
  GraphMetrics metrics;
  double scale = 1.0;  // new length = old length * scale
};

NormalizedGraph normalize(const WeightedGraph& g);

WeightedGraph scale_lengths(const WeightedGraph& g, double factor);

// ── Edge-list text format: "n m" then m lines "u v len" ──

WeightedGraph read_edge_list(std::istream& in);
WeightedGraph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const WeightedGraph& g);
std::string format_length(double len);

}  // namespace lowtw
