#pragma once

#include <string>
#include <vector>

#include "lowtw/graph.hpp"
#include "lowtw/random.hpp"
#include "lowtw/shortcut.hpp"

namespace lowtw {

struct ChainLevel {
  std::vector<std::vector<Vertex>> clusters;
  std::vector<int> cluster_of;  // indexed by vertex id, -1 outside the chain's universe
  std::vector<int> parent;      // index into the next level; -1 on the top level
  std::vector<double> diameter;
};

struct ClusteringChain {
  Vertex n = 0;                  // ambient vertex count
  std::vector<Vertex> universe;  // vertices covered, sorted
  int k = 0;
  std::vector<ChainLevel> levels;  // 0..k
  std::vector<int> hop_per_level;  // entry i: max hop-diameter of G[C] / C_i[C] over C at level i+1
  int hop_bound = 0;
  int refinement_events = 0;  // oversized shortcut clusters partitioned again
  int carving_events = 0;     // clusters split by the deterministic ball carving fallback
};

struct ClusterRef {
  int level = 0;
  int index = 0;
};

struct ChainOptions {
  double epsilon = 0.5;
  // Delta divisor handed to the shortcut partition; see the README for how it
  // was chosen. Oversized clusters are always repartitioned, so every value
  // keeps the exact diameter guarantee.
  double delta_divisor = 1.0;
  // divisor used when an oversized cluster is partitioned again
  double refine_divisor = 1.0;
  // re-splitting rounds before the ball carving fallback
  int max_refine_depth = 3;
  // target each split at the next scale (epsilon = 2^i / diam(C)) instead of epsilon * diam(C)
  bool target_scale = true;
};

ClusteringChain build_chain(const WeightedGraph& g, int r, RandomSource& rng, const ChainOptions& opts = {});

struct ChainReport {
  bool valid = true;
  int measured_hop = 0;
  std::vector<std::string> violations;
};

// h < 0 skips the hop check but still measures it.
ChainReport verify_chain(const WeightedGraph& g, const ClusteringChain& chain, int h = -1);

ClusteringChain subchain(const ClusteringChain& chain, ClusterRef c);
int split_scale(const ClusteringChain& chain, Vertex u, Vertex v);

struct LevelEdgeFrequency {
  std::vector<Edge> edges;
  std::vector<std::vector<double>> frequency;  // [level][edge]
  double beta_hat = 0.0;
  int samples = 0;
  int k = 0;
};

LevelEdgeFrequency estimate_separating_beta(const WeightedGraph& g, int r, int samples, RandomSource& rng,
                                            const ChainOptions& opts = {});

// Hop-diameter of G[members] after contracting each group of `part_of`
// (indexed by vertex id) to a single vertex.
int quotient_hop_diameter(const WeightedGraph& g, const std::vector<Vertex>& members, const std::vector<int>& part_of);

// ── Cluster hierarchy ──
// Chain clusters with identical vertex sets on consecutive levels collapse
// into one node spanning levels lo..hi. Node ids are assigned top-down.

struct ClusterNode {
  std::vector<Vertex> members;
  int lo = 0;
  int hi = 0;
  int parent = -1;
  std::vector<int> children;
};

struct ClusterTree {
  std::vector<ClusterNode> nodes;
  int root = 0;
  std::vector<std::vector<int>> node_at;  // [level][cluster index]

  static ClusterTree from_chain(const ClusteringChain& chain);
  bool is_singleton(int node) const { return nodes[node].members.size() == 1; }
  int scale(int node) const { return nodes[node].hi; }
  // true when `a` is a proper ancestor of `b`
  bool is_ancestor(int a, int b) const;
  // node holding exactly `v` on the lowest level, i.e. its singleton
  std::vector<int> leaf_of;
};

}  // namespace lowtw
