#pragma once

#include <string>
#include <vector>

#include "lowtw/cop.hpp"
#include "lowtw/graph.hpp"
#include "lowtw/random.hpp"

namespace lowtw {

struct ShortcutOptions {
  // Delta = epsilon * diam / divisor. With 12 the worst-case cluster diameter
  // 12 * Delta equals epsilon * diam exactly.
  double delta_divisor = 12.0;
};

struct ShortcutPartition {
  VertexPartition clustering;
  double epsilon = 0.0;
  double delta_internal = 0.0;
  double diameter = 0.0;
  std::vector<Vertex> centers;             // per cluster
  std::vector<int> cluster_supernode;      // per cluster
  std::vector<std::vector<Vertex>> nets;   // per supernode, in selection order
  CopDecomposition source;
};

ShortcutPartition shortcut_partition(const WeightedGraph& g, double epsilon, int r, RandomSource& rng,
                                     const ShortcutOptions& opts = {});

struct ShortcutReport {
  bool valid = true;
  double max_cluster_diameter = 0.0;
  std::vector<std::string> violations;
};

// Partition axioms, the diameter bound epsilon * diam, centers and net spacing.
ShortcutReport verify_shortcut_partition(const WeightedGraph& g, const ShortcutPartition& sp);

struct LowHopReport {
  bool valid = true;
  double h_hat = 0.0;          // smallest h under which every pair passes
  double hops_per_unit = 0.0;  // max hops / ceil(dist / (epsilon * diam))
  int quotient_hop_diameter = 0;
  long pairs_checked = 0;
  std::vector<std::string> violations;
};

inline constexpr Vertex kLowHopDefaultCap = 200;

// h < 0 only measures. Throws when the graph exceeds `cap` vertices.
LowHopReport verify_low_hop(const WeightedGraph& g, const ShortcutPartition& sp, double h,
                            Vertex cap = kLowHopDefaultCap);

struct EdgeFrequencyTable {
  std::vector<Edge> edges;
  std::vector<double> frequency;
  double beta_hat = 0.0;
  int samples = 0;
};

EdgeFrequencyTable estimate_shortcut_cut_probability(const WeightedGraph& g, double epsilon, int r, int samples,
                                                     RandomSource& rng, const ShortcutOptions& opts = {});

}  // namespace lowtw
