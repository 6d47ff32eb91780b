#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lowtw/graph.hpp"

namespace lowtw {

struct TreeDecomposition {
  std::vector<std::vector<Vertex>> bags;
  std::vector<std::pair<int, int>> edges;
  int root = 0;

  int width() const;
};

struct TdReport {
  bool valid = true;
  int width = -1;
  std::vector<std::string> violations;
};

TdReport verify_tree_decomposition(const WeightedGraph& g, const TreeDecomposition& td);

// Min-fill elimination; ties go to the lowest vertex id.
TreeDecomposition heuristic_tree_decomposition(const WeightedGraph& g);
std::vector<Vertex> min_fill_ordering(const WeightedGraph& g);
TreeDecomposition decomposition_from_ordering(const WeightedGraph& g, const std::vector<Vertex>& order);

inline constexpr Vertex kExactTreewidthLimit = 16;

// Subset dynamic program; throws for graphs above kExactTreewidthLimit vertices.
int exact_treewidth(const WeightedGraph& g);

// ── Balanced separators ──

enum class SeparatorMethod { Auto, Exhaustive, BagScan };

inline constexpr Vertex kExhaustiveSeparatorLimit = 18;

struct SeparatorRequest {
  std::vector<double> weights;
  int size_cap = 0;
  double balance = 0.5;
  SeparatorMethod method = SeparatorMethod::Auto;
};

// Heaviest component weight of g minus `removed`.
double heaviest_component(const WeightedGraph& g, const std::vector<Vertex>& removed,
                          const std::vector<double>& weights);
bool is_balanced_separator(const WeightedGraph& g, const std::vector<Vertex>& sep,
                           const std::vector<double>& weights, double balance = 0.5);

// nullopt when no separator within size_cap was found by the chosen method.
std::optional<std::vector<Vertex>> weighted_balanced_separator(const WeightedGraph& g,
                                                               const SeparatorRequest& req);

}  // namespace lowtw
