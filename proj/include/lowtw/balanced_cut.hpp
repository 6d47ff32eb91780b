#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lowtw/chain.hpp"
#include "lowtw/graph.hpp"
#include "lowtw/random.hpp"

namespace lowtw {

// A cut is a set of cluster-tree node ids, sorted.
struct Cut {
  std::vector<int> clusters;
};

struct CalibrationEvent {
  int cut_index = 0;
  int old_tau = 0;
  int new_tau = 0;
  int contracted_vertices = 0;
};

struct CutFamily {
  int psi = 0;
  int tau = 0;
  int piece = 0;
  std::vector<int> conforming;
  std::vector<Cut> cuts;
  std::map<int, int> ledger;  // non-singleton non-conforming node -> the cut using it
  std::vector<CalibrationEvent> calibration_events;
};

// Thrown when no cut fits under the cap; carries the contracted instance.
class CutFamilyError : public std::runtime_error {
 public:
  CutFamilyError(const std::string& what, WeightedGraph contracted, std::vector<double> weights, int tau)
      : std::runtime_error(what), contracted(std::move(contracted)), weights(std::move(weights)), tau(tau) {}
  WeightedGraph contracted;
  std::vector<double> weights;
  int tau;
};

// c_tau * h^2 * ceil(log2 aspect) * psi, at least 1; the log factor is at least 1.
int auto_tau(double hop_bound, double aspect_ratio, int psi, double c_tau);

// Maximally available nodes below `piece`: available nodes whose parent is unavailable.
std::vector<int> maximal_available(const ClusterTree& tree, int piece, const std::vector<char>& unavailable);

struct Contracted {
  WeightedGraph graph;
  std::vector<int> node_of;  // contracted vertex -> tree node
  std::vector<double> weights;
};

Contracted contract_to_nodes(const WeightedGraph& g, const ClusterTree& tree, const std::vector<int>& nodes,
                             const std::vector<double>& weights);

// weights are indexed by vertex id of g. tau_cap > tau enables doubling.
CutFamily build_cut_family(const WeightedGraph& g, const ClusterTree& tree, int piece,
                           const std::vector<double>& weights, const std::vector<int>& conforming, int psi, int tau,
                           int tau_cap = 0);

const Cut& sample_cut(const CutFamily& family, RandomSource& rng);

struct CutReport {
  bool valid = true;
  bool respecting = true;
  bool balanced = true;
  bool conforming = true;
  bool small = true;
  double heaviest = 0.0;
  double total = 0.0;
  std::vector<std::string> violations;
};

CutReport verify_cut(const WeightedGraph& g, const ClusterTree& tree, int piece, const Cut& cut,
                     const std::vector<double>& weights, const std::vector<int>& conforming, int tau);

// All cuts of the family plus the single-use ledger property.
CutReport verify_cut_family(const WeightedGraph& g, const ClusterTree& tree, const CutFamily& family,
                            const std::vector<double>& weights);

// ── Contraction sequences ──

// Vertices of every intermediate graph are named by the smallest base vertex
// they absorbed; each round lists subgraphs by those names.
struct ContractionSequence {
  WeightedGraph base;
  std::vector<std::vector<std::vector<Vertex>>> rounds;
  long a = 0;
  int b = 0;
  int c = 0;
};

struct ContractionReport {
  bool valid = true;
  long subgraphs = 0;
  int max_radius = 0;
  std::vector<std::string> violations;
};

ContractionReport verify_contraction_sequence(const ContractionSequence& seq);

// The contracted graph of `piece` over its maximally available nodes, then
// every unavailable non-leaf node contracted at the round of its lowest level.
ContractionSequence contraction_sequence_from_chain(const WeightedGraph& g, const ClusterTree& tree, int piece,
                                                    const std::vector<char>& unavailable, int hop_bound);

struct GridSequence {
  WeightedGraph grid;
  ContractionSequence sequence;
  std::vector<Vertex> centers;
};

GridSequence grid_contraction_sequence(int p, int q);

// Greedy by ascending id: keep a vertex when its hop distance to every kept one exceeds spacing.
std::vector<Vertex> net_points(const WeightedGraph& g, double spacing);

}  // namespace lowtw
