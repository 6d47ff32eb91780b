#pragma once

#include <string>
#include <vector>

#include "lowtw/balanced_cut.hpp"
#include "lowtw/chain.hpp"
#include "lowtw/graph.hpp"
#include "lowtw/random.hpp"
#include "lowtw/tree_decomposition.hpp"

namespace lowtw {

// Either a fixed tau or auto_tau(h, aspect, psi, c_tau) from the sampled chain.
struct TauSpec {
  bool automatic = true;
  int fixed = 0;
  double c_tau = 1.0 / 128.0;
  int cap = 0;  // restart ceiling when a cut does not fit; 0 means n

  // "12" or "auto:0.03125" or "auto"
  static TauSpec parse(const std::string& text);
  std::string to_string() const;
};

struct EmbedConfig {
  int r = 5;
  int psi = 8;
  TauSpec tau;
  ChainOptions chain;
  bool verify_cuts = false;  // run verify_cut on every sampled cut
};

enum class CallKind { Root, Cluster, Component };
const char* to_string(CallKind k);

struct EmbedCallRecord {
  int id = 0;
  int parent = -1;
  int depth = 0;
  CallKind kind = CallKind::Root;
  int piece = 0;  // cluster tree node
  int terminals = 0;
  std::vector<Vertex> boundary;  // the call's boundary terminals
  int boundary_clusters = 0;
  double phi = 0.0;
  bool base_case = false;
  bool s_is_boundary = false;
  std::vector<int> cut;  // sampled cut, empty in the base case
  int root_bag = -1;
};

struct EmbedStats {
  int depth = 0;
  int width = -1;
  int n_calls = 0;
  int tau = 0;
  int psi = 0;
  int k = 0;
  int hop_bound = 0;
  double aspect_ratio = 1.0;
  double phi_root = 0.0;
  int max_boundary = 0;
  std::vector<CalibrationEvent> calibration_events;  // one per restart with a larger tau
  int cut_checks = 0;  // families checked in full when verify_cuts is set
  int cut_failures = 0;
};

struct EmbeddingResult {
  WeightedGraph host;
  TreeDecomposition decomposition;
  EmbedStats stats;
  std::vector<EmbedCallRecord> calls;
  ClusteringChain chain;
};

EmbeddingResult embed(const WeightedGraph& g, const EmbedConfig& cfg, RandomSource& rng);
// Same recursion over a given chain; tau must be resolved (> 0).
EmbeddingResult embed_with_chain(const WeightedGraph& g, const ClusteringChain& chain, int psi, int tau,
                                 bool verify_cuts, RandomSource& rng);

struct EmbeddingReport {
  bool valid = true;
  bool td_valid = true;
  bool width_ok = true;
  bool noncontraction_ok = true;
  bool depth_ok = true;
  bool potential_ok = true;
  bool boundary_ok = true;
  bool root_bag_ok = true;
  bool cuts_ok = true;
  int width = -1;
  int width_bound = 0;
  int depth = 0;
  double phi_root = 0.0;
  double min_ratio = kInfinity;  // smallest host / graph distance ratio
  std::vector<std::string> violations;
};

EmbeddingReport verify_embedding(const WeightedGraph& g, const EmbeddingResult& result);

struct DistortionStats {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  std::vector<double> mean_ratio;  // per pair, over results
  std::vector<double> max_ratio;
  std::vector<double> run_mean_excess;  // per result: mean over pairs of ratio - 1
  double expected_distortion = 1.0;  // max over pairs of mean_ratio
  double max_distortion = 1.0;
  double min_ratio = kInfinity;
  double mean_excess = 0.0;
  double excess_stddev = 0.0;
};

// Default pairs are the edges of g.
DistortionStats measure_distortion(const WeightedGraph& g, const std::vector<EmbeddingResult>& results,
                                   std::vector<std::pair<Vertex, Vertex>> pairs = {});

}  // namespace lowtw
