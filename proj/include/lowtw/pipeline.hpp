#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lowtw/embedder.hpp"
#include "lowtw/serialize.hpp"

namespace lowtw {

struct ExperimentConfig {
  WeightedGraph graph;
  std::string graph_label;
  int seeds = 1;
  std::uint64_t base_seed = 0;
  EmbedConfig embed;
  int jobs = 1;
  bool keep_artifacts = false;
};

struct SeedRecord {
  std::uint64_t seed = 0;
  bool ok = false;  // ran and verified
  std::string error;
  int tau = 0;
  int width = -1;
  int width_bound = 0;
  int depth = 0;
  double phi_root = 0.0;
  int n_calls = 0;
  int k = 0;
  int hop_bound = 0;
  int calibration_events = 0;
  double mean_excess = 0.0;
  double max_ratio = 1.0;
  double min_ratio = 1.0;
  double seconds = 0.0;
  std::vector<std::string> violations;
  Json artifact;  // embedding JSON when keep_artifacts is set
};

struct PipelineResult {
  std::vector<SeedRecord> records;  // sorted by seed
  double scale = 1.0;               // normalization factor applied to the input lengths
  double beta_hat = 0.0;            // max over levels and edges of freq * 2^i / len
  int h_hat = 0;                    // largest measured chain hop bound
  Json summary;
};

// Normalizes the graph, then for each seed: chain, embed, verify, measure.
// Errors are recorded per seed; the run continues.
PipelineResult run_pipeline(const ExperimentConfig& cfg);

std::string records_csv(const PipelineResult& r);

}  // namespace lowtw
