#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lowtw/balanced_cut.hpp"
#include "lowtw/chain.hpp"
#include "lowtw/cop.hpp"
#include "lowtw/embedder.hpp"
#include "lowtw/shortcut.hpp"
#include "lowtw/tree_decomposition.hpp"

namespace lowtw {

using Json = nlohmann::ordered_json;

// Every artifact carries a "kind" field: chain, cop, shortcut, cut_family, embedding.
Json to_json(const TreeDecomposition& td);
Json to_json(const ClusteringChain& chain);
Json to_json(const CopDecomposition& cd);
Json to_json(const ShortcutPartition& sp);
Json to_json(const WeightedGraph& g);
Json to_json(const EmbeddingResult& r);

// A cut family is stored with the chain and weights it was built from.
struct CutFamilyArtifact {
  ClusteringChain chain;
  std::vector<double> weights;
  CutFamily family;
};
Json to_json(const CutFamilyArtifact& a);

TreeDecomposition tree_decomposition_from_json(const Json& j);
ClusteringChain chain_from_json(const Json& j);
CopDecomposition cop_from_json(const Json& j);
ShortcutPartition shortcut_from_json(const Json& j);
WeightedGraph graph_from_json(const Json& j);
EmbeddingResult embedding_from_json(const Json& j);
CutFamilyArtifact cut_family_from_json(const Json& j);

struct VerifyOutcome {
  std::string kind;
  bool valid = true;
  std::vector<std::string> violations;
  Json summary;
};

// Dispatch on the "kind" field; parse problems throw.
VerifyOutcome verify_artifact(const WeightedGraph& g, const Json& artifact);

std::string dump(const Json& j);

}  // namespace lowtw
