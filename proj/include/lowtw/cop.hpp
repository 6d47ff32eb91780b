#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lowtw/graph.hpp"
#include "lowtw/random.hpp"
#include "lowtw/tree_decomposition.hpp"

namespace lowtw {

struct Supernode {
  int id = 0;
  std::vector<Vertex> members;
  Vertex root_vertex = -1;
  std::vector<Vertex> skeleton;
  std::vector<std::pair<Vertex, Vertex>> skeleton_edges;  // (parent, child) in the shortest-path tree
  std::vector<Vertex> dom0;                                // vertex set when the supernode was created
  std::vector<int> adjacent_ancestors;                     // supernodes adjacent to dom0 at creation
  int parent = -1;
  std::vector<int> children;
};

struct CopDecomposition {
  double delta = 0.0;
  int r = 3;
  std::vector<Supernode> supernodes;
  std::vector<int> owner;  // vertex -> supernode id
  int root = 0;

  double buffer() const { return delta / r; }
  // union of the subtree of supernode s, sorted
  std::vector<Vertex> domain(int s) const;
  // bags B_s = s plus its adjacent ancestors, over the partition tree
  TreeDecomposition expansion() const;
};

// One recursive call of the construction, recorded for diagnostics.
struct CopCall {
  enum Kind { BuildTree, GrowBuffer } kind;
  int id = 0;
  int parent = -1;
  int supernode = -1;           // created supernode (BuildTree) or grown one (GrowBuffer)
  std::vector<Vertex> region;   // H
  std::vector<Vertex> buffer;   // the buffer set of a GrowBuffer call
};

struct CopTrace {
  std::vector<CopCall> calls;
};

CopDecomposition build_cop_decomposition(const WeightedGraph& g, double delta, int r, RandomSource& rng,
                                         CopTrace* trace = nullptr);

struct CopReport {
  bool valid = true;
  bool partition_ok = true;
  bool radius_ok = true;
  bool skeleton_ok = true;
  bool buffer_ok = true;
  bool tree_ok = true;
  double max_radius = 0.0;
  double min_buffer = kInfinity;
  int max_bag_supernodes = 0;
  std::vector<std::string> violations;
  std::vector<std::string> flags;  // noteworthy but not failing
};

CopReport verify_cop_decomposition(const WeightedGraph& g, const CopDecomposition& cd);

enum class CutEvent { Build, Buffer, Split };
const char* to_string(CutEvent e);

struct CutEventRecord {
  Vertex u = -1;
  Vertex v = -1;
  CutEvent event = CutEvent::Build;
  int call = -1;
};

struct CutEventTrace {
  CopDecomposition decomposition;
  std::vector<CutEventRecord> events;  // one per cut edge, in edge order
  std::vector<int> threateners;        // per vertex: supernodes X with dist in dom0(X) to X at most 2*delta
};

CutEventTrace cut_event_trace(const WeightedGraph& g, double delta, int r, RandomSource& rng);

}  // namespace lowtw
