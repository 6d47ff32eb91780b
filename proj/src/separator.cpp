#include <algorithm>
#include <numeric>

#include "lowtw/tree_decomposition.hpp"

namespace lowtw {

double heaviest_component(const WeightedGraph& g, const std::vector<Vertex>& removed,
                          const std::vector<double>& weights) {
  VertexMask open(g.num_vertices(), 1);
  for (Vertex v : removed) open[v] = 0;
  double heaviest = 0.0;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.num_vertices(); ++s) {
    if (!open[s]) continue;
    double w = 0.0;
    open[s] = 0;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      w += weights[v];
      for (const Arc& a : g.neighbors(v))
        if (open[a.to]) open[a.to] = 0, stack.push_back(a.to);
    }
    heaviest = std::max(heaviest, w);
  }
  return heaviest;
}

namespace {

double total_weight(const std::vector<double>& w) { return std::accumulate(w.begin(), w.end(), 0.0); }

bool balanced(const WeightedGraph& g, const std::vector<Vertex>& sep, const std::vector<double>& weights,
              double limit) {
  return heaviest_component(g, sep, weights) <= limit;
}

std::optional<std::vector<Vertex>> exhaustive(const WeightedGraph& g, const std::vector<double>& weights,
                                              int cap, double limit) {
  const Vertex n = g.num_vertices();
  const int top = std::min<int>(cap, n);
  for (int size = 0; size <= top; ++size) {
    std::vector<Vertex> pick(size);
    std::iota(pick.begin(), pick.end(), 0);
    for (;;) {
      if (balanced(g, pick, weights, limit)) return pick;
      // next combination in lexicographic order
      int i = size - 1;
      while (i >= 0 && pick[i] == n - size + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return std::nullopt;
}

std::optional<std::vector<Vertex>> bag_scan(const WeightedGraph& g, const std::vector<double>& weights, int cap,
                                            double limit) {
  TreeDecomposition td = heuristic_tree_decomposition(g);
  std::optional<std::vector<Vertex>> best;
  for (const auto& bag : td.bags) {
    if (!balanced(g, bag, weights, limit)) continue;
    std::vector<Vertex> sep = bag;
    for (Vertex v : bag) {
      std::vector<Vertex> trial;
      for (Vertex u : sep)
        if (u != v) trial.push_back(u);
      if (balanced(g, trial, weights, limit)) sep = std::move(trial);
    }
    if (!best || sep.size() < best->size()) best = std::move(sep);
  }
  if (best && static_cast<int>(best->size()) <= cap) return best;
  return std::nullopt;
}

}  // namespace

bool is_balanced_separator(const WeightedGraph& g, const std::vector<Vertex>& sep,
                           const std::vector<double>& weights, double balance) {
  double w = total_weight(weights);
  return balanced(g, sep, weights, balance * w * (1.0 + 1e-12));
}

std::optional<std::vector<Vertex>> weighted_balanced_separator(const WeightedGraph& g, const SeparatorRequest& req) {
  if (static_cast<Vertex>(req.weights.size()) != g.num_vertices())
    throw GraphError("separator: weight vector size mismatch");
  for (double w : req.weights)
    if (w < 0.0) throw GraphError("separator: negative vertex weight");
  const double total = total_weight(req.weights);
  if (!(total > 0.0)) throw GraphError("separator: total weight is zero");
  if (!(req.balance > 0.0 && req.balance <= 1.0)) throw GraphError("separator: balance outside (0,1]");
  const double limit = req.balance * total * (1.0 + 1e-12);
  SeparatorMethod method = req.method;
  if (method == SeparatorMethod::Auto)
    method = g.num_vertices() <= kExhaustiveSeparatorLimit ? SeparatorMethod::Exhaustive : SeparatorMethod::BagScan;
  if (method == SeparatorMethod::Exhaustive) return exhaustive(g, req.weights, req.size_cap, limit);
  return bag_scan(g, req.weights, req.size_cap, limit);
}

}  // namespace lowtw
