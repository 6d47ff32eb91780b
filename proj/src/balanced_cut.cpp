#include "lowtw/balanced_cut.hpp"

#include <algorithm>
#include <cmath>

#include "lowtw/tree_decomposition.hpp"

namespace lowtw {

int auto_tau(double hop_bound, double aspect_ratio, int psi, double c_tau) {
  double logphi = std::max(1, ceil_log2(aspect_ratio));
  double t = c_tau * hop_bound * hop_bound * logphi * psi;
  return std::max(1, static_cast<int>(std::ceil(t - 1e-9)));
}

std::vector<int> maximal_available(const ClusterTree& tree, int piece, const std::vector<char>& unavailable) {
  std::vector<int> out;
  std::vector<int> stack{piece};
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    const auto& node = tree.nodes[x];
    if (!unavailable[x] || node.children.empty()) {
      out.push_back(x);
      continue;
    }
    for (int c : node.children) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Contracted contract_to_nodes(const WeightedGraph& g, const ClusterTree& tree, const std::vector<int>& nodes,
                             const std::vector<double>& weights) {
  Contracted ct;
  ct.node_of = nodes;
  std::vector<int> idx(g.num_vertices(), -1);
  ct.weights.assign(nodes.size(), 0.0);
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (Vertex v : tree.nodes[nodes[i]].members) {
      idx[v] = static_cast<int>(i);
      if (!weights.empty()) ct.weights[i] += weights[v];
    }
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    int a = idx[e.u], b = idx[e.v];
    if (a < 0 || b < 0 || a == b) continue;
    if (a > b) std::swap(a, b);
    edges.push_back({a, b, 1.0});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.u != y.u ? x.u < y.u : x.v < y.v; });
  edges.erase(std::unique(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.u == y.u && x.v == y.v; }),
              edges.end());
  ct.graph = WeightedGraph(static_cast<Vertex>(nodes.size()), std::move(edges));
  return ct;
}

namespace {

bool valid_node(const ClusterTree& tree, int x) { return x >= 0 && x < static_cast<int>(tree.nodes.size()); }

// conforming nodes that can matter for cuts below `piece`
std::vector<int> relevant_conforming(const ClusterTree& tree, int piece, const std::vector<int>& conforming) {
  std::vector<int> out;
  for (int x : conforming)
    if (valid_node(tree, x) && tree.is_ancestor(piece, x)) out.push_back(x);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

CutFamily build_cut_family(const WeightedGraph& g, const ClusterTree& tree, int piece,
                           const std::vector<double>& weights, const std::vector<int>& conforming, int psi, int tau,
                           int tau_cap) {
  if (!valid_node(tree, piece)) throw GraphError("cut family: unknown piece cluster");
  if (psi < 0) throw GraphError("cut family: psi must be nonnegative");
  if (tau < 0) throw GraphError("cut family: tau must be nonnegative");
  if (static_cast<Vertex>(weights.size()) != g.num_vertices()) throw GraphError("cut family: weight vector size mismatch");
  double total = 0.0;
  for (Vertex v : tree.nodes[piece].members) total += weights[v];
  if (!(total > 0.0)) throw GraphError("cut family: total weight on the piece is zero");

  CutFamily fam;
  fam.psi = psi;
  fam.tau = tau;
  fam.piece = piece;
  fam.conforming = relevant_conforming(tree, piece, conforming);
  std::vector<char> protect(tree.nodes.size(), 0);
  for (int x : fam.conforming) protect[x] = 1;
  std::vector<char> unavailable(tree.nodes.size(), 0);
  unavailable[piece] = 1;

  for (int j = 0; j < psi; ++j) {
    std::vector<int> avail = maximal_available(tree, piece, unavailable);
    Contracted ct = contract_to_nodes(g, tree, avail, weights);
    std::optional<std::vector<Vertex>> sep;
    for (;;) {
      SeparatorRequest req;
      req.weights = ct.weights;
      req.size_cap = fam.tau;
      sep = weighted_balanced_separator(ct.graph, req);
      if (sep) break;
      if (tau_cap > fam.tau) {
        int next = std::min(tau_cap, std::max(1, 2 * fam.tau));
        fam.calibration_events.push_back({j, fam.tau, next, ct.graph.num_vertices()});
        fam.tau = next;
        continue;
      }
      throw CutFamilyError("no balanced separator of size at most " + std::to_string(fam.tau) + " on " +
                               std::to_string(ct.graph.num_vertices()) + " contracted clusters",
                           ct.graph, ct.weights, fam.tau);
    }
    Cut cut;
    for (Vertex v : *sep) cut.clusters.push_back(ct.node_of[v]);
    std::sort(cut.clusters.begin(), cut.clusters.end());
    for (int x : cut.clusters) {
      if (tree.is_singleton(x) || protect[x]) continue;
      fam.ledger[x] = j;
      unavailable[x] = 1;
    }
    fam.cuts.push_back(std::move(cut));
  }
  return fam;
}

const Cut& sample_cut(const CutFamily& family, RandomSource& rng) {
  if (family.cuts.empty()) throw GraphError("sample_cut: empty family");
  return family.cuts[rng.index(family.cuts.size())];
}

CutReport verify_cut(const WeightedGraph& g, const ClusterTree& tree, int piece, const Cut& cut,
                     const std::vector<double>& weights, const std::vector<int>& conforming, int tau) {
  CutReport rep;
  auto fail = [&](bool& flag, std::string msg) {
    flag = false;
    rep.valid = false;
    rep.violations.push_back(std::move(msg));
  };
  if (!valid_node(tree, piece)) {
    fail(rep.respecting, "unknown piece cluster");
    return rep;
  }
  const Vertex n = g.num_vertices();
  VertexMask removed(n, 0);
  for (int x : cut.clusters) {
    if (!valid_node(tree, x) || !tree.is_ancestor(piece, x)) {
      fail(rep.respecting, "cluster " + std::to_string(x) + " is not a proper cluster of the piece");
      continue;
    }
    for (Vertex v : tree.nodes[x].members) {
      if (removed[v]) {
        fail(rep.respecting, "cut clusters overlap at vertex " + std::to_string(v));
        break;
      }
      removed[v] = 1;
    }
  }
  const auto& members = tree.nodes[piece].members;
  std::vector<Vertex> rest;
  for (Vertex v : members) {
    rep.total += weights[v];
    if (!removed[v]) rest.push_back(v);
  }
  for (const auto& comp : components_within(g, rest)) {
    double w = 0.0;
    for (Vertex v : comp) w += weights[v];
    rep.heaviest = std::max(rep.heaviest, w);
  }
  if (rep.heaviest > rep.total / 2.0 * (1.0 + 1e-12))
    fail(rep.balanced, "a component keeps weight " + format_length(rep.heaviest) + " of " + format_length(rep.total));
  for (int x : cut.clusters) {
    if (!valid_node(tree, x)) continue;
    for (int c : relevant_conforming(tree, piece, conforming))
      if (tree.is_ancestor(c, x))
        fail(rep.conforming, "cluster " + std::to_string(x) + " lies strictly inside protected cluster " + std::to_string(c));
  }
  if (static_cast<int>(cut.clusters.size()) > tau)
    fail(rep.small, "cut has " + std::to_string(cut.clusters.size()) + " clusters, above " + std::to_string(tau));
  return rep;
}

CutReport verify_cut_family(const WeightedGraph& g, const ClusterTree& tree, const CutFamily& family,
                            const std::vector<double>& weights) {
  CutReport all;
  if (static_cast<int>(family.cuts.size()) != family.psi) {
    all.valid = false;
    all.violations.push_back("family has " + std::to_string(family.cuts.size()) + " cuts, expected " +
                             std::to_string(family.psi));
  }
  std::map<int, int> uses;
  std::vector<char> protect(tree.nodes.size(), 0);
  for (int x : family.conforming)
    if (valid_node(tree, x)) protect[x] = 1;
  for (std::size_t j = 0; j < family.cuts.size(); ++j) {
    CutReport r = verify_cut(g, tree, family.piece, family.cuts[j], weights, family.conforming, family.tau);
    all.respecting &= r.respecting;
    all.balanced &= r.balanced;
    all.conforming &= r.conforming;
    all.small &= r.small;
    all.heaviest = std::max(all.heaviest, r.heaviest);
    all.total = r.total;
    if (!r.valid) {
      all.valid = false;
      for (auto& v : r.violations) all.violations.push_back("cut " + std::to_string(j) + ": " + v);
    }
    for (int x : family.cuts[j].clusters)
      if (valid_node(tree, x) && !tree.is_singleton(x) && !protect[x]) ++uses[x];
  }
  for (auto [x, count] : uses)
    if (count > 1) {
      all.valid = false;
      all.violations.push_back("cluster " + std::to_string(x) + " is used by " + std::to_string(count) + " cuts");
    }
  return all;
}

}  // namespace lowtw
