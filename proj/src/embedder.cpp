#include "lowtw/embedder.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace lowtw {

TauSpec TauSpec::parse(const std::string& text) {
  TauSpec t;
  if (text.rfind("auto", 0) == 0) {
    t.automatic = true;
    if (text.size() > 4) {
      if (text[4] != ':') throw GraphError("tau: expected auto:<c_tau>, got '" + text + "'");
      std::size_t used = 0;
      t.c_tau = std::stod(text.substr(5), &used);
      if (used != text.size() - 5 || !(t.c_tau > 0.0)) throw GraphError("tau: bad c_tau in '" + text + "'");
    }
    return t;
  }
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || v < 1) throw GraphError("tau: expected a positive integer or auto:<c_tau>, got '" + text + "'");
  t.automatic = false;
  t.fixed = v;
  return t;
}

std::string TauSpec::to_string() const {
  if (!automatic) return std::to_string(fixed);
  return "auto:" + format_length(c_tau);
}

const char* to_string(CallKind k) {
  switch (k) {
    case CallKind::Root: return "root";
    case CallKind::Cluster: return "cluster";
    case CallKind::Component: return "component";
  }
  return "?";
}

namespace {

struct BoundaryCluster {
  int node;
  Vertex rep;
};

std::vector<Vertex> sorted_union(std::vector<Vertex> a, const std::vector<Vertex>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

std::vector<Vertex> filter(const std::vector<Vertex>& xs, const VertexMask& in) {
  std::vector<Vertex> out;
  for (Vertex v : xs)
    if (in[v]) out.push_back(v);
  return out;
}

struct Embedder {
  const WeightedGraph& g;
  const ClusterTree& tree;
  int psi;
  int tau;
  bool verify_cuts;
  RandomSource& rng;
  EmbedStats& stats;

  std::vector<std::vector<double>> dist_cache;
  std::map<std::pair<Vertex, Vertex>, double> host_edges;
  TreeDecomposition td;
  std::vector<EmbedCallRecord> calls;

  const std::vector<double>& dist(Vertex s) {
    if (dist_cache[s].empty()) dist_cache[s] = dijkstra(g, s);
    return dist_cache[s];
  }

  void add_edge(Vertex u, Vertex v) {
    if (u == v) return;
    if (u > v) std::swap(u, v);
    host_edges.emplace(std::make_pair(u, v), dist(u)[v]);
  }

  int new_bag(std::vector<Vertex> bag) {
    std::sort(bag.begin(), bag.end());
    bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
    td.bags.push_back(std::move(bag));
    return static_cast<int>(td.bags.size()) - 1;
  }

  // all vertex lists sorted; returns the root bag of this call's decomposition
  int run(const std::vector<Vertex>& T, int piece, const std::vector<Vertex>& dT, const std::vector<BoundaryCluster>& dC,
          const std::vector<Vertex>& carry, int parent, int depth, CallKind kind) {
    const int id = static_cast<int>(calls.size());
    {
      EmbedCallRecord rec;
      rec.id = id;
      rec.parent = parent;
      rec.depth = depth;
      rec.kind = kind;
      rec.piece = piece;
      rec.terminals = static_cast<int>(T.size());
      rec.boundary = dT;
      rec.boundary_clusters = static_cast<int>(dC.size());
      rec.phi = 5.0 * std::log2(static_cast<double>(T.size())) + tree.nodes[piece].hi +
                static_cast<double>(dT.size()) / tau;
      calls.push_back(std::move(rec));
    }
    stats.depth = std::max(stats.depth, depth);
    stats.max_boundary = std::max(stats.max_boundary, static_cast<int>(dT.size()));

    if (static_cast<long>(T.size()) <= 4L * tau) {
      for (std::size_t i = 0; i < T.size(); ++i)
        for (std::size_t j = i + 1; j < T.size(); ++j) add_edge(T[i], T[j]);
      int bag = new_bag(sorted_union(T, carry));
      calls[id].base_case = true;
      calls[id].root_bag = bag;
      return bag;
    }

    const Vertex n = g.num_vertices();
    const bool use_boundary = static_cast<long>(dT.size()) > 4L * tau;
    std::vector<double> weights(n, 0.0);
    for (Vertex v : use_boundary ? dT : T) weights[v] = 1.0;
    std::vector<int> conforming;
    for (const auto& bc : dC) conforming.push_back(bc.node);
    CutFamily fam = build_cut_family(g, tree, piece, weights, conforming, psi, tau, 0);
    const Cut cut = sample_cut(fam, rng);
    if (verify_cuts) {
      ++stats.cut_checks;
      if (!verify_cut_family(g, tree, fam, weights).valid) ++stats.cut_failures;
    }
    calls[id].s_is_boundary = use_boundary;
    calls[id].cut = cut.clusters;

    VertexMask in_cut(n, 0);
    for (int c : cut.clusters)
      for (Vertex v : tree.nodes[c].members) in_cut[v] = 1;

    struct Part {
      int node;
      std::vector<Vertex> terminals;
      Vertex rep;
    };
    std::vector<Part> parts;
    std::vector<Vertex> t_f;
    for (int c : cut.clusters) {
      VertexMask in = make_mask(n, tree.nodes[c].members);
      std::vector<Vertex> tc = filter(T, in);
      if (tc.empty()) continue;
      t_f.push_back(tc.front());
      parts.push_back({c, std::move(tc), t_f.back()});
    }
    std::sort(t_f.begin(), t_f.end());
    const int root = new_bag(sorted_union(sorted_union(t_f, dT), carry));
    calls[id].root_bag = root;

    for (const Part& p : parts) {
      VertexMask in = make_mask(n, tree.nodes[p.node].members);
      std::vector<Vertex> dtc = filter(dT, in);
      std::vector<BoundaryCluster> dcc;
      for (const auto& bc : dC)
        if (std::binary_search(dtc.begin(), dtc.end(), bc.rep)) dcc.push_back(bc);
      int child = run(p.terminals, p.node, dtc, dcc, sorted_union(carry, {p.rep}), id, depth + 1, CallKind::Cluster);
      td.edges.emplace_back(root, child);
      for (Vertex u : p.terminals) add_edge(p.rep, u);
    }

    std::vector<Vertex> rest;
    for (Vertex v : tree.nodes[piece].members)
      if (!in_cut[v]) rest.push_back(v);
    bool bare_done = false;  // components without terminals all yield the same call
    for (const auto& h : components_within(g, rest)) {
      VertexMask in = make_mask(n, h);
      std::vector<Vertex> th = filter(T, in);
      if (th.empty()) {
        if (bare_done || t_f.empty()) continue;
        bare_done = true;
      }
      std::vector<Vertex> dth = filter(dT, in);
      std::vector<BoundaryCluster> dch;
      for (const Part& p : parts) dch.push_back({p.node, p.rep});
      for (const auto& bc : dC)
        if (std::binary_search(dth.begin(), dth.end(), bc.rep)) dch.push_back(bc);
      int child = run(sorted_union(th, t_f), piece, sorted_union(dth, t_f), dch, carry, id, depth + 1,
                      CallKind::Component);
      td.edges.emplace_back(root, child);
    }
    return root;
  }
};

}  // namespace

EmbeddingResult embed_with_chain(const WeightedGraph& g, const ClusteringChain& chain, int psi, int tau,
                                 bool verify_cuts, RandomSource& rng) {
  if (tau < 1) throw GraphError("embed: tau must be positive");
  if (psi < 1) throw GraphError("embed: psi must be positive");
  if (chain.n != g.num_vertices() || static_cast<Vertex>(chain.universe.size()) != g.num_vertices())
    throw GraphError("embed: chain does not cover the graph");
  EmbeddingResult res;
  res.chain = chain;
  ClusterTree tree = ClusterTree::from_chain(chain);
  res.stats.tau = tau;
  res.stats.psi = psi;
  res.stats.k = chain.k;
  res.stats.hop_bound = chain.hop_bound;
  Embedder e{g, tree, psi, tau, verify_cuts, rng, res.stats, {}, {}, {}, {}};
  e.dist_cache.resize(g.num_vertices());
  e.run(chain.universe, tree.root, {}, {}, {}, -1, 0, CallKind::Root);
  std::vector<Edge> edges;
  edges.reserve(e.host_edges.size());
  for (const auto& [uv, w] : e.host_edges) edges.push_back({uv.first, uv.second, w});
  res.host = WeightedGraph(g.num_vertices(), std::move(edges));
  res.decomposition = std::move(e.td);
  res.decomposition.root = 0;
  res.calls = std::move(e.calls);
  res.stats.n_calls = static_cast<int>(res.calls.size());
  res.stats.width = res.decomposition.width();
  res.stats.phi_root = res.calls.front().phi;
  return res;
}

EmbeddingResult embed(const WeightedGraph& g, const EmbedConfig& cfg, RandomSource& rng) {
  RandomSource chain_rng = rng.fork(1);
  ClusteringChain chain = build_chain(g, cfg.r, chain_rng, cfg.chain);
  GraphMetrics m = compute_metrics(g);
  int tau = cfg.tau.automatic ? auto_tau(chain.hop_bound, m.aspect_ratio, cfg.psi, cfg.tau.c_tau) : cfg.tau.fixed;
  const int cap = cfg.tau.cap > 0 ? std::max(cfg.tau.cap, tau) : std::max<int>(g.num_vertices(), tau);
  std::vector<CalibrationEvent> events;
  for (int attempt = 0;; ++attempt) {
    RandomSource cut_rng = rng.fork(2 + static_cast<std::uint64_t>(attempt));
    try {
      EmbeddingResult res = embed_with_chain(g, chain, cfg.psi, tau, cfg.verify_cuts, cut_rng);
      res.stats.aspect_ratio = m.aspect_ratio;
      res.stats.calibration_events = std::move(events);
      return res;
    } catch (const CutFamilyError& err) {
      if (tau >= cap) throw;
      int next = std::min(cap, 2 * tau);
      events.push_back({attempt, tau, next, err.contracted.num_vertices()});
      tau = next;
    }
  }
}

EmbeddingReport verify_embedding(const WeightedGraph& g, const EmbeddingResult& result) {
  EmbeddingReport rep;
  auto fail = [&](bool& flag, std::string msg) {
    flag = false;
    rep.valid = false;
    if (rep.violations.size() < 50) rep.violations.push_back(std::move(msg));
  };
  const Vertex n = g.num_vertices();
  const int tau = result.stats.tau;
  if (result.host.num_vertices() != n) {
    fail(rep.td_valid, "host graph has " + std::to_string(result.host.num_vertices()) + " vertices, expected " +
                           std::to_string(n));
    return rep;
  }
  TdReport td = verify_tree_decomposition(result.host, result.decomposition);
  rep.width = td.width;
  if (!td.valid)
    for (const auto& v : td.violations) fail(rep.td_valid, "tree decomposition: " + v);

  rep.depth = 0;
  for (const auto& c : result.calls) rep.depth = std::max(rep.depth, c.depth);
  rep.width_bound = 6 * tau + rep.depth;
  if (rep.width > rep.width_bound)
    fail(rep.width_ok, "width " + std::to_string(rep.width) + " exceeds 6*tau + depth = " + std::to_string(rep.width_bound));

  auto dg = all_pairs_distances(g);
  auto dh = all_pairs_distances(result.host);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) {
      double ratio = dh[u][v] / dg[u][v];
      rep.min_ratio = std::min(rep.min_ratio, ratio);
      if (dh[u][v] < dg[u][v] * (1.0 - 1e-9))
        fail(rep.noncontraction_ok, "host distance " + format_length(dh[u][v]) + " between " + std::to_string(u) +
                                        " and " + std::to_string(v) + " is below " + format_length(dg[u][v]));
    }
  if (n < 2) rep.min_ratio = 1.0;

  if (result.calls.empty()) {
    fail(rep.depth_ok, "no call records");
    return rep;
  }
  rep.phi_root = 5.0 * std::log2(static_cast<double>(std::max<Vertex>(n, 1))) + result.chain.k;
  if (rep.depth > rep.phi_root + 1e-9)
    fail(rep.depth_ok, "depth " + std::to_string(rep.depth) + " exceeds 5 log2 n + k = " + format_length(rep.phi_root));
  for (const auto& c : result.calls) {
    if (c.parent >= 0 && c.phi > result.calls[c.parent].phi - 1.0 + 1e-9)
      fail(rep.potential_ok, "call " + std::to_string(c.id) + " has potential " + format_length(c.phi) +
                                 ", parent has " + format_length(result.calls[c.parent].phi));
    if (static_cast<long>(c.boundary.size()) > 5L * tau)
      fail(rep.boundary_ok, "call " + std::to_string(c.id) + " has " + std::to_string(c.boundary.size()) +
                                " boundary terminals, above 5*tau");
    if (c.root_bag < 0 || c.root_bag >= static_cast<int>(result.decomposition.bags.size())) {
      fail(rep.root_bag_ok, "call " + std::to_string(c.id) + " has no root bag");
      continue;
    }
    const auto& bag = result.decomposition.bags[c.root_bag];
    for (Vertex v : c.boundary)
      if (std::find(bag.begin(), bag.end(), v) == bag.end()) {
        fail(rep.root_bag_ok, "call " + std::to_string(c.id) + ": boundary vertex " + std::to_string(v) +
                                  " missing from its root bag");
        break;
      }
  }
  if (result.stats.cut_failures > 0)
    fail(rep.cuts_ok, std::to_string(result.stats.cut_failures) + " of " + std::to_string(result.stats.cut_checks) +
                          " cut families failed verification");
  return rep;
}

DistortionStats measure_distortion(const WeightedGraph& g, const std::vector<EmbeddingResult>& results,
                                   std::vector<std::pair<Vertex, Vertex>> pairs) {
  if (results.empty()) throw GraphError("measure_distortion: no results");
  DistortionStats st;
  if (pairs.empty())
    for (const auto& e : g.edges()) pairs.emplace_back(e.u, e.v);
  st.pairs = pairs;
  const std::size_t m = pairs.size();
  st.mean_ratio.assign(m, 0.0);
  st.max_ratio.assign(m, 0.0);
  std::map<Vertex, std::vector<std::size_t>> by_source;
  for (std::size_t i = 0; i < m; ++i) by_source[pairs[i].first].push_back(i);
  std::vector<double> base(m);
  for (const auto& [s, idx] : by_source) {
    auto d = dijkstra(g, s);
    for (std::size_t i : idx) base[i] = d[pairs[i].second];
  }
  for (const auto& res : results) {
    double excess = 0.0;
    for (const auto& [s, idx] : by_source) {
      auto d = dijkstra(res.host, s);
      for (std::size_t i : idx) {
        double ratio = d[pairs[i].second] / base[i];
        st.mean_ratio[i] += ratio;
        st.max_ratio[i] = std::max(st.max_ratio[i], ratio);
        st.min_ratio = std::min(st.min_ratio, ratio);
        excess += ratio - 1.0;
      }
    }
    st.run_mean_excess.push_back(m ? excess / m : 0.0);
  }
  if (m == 0) st.min_ratio = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    st.mean_ratio[i] /= results.size();
    st.expected_distortion = std::max(st.expected_distortion, st.mean_ratio[i]);
    st.max_distortion = std::max(st.max_distortion, st.max_ratio[i]);
  }
  double sum = 0.0, sq = 0.0;
  for (double x : st.run_mean_excess) sum += x;
  st.mean_excess = sum / results.size();
  for (double x : st.run_mean_excess) sq += (x - st.mean_excess) * (x - st.mean_excess);
  st.excess_stddev = results.size() > 1 ? std::sqrt(sq / (results.size() - 1)) : 0.0;
  return st;
}

}  // namespace lowtw
