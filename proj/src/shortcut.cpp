#include "lowtw/shortcut.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <queue>
#include <tuple>

namespace lowtw {

namespace {

// distances along the skeleton tree from `from`, indexed like `skeleton`
std::vector<double> tree_distances(const WeightedGraph& g, const Supernode& s, std::size_t from) {
  const auto& sk = s.skeleton;
  auto index = [&](Vertex v) {
    return static_cast<std::size_t>(std::lower_bound(sk.begin(), sk.end(), v) - sk.begin());
  };
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(sk.size());
  for (auto [p, c] : s.skeleton_edges) {
    double len = g.edge_length(p, c);
    adj[index(p)].emplace_back(index(c), len);
    adj[index(c)].emplace_back(index(p), len);
  }
  std::vector<double> d(sk.size(), kInfinity);
  d[from] = 0.0;
  std::vector<std::size_t> stack{from};
  while (!stack.empty()) {
    std::size_t x = stack.back();
    stack.pop_back();
    for (auto [y, len] : adj[x])
      if (d[y] == kInfinity) d[y] = d[x] + len, stack.push_back(y);
  }
  return d;
}

// greedy net of the skeleton at spacing delta, scanning by (root distance, id)
std::vector<Vertex> skeleton_net(const WeightedGraph& g, const Supernode& s, double delta) {
  const auto& sk = s.skeleton;
  std::size_t root = std::lower_bound(sk.begin(), sk.end(), s.root_vertex) - sk.begin();
  std::vector<double> from_root = tree_distances(g, s, root);
  std::vector<std::size_t> order(sk.size());
  for (std::size_t i = 0; i < sk.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return from_root[a] != from_root[b] ? from_root[a] < from_root[b] : sk[a] < sk[b];
  });
  std::vector<double> to_net(sk.size(), kInfinity);
  std::vector<Vertex> net;
  for (std::size_t i : order) {
    if (to_net[i] <= delta) continue;
    net.push_back(sk[i]);
    auto d = tree_distances(g, s, i);
    for (std::size_t j = 0; j < sk.size(); ++j) to_net[j] = std::min(to_net[j], d[j]);
  }
  return net;
}

}  // namespace

ShortcutPartition shortcut_partition(const WeightedGraph& g, double epsilon, int r, RandomSource& rng,
                                     const ShortcutOptions& opts) {
  if (g.num_vertices() == 0) throw GraphError("shortcut partition: empty graph");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw GraphError("shortcut partition: epsilon outside (0,1]");
  if (!is_connected(g)) throw GraphError("shortcut partition: graph is disconnected");
  ShortcutPartition sp;
  sp.epsilon = epsilon;
  sp.diameter = graph_diameter(g);
  if (sp.diameter == 0.0) {
    sp.clustering = VertexPartition::whole(g.num_vertices());
    sp.centers = {0};
    sp.cluster_supernode = {0};
    sp.nets = {{0}};
    sp.source.r = r;
    sp.source.owner.assign(1, 0);
    Supernode s;
    s.members = s.skeleton = s.dom0 = {0};
    s.root_vertex = 0;
    sp.source.supernodes.push_back(s);
    return sp;
  }
  const double delta = epsilon * sp.diameter / opts.delta_divisor;
  sp.delta_internal = delta;
  sp.source = build_cop_decomposition(g, delta, r, rng);
  const Vertex n = g.num_vertices();

  std::vector<std::vector<Vertex>> clusters;
  for (const auto& s : sp.source.supernodes) {
    std::vector<Vertex> net = skeleton_net(g, s, delta);
    std::vector<double> shift(net.size());
    for (auto& a : shift) a = rng.uniform() * delta;

    // each member joins the center minimizing (distance inside the supernode + shift, center id)
    VertexMask inside = make_mask(n, s.members);
    std::vector<double> key(n, kInfinity);
    std::vector<Vertex> label(n, -1);
    using Item = std::tuple<double, Vertex, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    for (std::size_t i = 0; i < net.size(); ++i) {
      Vertex x = net[i];
      if (shift[i] < key[x] || (shift[i] == key[x] && x < label[x])) {
        key[x] = shift[i];
        label[x] = x;
        pq.emplace(key[x], x, x);
      }
    }
    while (!pq.empty()) {
      auto [k, c, v] = pq.top();
      pq.pop();
      if (k != key[v] || c != label[v]) continue;
      for (const Arc& a : g.neighbors(v)) {
        if (!inside[a.to]) continue;
        double nk = k + a.len;
        if (nk < key[a.to] || (nk == key[a.to] && c < label[a.to])) {
          key[a.to] = nk;
          label[a.to] = c;
          pq.emplace(nk, c, a.to);
        }
      }
    }
    std::map<Vertex, std::vector<Vertex>> by_center;
    for (Vertex v : s.members) {
      if (label[v] < 0) throw GraphError("shortcut partition: member unreachable from the net");
      by_center[label[v]].push_back(v);
    }
    for (Vertex x : net) {
      auto it = by_center.find(x);
      if (it == by_center.end()) continue;
      clusters.push_back(std::move(it->second));
      sp.centers.push_back(x);
      sp.cluster_supernode.push_back(s.id);
    }
    sp.nets.push_back(std::move(net));
  }
  sp.clustering = VertexPartition::from_clusters(n, std::move(clusters));
  return sp;
}

ShortcutReport verify_shortcut_partition(const WeightedGraph& g, const ShortcutPartition& sp) {
  ShortcutReport rep;
  auto fail = [&](std::string msg) {
    rep.valid = false;
    rep.violations.push_back(std::move(msg));
  };
  const Vertex n = g.num_vertices();
  std::vector<int> seen(n, -1);
  for (std::size_t c = 0; c < sp.clustering.clusters.size(); ++c) {
    for (Vertex v : sp.clustering.clusters[c]) {
      if (!g.valid_vertex(v) || seen[v] != -1) {
        fail("cluster " + std::to_string(c) + " has an invalid or shared vertex");
        return rep;
      }
      seen[v] = static_cast<int>(c);
    }
  }
  for (Vertex v = 0; v < n; ++v)
    if (seen[v] == -1) {
      fail("vertex " + std::to_string(v) + " is in no cluster");
      return rep;
    }
  const double bound = sp.epsilon * sp.diameter;
  for (std::size_t c = 0; c < sp.clustering.clusters.size(); ++c) {
    const auto& cl = sp.clustering.clusters[c];
    if (!induces_connected(g, cl)) {
      fail("cluster " + std::to_string(c) + " is not connected");
      continue;
    }
    double d = strong_diameter(g, cl);
    rep.max_cluster_diameter = std::max(rep.max_cluster_diameter, d);
    if (d > bound * (1.0 + 1e-9))
      fail("cluster " + std::to_string(c) + " has strong diameter " + format_length(d) + " above " +
           format_length(bound));
    if (c < sp.centers.size() && !std::binary_search(cl.begin(), cl.end(), sp.centers[c]))
      fail("cluster " + std::to_string(c) + " does not contain its center");
  }
  // net spacing and covering along each skeleton
  const double delta = sp.delta_internal;
  for (std::size_t s = 0; s < sp.nets.size() && s < sp.source.supernodes.size() && delta > 0.0; ++s) {
    const Supernode& x = sp.source.supernodes[s];
    const auto& sk = x.skeleton;
    std::vector<double> cover(sk.size(), kInfinity);
    for (Vertex c : sp.nets[s]) {
      auto it = std::lower_bound(sk.begin(), sk.end(), c);
      if (it == sk.end() || *it != c) {
        fail("net point " + std::to_string(c) + " is off its skeleton");
        continue;
      }
      auto d = tree_distances(g, x, it - sk.begin());
      for (Vertex o : sp.nets[s]) {
        if (o == c) continue;
        auto jt = std::lower_bound(sk.begin(), sk.end(), o);
        if (jt != sk.end() && *jt == o && d[jt - sk.begin()] < delta * (1.0 - 1e-12))
          fail("net points " + std::to_string(c) + " and " + std::to_string(o) + " are closer than delta");
      }
      for (std::size_t j = 0; j < sk.size(); ++j) cover[j] = std::min(cover[j], d[j]);
    }
    for (std::size_t j = 0; j < sk.size(); ++j)
      if (cover[j] > delta * (1.0 + 1e-12)) {
        fail("skeleton vertex " + std::to_string(sk[j]) + " is farther than delta from the net");
        break;
      }
  }
  return rep;
}

LowHopReport verify_low_hop(const WeightedGraph& g, const ShortcutPartition& sp, double h, Vertex cap) {
  const Vertex n = g.num_vertices();
  if (n > cap) throw GraphError("verify_low_hop: graph has more than " + std::to_string(cap) + " vertices");
  LowHopReport rep;
  Quotient q = contract_clusters(g, sp.clustering);
  rep.quotient_hop_diameter = hop_diameter(q.graph);
  const double unit = sp.epsilon * sp.diameter;
  const int nc = q.graph.num_vertices();
  std::vector<char> allowed(nc, 0);
  std::vector<int> hop(nc, -1);
  long failures = 0;
  for (Vertex u = 0; u < n; ++u) {
    ShortestPathTree spt = shortest_path_tree(g, std::span<const Vertex>(&u, 1));
    for (Vertex v = u + 1; v < n; ++v) {
      std::vector<Vertex> path = extract_path(spt, v);
      std::vector<int> touched;
      for (Vertex x : path) {
        int c = q.eta[x];
        if (!allowed[c]) allowed[c] = 1, touched.push_back(c);
      }
      // BFS in the quotient through clusters met by the path
      int src = q.eta[u], dst = q.eta[v];
      std::deque<int> bfs{src};
      hop[src] = 0;
      std::vector<int> visited{src};
      while (!bfs.empty() && hop[dst] < 0) {
        int c = bfs.front();
        bfs.pop_front();
        for (const Arc& a : q.graph.neighbors(c)) {
          if (!allowed[a.to] || hop[a.to] >= 0) continue;
          hop[a.to] = hop[c] + 1;
          visited.push_back(a.to);
          bfs.push_back(a.to);
        }
      }
      int hops = hop[dst];
      for (int c : visited) hop[c] = -1;
      for (int c : touched) allowed[c] = 0;
      if (hops < 0) hops = static_cast<int>(touched.size());  // unreachable cannot happen on a path
      ++rep.pairs_checked;
      if (hops == 0) continue;
      double units = unit > 0.0 ? std::ceil(spt.dist[v] / unit - 1e-9) : 1.0;
      units = std::max(units, 1.0);
      rep.hops_per_unit = std::max(rep.hops_per_unit, hops / units);
      rep.h_hat = std::max(rep.h_hat, hops / (sp.epsilon * units));
      if (h >= 0.0 && hops > sp.epsilon * h * units + 1e-9) {
        if (++failures <= 5)
          rep.violations.push_back("pair " + std::to_string(u) + "," + std::to_string(v) + " needs " +
                                   std::to_string(hops) + " hops");
        rep.valid = false;
      }
    }
  }
  if (failures > 5) rep.violations.push_back(std::to_string(failures) + " failing pairs in total");
  return rep;
}

EdgeFrequencyTable estimate_shortcut_cut_probability(const WeightedGraph& g, double epsilon, int r, int samples,
                                                     RandomSource& rng, const ShortcutOptions& opts) {
  if (samples < 1) throw GraphError("estimate_shortcut_cut_probability: samples must be positive");
  EdgeFrequencyTable t;
  t.edges = g.edges();
  t.samples = samples;
  t.frequency.assign(t.edges.size(), 0.0);
  if (t.edges.empty()) {
    t.edges.clear();
    return t;
  }
  double diam = 0.0;
  for (int s = 0; s < samples; ++s) {
    RandomSource sub = rng.fork(static_cast<std::uint64_t>(s));
    ShortcutPartition sp = shortcut_partition(g, epsilon, r, sub, opts);
    diam = sp.diameter;
    for (std::size_t i = 0; i < t.edges.size(); ++i)
      if (sp.clustering.cluster_of[t.edges[i].u] != sp.clustering.cluster_of[t.edges[i].v]) t.frequency[i] += 1.0;
  }
  for (std::size_t i = 0; i < t.edges.size(); ++i) {
    t.frequency[i] /= samples;
    t.beta_hat = std::max(t.beta_hat, t.frequency[i] * epsilon * diam / t.edges[i].len);
  }
  return t;
}

}  // namespace lowtw
