#include "lowtw/chain.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace lowtw {

namespace {

constexpr double kRel = 1e-9;

bool within(double d, double bound) { return d <= bound * (1.0 + kRel); }

// Ball carving inside `members`: repeatedly take the lowest remaining vertex
// and cut out everything within bound/2 of it in the remaining graph.
std::vector<std::vector<Vertex>> carve(const WeightedGraph& g, const std::vector<Vertex>& members, double bound) {
  std::vector<std::vector<Vertex>> out;
  VertexMask left = make_mask(g.num_vertices(), members);
  for (Vertex c : members) {
    if (!left[c]) continue;
    auto d = dijkstra(g, c, &left);
    std::vector<Vertex> ball;
    for (Vertex v : members)
      if (left[v] && d[v] <= bound / 2.0) ball.push_back(v);
    for (Vertex v : ball) left[v] = 0;
    out.push_back(std::move(ball));
  }
  return out;
}

struct Splitter {
  const WeightedGraph& g;
  int r;
  RandomSource& rng;
  const ChainOptions& opts;
  ClusteringChain& chain;

  // partition `members` (strong diameter `diam` > bound) into clusters of strong diameter <= bound
  std::vector<std::vector<Vertex>> split(const std::vector<Vertex>& members, double diam, double bound) {
    std::vector<std::vector<Vertex>> done;
    struct Job {
      std::vector<Vertex> members;
      double diam;
      int depth;
    };
    std::deque<Job> jobs{{members, diam, 0}};
    while (!jobs.empty()) {
      Job job = std::move(jobs.front());
      jobs.pop_front();
      if (within(job.diam, bound)) {
        done.push_back(std::move(job.members));
        continue;
      }
      if (job.members.size() <= 2) {
        for (Vertex v : job.members) done.push_back({v});
        continue;
      }
      if (job.depth >= opts.max_refine_depth) {
        ++chain.carving_events;
        for (auto& part : carve(g, job.members, bound)) done.push_back(std::move(part));
        continue;
      }
      if (job.depth > 0) ++chain.refinement_events;
      Subgraph sub = induced_subgraph(g, job.members);
      double eps = opts.target_scale ? std::min(1.0, bound / job.diam) : opts.epsilon;
      ShortcutOptions so;
      so.delta_divisor = job.depth == 0 ? opts.delta_divisor : opts.refine_divisor;
      ShortcutPartition sp = shortcut_partition(sub.graph, eps, r, rng, so);
      for (const auto& cl : sp.clustering.clusters) {
        std::vector<Vertex> part;
        part.reserve(cl.size());
        for (Vertex v : cl) part.push_back(sub.to_parent[v]);
        double d = strong_diameter(g, part);
        jobs.push_back({std::move(part), d, job.depth + 1});
      }
    }
    return done;
  }
};

}  // namespace

int quotient_hop_diameter(const WeightedGraph& g, const std::vector<Vertex>& members, const std::vector<int>& part_of) {
  std::vector<int> ids;
  for (Vertex v : members) ids.push_back(part_of[v]);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto local = [&](int p) { return static_cast<Vertex>(std::lower_bound(ids.begin(), ids.end(), p) - ids.begin()); };
  VertexMask in = make_mask(g.num_vertices(), members);
  std::vector<Edge> edges;
  for (Vertex v : members)
    for (const Arc& a : g.neighbors(v)) {
      if (!in[a.to]) continue;
      Vertex x = local(part_of[v]), y = local(part_of[a.to]);
      if (x < y) edges.push_back({x, y, 1.0});
    }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  edges.erase(std::unique(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v; }),
              edges.end());
  return hop_diameter(WeightedGraph(static_cast<Vertex>(ids.size()), std::move(edges)));
}

ClusteringChain build_chain(const WeightedGraph& g, int r, RandomSource& rng, const ChainOptions& opts) {
  const Vertex n = g.num_vertices();
  if (n == 0) throw GraphError("build_chain: empty graph");
  if (!is_connected(g)) throw GraphError("build_chain: graph is disconnected");
  if (g.num_edges() > 0 && g.min_edge_length() < 1.0 - 1e-12)
    throw GraphError("build_chain: graph is not normalized (an edge is shorter than 1)");
  ClusteringChain chain;
  chain.n = n;
  chain.universe.resize(n);
  for (Vertex v = 0; v < n; ++v) chain.universe[v] = v;
  const double diam = graph_diameter(g);
  chain.k = n == 1 ? 0 : std::max(1, ceil_log2(diam));
  chain.levels.resize(chain.k + 1);

  ChainLevel& top = chain.levels[chain.k];
  top.clusters = {chain.universe};
  top.cluster_of.assign(n, 0);
  top.parent = {-1};
  top.diameter = {diam};

  Splitter splitter{g, r, rng, opts, chain};
  for (int i = chain.k - 1; i >= 0; --i) {
    const ChainLevel& up = chain.levels[i + 1];
    ChainLevel& cur = chain.levels[i];
    cur.cluster_of.assign(n, -1);
    const double bound = std::ldexp(1.0, i);
    for (std::size_t j = 0; j < up.clusters.size(); ++j) {
      const auto& members = up.clusters[j];
      std::vector<std::vector<Vertex>> parts;
      if (i == 0) {
        for (Vertex v : members) parts.push_back({v});
      } else {
        parts = splitter.split(members, up.diameter[j], bound);
      }
      for (auto& p : parts) {
        std::sort(p.begin(), p.end());
        int id = static_cast<int>(cur.clusters.size());
        for (Vertex v : p) cur.cluster_of[v] = id;
        cur.diameter.push_back(p.size() == members.size() ? up.diameter[j] : strong_diameter(g, p));
        cur.parent.push_back(static_cast<int>(j));
        cur.clusters.push_back(std::move(p));
      }
    }
  }

  chain.hop_per_level.assign(chain.k, 0);
  for (int i = 0; i < chain.k; ++i) {
    for (const auto& c : chain.levels[i + 1].clusters)
      chain.hop_per_level[i] = std::max(chain.hop_per_level[i], quotient_hop_diameter(g, c, chain.levels[i].cluster_of));
    chain.hop_bound = std::max(chain.hop_bound, chain.hop_per_level[i]);
  }
  return chain;
}

ChainReport verify_chain(const WeightedGraph& g, const ClusteringChain& chain, int h) {
  ChainReport rep;
  auto fail = [&](std::string msg) {
    rep.valid = false;
    rep.violations.push_back(std::move(msg));
  };
  const Vertex n = g.num_vertices();
  if (chain.n != n) {
    fail("chain is over " + std::to_string(chain.n) + " vertices, graph has " + std::to_string(n));
    return rep;
  }
  if (chain.k < 0 || static_cast<int>(chain.levels.size()) != chain.k + 1) {
    fail("chain must have k+1 levels");
    return rep;
  }
  std::vector<Vertex> uni = chain.universe;
  std::sort(uni.begin(), uni.end());
  if (uni.empty() || std::adjacent_find(uni.begin(), uni.end()) != uni.end() || uni.front() < 0 || uni.back() >= n) {
    fail("chain universe is malformed");
    return rep;
  }

  bool structure_ok = true;
  for (int i = 0; i <= chain.k; ++i) {
    const ChainLevel& lv = chain.levels[i];
    const std::string tag = "level " + std::to_string(i);
    if (static_cast<Vertex>(lv.cluster_of.size()) != n || lv.parent.size() != lv.clusters.size()) {
      fail(tag + ": bookkeeping arrays have the wrong size");
      structure_ok = false;
      continue;
    }
    std::vector<int> owner(n, -1);
    bool ok = true;
    for (std::size_t c = 0; c < lv.clusters.size() && ok; ++c) {
      if (lv.clusters[c].empty()) ok = false;
      for (Vertex v : lv.clusters[c]) {
        if (v < 0 || v >= n || owner[v] != -1 || lv.cluster_of[v] != static_cast<int>(c)) {
          ok = false;
          break;
        }
        owner[v] = static_cast<int>(c);
      }
    }
    for (Vertex v = 0; v < n && ok; ++v) {
      bool member = std::binary_search(uni.begin(), uni.end(), v);
      if (member != (owner[v] != -1)) ok = false;
    }
    if (!ok) {
      fail(tag + ": clusters do not partition the vertex set");
      structure_ok = false;
      continue;
    }
    for (std::size_t c = 0; c < lv.clusters.size(); ++c)
      if (!induces_connected(g, lv.clusters[c])) fail(tag + ": cluster " + std::to_string(c) + " is not connected");
  }
  if (!structure_ok) return rep;

  if (chain.levels[chain.k].clusters.size() != 1) fail("top level is not a single cluster");
  for (const auto& c : chain.levels[0].clusters)
    if (c.size() != 1) {
      fail("level 0 is not made of singletons");
      break;
    }
  for (int i = 0; i < chain.k; ++i) {
    const ChainLevel& lv = chain.levels[i];
    const ChainLevel& up = chain.levels[i + 1];
    for (std::size_t c = 0; c < lv.clusters.size(); ++c) {
      int p = lv.parent[c];
      bool ok = p >= 0 && p < static_cast<int>(up.clusters.size());
      if (ok)
        for (Vertex v : lv.clusters[c])
          if (up.cluster_of[v] != p) ok = false;
      if (!ok) {
        fail("level " + std::to_string(i) + ": cluster " + std::to_string(c) + " is not inside its parent");
        break;
      }
    }
  }
  for (int i = 0; i <= chain.k; ++i) {
    const double bound = std::ldexp(1.0, i);
    for (std::size_t c = 0; c < chain.levels[i].clusters.size(); ++c) {
      double d = strong_diameter(g, chain.levels[i].clusters[c]);
      if (!within(d, bound))
        fail("level " + std::to_string(i) + ": cluster " + std::to_string(c) + " has strong diameter " +
             format_length(d) + " above " + format_length(bound));
    }
  }
  for (int i = 0; i < chain.k; ++i)
    for (const auto& c : chain.levels[i + 1].clusters)
      rep.measured_hop = std::max(rep.measured_hop, quotient_hop_diameter(g, c, chain.levels[i].cluster_of));
  if (h >= 0 && rep.measured_hop > h)
    fail("hop-diameter " + std::to_string(rep.measured_hop) + " exceeds " + std::to_string(h));
  return rep;
}

ClusteringChain subchain(const ClusteringChain& chain, ClusterRef c) {
  if (c.level < 0 || c.level > chain.k || c.index < 0 ||
      c.index >= static_cast<int>(chain.levels[c.level].clusters.size()))
    throw GraphError("subchain: unknown cluster");
  ClusteringChain out;
  out.n = chain.n;
  out.universe = chain.levels[c.level].clusters[c.index];
  out.k = c.level;
  out.levels.resize(c.level + 1);
  std::vector<int> remap_up;  // old index on level i+1 -> new index
  for (int i = c.level; i >= 0; --i) {
    const ChainLevel& src = chain.levels[i];
    ChainLevel& dst = out.levels[i];
    dst.cluster_of.assign(chain.n, -1);
    std::vector<int> ids;
    for (Vertex v : out.universe) ids.push_back(src.cluster_of[v]);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::vector<int> remap(src.clusters.size(), -1);
    for (int old : ids) {
      int id = static_cast<int>(dst.clusters.size());
      remap[old] = id;
      dst.clusters.push_back(src.clusters[old]);
      dst.diameter.push_back(src.diameter.empty() ? 0.0 : src.diameter[old]);
      dst.parent.push_back(i == c.level ? -1 : remap_up[src.parent[old]]);
      for (Vertex v : src.clusters[old]) dst.cluster_of[v] = id;
    }
    remap_up = std::move(remap);
  }
  out.hop_per_level.assign(out.k, 0);
  for (int i = 0; i < out.k; ++i)
    if (i < static_cast<int>(chain.hop_per_level.size())) out.hop_per_level[i] = chain.hop_per_level[i];
  out.hop_bound = out.hop_per_level.empty() ? 0 : *std::max_element(out.hop_per_level.begin(), out.hop_per_level.end());
  return out;
}

int split_scale(const ClusteringChain& chain, Vertex u, Vertex v) {
  if (u == v) throw GraphError("split_scale: vertices must differ");
  if (u < 0 || v < 0 || u >= chain.n || v >= chain.n || chain.levels[0].cluster_of[u] < 0 ||
      chain.levels[0].cluster_of[v] < 0)
    throw GraphError("split_scale: vertex outside the chain");
  for (int i = chain.k; i >= 0; --i)
    if (chain.levels[i].cluster_of[u] != chain.levels[i].cluster_of[v]) return i;
  throw GraphError("split_scale: vertices are never separated");
}

LevelEdgeFrequency estimate_separating_beta(const WeightedGraph& g, int r, int samples, RandomSource& rng,
                                            const ChainOptions& opts) {
  if (samples < 1) throw GraphError("estimate_separating_beta: samples must be positive");
  LevelEdgeFrequency t;
  t.edges = g.edges();
  t.samples = samples;
  for (int s = 0; s < samples; ++s) {
    RandomSource sub = rng.fork(static_cast<std::uint64_t>(s));
    ClusteringChain chain = build_chain(g, r, sub, opts);
    if (s == 0) {
      t.k = chain.k;
      t.frequency.assign(chain.k + 1, std::vector<double>(t.edges.size(), 0.0));
    }
    for (int i = 0; i <= chain.k; ++i)
      for (std::size_t e = 0; e < t.edges.size(); ++e)
        if (chain.levels[i].cluster_of[t.edges[e].u] != chain.levels[i].cluster_of[t.edges[e].v])
          t.frequency[i][e] += 1.0;
  }
  for (int i = 0; i <= t.k; ++i)
    for (std::size_t e = 0; e < t.edges.size(); ++e) {
      t.frequency[i][e] /= samples;
      t.beta_hat = std::max(t.beta_hat, t.frequency[i][e] * std::ldexp(1.0, i) / t.edges[e].len);
    }
  return t;
}

// ── Hierarchy ──

ClusterTree ClusterTree::from_chain(const ClusteringChain& chain) {
  ClusterTree t;
  t.node_at.resize(chain.k + 1);
  t.node_at[chain.k] = {0};
  ClusterNode root;
  root.members = chain.levels[chain.k].clusters[0];
  root.lo = root.hi = chain.k;
  t.nodes.push_back(std::move(root));
  for (int i = chain.k - 1; i >= 0; --i) {
    const ChainLevel& lv = chain.levels[i];
    t.node_at[i].resize(lv.clusters.size());
    for (std::size_t c = 0; c < lv.clusters.size(); ++c) {
      int pnode = t.node_at[i + 1][lv.parent[c]];
      if (t.nodes[pnode].members.size() == lv.clusters[c].size()) {
        t.nodes[pnode].lo = i;
        t.node_at[i][c] = pnode;
        continue;
      }
      ClusterNode node;
      node.members = lv.clusters[c];
      node.lo = node.hi = i;
      node.parent = pnode;
      int id = static_cast<int>(t.nodes.size());
      t.nodes[pnode].children.push_back(id);
      t.nodes.push_back(std::move(node));
      t.node_at[i][c] = id;
    }
  }
  t.leaf_of.assign(chain.n, -1);
  for (std::size_t c = 0; c < chain.levels[0].clusters.size(); ++c)
    t.leaf_of[chain.levels[0].clusters[c][0]] = t.node_at[0][c];
  return t;
}

bool ClusterTree::is_ancestor(int a, int b) const {
  for (int x = nodes[b].parent; x >= 0; x = nodes[x].parent)
    if (x == a) return true;
  return false;
}

}  // namespace lowtw
