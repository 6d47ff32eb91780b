#include <algorithm>
#include <deque>
#include <map>

#include "lowtw/balanced_cut.hpp"

namespace lowtw {

ContractionReport verify_contraction_sequence(const ContractionSequence& seq) {
  ContractionReport rep;
  auto fail = [&](std::string msg) {
    rep.valid = false;
    if (rep.violations.size() < 20) rep.violations.push_back(std::move(msg));
  };
  const WeightedGraph& g = seq.base;
  const Vertex n = g.num_vertices();
  if (static_cast<int>(seq.rounds.size()) != seq.b)
    fail("sequence has " + std::to_string(seq.rounds.size()) + " rounds, expected b = " + std::to_string(seq.b));

  std::vector<Vertex> rep_of(n);
  std::vector<std::vector<Vertex>> blob(n);
  for (Vertex v = 0; v < n; ++v) rep_of[v] = v, blob[v] = {v};

  for (std::size_t i = 0; i < seq.rounds.size(); ++i) {
    const std::string tag = "round " + std::to_string(i + 1);
    // adjacency of the current graph, keyed by representative
    std::vector<std::vector<Vertex>> adj(n);
    for (const auto& e : g.edges()) {
      Vertex a = rep_of[e.u], b = rep_of[e.v];
      if (a == b) continue;
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    for (auto& l : adj) {
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
    }
    std::vector<char> used(n, 0);
    std::vector<std::vector<Vertex>> merges;
    for (const auto& h : seq.rounds[i]) {
      ++rep.subgraphs;
      bool ok = !h.empty();
      for (Vertex x : h) {
        if (x < 0 || x >= n || rep_of[x] != x) {
          fail(tag + ": subgraph names a vertex that is not in the current graph");
          ok = false;
          break;
        }
        if (used[x]) {
          fail(tag + ": subgraphs overlap at " + std::to_string(x));
          ok = false;
          break;
        }
        used[x] = 1;
      }
      if (!ok) continue;
      std::vector<char> in(n, 0);
      for (Vertex x : h) in[x] = 1;
      int radius = -1;
      bool connected = true;
      for (Vertex s : h) {
        std::map<Vertex, int> dist{{s, 0}};
        std::deque<Vertex> q{s};
        int ecc = 0;
        while (!q.empty()) {
          Vertex x = q.front();
          q.pop_front();
          ecc = std::max(ecc, dist[x]);
          for (Vertex y : adj[x])
            if (in[y] && !dist.count(y)) dist[y] = dist[x] + 1, q.push_back(y);
        }
        if (dist.size() != h.size()) {
          connected = false;
          break;
        }
        if (radius < 0 || ecc < radius) radius = ecc;
      }
      if (!connected) {
        fail(tag + ": subgraph is not connected");
        continue;
      }
      rep.max_radius = std::max(rep.max_radius, radius);
      if (radius > seq.c) fail(tag + ": subgraph radius " + std::to_string(radius) + " exceeds c = " + std::to_string(seq.c));
      merges.push_back(h);
    }
    for (const auto& h : merges) {
      Vertex keep = *std::min_element(h.begin(), h.end());
      for (Vertex x : h) {
        if (x == keep) continue;
        for (Vertex v : blob[x]) rep_of[v] = keep;
        blob[keep].insert(blob[keep].end(), blob[x].begin(), blob[x].end());
        blob[x].clear();
      }
    }
  }
  Vertex alive = 0;
  for (Vertex v = 0; v < n; ++v)
    if (rep_of[v] == v) ++alive;
  if (n > 0 && alive != 1) fail("final graph has " + std::to_string(alive) + " vertices");
  if (rep.subgraphs > seq.a) fail("total subgraph count " + std::to_string(rep.subgraphs) + " exceeds a = " + std::to_string(seq.a));
  return rep;
}

ContractionSequence contraction_sequence_from_chain(const WeightedGraph& g, const ClusterTree& tree, int piece,
                                                    const std::vector<char>& unavailable, int hop_bound) {
  if (piece < 0 || piece >= static_cast<int>(tree.nodes.size())) throw GraphError("contraction sequence: unknown piece");
  if (!unavailable[piece]) throw GraphError("contraction sequence: the piece must be unavailable");
  std::vector<int> base = maximal_available(tree, piece, unavailable);
  Contracted ct = contract_to_nodes(g, tree, base, {});
  ContractionSequence seq;
  seq.base = ct.graph;
  seq.b = tree.nodes[piece].hi;
  seq.c = hop_bound;
  seq.rounds.assign(seq.b, {});

  std::vector<Vertex> label(tree.nodes.size(), -1);
  for (std::size_t i = 0; i < base.size(); ++i) label[base[i]] = static_cast<Vertex>(i);
  // top part of the hierarchy: unavailable nodes not hidden under an available one
  std::vector<int> top;
  std::vector<int> stack{piece};
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    if (label[x] >= 0 && !unavailable[x]) continue;
    top.push_back(x);
    for (int c : tree.nodes[x].children) stack.push_back(c);
  }
  seq.a = static_cast<long>(top.size());
  // children before parents: lowest level first
  std::sort(top.begin(), top.end(), [&](int x, int y) {
    return tree.nodes[x].lo != tree.nodes[y].lo ? tree.nodes[x].lo < tree.nodes[y].lo : x < y;
  });
  for (int x : top) {
    const auto& node = tree.nodes[x];
    if (node.children.empty()) continue;
    std::vector<Vertex> sub;
    for (int c : node.children) sub.push_back(label[c]);
    std::sort(sub.begin(), sub.end());
    label[x] = sub.front();
    if (node.lo < 1 || node.lo > seq.b) throw GraphError("contraction sequence: node outside the round range");
    seq.rounds[node.lo - 1].push_back(std::move(sub));
  }
  return seq;
}

GridSequence grid_contraction_sequence(int p, int q) {
  if (p < 2 || q < 1) throw GraphError("grid contraction sequence: need p >= 2 and q >= 1");
  const int side = p * q;
  auto id = [side](int x, int y) { return static_cast<Vertex>(y * side + x); };
  std::vector<Edge> edges;
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) {
      if (x + 1 < side) edges.push_back({id(x, y), id(x + 1, y), 1.0});
      if (y + 1 < side) edges.push_back({id(x, y), id(x, y + 1), 1.0});
    }
  GridSequence out;
  out.grid = WeightedGraph(side * side, edges);
  const Vertex n = out.grid.num_vertices();
  std::vector<Vertex> rep_of(n);
  for (Vertex v = 0; v < n; ++v) rep_of[v] = v;
  auto block_of = [&](Vertex v) { return (v / side / q) * p + (v % side) / q; };

  // grow one blob per block around its center, one ring per round
  const int mid = (q - 1) / 2;
  std::vector<std::vector<Vertex>> blob(p * p);
  for (int by = 0; by < p; ++by)
    for (int bx = 0; bx < p; ++bx) {
      Vertex c = id(bx * q + mid, by * q + mid);
      out.centers.push_back(c);
      blob[by * p + bx] = {c};
    }
  auto name = [&](int b) { return *std::min_element(blob[b].begin(), blob[b].end()); };
  auto& rounds = out.sequence.rounds;
  for (;;) {
    std::vector<std::vector<Vertex>> round;
    std::vector<std::vector<Vertex>> grow(p * p);
    for (int b = 0; b < p * p; ++b) {
      std::vector<Vertex> add;
      for (Vertex v : blob[b])
        for (const Arc& a : out.grid.neighbors(v))
          if (block_of(a.to) == b && rep_of[a.to] == a.to &&
              std::find(blob[b].begin(), blob[b].end(), a.to) == blob[b].end())
            add.push_back(a.to);
      std::sort(add.begin(), add.end());
      add.erase(std::unique(add.begin(), add.end()), add.end());
      if (add.empty()) continue;
      std::vector<Vertex> sub = add;
      sub.push_back(name(b));
      std::sort(sub.begin(), sub.end());
      round.push_back(sub);
      grow[b] = std::move(add);
    }
    if (round.empty()) break;
    for (int b = 0; b < p * p; ++b) {
      if (grow[b].empty()) continue;
      blob[b].insert(blob[b].end(), grow[b].begin(), grow[b].end());
      Vertex keep = name(b);
      for (Vertex v : blob[b]) rep_of[v] = keep;
    }
    rounds.push_back(std::move(round));
  }

  // the blobs now form a p x p grid; halve it along x, then y, until one vertex remains
  std::vector<std::vector<int>> cell(p, std::vector<int>(p));  // cell[y][x] -> blob index
  for (int y = 0; y < p; ++y)
    for (int x = 0; x < p; ++x) cell[y][x] = y * p + x;
  bool along_x = true;
  while (cell.size() > 1 || cell[0].size() > 1) {
    std::vector<std::vector<Vertex>> round;
    if (along_x && cell[0].size() > 1) {
      std::vector<std::vector<int>> next(cell.size());
      for (std::size_t y = 0; y < cell.size(); ++y)
        for (std::size_t x = 0; x < cell[y].size(); x += 2) {
          if (x + 1 < cell[y].size()) {
            int a = cell[y][x], b = cell[y][x + 1];
            std::vector<Vertex> sub{name(a), name(b)};
            std::sort(sub.begin(), sub.end());
            round.push_back(sub);
            blob[a].insert(blob[a].end(), blob[b].begin(), blob[b].end());
            blob[b].clear();
          }
          next[y].push_back(cell[y][x]);
        }
      cell = std::move(next);
    } else if (!along_x && cell.size() > 1) {
      std::vector<std::vector<int>> next;
      for (std::size_t y = 0; y < cell.size(); y += 2) {
        if (y + 1 < cell.size())
          for (std::size_t x = 0; x < cell[y].size(); ++x) {
            int a = cell[y][x], b = cell[y + 1][x];
            std::vector<Vertex> sub{name(a), name(b)};
            std::sort(sub.begin(), sub.end());
            round.push_back(sub);
            blob[a].insert(blob[a].end(), blob[b].begin(), blob[b].end());
            blob[b].clear();
          }
        next.push_back(cell[y]);
      }
      cell = std::move(next);
    }
    along_x = !along_x;
    if (!round.empty()) rounds.push_back(std::move(round));
  }
  out.sequence.base = out.grid;
  out.sequence.b = static_cast<int>(rounds.size());
  out.sequence.c = 1;
  for (const auto& r : rounds) out.sequence.a += static_cast<long>(r.size());
  return out;
}

std::vector<Vertex> net_points(const WeightedGraph& g, double spacing) {
  const Vertex n = g.num_vertices();
  std::vector<int> nearest(n, -1);  // hop distance to the net, -1 = unreached
  std::vector<Vertex> z;
  for (Vertex v = 0; v < n; ++v) {
    if (nearest[v] >= 0 && nearest[v] <= spacing) continue;
    z.push_back(v);
    auto h = hop_distances(g, v);
    for (Vertex u = 0; u < n; ++u)
      if (h[u] >= 0 && (nearest[u] < 0 || h[u] < nearest[u])) nearest[u] = h[u];
  }
  return z;
}

}  // namespace lowtw
