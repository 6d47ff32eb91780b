#include "lowtw/tree_decomposition.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>

namespace lowtw {

int TreeDecomposition::width() const {
  std::size_t w = 0;
  for (const auto& b : bags) w = std::max(w, b.size());
  return static_cast<int>(w) - 1;
}

TdReport verify_tree_decomposition(const WeightedGraph& g, const TreeDecomposition& td) {
  TdReport rep;
  rep.width = td.width();
  auto fail = [&](std::string msg) {
    rep.valid = false;
    rep.violations.push_back(std::move(msg));
  };
  const Vertex n = g.num_vertices();
  const int nb = static_cast<int>(td.bags.size());
  if (nb == 0) {
    if (n > 0) fail("no bags for a nonempty graph");
    return rep;
  }

  // tree shape
  if (td.root < 0 || td.root >= nb) fail("root index out of range");
  if (static_cast<int>(td.edges.size()) != nb - 1)
    fail("tree has " + std::to_string(td.edges.size()) + " edges for " + std::to_string(nb) + " bags");
  std::vector<std::vector<int>> tadj(nb);
  bool bad_edge = false;
  for (auto [a, b] : td.edges) {
    if (a < 0 || b < 0 || a >= nb || b >= nb || a == b) {
      if (!bad_edge) fail("tree edge with invalid endpoints");
      bad_edge = true;
      continue;
    }
    tadj[a].push_back(b);
    tadj[b].push_back(a);
  }
  {
    std::vector<char> seen(nb, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 0;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      ++count;
      for (int y : tadj[x])
        if (!seen[y]) seen[y] = 1, stack.push_back(y);
    }
    if (count != nb) fail("bag tree is not connected");
  }

  // bag contents
  std::vector<std::vector<Vertex>> sorted(nb);
  bool bad_vertex = false, repeated = false;
  for (int i = 0; i < nb; ++i) {
    sorted[i] = td.bags[i];
    std::sort(sorted[i].begin(), sorted[i].end());
    for (Vertex v : sorted[i]) {
      if (!g.valid_vertex(v) && !bad_vertex) {
        fail("bag " + std::to_string(i) + " holds invalid vertex " + std::to_string(v));
        bad_vertex = true;
      }
    }
    if (std::adjacent_find(sorted[i].begin(), sorted[i].end()) != sorted[i].end() && !repeated) {
      fail("bag " + std::to_string(i) + " repeats a vertex");
      repeated = true;
    }
    sorted[i].erase(std::unique(sorted[i].begin(), sorted[i].end()), sorted[i].end());
    sorted[i].erase(std::remove_if(sorted[i].begin(), sorted[i].end(), [&](Vertex v) { return !g.valid_vertex(v); }),
                    sorted[i].end());
  }
  std::vector<std::vector<int>> holders(n);
  for (int i = 0; i < nb; ++i)
    for (Vertex v : sorted[i]) holders[v].push_back(i);

  // (i) coverage
  for (Vertex v = 0; v < n; ++v) {
    if (holders[v].empty()) {
      fail("vertex " + std::to_string(v) + " is in no bag");
      break;
    }
  }
  // (ii) edges
  for (const auto& e : g.edges()) {
    const auto& a = holders[e.u];
    const auto& b = holders[e.v];
    std::size_t i = 0, j = 0;
    bool shared = false;
    while (i < a.size() && j < b.size()) {
      if (a[i] == b[j]) {
        shared = true;
        break;
      }
      a[i] < b[j] ? ++i : ++j;
    }
    if (!shared) {
      fail("edge " + std::to_string(e.u) + "-" + std::to_string(e.v) + " is in no bag");
      break;
    }
  }
  // (iii) occurrence subtrees: k bags holding v must span k-1 tree edges
  if (!bad_edge) {
    std::vector<int> links(n, 0);
    for (auto [a, b] : td.edges) {
      const auto& x = sorted[a];
      const auto& y = sorted[b];
      std::size_t i = 0, j = 0;
      while (i < x.size() && j < y.size()) {
        if (x[i] == y[j]) {
          ++links[x[i]];
          ++i, ++j;
        } else {
          x[i] < y[j] ? ++i : ++j;
        }
      }
    }
    for (Vertex v = 0; v < n; ++v) {
      if (!holders[v].empty() && links[v] != static_cast<int>(holders[v].size()) - 1) {
        fail("bags holding vertex " + std::to_string(v) + " are not connected");
        break;
      }
    }
  }
  return rep;
}

// ── Min-fill ──

namespace {

bool has(const std::vector<Vertex>& sorted, Vertex x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

void insert_sorted(std::vector<Vertex>& sorted, Vertex x) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  if (it == sorted.end() || *it != x) sorted.insert(it, x);
}

void erase_sorted(std::vector<Vertex>& sorted, Vertex x) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  if (it != sorted.end() && *it == x) sorted.erase(it);
}

long fill_in(const std::vector<std::vector<Vertex>>& adj, Vertex v) {
  const auto& nb = adj[v];
  long missing = 0;
  for (std::size_t i = 0; i < nb.size(); ++i)
    for (std::size_t j = i + 1; j < nb.size(); ++j)
      if (!has(adj[nb[i]], nb[j])) ++missing;
  return missing;
}

}  // namespace

std::vector<Vertex> min_fill_ordering(const WeightedGraph& g) {
  const Vertex n = g.num_vertices();
  std::vector<std::vector<Vertex>> adj(n);
  for (Vertex v = 0; v < n; ++v)
    for (const Arc& a : g.neighbors(v)) adj[v].push_back(a.to);
  std::vector<long> fill(n);
  for (Vertex v = 0; v < n; ++v) fill[v] = fill_in(adj, v);
  std::vector<char> gone(n, 0);
  std::vector<char> dirty(n, 0);
  std::vector<Vertex> order;
  order.reserve(n);
  for (Vertex step = 0; step < n; ++step) {
    Vertex best = -1;
    for (Vertex v = 0; v < n; ++v) {
      if (gone[v]) continue;
      if (dirty[v]) {
        fill[v] = fill_in(adj, v);
        dirty[v] = 0;
      }
      if (best == -1 || fill[v] < fill[best] || (fill[v] == fill[best] && adj[v].size() < adj[best].size()))
        best = v;
    }
    order.push_back(best);
    gone[best] = 1;
    const std::vector<Vertex> nb = adj[best];
    for (std::size_t i = 0; i < nb.size(); ++i) {
      erase_sorted(adj[nb[i]], best);
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        insert_sorted(adj[nb[i]], nb[j]);
        insert_sorted(adj[nb[j]], nb[i]);
      }
    }
    adj[best].clear();
    // fill counts can change within distance two of the eliminated vertex
    for (Vertex u : nb) {
      dirty[u] = 1;
      for (Vertex w : adj[u]) dirty[w] = 1;
    }
  }
  return order;
}

TreeDecomposition decomposition_from_ordering(const WeightedGraph& g, const std::vector<Vertex>& order) {
  const Vertex n = g.num_vertices();
  TreeDecomposition td;
  if (n == 0) return td;
  std::vector<int> pos(n);
  for (Vertex i = 0; i < n; ++i) pos[order[i]] = i;
  std::vector<std::vector<Vertex>> adj(n);
  for (Vertex v = 0; v < n; ++v)
    for (const Arc& a : g.neighbors(v)) adj[v].push_back(a.to);
  td.bags.resize(n);
  std::vector<int> roots;
  for (Vertex i = 0; i < n; ++i) {
    Vertex v = order[i];
    std::vector<Vertex> later;
    for (Vertex u : adj[v])
      if (pos[u] > i) later.push_back(u);
    td.bags[i] = later;
    td.bags[i].push_back(v);
    std::sort(td.bags[i].begin(), td.bags[i].end());
    if (later.empty()) {
      roots.push_back(i);
    } else {
      Vertex next = *std::min_element(later.begin(), later.end(), [&](Vertex a, Vertex b) { return pos[a] < pos[b]; });
      td.edges.emplace_back(pos[next], i);
    }
    for (std::size_t a = 0; a < later.size(); ++a) {
      for (std::size_t b = a + 1; b < later.size(); ++b) {
        insert_sorted(adj[later[a]], later[b]);
        insert_sorted(adj[later[b]], later[a]);
      }
    }
  }
  td.root = roots.back();
  for (std::size_t i = 0; i + 1 < roots.size(); ++i) td.edges.emplace_back(td.root, roots[i]);
  return td;
}

TreeDecomposition heuristic_tree_decomposition(const WeightedGraph& g) {
  return decomposition_from_ordering(g, min_fill_ordering(g));
}

// ── Exact treewidth ──

int exact_treewidth(const WeightedGraph& g) {
  const Vertex n = g.num_vertices();
  if (n > kExactTreewidthLimit)
    throw GraphError("exact_treewidth supports at most " + std::to_string(kExactTreewidthLimit) + " vertices");
  if (n == 0) return -1;
  std::vector<std::uint32_t> adj(n, 0);
  for (const auto& e : g.edges()) {
    adj[e.u] |= 1u << e.v;
    adj[e.v] |= 1u << e.u;
  }
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  // tw[S]: best width of an elimination prefix S; the recurrence
  // TW(S) = min_v max(TW(S - v), |Q(S - v, v)|) with Q the outside vertices
  // reachable from v through S - v.
  std::vector<std::int8_t> tw(std::size_t(full) + 1, 0);
  tw[0] = -1;
  for (std::uint32_t s = 1; s <= full; ++s) {
    int best = 127;
    for (std::uint32_t rest = s; rest; rest &= rest - 1) {
      Vertex v = std::countr_zero(rest);
      std::uint32_t without = s & ~(1u << v);
      if (tw[without] >= best) continue;
      std::uint32_t inside = without | (1u << v);
      std::uint32_t comp = 1u << v, reach = 0;
      for (;;) {
        reach = 0;
        for (std::uint32_t c = comp; c; c &= c - 1) reach |= adj[std::countr_zero(c)];
        std::uint32_t grown = comp | (reach & inside);
        if (grown == comp) break;
        comp = grown;
      }
      int q = std::popcount(reach & ~inside);
      best = std::min(best, std::max<int>(tw[without], q));
    }
    tw[s] = static_cast<std::int8_t>(best);
  }
  return tw[full];
}

}  // namespace lowtw
