#include "lowtw/cop.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

namespace lowtw {

namespace {

constexpr double kTol = 1e-9;

class CopBuilder {
 public:
  CopBuilder(const WeightedGraph& g, double delta, int r, RandomSource& rng, CopTrace* trace)
      : g_(g), rng_(rng), trace_(trace), gamma_(delta / r) {
    cd_.delta = delta;
    cd_.r = r;
    cd_.owner.assign(g.num_vertices(), -1);
  }

  CopDecomposition run() {
    std::vector<Vertex> all(g_.num_vertices());
    for (Vertex v = 0; v < g_.num_vertices(); ++v) all[v] = v;
    if (!all.empty()) cd_.root = build_tree(all, -1, -1);
    return std::move(cd_);
  }

 private:
  int open_call(CopCall::Kind kind, int parent, const std::vector<Vertex>& region) {
    if (!trace_) return -1;
    CopCall c;
    c.kind = kind;
    c.id = static_cast<int>(trace_->calls.size());
    c.parent = parent;
    c.region = region;
    trace_->calls.push_back(std::move(c));
    return trace_->calls.back().id;
  }

  // supernodes disjoint from `region` with a vertex adjacent to it
  std::vector<int> seen_by(const std::vector<Vertex>& region) const {
    std::vector<int> seen;
    for (Vertex v : region)
      for (const Arc& a : g_.neighbors(v))
        if (cd_.owner[a.to] >= 0) seen.push_back(cd_.owner[a.to]);
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    // a supernode intersecting the region is not seen by it
    std::vector<int> out;
    for (int s : seen) {
      bool inside = false;
      for (Vertex v : region)
        if (cd_.owner[v] == s) {
          inside = true;
          break;
        }
      if (!inside) out.push_back(s);
    }
    return out;
  }

  std::vector<std::vector<Vertex>> unassigned_components(const std::vector<Vertex>& region) const {
    std::vector<Vertex> free;
    for (Vertex v : region)
      if (cd_.owner[v] < 0) free.push_back(v);
    return components_within(g_, free);
  }

  void assign(Vertex v, int s) {
    cd_.owner[v] = s;
    cd_.supernodes[s].members.push_back(v);
  }

  int build_tree(const std::vector<Vertex>& region, int parent, int parent_call) {
    const int call = open_call(CopCall::BuildTree, parent_call, region);
    const std::vector<int> seen = seen_by(region);
    const VertexMask in_region = make_mask(g_.num_vertices(), region);
    const Vertex start = region.front();
    const ShortestPathTree spt = shortest_path_tree(g_, std::span<const Vertex>(&start, 1), &in_region);

    const int id = static_cast<int>(cd_.supernodes.size());
    cd_.supernodes.emplace_back();
    {
      Supernode& s = cd_.supernodes.back();
      s.id = id;
      s.root_vertex = start;
      s.dom0 = region;
      s.adjacent_ancestors = seen;
      s.parent = parent;
    }
    if (parent >= 0) cd_.supernodes[parent].children.push_back(id);
    if (call >= 0) trace_->calls[call].supernode = id;

    // skeleton: shortest paths from the start vertex to one witness per seen supernode
    VertexMask on_tree(g_.num_vertices(), 0);
    std::vector<Vertex> skeleton{start};
    std::vector<std::pair<Vertex, Vertex>> tree_edges;
    on_tree[start] = 1;
    for (int x : seen) {
      Vertex witness = -1;
      for (Vertex v : region) {
        for (const Arc& a : g_.neighbors(v))
          if (cd_.owner[a.to] == x) {
            witness = v;
            break;
          }
        if (witness >= 0) break;
      }
      for (Vertex v = witness; !on_tree[v]; v = spt.pred[v]) {
        on_tree[v] = 1;
        skeleton.push_back(v);
        tree_edges.emplace_back(spt.pred[v], v);
      }
    }
    std::sort(skeleton.begin(), skeleton.end());
    std::sort(tree_edges.begin(), tree_edges.end());
    for (Vertex v : skeleton) assign(v, id);
    cd_.supernodes[id].skeleton = skeleton;
    cd_.supernodes[id].skeleton_edges = std::move(tree_edges);

    // initial growth by a random radius in [0, delta/r]
    const double radius = rng_.uniform() * gamma_;
    const std::vector<double> d = dijkstra(g_, skeleton, &in_region);
    for (Vertex v : region)
      if (cd_.owner[v] < 0 && d[v] <= radius) assign(v, id);

    for (const auto& part : unassigned_components(region)) {
      const std::vector<int> seen_part = seen_by(part);
      std::vector<int> cut_off;
      std::set_difference(seen.begin(), seen.end(), seen_part.begin(), seen_part.end(), std::back_inserter(cut_off));
      grow_buffer(cut_off, part, call);
    }
    for (const auto& part : unassigned_components(region)) build_tree(part, id, call);

    std::sort(cd_.supernodes[id].members.begin(), cd_.supernodes[id].members.end());
    return id;
  }

  void grow_buffer(const std::vector<int>& pending, const std::vector<Vertex>& region, int parent_call) {
    if (pending.empty()) return;
    const int call = open_call(CopCall::GrowBuffer, parent_call, region);
    const int x = pending.front();
    if (call >= 0) trace_->calls[call].supernode = x;
    const std::vector<int> seen = seen_by(region);
    const Vertex n = g_.num_vertices();

    // current domain of x: its initial domain minus the supernodes it saw when created
    VertexMask in_dom = make_mask(n, cd_.supernodes[x].dom0);
    {
      const auto& anc = cd_.supernodes[x].adjacent_ancestors;
      for (Vertex v : cd_.supernodes[x].dom0)
        if (cd_.owner[v] >= 0 && std::binary_search(anc.begin(), anc.end(), cd_.owner[v])) in_dom[v] = 0;
    }
    const VertexMask in_region = make_mask(n, region);
    std::vector<Vertex> boundary;
    {
      VertexMask mark(n, 0);
      for (Vertex v : region)
        for (const Arc& a : g_.neighbors(v))
          if (!in_region[a.to] && in_dom[a.to] && !mark[a.to]) mark[a.to] = 1, boundary.push_back(a.to);
      std::sort(boundary.begin(), boundary.end());
    }

    const double radius = rng_.uniform(1.0, 2.0) * gamma_;
    VertexMask walk(n, 0);
    for (Vertex v : region)
      if (in_dom[v]) walk[v] = 1;
    for (Vertex b : boundary) walk[b] = 1;
    const std::vector<double> to_boundary = dijkstra(g_, boundary, &walk);
    std::vector<Vertex> buffer;
    for (Vertex v : region)
      if (to_boundary[v] <= radius) buffer.push_back(v);

    // random offsets for every supernode seen by the region, in id order
    std::vector<double> offset(cd_.supernodes.size(), 0.0);
    for (int s : seen) offset[s] = rng_.uniform() * gamma_;

    // Assignment: lexicographic (distance + offset, supernode id) grown from
    // the boundary through the buffer, so each buffered vertex joins its
    // winner along a path inside the buffer.
    VertexMask in_buffer = make_mask(n, buffer);
    std::vector<double> key(n, kInfinity);
    std::vector<int> label(n, -1);
    using Item = std::tuple<double, int, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    for (Vertex b : boundary) {
      int s = cd_.owner[b];
      key[b] = offset[s];
      label[b] = s;
      pq.emplace(key[b], s, b);
    }
    while (!pq.empty()) {
      auto [k, s, v] = pq.top();
      pq.pop();
      if (k != key[v] || s != label[v]) continue;
      for (const Arc& a : g_.neighbors(v)) {
        if (!in_buffer[a.to]) continue;
        double nk = k + a.len;
        if (nk < key[a.to] || (nk == key[a.to] && s < label[a.to])) {
          key[a.to] = nk;
          label[a.to] = s;
          pq.emplace(nk, s, a.to);
        }
      }
    }
    for (Vertex v : buffer) {
      if (label[v] < 0) throw GraphError("cop decomposition: buffered vertex without a source");
      assign(v, label[v]);
    }
    if (call >= 0) trace_->calls[call].buffer = buffer;

    std::vector<int> rest(pending.begin() + 1, pending.end());
    for (const auto& part : unassigned_components(region)) {
      std::vector<int> next = rest;
      const std::vector<int> seen_part = seen_by(part);
      for (int s : seen)
        if (!std::binary_search(seen_part.begin(), seen_part.end(), s) &&
            std::find(next.begin(), next.end(), s) == next.end())
          next.push_back(s);
      grow_buffer(next, part, call);
    }
  }

  const WeightedGraph& g_;
  RandomSource& rng_;
  CopTrace* trace_;
  double gamma_;
  CopDecomposition cd_;
};

}  // namespace

CopDecomposition build_cop_decomposition(const WeightedGraph& g, double delta, int r, RandomSource& rng,
                                         CopTrace* trace) {
  if (!(delta > 0.0)) throw GraphError("cop decomposition: delta must be positive");
  if (r < 3) throw GraphError("cop decomposition: r must be at least 3");
  if (!is_connected(g)) throw GraphError("cop decomposition: graph is disconnected");
  CopDecomposition cd = CopBuilder(g, delta, r, rng, trace).run();
  for (auto& s : cd.supernodes) std::sort(s.members.begin(), s.members.end());
  return cd;
}

std::vector<Vertex> CopDecomposition::domain(int s) const {
  std::vector<Vertex> out;
  std::vector<int> stack{s};
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    out.insert(out.end(), supernodes[x].members.begin(), supernodes[x].members.end());
    for (int c : supernodes[x].children) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TreeDecomposition CopDecomposition::expansion() const {
  TreeDecomposition td;
  td.root = root;
  for (const auto& s : supernodes) {
    std::vector<Vertex> bag = s.members;
    for (int a : s.adjacent_ancestors)
      if (a >= 0 && a < static_cast<int>(supernodes.size()))
        bag.insert(bag.end(), supernodes[a].members.begin(), supernodes[a].members.end());
    std::sort(bag.begin(), bag.end());
    td.bags.push_back(std::move(bag));
    if (s.parent >= 0) td.edges.emplace_back(s.parent, s.id);
  }
  return td;
}

// ── Verification ──

CopReport verify_cop_decomposition(const WeightedGraph& g, const CopDecomposition& cd) {
  CopReport rep;
  const Vertex n = g.num_vertices();
  const int ns = static_cast<int>(cd.supernodes.size());
  auto fail = [&](bool& flag, std::string msg) {
    flag = false;
    rep.valid = false;
    rep.violations.push_back(std::move(msg));
  };
  const double slack = kTol * std::max(1.0, cd.delta);

  // partition and tree shape
  std::vector<int> owner(n, -1);
  for (int s = 0; s < ns; ++s) {
    const Supernode& x = cd.supernodes[s];
    if (x.id != s) fail(rep.partition_ok, "supernode ids are not contiguous");
    if (x.members.empty()) fail(rep.partition_ok, "supernode " + std::to_string(s) + " is empty");
    for (Vertex v : x.members) {
      if (!g.valid_vertex(v) || owner[v] != -1) {
        fail(rep.partition_ok, "supernode " + std::to_string(s) + " has an invalid or shared vertex");
        break;
      }
      owner[v] = s;
    }
    if (!x.members.empty() && !induces_connected(g, x.members))
      fail(rep.partition_ok, "supernode " + std::to_string(s) + " is not connected");
  }
  for (Vertex v = 0; v < n; ++v)
    if (owner[v] == -1) {
      fail(rep.partition_ok, "vertex " + std::to_string(v) + " belongs to no supernode");
      break;
    }
  int roots = 0;
  for (const auto& x : cd.supernodes) {
    if (x.parent == -1) ++roots;
    else if (x.parent < 0 || x.parent >= ns || x.parent >= x.id)
      fail(rep.partition_ok, "supernode " + std::to_string(x.id) + " has an invalid parent");
  }
  if (ns > 0 && roots != 1) fail(rep.partition_ok, "partition tree must have exactly one root");
  if (!rep.partition_ok) return rep;

  std::vector<std::vector<Vertex>> dom(ns);
  for (int s = ns - 1; s >= 0; --s) {
    dom[s].insert(dom[s].end(), cd.supernodes[s].members.begin(), cd.supernodes[s].members.end());
    std::sort(dom[s].begin(), dom[s].end());
    int p = cd.supernodes[s].parent;
    if (p >= 0) dom[p].insert(dom[p].end(), dom[s].begin(), dom[s].end());
  }
  auto is_ancestor = [&](int a, int s) {
    for (int x = cd.supernodes[s].parent; x >= 0; x = cd.supernodes[x].parent)
      if (x == a) return true;
    return false;
  };

  for (const auto& x : cd.supernodes) {
    const std::string tag = "supernode " + std::to_string(x.id);
    // (a) radius from the skeleton inside the supernode
    bool skeleton_inside = !x.skeleton.empty();
    for (Vertex v : x.skeleton)
      if (!g.valid_vertex(v) || owner[v] != x.id) skeleton_inside = false;
    if (!skeleton_inside) {
      fail(rep.skeleton_ok, tag + ": skeleton is not inside the supernode");
      continue;
    }
    VertexMask in_x = make_mask(n, x.members);
    auto d = dijkstra(g, x.skeleton, &in_x);
    double radius = 0.0;
    for (Vertex v : x.members) radius = std::max(radius, d[v]);
    rep.max_radius = std::max(rep.max_radius, radius);
    if (radius > 4.0 * cd.delta + slack)
      fail(rep.radius_ok, tag + ": radius " + format_length(radius) + " exceeds 4*delta");

    // (b) skeleton is a shortest-path tree in dom(x) rooted at root_vertex
    VertexMask in_dom = make_mask(n, dom[x.id]);
    auto droot = dijkstra(g, x.root_vertex, &in_dom);
    std::vector<int> deg(n, 0), indeg(n, 0);
    bool tree_ok = x.skeleton_edges.size() + 1 == x.skeleton.size() &&
                   std::binary_search(x.skeleton.begin(), x.skeleton.end(), x.root_vertex);
    for (auto [p, c] : x.skeleton_edges) {
      double len = g.edge_length(p, c);
      if (len == kInfinity || !std::binary_search(x.skeleton.begin(), x.skeleton.end(), p) ||
          !std::binary_search(x.skeleton.begin(), x.skeleton.end(), c)) {
        tree_ok = false;
        break;
      }
      ++deg[p], ++deg[c], ++indeg[c];
      if (std::abs(droot[p] + len - droot[c]) > slack) {
        fail(rep.skeleton_ok, tag + ": skeleton edge " + std::to_string(p) + "-" + std::to_string(c) +
                                  " is not on a shortest path from the root");
        break;
      }
    }
    if (tree_ok) {
      for (Vertex v : x.skeleton)
        if ((v == x.root_vertex) != (indeg[v] == 0) || indeg[v] > 1) tree_ok = false;
    }
    if (!tree_ok) {
      fail(rep.skeleton_ok, tag + ": skeleton is not a tree rooted at its root vertex");
      continue;
    }
    int leaves = 0;
    for (Vertex v : x.skeleton)
      if (v != x.root_vertex && deg[v] == 1) ++leaves;
    const int limit = cd.r - 2;
    const int na = static_cast<int>(x.adjacent_ancestors.size());
    if (na > limit) rep.flags.push_back(tag + ": sees " + std::to_string(na) + " supernodes at creation, above r-2");
    if (leaves > std::max(limit, na)) fail(rep.skeleton_ok, tag + ": skeleton has too many leaves");
    for (int a : x.adjacent_ancestors) {
      if (a < 0 || a >= ns || !is_ancestor(a, x.id)) {
        fail(rep.skeleton_ok, tag + ": adjacent set holds a non-ancestor");
        continue;
      }
      bool touches = false;
      for (Vertex v : x.skeleton) {
        for (const Arc& arc : g.neighbors(v))
          if (owner[arc.to] == a) touches = true;
        if (touches) break;
      }
      if (!touches) fail(rep.skeleton_ok, tag + ": ancestor " + std::to_string(a) + " has no edge to the skeleton");
    }
  }

  // (c) buffer between each supernode and the domains of non-adjacent descendants
  const double gamma = cd.buffer();
  for (const auto& x : cd.supernodes) {
    VertexMask in_dom = make_mask(n, dom[x.id]);
    auto d = dijkstra(g, x.members, &in_dom);
    std::vector<int> stack(x.children.begin(), x.children.end());
    while (!stack.empty()) {
      int s = stack.back();
      stack.pop_back();
      const auto& y = cd.supernodes[s];
      for (int c : y.children) stack.push_back(c);
      if (std::binary_search(y.adjacent_ancestors.begin(), y.adjacent_ancestors.end(), x.id)) continue;
      double closest = kInfinity;
      for (Vertex v : dom[s]) closest = std::min(closest, d[v]);
      rep.min_buffer = std::min(rep.min_buffer, closest);
      if (closest < gamma - slack)
        fail(rep.buffer_ok, "supernode " + std::to_string(s) + " lies within " + format_length(closest) +
                                " of non-adjacent ancestor " + std::to_string(x.id));
    }
  }

  // (d) expansion is a tree decomposition with at most r-1 supernodes per bag
  TdReport td = verify_tree_decomposition(g, cd.expansion());
  if (!td.valid)
    for (auto& v : td.violations) fail(rep.tree_ok, "expansion: " + v);
  for (const auto& x : cd.supernodes) {
    int count = 1 + static_cast<int>(x.adjacent_ancestors.size());
    rep.max_bag_supernodes = std::max(rep.max_bag_supernodes, count);
    if (count > cd.r - 1)
      fail(rep.tree_ok, "bag of supernode " + std::to_string(x.id) + " joins " + std::to_string(count) + " supernodes");
  }
  return rep;
}

// ── Cut events ──

const char* to_string(CutEvent e) {
  switch (e) {
    case CutEvent::Build: return "build";
    case CutEvent::Buffer: return "buffer";
    case CutEvent::Split: return "split";
  }
  return "?";
}

CutEventTrace cut_event_trace(const WeightedGraph& g, double delta, int r, RandomSource& rng) {
  CopTrace trace;
  CutEventTrace out;
  out.decomposition = build_cop_decomposition(g, delta, r, rng, &trace);
  const auto& cd = out.decomposition;
  const Vertex n = g.num_vertices();

  std::vector<std::vector<int>> chain(n);  // calls whose region holds the vertex, outermost first
  for (const auto& c : trace.calls)
    for (Vertex v : c.region) chain[v].push_back(c.id);
  std::vector<VertexMask> buffered(trace.calls.size());

  for (const auto& e : g.edges()) {
    if (cd.owner[e.u] == cd.owner[e.v]) continue;
    const auto& a = chain[e.u];
    const auto& b = chain[e.v];
    int last = -1;
    for (std::size_t i = 0; i < a.size() && i < b.size() && a[i] == b[i]; ++i) last = a[i];
    CutEventRecord rec{e.u, e.v, CutEvent::Build, last};
    if (last >= 0 && trace.calls[last].kind == CopCall::GrowBuffer) {
      const auto& buf = trace.calls[last].buffer;
      bool iu = std::binary_search(buf.begin(), buf.end(), e.u);
      bool iv = std::binary_search(buf.begin(), buf.end(), e.v);
      rec.event = (iu != iv) ? CutEvent::Buffer : CutEvent::Split;
    }
    out.events.push_back(rec);
  }

  out.threateners.assign(n, 0);
  const double reach = 2.0 * delta * (1.0 + kTol);
  for (const auto& x : cd.supernodes) {
    VertexMask in_dom0 = make_mask(n, x.dom0);
    auto d = dijkstra(g, x.members, &in_dom0);
    for (Vertex v = 0; v < n; ++v)
      if (d[v] <= reach) ++out.threateners[v];
  }
  return out;
}

}  // namespace lowtw
