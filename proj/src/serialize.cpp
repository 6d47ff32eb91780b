#include "lowtw/serialize.hpp"

#include <algorithm>
#include <cmath>

namespace lowtw {

namespace {

template <class T>
std::vector<T> vec(const Json& j, const char* key) {
  if (!j.contains(key)) throw GraphError(std::string("artifact is missing '") + key + "'");
  return j.at(key).get<std::vector<T>>();
}

Json edge_pairs(const std::vector<std::pair<int, int>>& es) {
  Json a = Json::array();
  for (auto [x, y] : es) a.push_back({x, y});
  return a;
}

Json events_json(const std::vector<CalibrationEvent>& ev) {
  Json a = Json::array();
  for (const auto& e : ev)
    a.push_back({{"cut_index", e.cut_index}, {"old_tau", e.old_tau}, {"new_tau", e.new_tau},
                 {"contracted_vertices", e.contracted_vertices}});
  return a;
}

std::vector<CalibrationEvent> events_from(const Json& a) {
  std::vector<CalibrationEvent> out;
  for (const auto& e : a)
    out.push_back({e.at("cut_index").get<int>(), e.at("old_tau").get<int>(), e.at("new_tau").get<int>(),
                   e.at("contracted_vertices").get<int>()});
  return out;
}

void expect_kind(const Json& j, const char* kind) {
  if (!j.contains("kind") || j.at("kind") != kind) throw GraphError(std::string("expected a ") + kind + " artifact");
}

}  // namespace

std::string dump(const Json& j) { return j.dump(1) + "\n"; }

Json to_json(const TreeDecomposition& td) {
  return {{"bags", td.bags}, {"edges", edge_pairs(td.edges)}, {"root", td.root}};
}

TreeDecomposition tree_decomposition_from_json(const Json& j) {
  TreeDecomposition td;
  td.bags = vec<std::vector<Vertex>>(j, "bags");
  for (const auto& e : j.at("edges")) td.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  td.root = j.at("root").get<int>();
  return td;
}

Json to_json(const WeightedGraph& g) {
  Json es = Json::array();
  for (const auto& e : g.edges()) es.push_back({e.u, e.v, e.len});
  return {{"n", g.num_vertices()}, {"edges", es}};
}

WeightedGraph graph_from_json(const Json& j) {
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) edges.push_back({e.at(0).get<Vertex>(), e.at(1).get<Vertex>(), e.at(2).get<double>()});
  return WeightedGraph(j.at("n").get<Vertex>(), std::move(edges));
}

// ── chain ──

Json to_json(const ClusteringChain& c) {
  Json levels = Json::array(), parents = Json::array(), diam = Json::array();
  for (const auto& lv : c.levels) {
    levels.push_back(lv.clusters);
    parents.push_back(lv.parent);
    diam.push_back(lv.diameter);
  }
  return {{"kind", "chain"},         {"n", c.n},
          {"k", c.k},                {"universe", c.universe},
          {"levels", levels},        {"parents", parents},
          {"diameters", diam},       {"hop_per_level", c.hop_per_level},
          {"hop_bound", c.hop_bound}, {"refinement_events", c.refinement_events},
          {"carving_events", c.carving_events}};
}

ClusteringChain chain_from_json(const Json& j) {
  expect_kind(j, "chain");
  ClusteringChain c;
  c.n = j.at("n").get<Vertex>();
  c.k = j.at("k").get<int>();
  c.universe = vec<Vertex>(j, "universe");
  auto levels = vec<std::vector<std::vector<Vertex>>>(j, "levels");
  auto parents = vec<std::vector<int>>(j, "parents");
  std::vector<std::vector<double>> diam;
  if (j.contains("diameters")) diam = j.at("diameters").get<std::vector<std::vector<double>>>();
  if (levels.size() != parents.size()) throw GraphError("chain: levels and parents differ in length");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    ChainLevel lv;
    lv.clusters = std::move(levels[i]);
    lv.parent = std::move(parents[i]);
    if (i < diam.size()) lv.diameter = diam[i];
    lv.diameter.resize(lv.clusters.size(), 0.0);
    lv.cluster_of.assign(std::max<Vertex>(c.n, 0), -1);
    for (std::size_t ci = 0; ci < lv.clusters.size(); ++ci)
      for (Vertex v : lv.clusters[ci])
        if (v >= 0 && v < c.n && lv.cluster_of[v] == -1) lv.cluster_of[v] = static_cast<int>(ci);
    c.levels.push_back(std::move(lv));
  }
  if (j.contains("hop_per_level")) c.hop_per_level = j.at("hop_per_level").get<std::vector<int>>();
  c.hop_bound = j.value("hop_bound", 0);
  c.refinement_events = j.value("refinement_events", 0);
  c.carving_events = j.value("carving_events", 0);
  return c;
}

// ── cop ──

Json to_json(const CopDecomposition& cd) {
  Json sns = Json::array();
  for (const auto& s : cd.supernodes) {
    Json sk = Json::array();
    for (auto [a, b] : s.skeleton_edges) sk.push_back({a, b});
    sns.push_back({{"id", s.id},
                   {"members", s.members},
                   {"root_vertex", s.root_vertex},
                   {"skeleton", s.skeleton},
                   {"skeleton_edges", sk},
                   {"dom0", s.dom0},
                   {"adjacent_ancestors", s.adjacent_ancestors},
                   {"parent", s.parent},
                   {"children", s.children}});
  }
  return {{"kind", "cop"}, {"delta", cd.delta}, {"r", cd.r}, {"n", cd.owner.size()}, {"root", cd.root}, {"supernodes", sns}};
}

CopDecomposition cop_from_json(const Json& j) {
  expect_kind(j, "cop");
  CopDecomposition cd;
  cd.delta = j.at("delta").get<double>();
  cd.r = j.at("r").get<int>();
  cd.root = j.at("root").get<int>();
  const Vertex n = j.at("n").get<Vertex>();
  cd.owner.assign(n, -1);
  for (const auto& s : j.at("supernodes")) {
    Supernode x;
    x.id = s.at("id").get<int>();
    x.members = vec<Vertex>(s, "members");
    x.root_vertex = s.at("root_vertex").get<Vertex>();
    x.skeleton = vec<Vertex>(s, "skeleton");
    for (const auto& e : s.at("skeleton_edges")) x.skeleton_edges.emplace_back(e.at(0).get<Vertex>(), e.at(1).get<Vertex>());
    x.dom0 = vec<Vertex>(s, "dom0");
    x.adjacent_ancestors = vec<int>(s, "adjacent_ancestors");
    x.parent = s.at("parent").get<int>();
    x.children = vec<int>(s, "children");
    for (Vertex v : x.members)
      if (v >= 0 && v < n && cd.owner[v] == -1) cd.owner[v] = static_cast<int>(cd.supernodes.size());
    cd.supernodes.push_back(std::move(x));
  }
  return cd;
}

// ── shortcut ──

Json to_json(const ShortcutPartition& sp) {
  return {{"kind", "shortcut"},
          {"epsilon", sp.epsilon},
          {"delta_internal", sp.delta_internal},
          {"diameter", sp.diameter},
          {"clusters", sp.clustering.clusters},
          {"centers", sp.centers},
          {"cluster_supernode", sp.cluster_supernode},
          {"nets", sp.nets},
          {"cop", to_json(sp.source)}};
}

ShortcutPartition shortcut_from_json(const Json& j) {
  expect_kind(j, "shortcut");
  ShortcutPartition sp;
  sp.epsilon = j.at("epsilon").get<double>();
  sp.delta_internal = j.at("delta_internal").get<double>();
  sp.diameter = j.at("diameter").get<double>();
  sp.source = cop_from_json(j.at("cop"));
  sp.clustering.clusters = vec<std::vector<Vertex>>(j, "clusters");
  const Vertex n = static_cast<Vertex>(sp.source.owner.size());
  sp.clustering.cluster_of.assign(n, -1);
  for (std::size_t c = 0; c < sp.clustering.clusters.size(); ++c)
    for (Vertex v : sp.clustering.clusters[c])
      if (v >= 0 && v < n && sp.clustering.cluster_of[v] == -1) sp.clustering.cluster_of[v] = static_cast<int>(c);
  sp.centers = vec<Vertex>(j, "centers");
  sp.cluster_supernode = vec<int>(j, "cluster_supernode");
  sp.nets = vec<std::vector<Vertex>>(j, "nets");
  return sp;
}

// ── cut family ──

Json to_json(const CutFamilyArtifact& a) {
  const CutFamily& f = a.family;
  Json cuts = Json::array(), ledger = Json::array();
  for (const auto& c : f.cuts) cuts.push_back(c.clusters);
  for (auto [node, cut] : f.ledger) ledger.push_back({node, cut});
  return {{"kind", "cut_family"}, {"psi", f.psi},        {"tau", f.tau},
          {"piece", f.piece},     {"conforming", f.conforming}, {"cuts", cuts},
          {"ledger", ledger},     {"calibration_events", events_json(f.calibration_events)},
          {"weights", a.weights}, {"chain", to_json(a.chain)}};
}

CutFamilyArtifact cut_family_from_json(const Json& j) {
  expect_kind(j, "cut_family");
  CutFamilyArtifact a;
  a.chain = chain_from_json(j.at("chain"));
  a.weights = vec<double>(j, "weights");
  CutFamily& f = a.family;
  f.psi = j.at("psi").get<int>();
  f.tau = j.at("tau").get<int>();
  f.piece = j.at("piece").get<int>();
  f.conforming = vec<int>(j, "conforming");
  for (const auto& c : j.at("cuts")) f.cuts.push_back({c.get<std::vector<int>>()});
  for (const auto& e : j.at("ledger")) f.ledger[e.at(0).get<int>()] = e.at(1).get<int>();
  f.calibration_events = events_from(j.at("calibration_events"));
  return a;
}

// ── embedding ──

Json to_json(const EmbeddingResult& r) {
  const EmbedStats& s = r.stats;
  Json stats = {{"depth", s.depth},
                {"width", s.width},
                {"n_calls", s.n_calls},
                {"tau", s.tau},
                {"psi", s.psi},
                {"k", s.k},
                {"hop_bound", s.hop_bound},
                {"aspect_ratio", s.aspect_ratio},
                {"phi_root", s.phi_root},
                {"max_boundary", s.max_boundary},
                {"cut_checks", s.cut_checks},
                {"cut_failures", s.cut_failures},
                {"calibration_events", events_json(s.calibration_events)}};
  Json calls = Json::array();
  for (const auto& c : r.calls)
    calls.push_back({{"id", c.id},
                     {"parent", c.parent},
                     {"depth", c.depth},
                     {"kind", to_string(c.kind)},
                     {"piece", c.piece},
                     {"terminals", c.terminals},
                     {"boundary", c.boundary},
                     {"boundary_clusters", c.boundary_clusters},
                     {"phi", c.phi},
                     {"base_case", c.base_case},
                     {"s_is_boundary", c.s_is_boundary},
                     {"cut", c.cut},
                     {"root_bag", c.root_bag}});
  return {{"kind", "embedding"},
          {"host", to_json(r.host)},
          {"tree_decomposition", to_json(r.decomposition)},
          {"stats", stats},
          {"calls", calls},
          {"chain", to_json(r.chain)}};
}

EmbeddingResult embedding_from_json(const Json& j) {
  expect_kind(j, "embedding");
  EmbeddingResult r;
  r.host = graph_from_json(j.at("host"));
  r.decomposition = tree_decomposition_from_json(j.at("tree_decomposition"));
  r.chain = chain_from_json(j.at("chain"));
  const Json& s = j.at("stats");
  r.stats.depth = s.at("depth").get<int>();
  r.stats.width = s.at("width").get<int>();
  r.stats.n_calls = s.at("n_calls").get<int>();
  r.stats.tau = s.at("tau").get<int>();
  r.stats.psi = s.at("psi").get<int>();
  r.stats.k = s.at("k").get<int>();
  r.stats.hop_bound = s.at("hop_bound").get<int>();
  r.stats.aspect_ratio = s.at("aspect_ratio").get<double>();
  r.stats.phi_root = s.at("phi_root").get<double>();
  r.stats.max_boundary = s.at("max_boundary").get<int>();
  r.stats.cut_checks = s.at("cut_checks").get<int>();
  r.stats.cut_failures = s.at("cut_failures").get<int>();
  r.stats.calibration_events = events_from(s.at("calibration_events"));
  for (const auto& c : j.at("calls")) {
    EmbedCallRecord rec;
    rec.id = c.at("id").get<int>();
    rec.parent = c.at("parent").get<int>();
    rec.depth = c.at("depth").get<int>();
    const std::string kind = c.at("kind").get<std::string>();
    rec.kind = kind == "root" ? CallKind::Root : kind == "cluster" ? CallKind::Cluster : CallKind::Component;
    rec.piece = c.at("piece").get<int>();
    rec.terminals = c.at("terminals").get<int>();
    rec.boundary = c.at("boundary").get<std::vector<Vertex>>();
    rec.boundary_clusters = c.at("boundary_clusters").get<int>();
    rec.phi = c.at("phi").get<double>();
    rec.base_case = c.at("base_case").get<bool>();
    rec.s_is_boundary = c.at("s_is_boundary").get<bool>();
    rec.cut = c.at("cut").get<std::vector<int>>();
    rec.root_bag = c.at("root_bag").get<int>();
    if (rec.parent >= static_cast<int>(r.calls.size())) throw GraphError("embedding: call parent out of order");
    r.calls.push_back(std::move(rec));
  }
  return r;
}

// ── verification dispatch ──

VerifyOutcome verify_artifact(const WeightedGraph& g, const Json& a) {
  VerifyOutcome out;
  if (!a.is_object() || !a.contains("kind")) throw GraphError("artifact has no 'kind' field");
  out.kind = a.at("kind").get<std::string>();
  auto take = [&](bool valid, const std::vector<std::string>& v, const std::string& prefix = "") {
    if (!valid) out.valid = false;
    for (const auto& s : v) out.violations.push_back(prefix + s);
  };
  if (out.kind == "chain") {
    ClusteringChain c = chain_from_json(a);
    ChainReport r = verify_chain(g, c);
    take(r.valid, r.violations);
    out.summary = {{"k", c.k}, {"measured_hop", r.measured_hop}};
  } else if (out.kind == "cop") {
    CopDecomposition cd = cop_from_json(a);
    CopReport r = verify_cop_decomposition(g, cd);
    take(r.valid, r.violations);
    out.summary = {{"supernodes", cd.supernodes.size()},
                   {"max_radius", r.max_radius},
                   {"min_buffer", std::isfinite(r.min_buffer) ? Json(r.min_buffer) : Json(nullptr)},
                   {"max_bag_supernodes", r.max_bag_supernodes},
                   {"flags", r.flags}};
  } else if (out.kind == "shortcut") {
    ShortcutPartition sp = shortcut_from_json(a);
    ShortcutReport r = verify_shortcut_partition(g, sp);
    take(r.valid, r.violations);
    double d = g.num_vertices() > 0 ? graph_diameter(g) : 0.0;
    if (std::abs(d - sp.diameter) > 1e-9 * std::max(1.0, d)) {
      out.valid = false;
      out.violations.push_back("recorded diameter " + format_length(sp.diameter) + " differs from " + format_length(d));
    }
    out.summary = {{"clusters", sp.clustering.clusters.size()}, {"max_cluster_diameter", r.max_cluster_diameter}};
  } else if (out.kind == "cut_family") {
    CutFamilyArtifact cf = cut_family_from_json(a);
    ChainReport cr = verify_chain(g, cf.chain);
    take(cr.valid, cr.violations, "chain: ");
    if (cr.valid) {
      if (static_cast<Vertex>(cf.weights.size()) != g.num_vertices()) {
        out.valid = false;
        out.violations.push_back("weight vector does not match the graph");
      } else {
        ClusterTree tree = ClusterTree::from_chain(cf.chain);
        if (cf.family.piece < 0 || cf.family.piece >= static_cast<int>(tree.nodes.size())) {
          out.valid = false;
          out.violations.push_back("piece is not a cluster of the chain");
        } else {
          CutReport r = verify_cut_family(g, tree, cf.family, cf.weights);
          take(r.valid, r.violations);
          // the stored ledger must name exactly the clusters the cuts consume
          std::map<int, int> expect;
          for (std::size_t jx = 0; jx < cf.family.cuts.size(); ++jx)
            for (int x : cf.family.cuts[jx].clusters)
              if (x >= 0 && x < static_cast<int>(tree.nodes.size()) && !tree.is_singleton(x) &&
                  std::find(cf.family.conforming.begin(), cf.family.conforming.end(), x) == cf.family.conforming.end())
                expect[x] = static_cast<int>(jx);
          if (expect != cf.family.ledger) {
            out.valid = false;
            out.violations.push_back("ledger does not match the cuts");
          }
        }
      }
    }
    out.summary = {{"psi", cf.family.psi}, {"tau", cf.family.tau}, {"cuts", cf.family.cuts.size()}};
  } else if (out.kind == "embedding") {
    EmbeddingResult r = embedding_from_json(a);
    ChainReport cr = verify_chain(g, r.chain);
    take(cr.valid, cr.violations, "chain: ");
    EmbeddingReport er = verify_embedding(g, r);
    take(er.valid, er.violations);
    out.summary = {{"width", er.width}, {"width_bound", er.width_bound}, {"depth", er.depth},
                   {"phi_root", er.phi_root}, {"min_ratio", er.min_ratio}};
  } else {
    throw GraphError("unknown artifact kind '" + out.kind + "'");
  }
  return out;
}

}  // namespace lowtw
