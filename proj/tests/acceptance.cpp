// One line per criterion: "criterion N PASS|FAIL (details)". Exit status is the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "lowtw/balanced_cut.hpp"
#include "lowtw/chain.hpp"
#include "lowtw/cop.hpp"
#include "lowtw/embedder.hpp"
#include "lowtw/generators.hpp"
#include "lowtw/pipeline.hpp"
#include "lowtw/serialize.hpp"
#include "lowtw/shortcut.hpp"
#include "lowtw/tree_decomposition.hpp"

using namespace lowtw;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Clock {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double x, int prec = 3) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double mean(const std::vector<double>& v) { return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double variance(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean(v), s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / (v.size() - 1);
}

// Pipeline runs on the 12x12 grid shared by several criteria.
struct Sweeps {
  WeightedGraph grid = grid_graph(12, 12);
  std::map<int, PipelineResult> by_psi;
};

const Sweeps& sweeps() {
  static Sweeps s = [] {
    Sweeps out;
    for (int psi : {4, 8, 16}) {
      ExperimentConfig cfg;
      cfg.graph = out.grid;
      cfg.graph_label = "grid:12,12";
      cfg.seeds = 100;
      cfg.base_seed = 1;
      cfg.embed.psi = psi;
      cfg.embed.verify_cuts = true;
      cfg.keep_artifacts = true;
      cfg.jobs = 4;
      out.by_psi[psi] = run_pipeline(cfg);
    }
    return out;
  }();
  return s;
}

Outcome chains_valid() {
  Outcome o;
  WeightedGraph g = grid_graph(12, 12);
  Clock clock;
  int bad = 0, max_hop = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RandomSource rng(seed);
    ClusteringChain c = build_chain(g, 5, rng);
    ChainReport rep = verify_chain(g, c);
    if (!rep.valid) ++bad;
    max_hop = std::max(max_hop, rep.measured_hop);
  }
  double t = clock.seconds();
  o.pass = bad == 0 && t <= 60.0;
  o.detail = "50 chains, " + std::to_string(bad) + " invalid, max hop " + std::to_string(max_hop) + ", " + fmt(t) + " s";
  return o;
}

Outcome cops_valid() {
  Outcome o;
  WeightedGraph g = grid_graph(10, 10);
  const double delta = 3.0;
  const int r = 5;
  Clock clock;
  int bad = 0;
  double max_radius = 0.0, min_buffer = kInfinity;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RandomSource rng(seed);
    CopDecomposition cd = build_cop_decomposition(g, delta, r, rng);
    CopReport rep = verify_cop_decomposition(g, cd);
    bool ok = rep.valid && rep.max_radius <= 4 * delta + 1e-9 && rep.min_buffer >= delta / r - 1e-9;
    if (!ok) ++bad;
    max_radius = std::max(max_radius, rep.max_radius);
    min_buffer = std::min(min_buffer, rep.min_buffer);
  }
  double t = clock.seconds();
  o.pass = bad == 0 && t <= 120.0;
  o.detail = "200 builds, " + std::to_string(bad) + " invalid, max radius " + fmt(max_radius) + " (cap " +
             fmt(4 * delta) + "), min buffer " + fmt(min_buffer) + " (floor " + fmt(delta / r) + "), " + fmt(t) + " s";
  return o;
}

Outcome shortcut_diameter() {
  Outcome o;
  std::vector<std::pair<std::string, WeightedGraph>> graphs = {
      {"grid10", grid_graph(10, 10)}, {"grid12", grid_graph(12, 12)}, {"planar150", random_planar_graph(150, 7)}};
  int partitions = 0, bad_diam = 0, bad_hop = 0;
  double worst = 0.0, h_max = 0.0;
  for (const auto& [name, g] : graphs)
    for (double eps : {0.25, 0.5, 0.75})
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        RandomSource rng(seed * 31 + 5);
        ShortcutPartition sp = shortcut_partition(g, eps, 5, rng);
        ++partitions;
        ShortcutReport rep = verify_shortcut_partition(g, sp);
        if (!rep.valid) ++bad_diam;
        worst = std::max(worst, rep.max_cluster_diameter / (eps * sp.diameter));
        LowHopReport lh = verify_low_hop(g, sp, -1.0);
        h_max = std::max(h_max, lh.h_hat);
        // every pair must pass at the measured constant, and the quotient
        // hop-diameter follows from it with d <= diam
        LowHopReport again = verify_low_hop(g, sp, lh.h_hat);
        double implied = eps * lh.h_hat * std::ceil(1.0 / eps - 1e-12) + 1.0;
        if (!again.valid || lh.quotient_hop_diameter > implied + 1e-9) ++bad_hop;
      }
  o.pass = bad_diam == 0 && bad_hop == 0;
  o.detail = std::to_string(partitions) + " partitions, " + std::to_string(bad_diam) + " over the diameter bound, worst diam/(eps diam G) " +
             fmt(worst) + ", low-hop failures " + std::to_string(bad_hop) + ", max h_hat " + fmt(h_max);
  return o;
}

Outcome separating_scaling() {
  Outcome o;
  WeightedGraph g = grid_graph(8, 8);
  RandomSource first(1000), second(2000);
  LevelEdgeFrequency a = estimate_separating_beta(g, 5, 250, first);
  LevelEdgeFrequency b = estimate_separating_beta(g, 5, 250, second);
  if (a.k != b.k) {
    o.pass = false;
    o.detail = "batches disagree on k";
    return o;
  }
  const int k = a.k;
  double beta = std::max(a.beta_hat, b.beta_hat);
  double agreement = std::max(a.beta_hat, b.beta_hat) / std::min(a.beta_hat, b.beta_hat);
  int over = 0;
  std::vector<double> med(k + 1);
  for (int i = 0; i <= k; ++i) {
    std::vector<double> f;
    for (std::size_t e = 0; e < a.edges.size(); ++e) {
      double x = 0.5 * (a.frequency[i][e] + b.frequency[i][e]);
      f.push_back(x);
      if (x > beta * a.edges[e].len / std::ldexp(1.0, i) + 1e-12) ++over;
    }
    med[i] = median(f);
  }
  // level 0 is cut by every chain and level k by none, so only interior pairs carry the scale law
  bool ratios_ok = true;
  std::string ratios;
  for (int i = 1; i + 1 <= k - 1; ++i) {
    double ratio = med[i] > 0 ? med[i + 1] / med[i] : 0.0;
    ratios_ok &= ratio >= 0.3 && ratio <= 0.8;
    ratios += (ratios.empty() ? "" : " ") + std::to_string(i) + "->" + std::to_string(i + 1) + ":" + fmt(ratio);
  }
  o.pass = agreement <= 1.5 && over == 0 && ratios_ok;
  o.detail = "beta_hat " + fmt(a.beta_hat) + " / " + fmt(b.beta_hat) + " (factor " + fmt(agreement) + "), " +
             std::to_string(over) + " entries above the fitted bound, median ratios " + ratios;
  return o;
}

Outcome cut_families() {
  Outcome o;
  const Sweeps& s = sweeps();
  long runs = 0, failed = 0, families = 0;
  for (const auto& [psi, res] : s.by_psi)
    for (const auto& rec : res.records) {
      ++runs;
      if (!rec.ok) {
        ++failed;
        continue;
      }
      const Json& stats = rec.artifact.at("stats");
      families += stats.at("cut_checks").get<long>();
      if (stats.at("cut_failures").get<long>() != 0) ++failed;
    }

  // replay: the root state of one 12x12 run, sampled 1000 times
  const int psi = 8;
  RandomSource rng(77);
  EmbedConfig cfg;
  cfg.psi = psi;
  EmbeddingResult er = embed(s.grid, cfg, rng);
  ClusterTree tree = ClusterTree::from_chain(er.chain);
  std::vector<double> w(s.grid.num_vertices(), 1.0);
  CutFamily fam = build_cut_family(s.grid, tree, tree.root, w, {}, psi, er.stats.tau, s.grid.num_vertices());
  bool ledger_ok = verify_cut_family(s.grid, tree, fam, w).valid;
  const int draws = 1000;
  std::map<int, int> hits;
  for (int d = 0; d < draws; ++d) {
    RandomSource r(static_cast<std::uint64_t>(d) + 1);
    for (int x : sample_cut(fam, r).clusters)
      if (fam.ledger.count(x)) ++hits[x];
  }
  const double p = 1.0 / psi;
  const double bound = p + 3.0 * std::sqrt(p * (1 - p) / draws);
  double fixed_freq = 0.0, max_freq = 0.0;
  if (!fam.ledger.empty()) fixed_freq = hits[fam.ledger.begin()->first] / static_cast<double>(draws);
  for (auto [x, h] : hits) max_freq = std::max(max_freq, h / static_cast<double>(draws));
  o.pass = failed == 0 && families > 0 && ledger_ok && !fam.ledger.empty() && fixed_freq <= bound;
  o.detail = std::to_string(runs) + " runs, " + std::to_string(failed) + " failed, " + std::to_string(families) +
             " families checked; replay: fixed cluster frequency " + fmt(fixed_freq) + ", max over " +
             std::to_string(fam.ledger.size()) + " ledger clusters " + fmt(max_freq) + ", bound " + fmt(bound);
  return o;
}

Outcome contraction_sequences() {
  Outcome o;
  int sequences = 0, bad = 0, c1 = 0, net_bad = 0;
  auto check_net = [&](const ContractionSequence& seq) {
    if (seq.c != 1 || seq.b == 0) return;
    ++c1;
    std::size_t z = net_points(seq.base, 18.0 * seq.b).size();
    if (static_cast<double>(z) > static_cast<double>(seq.a) / seq.b + 1e-12) ++net_bad;
  };
  for (int side : {8, 12})
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      WeightedGraph g = grid_graph(side, side);
      RandomSource rng(seed + 500);
      ClusteringChain chain = build_chain(g, 5, rng);
      ClusterTree tree = ClusterTree::from_chain(chain);
      std::vector<std::vector<char>> masks;
      std::vector<char> root_only(tree.nodes.size(), 0);
      root_only[tree.root] = 1;
      masks.push_back(root_only);
      masks.push_back(std::vector<char>(tree.nodes.size(), 1));
      // the state left behind by a cut family at the root
      std::vector<double> w(g.num_vertices(), 1.0);
      CutFamily fam = build_cut_family(g, tree, tree.root, w, {}, 8, 4, g.num_vertices());
      std::vector<char> after = root_only;
      for (auto [x, j] : fam.ledger) after[x] = 1;
      masks.push_back(after);
      for (const auto& m : masks) {
        ContractionSequence seq = contraction_sequence_from_chain(g, tree, tree.root, m, chain.hop_bound);
        ++sequences;
        if (!verify_contraction_sequence(seq).valid) ++bad;
        check_net(seq);
      }
    }
  double c0 = 0.0, lo = kInfinity;
  for (int p = 2; p <= 4; ++p)
    for (int q = 1; q <= 3; ++q) {
      GridSequence gs = grid_contraction_sequence(p, q);
      ++sequences;
      if (!verify_contraction_sequence(gs.sequence).valid) ++bad;
      check_net(gs.sequence);
      double ratio = gs.sequence.a / (p * p * (q + std::log2(p)));
      c0 = std::max(c0, ratio);
      lo = std::min(lo, ratio);
    }
  // a single constant fits when the ratio stays within a small band across the sweep
  o.pass = bad == 0 && net_bad == 0 && c1 > 0 && c0 / lo <= 4.0;
  o.detail = std::to_string(sequences) + " sequences, " + std::to_string(bad) + " invalid; " + std::to_string(c1) +
             " with c = 1, net bound failures " + std::to_string(net_bad) + "; grid fit c0 " + fmt(c0) +
             " (ratio range " + fmt(lo) + ".." + fmt(c0) + ")";
  return o;
}

Outcome embedding_invariants() {
  Outcome o;
  const PipelineResult& res = sweeps().by_psi.at(8);
  int bad = 0, errors = 0, max_depth = 0, max_width = 0, min_slack = 1 << 30;
  double max_seconds = 0.0, phi = 0.0;
  std::string first;
  for (const auto& rec : res.records) {
    if (!rec.error.empty()) ++errors;
    if (!rec.ok) {
      ++bad;
      if (first.empty()) first = rec.error.empty() ? (rec.violations.empty() ? "" : rec.violations[0]) : rec.error;
    }
    max_depth = std::max(max_depth, rec.depth);
    max_width = std::max(max_width, rec.width);
    min_slack = std::min(min_slack, rec.width_bound - rec.width);
    max_seconds = std::max(max_seconds, rec.seconds);
    phi = rec.phi_root;
  }
  o.pass = res.records.size() == 100 && bad == 0 && max_seconds <= 10.0;
  o.detail = std::to_string(res.records.size()) + " runs, " + std::to_string(bad) + " failing (" + std::to_string(errors) +
             " errors), max depth " + std::to_string(max_depth) + " vs phi(root) " + fmt(phi) + ", max width " +
             std::to_string(max_width) + ", min slack to 6 tau + depth " + std::to_string(min_slack) +
             ", slowest run " + fmt(max_seconds) + " s" + (first.empty() ? "" : "; first: " + first);
  return o;
}

Outcome distortion_trend() {
  Outcome o;
  const Sweeps& s = sweeps();
  auto excess = [&](int psi) {
    std::vector<double> v;
    for (const auto& rec : s.by_psi.at(psi).records)
      if (rec.ok) v.push_back(rec.mean_excess);
    return v;
  };
  std::vector<double> e4 = excess(4), e16 = excess(16);
  double m4 = mean(e4), m16 = mean(e16);
  double sigma = std::sqrt(variance(e4) / std::max<std::size_t>(e4.size(), 1) +
                           variance(e16) / std::max<std::size_t>(e16.size(), 1));
  double min_ratio = kInfinity;
  for (const auto& [psi, res] : s.by_psi)
    for (const auto& rec : res.records)
      if (rec.ok) min_ratio = std::min(min_ratio, rec.min_ratio);

  // instances small enough for the base case alone
  double base_max = 0.0, base_min = kInfinity;
  for (auto [side, tau] : std::vector<std::pair<int, int>>{{3, 3}, {6, 9}, {12, 36}}) {
    WeightedGraph g = grid_graph(side, side);
    EmbedConfig cfg;
    cfg.tau.automatic = false;
    cfg.tau.fixed = tau;
    RandomSource rng(side);
    EmbeddingResult r = embed(g, cfg, rng);
    DistortionStats d = measure_distortion(g, {r});
    base_max = std::max(base_max, d.max_distortion);
    base_min = std::min(base_min, d.min_ratio);
  }
  bool base_exact = std::abs(base_max - 1.0) <= 1e-12 && std::abs(base_min - 1.0) <= 1e-12;
  o.pass = e4.size() == 100 && e16.size() == 100 && m16 <= m4 + 2 * sigma && min_ratio >= 1.0 - 1e-9 && base_exact;
  o.detail = "mean excess psi=4 " + fmt(m4) + ", psi=16 " + fmt(m16) + ", sigma " + fmt(sigma) + ", min ratio " +
             fmt(min_ratio, 6) + ", base-case distortion " + fmt(base_min, 12) + ".." + fmt(base_max, 12);
  return o;
}

Outcome oracles() {
  Outcome o;
  int tw = exact_treewidth(grid_graph(4, 4));
  RandomSource rng(2024);
  int sep_bad = 0;
  for (int t = 0; t < 100; ++t) {
    Vertex n = 2 + static_cast<Vertex>(rng.index(11));
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v)
        if (rng.uniform() < 0.3) edges.push_back({u, v, 1.0});
    WeightedGraph g(n, edges);
    SeparatorRequest req;
    req.size_cap = n;
    for (Vertex v = 0; v < n; ++v) req.weights.push_back(rng.uniform(0.1, 3.0));
    req.method = SeparatorMethod::Exhaustive;
    auto ex = weighted_balanced_separator(g, req);
    req.method = SeparatorMethod::BagScan;
    auto bs = weighted_balanced_separator(g, req);
    if (!ex || !bs || !is_balanced_separator(g, *ex, req.weights) || !is_balanced_separator(g, *bs, req.weights))
      ++sep_bad;
  }
  int dist_bad = 0;
  for (int t = 0; t < 100; ++t) {
    Vertex n = 2 + static_cast<Vertex>(rng.index(8));
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v)
        if (rng.uniform() < 0.45) edges.push_back({u, v, rng.uniform(0.5, 4.0)});
    WeightedGraph g(n, edges);
    auto d = all_pairs_distances(g);
    std::vector<char> on(n, 0);
    for (Vertex s = 0; s < n; ++s) {
      std::vector<double> best(n, kInfinity);
      std::function<void(Vertex, double)> walk = [&](Vertex x, double len) {
        best[x] = std::min(best[x], len);
        on[x] = 1;
        for (const Arc& a : g.neighbors(x))
          if (!on[a.to]) walk(a.to, len + a.len);
        on[x] = 0;
      };
      walk(s, 0.0);
      for (Vertex v = 0; v < n; ++v) {
        bool same = best[v] == kInfinity ? d[s][v] == kInfinity : std::abs(best[v] - d[s][v]) <= 1e-9 * best[v];
        if (!same) ++dist_bad;
      }
    }
  }
  o.pass = tw == 4 && sep_bad == 0 && dist_bad == 0;
  o.detail = "treewidth(4x4) = " + std::to_string(tw) + ", separator disagreements " + std::to_string(sep_bad) +
             "/100, distance mismatches " + std::to_string(dist_bad);
  return o;
}

Outcome determinism() {
  Outcome o;
  // identical configs, different worker counts
  ExperimentConfig cfg;
  cfg.graph = random_planar_graph(60, 3);
  cfg.seeds = 8;
  cfg.base_seed = 90;
  cfg.keep_artifacts = true;
  cfg.jobs = 1;
  PipelineResult a = run_pipeline(cfg);
  cfg.jobs = 4;
  PipelineResult b = run_pipeline(cfg);
  int diffs = 0;
  for (std::size_t i = 0; i < a.records.size(); ++i)
    if (dump(a.records[i].artifact) != dump(b.records[i].artifact)) ++diffs;

  // every artifact written by the sweeps reads back and verifies
  const Sweeps& s = sweeps();
  int artifacts = 0, reverify_bad = 0;
  for (const auto& [psi, res] : s.by_psi)
    for (const auto& rec : res.records) {
      if (!rec.ok) continue;
      ++artifacts;
      Json back = Json::parse(dump(rec.artifact));
      if (dump(to_json(embedding_from_json(back))) != dump(rec.artifact) || !verify_artifact(s.grid, back).valid)
        ++reverify_bad;
    }
  WeightedGraph g = grid_graph(9, 9);
  RandomSource rng(4);
  ClusteringChain chain = build_chain(g, 5, rng);
  ClusterTree tree = ClusterTree::from_chain(chain);
  CutFamilyArtifact cfa{chain, std::vector<double>(81, 1.0), {}};
  cfa.family = build_cut_family(g, tree, tree.root, cfa.weights, {}, 4, 3, 81);
  std::vector<Json> others = {to_json(chain), to_json(build_cop_decomposition(g, 2.0, 5, rng)),
                              to_json(shortcut_partition(g, 0.5, 5, rng)), to_json(cfa)};
  for (const auto& j : others) {
    ++artifacts;
    if (!verify_artifact(g, Json::parse(dump(j))).valid) ++reverify_bad;
  }
  o.pass = a.records.size() == 8 && diffs == 0 && reverify_bad == 0;
  o.detail = std::to_string(diffs) + " byte differences over " + std::to_string(a.records.size()) + " replayed runs, " +
             std::to_string(reverify_bad) + " of " + std::to_string(artifacts) + " artifacts failed to re-verify";
  return o;
}

}  // namespace

int main() {
  std::vector<std::function<Outcome()>> criteria = {chains_valid,         cops_valid,         shortcut_diameter,
                                                    separating_scaling,   cut_families,       contraction_sequences,
                                                    embedding_invariants, distortion_trend,   oracles,
                                                    determinism};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("criterion %zu %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
