#include "lowtw/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace lowtw {

namespace {

struct SeedWork {
  SeedRecord record;
  std::vector<std::vector<char>> separated;  // [level][edge] of the sampled chain
};

SeedWork run_seed(const WeightedGraph& g, const ExperimentConfig& cfg, std::uint64_t seed) {
  SeedWork w;
  SeedRecord& rec = w.record;
  rec.seed = seed;
  auto start = std::chrono::steady_clock::now();
  try {
    RandomSource rng(seed);
    EmbeddingResult res = embed(g, cfg.embed, rng);
    EmbeddingReport rep = verify_embedding(g, res);
    ChainReport cr = verify_chain(g, res.chain);
    rec.tau = res.stats.tau;
    rec.width = rep.width;
    rec.width_bound = rep.width_bound;
    rec.depth = rep.depth;
    rec.phi_root = rep.phi_root;
    rec.n_calls = res.stats.n_calls;
    rec.k = res.chain.k;
    rec.hop_bound = cr.measured_hop;
    rec.calibration_events = static_cast<int>(res.stats.calibration_events.size());
    rec.violations = rep.violations;
    for (const auto& v : cr.violations) rec.violations.push_back("chain: " + v);
    DistortionStats ds = measure_distortion(g, {res});
    rec.mean_excess = ds.mean_excess;
    rec.max_ratio = ds.max_distortion;
    rec.min_ratio = ds.min_ratio;
    rec.ok = rep.valid && cr.valid;
    const auto& edges = g.edges();
    for (const auto& lv : res.chain.levels) {
      std::vector<char> sep(edges.size(), 0);
      for (std::size_t e = 0; e < edges.size(); ++e) sep[e] = lv.cluster_of[edges[e].u] != lv.cluster_of[edges[e].v];
      w.separated.push_back(std::move(sep));
    }
    if (cfg.keep_artifacts) rec.artifact = to_json(res);
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return w;
}

}  // namespace

PipelineResult run_pipeline(const ExperimentConfig& cfg) {
  PipelineResult out;
  if (cfg.seeds < 0) throw GraphError("pipeline: seed count must be nonnegative");
  WeightedGraph g = cfg.graph;
  if (g.num_edges() > 0) {
    NormalizedGraph ng = normalize(cfg.graph);
    g = ng.graph;
    out.scale = ng.scale;
  }
  std::vector<SeedWork> work(cfg.seeds);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i; (i = next.fetch_add(1)) < cfg.seeds;) work[i] = run_seed(g, cfg, cfg.base_seed + i);
  };
  const int jobs = std::max(1, std::min(cfg.jobs, cfg.seeds));
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::sort(work.begin(), work.end(), [](const SeedWork& a, const SeedWork& b) { return a.record.seed < b.record.seed; });

  // per-level separation frequencies over the seeds that produced a chain
  std::vector<std::vector<double>> freq;
  int counted = 0;
  for (const auto& w : work) {
    if (w.separated.empty()) continue;
    ++counted;
    if (freq.size() < w.separated.size()) freq.resize(w.separated.size(), std::vector<double>(g.num_edges(), 0.0));
    for (std::size_t i = 0; i < w.separated.size(); ++i)
      for (std::size_t e = 0; e < w.separated[i].size(); ++e) freq[i][e] += w.separated[i][e];
  }
  for (std::size_t i = 0; i < freq.size(); ++i)
    for (std::size_t e = 0; e < freq[i].size(); ++e)
      out.beta_hat = std::max(out.beta_hat, freq[i][e] / counted * std::ldexp(1.0, static_cast<int>(i)) / g.edges()[e].len);

  std::map<int, int> widths;
  int failures = 0, errors = 0, calib = 0;
  double excess = 0.0, max_ratio = 1.0;
  int depth = 0;
  for (auto& w : work) {
    const SeedRecord& r = w.record;
    if (!r.error.empty()) {
      ++errors;
    } else {
      ++widths[r.width];
      excess += r.mean_excess;
      max_ratio = std::max(max_ratio, r.max_ratio);
      depth = std::max(depth, r.depth);
      calib += r.calibration_events;
      out.h_hat = std::max(out.h_hat, r.hop_bound);
    }
    if (!r.ok) ++failures;
    out.records.push_back(std::move(w.record));
  }
  Json wd = Json::object();
  for (auto [w, c] : widths) wd[std::to_string(w)] = c;
  const int ran = cfg.seeds - errors;
  out.summary = {{"graph", cfg.graph_label},
                 {"n", g.num_vertices()},
                 {"m", g.num_edges()},
                 {"scale", out.scale},
                 {"seeds", cfg.seeds},
                 {"base_seed", cfg.base_seed},
                 {"r", cfg.embed.r},
                 {"psi", cfg.embed.psi},
                 {"tau", cfg.embed.tau.to_string()},
                 {"failures", failures},
                 {"errors", errors},
                 {"width_distribution", wd},
                 {"max_depth", depth},
                 {"mean_excess", ran > 0 ? excess / ran : 0.0},
                 {"max_ratio", max_ratio},
                 {"beta_hat", out.beta_hat},
                 {"h_hat", out.h_hat},
                 {"calibration_events", calib}};
  return out;
}

std::string records_csv(const PipelineResult& r) {
  std::ostringstream os;
  os << "seed,ok,tau,width,width_bound,depth,phi_root,n_calls,k,hop_bound,calibration_events,mean_excess,max_ratio,"
        "min_ratio,violations,error\n";
  for (const auto& x : r.records) {
    std::string err = x.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    os << x.seed << ',' << (x.ok ? 1 : 0) << ',' << x.tau << ',' << x.width << ',' << x.width_bound << ',' << x.depth
       << ',' << format_length(x.phi_root) << ',' << x.n_calls << ',' << x.k << ',' << x.hop_bound << ','
       << x.calibration_events << ',' << format_length(x.mean_excess) << ',' << format_length(x.max_ratio) << ','
       << format_length(x.min_ratio) << ',' << x.violations.size() << ',' << err << '\n';
  }
  return os.str();
}

}  // namespace lowtw
