// lowtw: generators, builders, verifiers and experiment sweeps on the command line.
#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <iostream>
#include <sstream>

#include "lowtw/balanced_cut.hpp"
#include "lowtw/generators.hpp"
#include "lowtw/pipeline.hpp"
#include "lowtw/serialize.hpp"

using namespace lowtw;

namespace {

struct Shared {
  std::string graph_file;
  std::string gen;
  std::uint64_t seed = 0;
  int seeds = 1;
  int r = 5;
  double epsilon = 0.5;
  double delta = 3.0;
  int psi = 8;
  std::string tau = "auto";
  std::string format = "json";
  std::string out;
  int jobs = 1;
};

WeightedGraph load(const Shared& s) {
  if (!s.graph_file.empty() && !s.gen.empty()) throw GraphError("give either --graph or --gen, not both");
  if (!s.graph_file.empty()) return read_edge_list_file(s.graph_file);
  if (!s.gen.empty()) return generate_graph(s.gen, s.seed);
  throw GraphError("an input graph is required (--graph or --gen)");
}

// chain-based commands need lengths of at least 1
WeightedGraph load_normalized(const Shared& s) {
  WeightedGraph g = load(s);
  if (g.num_edges() > 0 && g.min_edge_length() < 1.0) g = normalize(g).graph;
  return g;
}

void emit(const Shared& s, const std::string& text) {
  if (s.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(s.out, std::ios::binary);
  if (!f) throw GraphError("cannot write " + s.out);
  f << text;
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string line;
  for (const auto& c : cells) line += (line.empty() ? "" : ",") + c;
  return line + "\n";
}

std::string num(double x) { return format_length(x); }

int cmd_gen(const Shared& s) {
  WeightedGraph g = load(s);
  std::ostringstream os;
  write_edge_list(os, g);
  emit(s, os.str());
  return 0;
}

int cmd_chain(const Shared& s, bool fixed_eps) {
  WeightedGraph g = load_normalized(s);
  RandomSource rng(s.seed);
  ChainOptions opts;
  if (fixed_eps) {
    opts.target_scale = false;
    opts.epsilon = s.epsilon;
  }
  ClusteringChain c = build_chain(g, s.r, rng, opts);
  if (s.format == "json") {
    emit(s, dump(to_json(c)));
    return 0;
  }
  std::string text = csv_row({"level", "clusters", "max_diameter", "hop"});
  for (int i = 0; i <= c.k; ++i) {
    double d = 0;
    for (double x : c.levels[i].diameter) d = std::max(d, x);
    text += csv_row({std::to_string(i), std::to_string(c.levels[i].clusters.size()), num(d),
                     i < c.k ? std::to_string(c.hop_per_level[i]) : ""});
  }
  emit(s, text);
  return 0;
}

int cmd_cops(const Shared& s) {
  WeightedGraph g = load(s);
  RandomSource rng(s.seed);
  CopDecomposition cd = build_cop_decomposition(g, s.delta, s.r, rng);
  if (s.format == "json") {
    emit(s, dump(to_json(cd)));
    return 0;
  }
  std::string text = csv_row({"supernode", "parent", "members", "skeleton", "adjacent_ancestors"});
  for (const auto& x : cd.supernodes)
    text += csv_row({std::to_string(x.id), std::to_string(x.parent), std::to_string(x.members.size()),
                     std::to_string(x.skeleton.size()), std::to_string(x.adjacent_ancestors.size())});
  emit(s, text);
  return 0;
}

int cmd_shortcut(const Shared& s) {
  WeightedGraph g = load(s);
  RandomSource rng(s.seed);
  ShortcutPartition sp = shortcut_partition(g, s.epsilon, s.r, rng);
  if (s.format == "json") {
    emit(s, dump(to_json(sp)));
    return 0;
  }
  std::string text = csv_row({"cluster", "size", "center", "supernode", "diameter"});
  for (std::size_t c = 0; c < sp.clustering.clusters.size(); ++c)
    text += csv_row({std::to_string(c), std::to_string(sp.clustering.clusters[c].size()), std::to_string(sp.centers[c]),
                     std::to_string(sp.cluster_supernode[c]), num(strong_diameter(g, sp.clustering.clusters[c]))});
  emit(s, text);
  return 0;
}

int cmd_cut(const Shared& s) {
  WeightedGraph g = load_normalized(s);
  RandomSource rng(s.seed);
  RandomSource chain_rng = rng.fork(1);
  CutFamilyArtifact a;
  a.chain = build_chain(g, s.r, chain_rng);
  ClusterTree tree = ClusterTree::from_chain(a.chain);
  TauSpec ts = TauSpec::parse(s.tau);
  int tau = ts.automatic ? auto_tau(a.chain.hop_bound, compute_metrics(g).aspect_ratio, s.psi, ts.c_tau) : ts.fixed;
  a.weights.assign(g.num_vertices(), 1.0);
  a.family = build_cut_family(g, tree, tree.root, a.weights, {}, s.psi, tau, std::max<int>(g.num_vertices(), tau));
  if (s.format == "json") {
    emit(s, dump(to_json(a)));
    return 0;
  }
  std::string text = csv_row({"cut", "clusters", "vertices"});
  for (std::size_t j = 0; j < a.family.cuts.size(); ++j) {
    std::size_t verts = 0;
    for (int x : a.family.cuts[j].clusters) verts += tree.nodes[x].members.size();
    text += csv_row({std::to_string(j), std::to_string(a.family.cuts[j].clusters.size()), std::to_string(verts)});
  }
  emit(s, text);
  return 0;
}

EmbedConfig embed_config(const Shared& s) {
  EmbedConfig cfg;
  cfg.r = s.r;
  cfg.psi = s.psi;
  cfg.tau = TauSpec::parse(s.tau);
  return cfg;
}

int cmd_embed(const Shared& s) {
  WeightedGraph g = load_normalized(s);
  RandomSource rng(s.seed);
  EmbeddingResult res = embed(g, embed_config(s), rng);
  if (s.format == "json") {
    emit(s, dump(to_json(res)));
    return 0;
  }
  const auto& st = res.stats;
  emit(s, csv_row({"seed", "tau", "psi", "k", "hop_bound", "depth", "width", "n_calls", "calibration_events"}) +
              csv_row({std::to_string(s.seed), std::to_string(st.tau), std::to_string(st.psi), std::to_string(st.k),
                       std::to_string(st.hop_bound), std::to_string(st.depth), std::to_string(st.width),
                       std::to_string(st.n_calls), std::to_string(st.calibration_events.size())}));
  return 0;
}

int cmd_verify(const Shared& s, const std::string& artifact) {
  WeightedGraph g = load(s);
  std::ifstream f(artifact);
  if (!f) throw GraphError("cannot read " + artifact);
  Json j = Json::parse(f);
  // chain-based artifacts live on the normalized graph
  const std::string kind = j.value("kind", "");
  if ((kind == "chain" || kind == "cut_family" || kind == "embedding") && g.num_edges() > 0 && g.min_edge_length() < 1.0)
    g = normalize(g).graph;
  VerifyOutcome v = verify_artifact(g, j);
  if (s.format == "json") {
    Json rep = {{"kind", v.kind}, {"valid", v.valid}, {"violations", v.violations}, {"summary", v.summary}};
    emit(s, dump(rep));
  } else {
    std::string text = csv_row({"kind", "valid", "violations"}) +
                       csv_row({v.kind, v.valid ? "1" : "0", std::to_string(v.violations.size())});
    emit(s, text);
  }
  for (const auto& line : v.violations) std::cerr << "violation: " << line << "\n";
  return v.valid ? 0 : 1;
}

int cmd_sweep(const Shared& s, const std::vector<int>& psis, bool keep) {
  WeightedGraph g = load(s);
  Json all = Json::array();
  std::string csv;
  bool ok = true;
  for (int psi : psis.empty() ? std::vector<int>{s.psi} : psis) {
    ExperimentConfig cfg;
    cfg.graph = g;
    cfg.graph_label = !s.gen.empty() ? s.gen : s.graph_file;
    cfg.seeds = s.seeds;
    cfg.base_seed = s.seed;
    cfg.embed = embed_config(s);
    cfg.embed.psi = psi;
    cfg.jobs = s.jobs;
    cfg.keep_artifacts = keep;
    PipelineResult res = run_pipeline(cfg);
    Json block = {{"summary", res.summary}, {"records", Json::array()}};
    for (const auto& r : res.records) {
      ok = ok && r.ok;
      Json rec = {{"seed", r.seed},   {"ok", r.ok},         {"error", r.error},       {"tau", r.tau},
                  {"width", r.width}, {"width_bound", r.width_bound}, {"depth", r.depth},
                  {"n_calls", r.n_calls}, {"hop_bound", r.hop_bound}, {"calibration_events", r.calibration_events},
                  {"mean_excess", r.mean_excess}, {"max_ratio", r.max_ratio}, {"violations", r.violations}};
      if (keep) rec["artifact"] = r.artifact;
      block["records"].push_back(rec);
    }
    all.push_back(block);
    std::string part = records_csv(res);
    if (csv.empty()) {
      csv = "psi," + part.substr(0, part.find('\n') + 1);
    }
    std::istringstream lines(part.substr(part.find('\n') + 1));
    for (std::string line; std::getline(lines, line);) csv += std::to_string(psi) + "," + line + "\n";
  }
  emit(s, s.format == "json" ? dump(all) : csv);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-treewidth embeddings of planar graphs: builders, verifiers and sweeps"};
  app.require_subcommand(1);
  Shared s;
  std::vector<int> psis;
  std::map<CLI::App*, CLI::Option*> eps_opt;

  // every subcommand takes the same flags; each uses the ones that apply to it
  auto sub = [&](const char* name, const char* help) {
    CLI::App* c = app.add_subcommand(name, help);
    c->add_option("--graph", s.graph_file, "edge-list file");
    c->add_option("--gen", s.gen, "generator spec: grid:a,b[,len] path:n star:n random_planar:n[,seed]");
    c->add_option("--seed", s.seed, "seed (first seed for sweep)");
    c->add_option("--seeds", s.seeds, "number of seeds for sweep")->check(CLI::NonNegativeNumber);
    c->add_option("--r", s.r, "cop parameter r")->check(CLI::Range(3, 1000));
    eps_opt[c] = c->add_option("--epsilon", s.epsilon, "shortcut scale; for chain, split at epsilon*diam")
                     ->check(CLI::Range(1e-9, 1.0));
    c->add_option("--delta", s.delta, "cop radius parameter")->check(CLI::PositiveNumber);
    c->add_option("--psi", psis, "cuts per family; sweep takes a comma list")->delimiter(',')->check(CLI::PositiveNumber);
    c->add_option("--tau", s.tau, "integer or auto[:c_tau]");
    c->add_option("--format", s.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    c->add_option("--out", s.out, "output file (default stdout)");
    c->add_option("--jobs", s.jobs, "worker threads for sweep")->check(CLI::PositiveNumber);
    return c;
  };
  auto* gen = sub("gen", "write a generated graph as an edge list");
  auto* chain = sub("chain", "sample a clustering chain");
  auto* cops = sub("cops", "build a buffered cop decomposition");
  auto* shortcut = sub("shortcut", "sample a shortcut partition");
  auto* cut = sub("cut", "build a cut family for the whole graph");
  auto* emb = sub("embed", "embed into a low-treewidth host graph");
  std::string artifact;
  auto* ver = sub("verify", "check a serialized artifact against its graph; exit 1 on violations");
  ver->add_option("artifact", artifact, "artifact JSON")->required();
  bool keep = false;
  auto* sweep = sub("sweep", "run chain, embed, verify and measure over many seeds");
  sweep->add_flag("--artifacts", keep, "include every embedding in the JSON output");

  CLI11_PARSE(app, argc, argv);
  if (!psis.empty()) s.psi = psis.front();
  try {
    if (gen->parsed()) return cmd_gen(s);
    if (chain->parsed()) return cmd_chain(s, eps_opt[chain]->count() > 0);
    if (cops->parsed()) return cmd_cops(s);
    if (shortcut->parsed()) return cmd_shortcut(s);
    if (cut->parsed()) return cmd_cut(s);
    if (emb->parsed()) return cmd_embed(s);
    if (ver->parsed()) return cmd_verify(s, artifact);
    if (sweep->parsed()) return cmd_sweep(s, psis, keep);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
