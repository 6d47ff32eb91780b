#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lowtw/generators.hpp"
#include "lowtw/serialize.hpp"

namespace py = pybind11;
using namespace lowtw;

namespace {

WeightedGraph make_graph(Vertex n, const std::vector<std::tuple<Vertex, Vertex, double>>& edges) {
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (auto [u, v, w] : edges) es.push_back({u, v, w});
  return WeightedGraph(n, std::move(es));
}

std::vector<std::tuple<Vertex, Vertex, double>> edge_tuples(const WeightedGraph& g) {
  std::vector<std::tuple<Vertex, Vertex, double>> out;
  for (const auto& e : g.edges()) out.emplace_back(e.u, e.v, e.len);
  return out;
}

WeightedGraph chain_ready(const WeightedGraph& g) {
  return g.num_edges() > 0 && g.min_edge_length() < 1.0 ? normalize(g).graph : g;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Low-treewidth embeddings of planar graphs";

  py::register_exception<GraphError>(m, "GraphError", PyExc_ValueError);

  py::class_<WeightedGraph>(m, "Graph")
      .def(py::init(&make_graph), py::arg("n"), py::arg("edges"))
      .def_property_readonly("n", &WeightedGraph::num_vertices)
      .def_property_readonly("m", &WeightedGraph::num_edges)
      .def("edges", &edge_tuples)
      .def("diameter", [](const WeightedGraph& g) { return graph_diameter(g); })
      .def("distance", &shortest_path_distance)
      .def("normalized", [](const WeightedGraph& g) { return normalize(g).graph; })
      .def("__repr__", [](const WeightedGraph& g) {
        return "Graph(n=" + std::to_string(g.num_vertices()) + ", m=" + std::to_string(g.num_edges()) + ")";
      });

  m.def("generate", &generate_graph, py::arg("spec"), py::arg("seed") = 0);
  m.def("read_edge_list", &read_edge_list_file, py::arg("path"));
  m.def("exact_treewidth", &exact_treewidth);
  m.def("heuristic_width", [](const WeightedGraph& g) { return heuristic_tree_decomposition(g).width(); });

  m.def(
      "chain_json",
      [](const WeightedGraph& g, std::uint64_t seed, int r) {
        RandomSource rng(seed);
        return dump(to_json(build_chain(chain_ready(g), r, rng)));
      },
      py::arg("g"), py::arg("seed") = 0, py::arg("r") = 5);
  m.def(
      "cop_json",
      [](const WeightedGraph& g, double delta, std::uint64_t seed, int r) {
        RandomSource rng(seed);
        return dump(to_json(build_cop_decomposition(g, delta, r, rng)));
      },
      py::arg("g"), py::arg("delta"), py::arg("seed") = 0, py::arg("r") = 5);
  m.def(
      "shortcut_json",
      [](const WeightedGraph& g, double epsilon, std::uint64_t seed, int r) {
        RandomSource rng(seed);
        return dump(to_json(shortcut_partition(g, epsilon, r, rng)));
      },
      py::arg("g"), py::arg("epsilon"), py::arg("seed") = 0, py::arg("r") = 5);
  m.def(
      "embed_json",
      [](const WeightedGraph& g, std::uint64_t seed, int psi, const std::string& tau, int r) {
        EmbedConfig cfg;
        cfg.r = r;
        cfg.psi = psi;
        cfg.tau = TauSpec::parse(tau);
        RandomSource rng(seed);
        EmbeddingResult res;
        {
          py::gil_scoped_release release;
          res = embed(chain_ready(g), cfg, rng);
        }
        return dump(to_json(res));
      },
      py::arg("g"), py::arg("seed") = 0, py::arg("psi") = 8, py::arg("tau") = "auto", py::arg("r") = 5);
  m.def(
      "verify_json",
      [](const WeightedGraph& g, const std::string& text) {
        Json j = Json::parse(text);
        const std::string kind = j.value("kind", "");
        WeightedGraph h = (kind == "chain" || kind == "cut_family" || kind == "embedding") ? chain_ready(g) : g;
        VerifyOutcome v = verify_artifact(h, j);
        return py::make_tuple(v.valid, v.violations);
      },
      py::arg("g"), py::arg("artifact"));
}
