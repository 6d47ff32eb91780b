#include "lowtw/generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "lowtw/random.hpp"

namespace lowtw {

WeightedGraph grid_graph(int a, int b, double len) {
  if (a < 1 || b < 1) throw GraphError("grid: sides must be positive");
  if (!(len > 0.0)) throw GraphError("grid: length must be positive");
  std::vector<Edge> edges;
  for (int y = 0; y < b; ++y)
    for (int x = 0; x < a; ++x) {
      Vertex v = y * a + x;
      if (x + 1 < a) edges.push_back({v, v + 1, len});
      if (y + 1 < b) edges.push_back({v, v + a, len});
    }
  return WeightedGraph(a * b, std::move(edges));
}

WeightedGraph path_graph(int n) {
  if (n < 1) throw GraphError("path: n must be positive");
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, 1.0});
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph star_graph(int n) {
  if (n < 1) throw GraphError("star: n must be positive");
  std::vector<Edge> edges;
  for (Vertex v = 1; v < n; ++v) edges.push_back({0, v, 1.0});
  return WeightedGraph(n, std::move(edges));
}

namespace {

struct Pt {
  double x, y;
};

struct Tri {
  std::array<int, 3> v;
  double cx, cy, r2;  // circumcircle
};

Tri make_tri(const std::vector<Pt>& p, int a, int b, int c) {
  const Pt &A = p[a], &B = p[b], &C = p[c];
  double d = 2.0 * (A.x * (B.y - C.y) + B.x * (C.y - A.y) + C.x * (A.y - B.y));
  double a2 = A.x * A.x + A.y * A.y, b2 = B.x * B.x + B.y * B.y, c2 = C.x * C.x + C.y * C.y;
  double ux = (a2 * (B.y - C.y) + b2 * (C.y - A.y) + c2 * (A.y - B.y)) / d;
  double uy = (a2 * (C.x - B.x) + b2 * (A.x - C.x) + c2 * (B.x - A.x)) / d;
  return {{a, b, c}, ux, uy, (A.x - ux) * (A.x - ux) + (A.y - uy) * (A.y - uy)};
}

}  // namespace

WeightedGraph random_planar_graph(int n, std::uint64_t seed) {
  if (n < 1) throw GraphError("random_planar: n must be positive");
  RandomSource rng(seed);
  std::vector<Pt> pts;
  for (int i = 0; i < n; ++i) {
    double x = rng.uniform();
    pts.push_back({x, rng.uniform()});
  }
  if (n <= 3) {
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v)
        edges.push_back({u, v, std::hypot(pts[u].x - pts[v].x, pts[u].y - pts[v].y)});
    return WeightedGraph(n, std::move(edges));
  }
  // Bowyer-Watson with a large enclosing triangle
  pts.push_back({-100.0, -100.0});
  pts.push_back({100.0, -100.0});
  pts.push_back({0.0, 100.0});
  std::vector<Tri> tris{make_tri(pts, n, n + 1, n + 2)};
  for (int i = 0; i < n; ++i) {
    const Pt& q = pts[i];
    std::vector<std::array<int, 2>> boundary;
    std::vector<Tri> keep;
    std::vector<std::array<int, 2>> edges;
    for (const Tri& t : tris) {
      double dx = q.x - t.cx, dy = q.y - t.cy;
      if (dx * dx + dy * dy < t.r2) {
        for (int k = 0; k < 3; ++k) {
          int a = t.v[k], b = t.v[(k + 1) % 3];
          edges.push_back({std::min(a, b), std::max(a, b)});
        }
      } else {
        keep.push_back(t);
      }
    }
    std::sort(edges.begin(), edges.end());
    for (std::size_t j = 0; j < edges.size();) {
      std::size_t k = j;
      while (k < edges.size() && edges[k] == edges[j]) ++k;
      if (k - j == 1) boundary.push_back(edges[j]);
      j = k;
    }
    for (const auto& e : boundary) keep.push_back(make_tri(pts, e[0], e[1], i));
    tris = std::move(keep);
  }
  std::vector<Edge> edges;
  for (const Tri& t : tris)
    for (int k = 0; k < 3; ++k) {
      int a = t.v[k], b = t.v[(k + 1) % 3];
      if (a >= n || b >= n) continue;
      if (a > b) std::swap(a, b);
      edges.push_back({a, b, std::hypot(pts[a].x - pts[b].x, pts[a].y - pts[b].y)});
    }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.u != y.u ? x.u < y.u : x.v < y.v; });
  edges.erase(std::unique(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.u == y.u && x.v == y.v; }),
              edges.end());
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph generate_graph(const std::string& spec, std::uint64_t default_seed) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw GraphError("generator spec needs a colon: '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  std::vector<std::string> args;
  std::stringstream ss(spec.substr(colon + 1));
  for (std::string tok; std::getline(ss, tok, ',');) args.push_back(tok);
  auto num = [&](std::size_t i) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(args.at(i), &used);
    } catch (const std::exception&) {
      throw GraphError("bad number in generator spec '" + spec + "'");
    }
    if (used != args[i].size()) throw GraphError("bad number in generator spec '" + spec + "'");
    return v;
  };
  auto integer = [&](std::size_t i) {
    double v = num(i);
    if (v != std::floor(v) || v < 0 || v > 1e9) throw GraphError("expected an integer in generator spec '" + spec + "'");
    return static_cast<long long>(v);
  };
  if (kind == "grid" && (args.size() == 2 || args.size() == 3))
    return grid_graph(static_cast<int>(integer(0)), static_cast<int>(integer(1)), args.size() == 3 ? num(2) : 1.0);
  if (kind == "path" && args.size() == 1) return path_graph(static_cast<int>(integer(0)));
  if (kind == "star" && args.size() == 1) return star_graph(static_cast<int>(integer(0)));
  if (kind == "random_planar" && (args.size() == 1 || args.size() == 2))
    return random_planar_graph(static_cast<int>(integer(0)),
                               args.size() == 2 ? static_cast<std::uint64_t>(integer(1)) : default_seed);
  throw GraphError("unknown generator spec '" + spec + "'");
}

}  // namespace lowtw
