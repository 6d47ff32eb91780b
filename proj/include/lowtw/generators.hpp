#pragma once

#include <cstdint>
#include <string>

#include "lowtw/graph.hpp"

namespace lowtw {

// a columns by b rows, vertex (x, y) has id y * a + x
WeightedGraph grid_graph(int a, int b, double len = 1.0);
WeightedGraph path_graph(int n);
// vertex 0 is the center
WeightedGraph star_graph(int n);
// Delaunay triangulation of n uniform points in the unit square, Euclidean lengths
WeightedGraph random_planar_graph(int n, std::uint64_t seed);

// "grid:a,b[,len]", "path:n", "star:n", "random_planar:n[,seed]"
WeightedGraph generate_graph(const std::string& spec, std::uint64_t default_seed = 0);

}  // namespace lowtw
