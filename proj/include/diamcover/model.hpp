#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "diamcover/geometry.hpp"

namespace diamcover {

// A geometric clique cover instance: points in R^dim plus the diameter
// threshold D. Vertex identity is the stable index into points.
struct Instance {
  int dim = 2;
  Rat diameter = 2;
  std::vector<Point> points;
  std::vector<std::string> labels;  // optional, empty or one per point

  int n() const { return static_cast<int>(points.size()); }
  void check() const;  // throws on inconsistent dimensions / D <= 0
};

// Threshold graph of an instance: i ~ j iff dist(p_i, p_j) <= D.
struct UnitBallGraph {
  int n = 0;
  std::vector<std::vector<bool>> adj;
  std::vector<std::vector<int>> neighbors;

  bool adjacent(int i, int j) const { return adj[static_cast<size_t>(i)][static_cast<size_t>(j)]; }
  int degree(int i) const { return static_cast<int>(neighbors[static_cast<size_t>(i)].size()); }
};

UnitBallGraph build_graph(const Instance& inst);

struct CliqueCover {
  std::vector<std::vector<int>> cliques;

  size_t size() const { return cliques.size(); }
};

struct CoverReport {
  bool ok = false;
  std::vector<std::string> violations;
};

// Checks disjointness and clique-ness of every class; with full=true also
// exhaustive coverage of all vertices. Throws on out-of-range indices.
CoverReport verify_cover(const Instance& inst, const CliqueCover& cover, bool full);

// n points with coordinates box_side * k / 2^20, k drawn from a seeded
// mt19937_64 (low 20 bits), so runs are reproducible across platforms.
Instance gen_random(int n, const Rat& box_side, const Rat& diameter, uint64_t seed);

}  // namespace diamcover
