#include "diamcover/model.hpp"

#include <random>
#include <sstream>

namespace diamcover {

void Instance::check() const {
  if (dim < 1) throw std::invalid_argument("instance: dim must be >= 1");
  if (diameter <= 0) throw std::invalid_argument("instance: diameter must be > 0");
  for (const Point& p : points)
    if (p.dim() != dim) throw DimensionMismatch("instance: point of wrong dimension");
  if (!labels.empty() && labels.size() != points.size())
    throw std::invalid_argument("instance: label count mismatch");
}

UnitBallGraph build_graph(const Instance& inst) {
  inst.check();
  int n = inst.n();
  UnitBallGraph g;
  g.n = n;
  g.adj.assign(n, std::vector<bool>(n, false));
  g.neighbors.assign(n, {});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (cmp_dist(inst.points[i], inst.points[j], inst.diameter) != Cmp::kGreater) {
        g.adj[i][j] = g.adj[j][i] = true;
        g.neighbors[i].push_back(j);
        g.neighbors[j].push_back(i);
      }
    }
  return g;
}

CoverReport verify_cover(const Instance& inst, const CliqueCover& cover, bool full) {
  inst.check();
  int n = inst.n();
  CoverReport report;
  std::vector<int> owner(n, -1);
  for (size_t c = 0; c < cover.cliques.size(); ++c) {
    const auto& clique = cover.cliques[c];
    if (clique.empty()) {
      report.violations.push_back("clique " + std::to_string(c) + " is empty");
      continue;
    }
    for (int v : clique) {
      if (v < 0 || v >= n) throw std::out_of_range("verify_cover: vertex index out of range");
      if (owner[v] != -1) {
        std::ostringstream os;
        os << "vertex " << v << " appears in cliques " << owner[v] << " and " << c;
        report.violations.push_back(os.str());
      }
      owner[v] = static_cast<int>(c);
    }
    for (size_t a = 0; a < clique.size(); ++a)
      for (size_t b = a + 1; b < clique.size(); ++b) {
        if (cmp_dist(inst.points[clique[a]], inst.points[clique[b]], inst.diameter) ==
            Cmp::kGreater) {
          std::ostringstream os;
          os << "clique " << c << " contains far pair (" << clique[a] << ", " << clique[b]
             << ")";
          report.violations.push_back(os.str());
        }
      }
  }
  if (full) {
    for (int v = 0; v < n; ++v)
      if (owner[v] == -1)
        report.violations.push_back("vertex " + std::to_string(v) + " is uncovered");
  }
  report.ok = report.violations.empty();
  return report;
}

Instance gen_random(int n, const Rat& box_side, const Rat& diameter, uint64_t seed) {
  if (n < 0) throw std::invalid_argument("gen_random: n must be >= 0");
  if (box_side <= 0 || diameter <= 0)
    throw std::invalid_argument("gen_random: box_side and diameter must be > 0");
  Instance inst;
  inst.dim = 2;
  inst.diameter = diameter;
  std::mt19937_64 rng(seed);
  const long kGrid = 1L << 20;
  for (int i = 0; i < n; ++i) {
    Rat x = box_side * rat_from_long(static_cast<long>(rng() & (kGrid - 1)), kGrid);
    Rat y = box_side * rat_from_long(static_cast<long>(rng() & (kGrid - 1)), kGrid);
    inst.points.emplace_back(x, y);
  }
  return inst;
}

}  // namespace diamcover
