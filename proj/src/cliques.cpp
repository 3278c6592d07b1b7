#include "diamcover/cliques.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_set>

namespace diamcover {

namespace {

std::vector<int> sorted_unique(std::vector<int> s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

std::vector<int> mask_to_indices(uint64_t mask, const std::vector<int>& base) {
  std::vector<int> out;
  for (size_t i = 0; i < base.size(); ++i)
    if (mask >> i & 1) out.push_back(base[i]);
  return out;
}

}  // namespace

std::vector<std::pair<LensRegion, std::vector<int>>> lens_candidates(
    const Instance& inst, const std::vector<int>& S_in) {
  inst.check();
  if (inst.dim != 2) throw DimensionMismatch("lens_candidates: 2-d instances only");
  std::vector<int> S = sorted_unique(S_in);
  std::vector<std::pair<LensRegion, std::vector<int>>> out;
  for (size_t i = 0; i < S.size(); ++i) {
    for (size_t j = i; j < S.size(); ++j) {
      const Point& u = inst.points[S[i]];
      const Point& v = inst.points[S[j]];
      Rat r2 = squared_distance(u, v);
      if (r2 > inst.diameter * inst.diameter) continue;
      LensRegion lens{u, v, r2};
      std::vector<int> members;
      for (int s : S)
        if (in_lens(inst.points[s], lens)) members.push_back(s);
      out.emplace_back(std::move(lens), std::move(members));
    }
  }
  return out;
}

RelevantCliqueSet relevant_cliques(const Instance& inst, const UnitBallGraph& graph,
                                   const std::vector<int>& S_in, int h) {
  if (h < 0) throw std::invalid_argument("relevant_cliques: h must be >= 0");
  std::vector<int> S = sorted_unique(S_in);
  if (S.size() > 64) throw std::invalid_argument("relevant_cliques: |S| > 64 unsupported");
  size_t m = S.size();

  RelevantCliqueSet result;
  result.base = S;
  result.halfplane_budget = h;
  if (m == 0) return result;

  // Clique masks, via local adjacency.
  std::vector<uint64_t> adj(m, 0);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j)
      if (i != j && graph.adjacent(S[i], S[j])) adj[i] |= uint64_t(1) << j;
  auto is_clique = [&](uint64_t mask) {
    for (uint64_t rest = mask; rest;) {
      size_t i = static_cast<size_t>(__builtin_ctzll(rest));
      rest &= rest - 1;
      if ((mask & ~(uint64_t(1) << i) & ~adj[i]) != 0) return false;
    }
    return true;
  };

  // Base layer: lens subsets.
  std::unordered_set<uint64_t> lens_masks;
  for (const auto& [lens, members] : lens_candidates(inst, S)) {
    uint64_t mask = 0;
    for (int g : members) {
      size_t i = static_cast<size_t>(std::lower_bound(S.begin(), S.end(), g) - S.begin());
      mask |= uint64_t(1) << i;
    }
    lens_masks.insert(mask);
  }

  // Distinct subsets cut out by a single half-plane: boundaries through
  // two points of S, both sides, both closures.
  std::unordered_set<uint64_t> hp_masks;
  for (size_t a = 0; a < m; ++a)
    for (size_t b = a + 1; b < m; ++b) {
      const Point& pa = inst.points[S[a]];
      const Point& pb = inst.points[S[b]];
      if (pa == pb) continue;
      for (Orientation side : {Orientation::kLeft, Orientation::kRight})
        for (bool closed : {true, false}) {
          HalfPlane hp{pa, pb, side, closed};
          uint64_t mask = 0;
          for (size_t i = 0; i < m; ++i)
            if (in_halfplane(inst.points[S[i]], hp)) mask |= uint64_t(1) << i;
          hp_masks.insert(mask);
        }
    }

  // Close under up to h half-plane intersections; dedup keeps this far
  // below the combinatorial |S|^(2h) bound.
  std::unordered_set<uint64_t> seen(lens_masks.begin(), lens_masks.end());
  std::vector<uint64_t> frontier(lens_masks.begin(), lens_masks.end());
  for (int level = 0; level < h && !frontier.empty(); ++level) {
    std::vector<uint64_t> next;
    for (uint64_t x : frontier)
      for (uint64_t hp : hp_masks) {
        uint64_t y = x & hp;
        if (seen.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }

  std::unordered_set<uint64_t> members;
  for (uint64_t mask : seen)
    if (mask != 0 && is_clique(mask)) members.insert(mask);
  for (size_t i = 0; i < m; ++i) members.insert(uint64_t(1) << i);

  for (uint64_t mask : members) result.cliques.push_back(mask_to_indices(mask, S));
  std::sort(result.cliques.begin(), result.cliques.end());
  return result;
}

bool is_separated(const Instance& inst, const CliqueCover& cover) {
  inst.check();
  if (inst.dim != 2) throw DimensionMismatch("is_separated: 2-d instances only");
  std::vector<ConvexPolygon> hulls;
  for (const auto& clique : cover.cliques) {
    std::vector<Point> pts;
    for (int v : clique) pts.push_back(inst.points[static_cast<size_t>(v)]);
    if (pts.empty()) continue;
    hulls.push_back(convex_hull(std::move(pts)));
  }
  for (size_t i = 0; i < hulls.size(); ++i)
    for (size_t j = i + 1; j < hulls.size(); ++j)
      if (!hulls_disjoint(hulls[i], hulls[j])) return false;
  return true;
}

}  // namespace diamcover
