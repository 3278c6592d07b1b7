#pragma once

#include <utility>
#include <vector>

#include "diamcover/model.hpp"

namespace diamcover {

// Candidate solution restrictions for a vertex set S: every clique of a
// separated optimal cover restricted to S appears here (for a sufficient
// half-plane budget h). Members are canonical sorted index lists.
struct RelevantCliqueSet {
  std::vector<int> base;                   // S, sorted
  std::vector<std::vector<int>> cliques;   // deduplicated, nonempty
  int halfplane_budget = 0;
};

// Lens regions P_{u,v} over pairs u, v in S (including u == v) whose
// generating distance is at most D, each with the subset of S it captures.
std::vector<std::pair<LensRegion, std::vector<int>>> lens_candidates(
    const Instance& inst, const std::vector<int>& S);

// All subsets of S of the form R_{u,v} intersected with at most h
// half-planes (boundaries through two points of S, open or closed) that
// induce cliques, plus all singletons. |S| <= 64 required.
RelevantCliqueSet relevant_cliques(const Instance& inst, const UnitBallGraph& graph,
                                   const std::vector<int>& S, int h);

// True iff the convex hulls of the cliques' point sets are pairwise
// disjoint (2-d).
bool is_separated(const Instance& inst, const CliqueCover& cover);

}  // namespace diamcover
