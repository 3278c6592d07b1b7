#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diamcover/bits.hpp"
#include "diamcover/decomposition.hpp"
#include "diamcover/model.hpp"

namespace diamcover {

// ---------------------------------------------------------------------
// Oracles.

struct MinCoverResult {
  int k = 0;
  CliqueCover cover;
};

// Deterministic maximal-clique peeling; result >= optimum.
int greedy_upper_bound(const UnitBallGraph& graph);

// Exact minimum by subset dynamic programming, branching on cliques that
// contain the lowest-indexed uncovered vertex. Throws above the cap.
MinCoverResult brute_force_min_cover(const UnitBallGraph& graph, int cap = 20);

// Exact minimum by sequential assignment of vertices to existing or new
// cliques, pruned by a greedy upper bound and an independent-set-style
// lower bound. Deterministic; no size cap.
MinCoverResult branch_and_bound_min_cover(const UnitBallGraph& graph);

// All minimum covers, each partition listed once (classes ordered by
// smallest member). Throws when n exceeds the cap.
std::vector<CliqueCover> enumerate_optimal_covers(const UnitBallGraph& graph, int cap = 10);

// ---------------------------------------------------------------------
// Forget-node auxiliary graph: one vertex per pending clique, adjacency
// iff the union of the two cliques is again a clique of the instance
// graph. New solution cliques must contain a marked vertex.

struct AuxiliaryGraph {
  int n = 0;
  std::vector<uint32_t> adj;  // bitmask rows, no self-loops
  uint32_t marked = 0;

  bool operator==(const AuxiliaryGraph& o) const {
    return n == o.n && adj == o.adj && marked == o.marked;
  }
};

// Feasible part-counts for partitioning the whole vertex set into cliques
// that each contain a marked vertex: bit k set iff a k-part cover exists.
uint32_t aux_cover_counts(const AuxiliaryGraph& aux);

bool aux_cover_feasible(const AuxiliaryGraph& aux, int k);

// A witness partition into exactly k admissible cliques, if any.
std::optional<std::vector<uint32_t>> aux_cover_witness(const AuxiliaryGraph& aux, int k);

// ---------------------------------------------------------------------
// Configurations of a partition class.

// Exact tilings of the class {0, ..., class_size-1} by at most
// max_cliques disjoint members of `relevant` (local bitmasks). Members of
// each tiling are ordered by lowest vertex; the list is lexicographically
// sorted and duplicate-free by construction.
std::vector<std::vector<uint64_t>> enumerate_tilings(int class_size,
                                                     const std::vector<uint64_t>& relevant,
                                                     int max_cliques);

struct Configuration {
  std::vector<uint64_t> tiles;  // local masks, disjoint, union = class
  uint32_t covered_flags = 0;   // bit i: tiles[i] already covered
};

std::vector<Configuration> enumerate_configurations(int class_size,
                                                    const std::vector<uint64_t>& relevant,
                                                    int max_cliques);

// ---------------------------------------------------------------------
// The dynamic program over a nice tree decomposition.

struct DpOptions {
  int lambda = 12;  // max cliques tiling one class
  int h = 2;        // half-plane budget for relevant cliques
  bool collect_aux = false;
  size_t aux_log_cap = 20000;
};

struct DpStats {
  int num_bags = 0;
  size_t max_configs_per_class = 0;
  int escalations = 0;
  double wall_ms = 0;
};

// Raised when some class admits no tiling within lambda cliques from its
// relevant set; the caller escalates lambda and h.
struct EscalationNeeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DpResult {
  int min_k = -1;
  CliqueCover cover;
  DpStats stats;
  std::vector<AuxiliaryGraph> aux_log;
};

DpResult dp_solve(const Instance& inst, const UnitBallGraph& graph,
                  const KappaPartition& partition, const NiceTreeDecomposition& nice,
                  const DpOptions& opts);

// ---------------------------------------------------------------------
// End-to-end solve: builds the partition and decomposition, runs the DP,
// and escalates (lambda+4, h+1 per round) until the answer survives one
// extra escalation round unchanged.

struct SolveOptions {
  int lambda = 12;
  int h = 2;
  Rat epsilon = Rat(1, 5);
  int max_rounds = 6;
  bool single_bag = false;  // force the trivial one-bag decomposition
};

struct SolveResult {
  int k = 0;
  CliqueCover cover;
  DpStats stats;
  double width = 0;
  int final_lambda = 0, final_h = 0;
};

struct EscalationCapReached : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SolveResult solve_min_cover(const Instance& inst, const SolveOptions& opts);

}  // namespace diamcover
