#pragma once

#include <string>
#include <vector>

#include "diamcover/model.hpp"

namespace diamcover {

// Partition of the vertex set into classes, each of which induces a
// connected subgraph coverable by at most kappa cliques. Our construction
// uses half-open grid cells of rational side s <= D/sqrt(2), so every
// class is itself a clique (kappa = 1). Cells holding more points than
// kMaxClassSize are split into index chunks; chunks stay cliques and keep
// the cell coordinate, so the separator logic below is unaffected. The
// cap bounds the tilings of one class (Bell numbers) and with it the
// solver's per-bag configuration space.
struct KappaPartition {
  static constexpr int kMaxClassSize = 4;

  std::vector<std::vector<int>> classes;       // disjoint, cover [0, n)
  std::vector<std::pair<long, long>> cells;    // grid coordinate per class
  Rat cell_side = 0;
  int kappa = 1;

  int num_classes() const { return static_cast<int>(classes.size()); }
};

KappaPartition build_kappa_partition(const Instance& inst);

// Graph over partition classes: two classes are adjacent iff some
// instance edge crosses between them.
struct ContractionGraph {
  int n = 0;
  std::vector<std::vector<bool>> adj;
  std::vector<std::vector<int>> neighbors;

  bool adjacent(int i, int j) const { return adj[static_cast<size_t>(i)][static_cast<size_t>(j)]; }
};

ContractionGraph contraction_graph(const KappaPartition& partition, const UnitBallGraph& graph);

// gamma(t) = epsilon * log2(t) + 1; a bag's weight is the sum of gamma
// over the sizes of its classes.
struct WeightFunction {
  Rat epsilon = Rat(1, 5);
  double gamma(size_t class_size) const;
};

struct TreeDecomposition {
  std::vector<std::vector<int>> bags;    // sorted class ids per node
  std::vector<int> parent;               // -1 for the root
  int root = 0;

  int num_nodes() const { return static_cast<int>(bags.size()); }
};

struct ValidationReport {
  bool ok = false;
  std::vector<std::string> violations;
};

// Recursive balanced axis-aligned separators over cell coordinates, with
// a greedy min-fill decomposition as fallback; returns whichever has the
// smaller weighted width. The result is always validated first.
TreeDecomposition tree_decomposition(const ContractionGraph& cg, const WeightFunction& gamma,
                                     const KappaPartition& partition);

// One bag holding every class. Deliberately terrible width; used to test
// that solver answers do not depend on the decomposition.
TreeDecomposition single_bag_decomposition(int num_classes);

ValidationReport validate(const TreeDecomposition& td, const ContractionGraph& cg);

enum class NodeKind { kLeaf, kIntroduce, kForget, kJoin };

struct NiceTreeDecomposition {
  struct Node {
    NodeKind kind = NodeKind::kLeaf;
    std::vector<int> bag;  // sorted class ids
    int child = -1, child2 = -1;
    int delta_class = -1;  // the class added/removed at introduce/forget
  };
  std::vector<Node> nodes;
  int root = -1;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
};

NiceTreeDecomposition to_nice(const TreeDecomposition& td);

ValidationReport validate_nice(const NiceTreeDecomposition& nice, const ContractionGraph& cg);

double weighted_width(const TreeDecomposition& td, const WeightFunction& gamma,
                      const KappaPartition& partition);
double weighted_width(const NiceTreeDecomposition& nice, const WeightFunction& gamma,
                      const KappaPartition& partition);

// Debug dump: nodes, tags, bags, measured width.
std::string decomposition_to_json(const NiceTreeDecomposition& nice, const WeightFunction& gamma,
                                  const KappaPartition& partition);

}  // namespace diamcover
