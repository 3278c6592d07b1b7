#include "diamcover/solver.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <sstream>

#include "diamcover/cliques.hpp"

namespace diamcover {

namespace {

// ---------------------------------------------------------------------
// Small-graph clique helpers over uint32_t masks.

// Calls fn(clique) for every clique inside `space` that contains its
// lowest vertex; cliques are grown in ascending vertex order, so each is
// produced exactly once.
template <typename Fn>
void for_each_clique_at_lowest(const std::vector<uint32_t>& adj, uint32_t space, Fn&& fn) {
  if (!space) return;
  int v = __builtin_ctz(space);
  uint32_t start = uint32_t(1) << v;
  // Iterative stack of (clique, candidates above all members).
  std::vector<std::pair<uint32_t, uint32_t>> stack{{start, space & adj[static_cast<size_t>(v)] &
                                                               ~(start | (start - 1))}};
  while (!stack.empty()) {
    auto [clique, cand] = stack.back();
    stack.pop_back();
    fn(clique);
    uint32_t rest = cand;
    while (rest) {
      int u = __builtin_ctz(rest);
      uint32_t ubit = uint32_t(1) << u;
      rest &= rest - 1;
      stack.emplace_back(clique | ubit, cand & adj[static_cast<size_t>(u)] & ~(ubit | (ubit - 1)));
    }
  }
}

std::vector<uint32_t> mask_adjacency(const UnitBallGraph& graph) {
  std::vector<uint32_t> adj(static_cast<size_t>(graph.n), 0);
  for (int u = 0; u < graph.n; ++u)
    for (int v : graph.neighbors[u]) adj[static_cast<size_t>(u)] |= uint32_t(1) << v;
  return adj;
}

std::vector<int> mask_to_vertices(uint32_t mask) {
  std::vector<int> out;
  while (mask) {
    out.push_back(__builtin_ctz(mask));
    mask &= mask - 1;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------
// Oracles.

namespace {

MinCoverResult greedy_cover(const UnitBallGraph& graph) {
  MinCoverResult result;
  std::vector<bool> covered(static_cast<size_t>(graph.n), false);
  for (int v = 0; v < graph.n; ++v) {
    if (covered[static_cast<size_t>(v)]) continue;
    std::vector<int> clique{v};
    covered[static_cast<size_t>(v)] = true;
    for (int u = v + 1; u < graph.n; ++u) {
      if (covered[static_cast<size_t>(u)]) continue;
      bool fits = true;
      for (int w : clique)
        if (!graph.adjacent(u, w)) {
          fits = false;
          break;
        }
      if (fits) {
        clique.push_back(u);
        covered[static_cast<size_t>(u)] = true;
      }
    }
    result.cover.cliques.push_back(std::move(clique));
  }
  result.k = static_cast<int>(result.cover.cliques.size());
  return result;
}

}  // namespace

int greedy_upper_bound(const UnitBallGraph& graph) { return greedy_cover(graph).k; }

MinCoverResult brute_force_min_cover(const UnitBallGraph& graph, int cap) {
  if (graph.n > cap)
    throw std::invalid_argument("brute_force_min_cover: instance exceeds cap of " +
                                std::to_string(cap));
  int n = graph.n;
  if (n == 0) return MinCoverResult{0, {}};
  std::vector<uint32_t> adj = mask_adjacency(graph);
  uint32_t full = n == 32 ? ~uint32_t(0) : (uint32_t(1) << n) - 1;

  const int kInf = n + 1;
  std::vector<int> dp(static_cast<size_t>(full) + 1, kInf);
  std::vector<uint32_t> choice(static_cast<size_t>(full) + 1, 0);
  dp[0] = 0;
  for (uint32_t mask = 1; mask <= full; ++mask) {
    for_each_clique_at_lowest(adj, mask, [&](uint32_t clique) {
      int cand = dp[mask & ~clique] + 1;
      if (cand < dp[mask]) {
        dp[mask] = cand;
        choice[mask] = clique;
      }
    });
  }

  MinCoverResult result;
  result.k = dp[full];
  for (uint32_t mask = full; mask;) {
    result.cover.cliques.push_back(mask_to_vertices(choice[mask]));
    mask &= ~choice[mask];
  }
  return result;
}

std::vector<CliqueCover> enumerate_optimal_covers(const UnitBallGraph& graph, int cap) {
  if (graph.n > cap)
    throw std::invalid_argument("enumerate_optimal_covers: instance exceeds cap of " +
                                std::to_string(cap));
  int n = graph.n;
  if (n == 0) return {CliqueCover{}};
  std::vector<uint32_t> adj = mask_adjacency(graph);
  uint32_t full = (uint32_t(1) << n) - 1;

  std::vector<int> dp(static_cast<size_t>(full) + 1, n + 1);
  dp[0] = 0;
  for (uint32_t mask = 1; mask <= full; ++mask)
    for_each_clique_at_lowest(adj, mask, [&](uint32_t clique) {
      dp[mask] = std::min(dp[mask], dp[mask & ~clique] + 1);
    });

  // Classes are discovered in order of their smallest member, so each
  // optimal partition is produced exactly once.
  std::vector<CliqueCover> covers;
  std::vector<uint32_t> acc;
  auto rec = [&](auto&& self, uint32_t mask) -> void {
    if (!mask) {
      CliqueCover cover;
      for (uint32_t c : acc) cover.cliques.push_back(mask_to_vertices(c));
      covers.push_back(std::move(cover));
      return;
    }
    for_each_clique_at_lowest(adj, mask, [&](uint32_t clique) {
      if (dp[mask & ~clique] + 1 == dp[mask]) {
        acc.push_back(clique);
        self(self, mask & ~clique);
        acc.pop_back();
      }
    });
  };
  rec(rec, full);
  return covers;
}

namespace {

struct BnbState {
  const UnitBallGraph& graph;
  std::vector<DynBits> adj;
  std::vector<DynBits> clique_cand;  // vertices adjacent to all members
  std::vector<std::vector<int>> cliques;
  std::vector<int> assignment;
  std::vector<int> best_assignment;
  int best = 0;

  explicit BnbState(const UnitBallGraph& g) : graph(g) {
    adj.assign(static_cast<size_t>(g.n), DynBits(g.n));
    for (int u = 0; u < g.n; ++u)
      for (int v : g.neighbors[u]) adj[static_cast<size_t>(u)].set(v);
    assignment.assign(static_cast<size_t>(g.n), -1);
  }

  // Lower bound on extra cliques for the suffix [v, n): a greedy
  // independent set needs one clique per member, and each currently open
  // clique that can still absorb a suffix vertex may host at most one of
  // them.
  int suffix_lower_bound(int v) {
    DynBits taken(graph.n);
    int is_size = 0;
    for (int u = v; u < graph.n; ++u) {
      if (taken.intersects(adj[static_cast<size_t>(u)])) continue;
      taken.set(u);
      ++is_size;
    }
    int accepting = 0;
    for (const DynBits& cand : clique_cand) {
      for (int u = v; u < graph.n; ++u)
        if (cand.test(u)) {
          ++accepting;
          break;
        }
    }
    return std::max(0, is_size - accepting);
  }

  void rec(int v) {
    if (static_cast<int>(cliques.size()) >= best) return;
    if (v == graph.n) {
      best = static_cast<int>(cliques.size());
      best_assignment = assignment;
      return;
    }
    if (static_cast<int>(cliques.size()) + suffix_lower_bound(v) >= best) return;

    for (size_t c = 0; c < cliques.size(); ++c) {
      if (!clique_cand[c].test(v)) continue;
      DynBits saved = clique_cand[c];
      cliques[c].push_back(v);
      clique_cand[c] &= adj[static_cast<size_t>(v)];
      assignment[static_cast<size_t>(v)] = static_cast<int>(c);
      rec(v + 1);
      assignment[static_cast<size_t>(v)] = -1;
      cliques[c].pop_back();
      clique_cand[c] = std::move(saved);
    }

    cliques.push_back({v});
    clique_cand.push_back(adj[static_cast<size_t>(v)]);
    assignment[static_cast<size_t>(v)] = static_cast<int>(cliques.size()) - 1;
    rec(v + 1);
    assignment[static_cast<size_t>(v)] = -1;
    cliques.pop_back();
    clique_cand.pop_back();
  }
};

}  // namespace

MinCoverResult branch_and_bound_min_cover(const UnitBallGraph& graph) {
  if (graph.n == 0) return MinCoverResult{0, {}};
  MinCoverResult greedy = greedy_cover(graph);
  BnbState state(graph);
  state.best = greedy.k;
  state.best_assignment.assign(static_cast<size_t>(graph.n), -1);
  for (size_t c = 0; c < greedy.cover.cliques.size(); ++c)
    for (int v : greedy.cover.cliques[c]) state.best_assignment[static_cast<size_t>(v)] = static_cast<int>(c);
  state.rec(0);

  MinCoverResult result;
  result.k = state.best;
  result.cover.cliques.assign(static_cast<size_t>(state.best), {});
  for (int v = 0; v < graph.n; ++v)
    result.cover.cliques[static_cast<size_t>(state.best_assignment[static_cast<size_t>(v)])]
        .push_back(v);
  return result;
}

// ---------------------------------------------------------------------
// Forget-node inner engine: subset DP d[S, k] over the auxiliary graph.

namespace {

// d[S] is the bitmask of feasible part counts k for partitioning S into
// cliques of aux that each contain a marked vertex.
std::vector<uint32_t> aux_subset_table(int n, const std::vector<uint32_t>& adj, uint32_t marked) {
  if (n > 22) throw std::runtime_error("auxiliary graph too large for subset DP");
  uint32_t full = (n == 0) ? 0 : (uint32_t(1) << n) - 1;
  std::vector<uint32_t> d(static_cast<size_t>(full) + 1, 0);
  d[0] = 1;  // zero parts
  for (uint32_t S = 1; S <= full; ++S) {
    uint32_t acc = 0;
    for_each_clique_at_lowest(adj, S, [&](uint32_t clique) {
      if (clique & marked) acc |= d[S & ~clique] << 1;
    });
    d[S] = acc;
  }
  return d;
}

}  // namespace

uint32_t aux_cover_counts(const AuxiliaryGraph& aux) {
  uint32_t full = (aux.n == 0) ? 0 : (uint32_t(1) << aux.n) - 1;
  return aux_subset_table(aux.n, aux.adj, aux.marked)[full];
}

bool aux_cover_feasible(const AuxiliaryGraph& aux, int k) {
  if (k < 0 || k > 31) return false;
  return aux_cover_counts(aux) >> k & 1;
}

std::optional<std::vector<uint32_t>> aux_cover_witness(const AuxiliaryGraph& aux, int k) {
  if (!aux_cover_feasible(aux, k)) return std::nullopt;
  std::vector<uint32_t> d = aux_subset_table(aux.n, aux.adj, aux.marked);
  std::vector<uint32_t> parts;
  uint32_t S = (aux.n == 0) ? 0 : (uint32_t(1) << aux.n) - 1;
  int left = k;
  while (S) {
    uint32_t pick = 0;
    for_each_clique_at_lowest(aux.adj, S, [&](uint32_t clique) {
      if (pick) return;
      if ((clique & aux.marked) && left > 0 && (d[S & ~clique] >> (left - 1) & 1)) pick = clique;
    });
    parts.push_back(pick);
    S &= ~pick;
    --left;
  }
  return parts;
}

// ---------------------------------------------------------------------
// Configurations.

std::vector<std::vector<uint64_t>> enumerate_tilings(int class_size,
                                                     const std::vector<uint64_t>& relevant,
                                                     int max_cliques) {
  uint64_t full = class_size == 0 ? 0 : (class_size == 64 ? ~uint64_t(0) : (uint64_t(1) << class_size) - 1);
  std::vector<std::vector<uint64_t>> tilings;
  std::vector<uint64_t> acc;
  // Branch on the lowest uncovered vertex; each exact tiling comes out
  // once, members ordered by lowest vertex.
  auto rec = [&](auto&& self, uint64_t covered) -> void {
    if (covered == full) {
      tilings.push_back(acc);
      return;
    }
    if (static_cast<int>(acc.size()) >= max_cliques) return;
    uint64_t lowest = (~covered & full) & -(~covered & full);
    for (uint64_t piece : relevant) {
      if (!(piece & lowest) || (piece & covered)) continue;
      acc.push_back(piece);
      self(self, covered | piece);
      acc.pop_back();
    }
  };
  rec(rec, 0);
  std::sort(tilings.begin(), tilings.end());
  return tilings;
}

std::vector<Configuration> enumerate_configurations(int class_size,
                                                    const std::vector<uint64_t>& relevant,
                                                    int max_cliques) {
  std::vector<Configuration> configs;
  for (const auto& tiling : enumerate_tilings(class_size, relevant, max_cliques)) {
    uint32_t variants = uint32_t(1) << tiling.size();
    for (uint32_t flags = 0; flags < variants; ++flags)
      configs.push_back(Configuration{tiling, flags});
  }
  return configs;
}

// ---------------------------------------------------------------------
// The dynamic program.

namespace {

using FKey = std::vector<uint64_t>;  // per bag class: (tiling_id << 32) | flags
using Table = std::map<FKey, DynBits>;

uint64_t pack_entry(uint32_t tiling_id, uint32_t flags) {
  return (uint64_t(tiling_id) << 32) | flags;
}
uint32_t entry_tiling(uint64_t e) { return static_cast<uint32_t>(e >> 32); }
uint32_t entry_flags(uint64_t e) { return static_cast<uint32_t>(e & 0xffffffffu); }

struct ClassInfo {
  std::vector<int> vertices;                       // global ids, sorted
  std::vector<std::vector<uint64_t>> tilings;      // local masks
  std::vector<std::vector<DynBits>> tile_bits;     // [tiling][member] global set
  std::vector<std::vector<std::vector<int>>> tile_verts;  // global vertex lists
  size_t config_count = 0;
};

struct TileRef {
  int cls_pos;  // position within the child bag (-1 for the forgotten class)
  int member;
};

struct ForgetPlan {
  // Universe: the forgotten class's tiles first, then every tile of the
  // remaining bag classes in bag order.
  std::vector<TileRef> tiles;
  uint32_t forgotten_mask = 0;  // universe bits of the forgotten class
  bool complete = false;        // all tile unions are cliques
  std::vector<uint32_t> adj;
  // Nonzero rows of the subset table, as (S, part-count bitmask); only
  // built when the graph is not complete.
  std::vector<std::pair<uint32_t, uint32_t>> feasible;
};

struct DpEngine {
  const Instance& inst;
  const UnitBallGraph& graph;
  const KappaPartition& partition;
  const NiceTreeDecomposition& nice;
  const DpOptions& opts;

  std::vector<DynBits> global_adj;
  std::vector<ClassInfo> classes;
  std::vector<Table> tables;  // kept for the whole run; reconstruction reads them
  DpResult result;
  int lset_bits = 0;

  DpEngine(const Instance& inst_, const UnitBallGraph& graph_, const KappaPartition& partition_,
           const NiceTreeDecomposition& nice_, const DpOptions& opts_)
      : inst(inst_), graph(graph_), partition(partition_), nice(nice_), opts(opts_) {}

  bool union_is_clique(const std::vector<int>& verts_a, const DynBits& bits_b) const {
    for (int v : verts_a)
      if (!bits_b.subset_of(global_adj[static_cast<size_t>(v)])) return false;
    return true;
  }

  void prepare_classes() {
    global_adj.assign(static_cast<size_t>(graph.n), DynBits(graph.n));
    for (int u = 0; u < graph.n; ++u)
      for (int v : graph.neighbors[u]) global_adj[static_cast<size_t>(u)].set(v);

    classes.resize(partition.classes.size());
    for (size_t c = 0; c < partition.classes.size(); ++c) {
      ClassInfo& info = classes[c];
      info.vertices = partition.classes[c];
      std::sort(info.vertices.begin(), info.vertices.end());
      int sz = static_cast<int>(info.vertices.size());

      RelevantCliqueSet rel = relevant_cliques(inst, graph, info.vertices, opts.h);
      std::vector<uint64_t> rel_masks;
      for (const auto& member : rel.cliques) {
        uint64_t mask = 0;
        for (int g : member) {
          size_t i = static_cast<size_t>(
              std::lower_bound(info.vertices.begin(), info.vertices.end(), g) -
              info.vertices.begin());
          mask |= uint64_t(1) << i;
        }
        rel_masks.push_back(mask);
      }

      info.tilings = enumerate_tilings(sz, rel_masks, opts.lambda);
      if (info.tilings.empty() && sz > 0)
        throw EscalationNeeded("class " + std::to_string(c) +
                               " admits no tiling with lambda=" + std::to_string(opts.lambda));
      info.tile_bits.resize(info.tilings.size());
      info.tile_verts.resize(info.tilings.size());
      for (size_t t = 0; t < info.tilings.size(); ++t) {
        info.config_count += uint64_t(1) << info.tilings[t].size();
        for (uint64_t piece : info.tilings[t]) {
          DynBits bits(graph.n);
          std::vector<int> verts;
          for (int i = 0; i < sz; ++i)
            if (piece >> i & 1) {
              bits.set(info.vertices[static_cast<size_t>(i)]);
              verts.push_back(info.vertices[static_cast<size_t>(i)]);
            }
          info.tile_bits[t].push_back(std::move(bits));
          info.tile_verts[t].push_back(std::move(verts));
        }
      }
      result.stats.max_configs_per_class =
          std::max(result.stats.max_configs_per_class, info.config_count);
    }
  }

  // ------------------------------------------------------------------
  // Forget transition.

  ForgetPlan build_forget_plan(int forgotten_class, const std::vector<int>& child_bag,
                               const std::vector<uint32_t>& tids) {
    ForgetPlan plan;
    int fpos = static_cast<int>(
        std::lower_bound(child_bag.begin(), child_bag.end(), forgotten_class) -
        child_bag.begin());
    const ClassInfo& finfo = classes[static_cast<size_t>(forgotten_class)];
    const auto& ftiles = finfo.tile_verts[tids[static_cast<size_t>(fpos)]];
    for (size_t m = 0; m < ftiles.size(); ++m) plan.tiles.push_back({-1, static_cast<int>(m)});
    plan.forgotten_mask = (uint32_t(1) << ftiles.size()) - 1;
    for (size_t p = 0; p < child_bag.size(); ++p) {
      if (static_cast<int>(p) == fpos) continue;
      const ClassInfo& info = classes[static_cast<size_t>(child_bag[p])];
      size_t members = info.tilings[tids[p]].size();
      for (size_t m = 0; m < members; ++m)
        plan.tiles.push_back({static_cast<int>(p), static_cast<int>(m)});
    }
    size_t u = plan.tiles.size();
    if (u > 22) throw std::runtime_error("forget universe exceeds 22 tiles; bag too dense");

    auto tile_verts = [&](const TileRef& t) -> const std::vector<int>& {
      int cls = t.cls_pos < 0 ? forgotten_class : child_bag[static_cast<size_t>(t.cls_pos)];
      uint32_t tid = t.cls_pos < 0 ? tids[static_cast<size_t>(fpos)]
                                   : tids[static_cast<size_t>(t.cls_pos)];
      return classes[static_cast<size_t>(cls)].tile_verts[tid][static_cast<size_t>(t.member)];
    };
    auto tile_bits = [&](const TileRef& t) -> const DynBits& {
      int cls = t.cls_pos < 0 ? forgotten_class : child_bag[static_cast<size_t>(t.cls_pos)];
      uint32_t tid = t.cls_pos < 0 ? tids[static_cast<size_t>(fpos)]
                                   : tids[static_cast<size_t>(t.cls_pos)];
      return classes[static_cast<size_t>(cls)].tile_bits[tid][static_cast<size_t>(t.member)];
    };

    plan.adj.assign(u, 0);
    plan.complete = true;
    for (size_t a = 0; a < u; ++a)
      for (size_t b = a + 1; b < u; ++b) {
        if (union_is_clique(tile_verts(plan.tiles[a]), tile_bits(plan.tiles[b]))) {
          plan.adj[a] |= uint32_t(1) << b;
          plan.adj[b] |= uint32_t(1) << a;
        } else {
          plan.complete = false;
        }
      }

    if (opts.collect_aux && u <= 10 && result.aux_log.size() < opts.aux_log_cap)
      result.aux_log.push_back(
          AuxiliaryGraph{static_cast<int>(u), plan.adj, plan.forgotten_mask});

    if (!plan.complete) {
      std::vector<uint32_t> d =
          aux_subset_table(static_cast<int>(u), plan.adj, plan.forgotten_mask);
      for (uint32_t S = 0; S < d.size(); ++S)
        if (d[S]) plan.feasible.emplace_back(S, d[S]);
    }
    return plan;
  }

  // Emits into `out` all targets reachable from one child entry.
  void apply_forget(const FKey& child_key, const DynBits& child_set, int fpos,
                    const ForgetPlan& plan, Table& out) {
    uint32_t fflags = entry_flags(child_key[static_cast<size_t>(fpos)]);
    uint32_t marked = plan.forgotten_mask & ~fflags;  // still-uncovered tiles of P
    // Universe bits of remaining-class tiles that are already covered.
    uint32_t flagged_univ = 0;
    for (size_t i = 0; i < plan.tiles.size(); ++i) {
      const TileRef& t = plan.tiles[i];
      if (t.cls_pos < 0) continue;
      if (entry_flags(child_key[static_cast<size_t>(t.cls_pos)]) >> t.member & 1)
        flagged_univ |= uint32_t(1) << i;
    }

    FKey base;
    for (size_t p = 0; p < child_key.size(); ++p)
      if (static_cast<int>(p) != fpos) base.push_back(child_key[p]);

    auto emit = [&](uint32_t flips, int parts) {
      FKey key = base;
      uint32_t rest = flips;
      while (rest) {
        int i = __builtin_ctz(rest);
        rest &= rest - 1;
        const TileRef& t = plan.tiles[static_cast<size_t>(i)];
        size_t pos = static_cast<size_t>(t.cls_pos < fpos ? t.cls_pos : t.cls_pos - 1);
        key[pos] |= uint64_t(1) << t.member;
      }
      auto [it, inserted] = out.try_emplace(key, DynBits(lset_bits));
      it->second.or_shifted(child_set, parts);
    };

    if (plan.complete) {
      // Every union is a clique: any flip set works, with part counts
      // 1..|marked| (or exactly 0 when nothing is pending).
      if (!marked) {
        emit(0, 0);
        return;
      }
      uint32_t zfree = ~flagged_univ & ~plan.forgotten_mask &
                       ((plan.tiles.size() == 32) ? ~uint32_t(0)
                                                  : (uint32_t(1) << plan.tiles.size()) - 1);
      int mcount = __builtin_popcount(marked);
      for (uint32_t flips = zfree;; flips = (flips - 1) & zfree) {
        for (int parts = 1; parts <= mcount; ++parts) emit(flips, parts);
        if (!flips) break;
      }
      return;
    }

    for (const auto& [S, kmask] : plan.feasible) {
      if ((S & plan.forgotten_mask) != marked) continue;
      if (S & flagged_univ) continue;
      uint32_t flips = S & ~plan.forgotten_mask;
      for (int parts = 0; parts <= 31; ++parts)
        if (kmask >> parts & 1) emit(flips, parts);
    }
  }

  // ------------------------------------------------------------------
  // Node processing.

  void run() {
    lset_bits = graph.n + 1;
    prepare_classes();
    tables.assign(static_cast<size_t>(nice.num_nodes()), {});
    result.stats.num_bags = nice.num_nodes();

    // Children precede parents in construction order (to_nice builds
    // bottom-up), so a single forward pass is a valid evaluation order.
    for (int t = 0; t < nice.num_nodes(); ++t) process_node(t);

    const Table& root = tables[static_cast<size_t>(nice.root)];
    auto it = root.find(FKey{});
    if (it == root.end() || !it->second.any())
      throw std::logic_error("dp_solve: root table empty");
    result.min_k = it->second.lowest();
    reconstruct();
    tables.clear();
  }

  void process_node(int t) {
    const auto& node = nice.nodes[static_cast<size_t>(t)];
    Table& table = tables[static_cast<size_t>(t)];
    switch (node.kind) {
      case NodeKind::kLeaf: {
        DynBits set(lset_bits);
        set.set(0);
        table.emplace(FKey{}, std::move(set));
        break;
      }
      case NodeKind::kIntroduce: {
        const Table& child = tables[static_cast<size_t>(node.child)];
        size_t pos = static_cast<size_t>(
            std::lower_bound(node.bag.begin(), node.bag.end(), node.delta_class) -
            node.bag.begin());
        const ClassInfo& info = classes[static_cast<size_t>(node.delta_class)];
        for (const auto& [ckey, cset] : child) {
          for (uint32_t tid = 0; tid < info.tilings.size(); ++tid) {
            FKey key = ckey;
            key.insert(key.begin() + static_cast<long>(pos), pack_entry(tid, 0));
            table.emplace(std::move(key), cset);
          }
        }
        break;
      }
      case NodeKind::kForget: {
        const Table& child = tables[static_cast<size_t>(node.child)];
        const auto& child_bag = nice.nodes[static_cast<size_t>(node.child)].bag;
        int fpos = static_cast<int>(
            std::lower_bound(child_bag.begin(), child_bag.end(), node.delta_class) -
            child_bag.begin());
        std::map<std::vector<uint32_t>, ForgetPlan> plans;
        for (const auto& [ckey, cset] : child) {
          std::vector<uint32_t> tids(ckey.size());
          for (size_t i = 0; i < ckey.size(); ++i) tids[i] = entry_tiling(ckey[i]);
          auto it = plans.find(tids);
          if (it == plans.end())
            it = plans.emplace(tids, build_forget_plan(node.delta_class, child_bag, tids)).first;
          apply_forget(ckey, cset, fpos, it->second, table);
        }
        break;
      }
      case NodeKind::kJoin: {
        const Table& left = tables[static_cast<size_t>(node.child)];
        const Table& right = tables[static_cast<size_t>(node.child2)];
        // Group by tiling signature; only equal tilings combine.
        std::map<std::vector<uint32_t>, std::vector<const std::pair<const FKey, DynBits>*>>
            right_groups;
        for (const auto& entry : right) {
          std::vector<uint32_t> tids(entry.first.size());
          for (size_t i = 0; i < entry.first.size(); ++i) tids[i] = entry_tiling(entry.first[i]);
          right_groups[tids].push_back(&entry);
        }
        for (const auto& [lkey, lset] : left) {
          std::vector<uint32_t> tids(lkey.size());
          for (size_t i = 0; i < lkey.size(); ++i) tids[i] = entry_tiling(lkey[i]);
          auto group = right_groups.find(tids);
          if (group == right_groups.end()) continue;
          for (const auto* rentry : group->second) {
            FKey key(lkey.size());
            for (size_t i = 0; i < lkey.size(); ++i) key[i] = lkey[i] | rentry->first[i];
            auto [it, inserted] = table.try_emplace(key, DynBits(lset_bits));
            for (int l1 = 0; l1 < lset_bits; ++l1)
              if (lset.test(l1)) it->second.or_shifted(rentry->second, l1);
          }
        }
        break;
      }
    }
  }

  // ------------------------------------------------------------------
  // Witness reconstruction: walk the true entries back down, extracting
  // the new solution cliques chosen at each forget node.

  std::vector<std::vector<int>> raw_cliques;

  // Turns a set of universe tiles into the global vertex list of their
  // union.
  std::vector<int> materialize_part(uint32_t part, const ForgetPlan& plan, int forgotten_class,
                                    const std::vector<int>& child_bag,
                                    const std::vector<uint32_t>& tids, int fpos) {
    std::vector<int> verts;
    while (part) {
      int i = __builtin_ctz(part);
      part &= part - 1;
      const TileRef& ref = plan.tiles[static_cast<size_t>(i)];
      int cls = ref.cls_pos < 0 ? forgotten_class : child_bag[static_cast<size_t>(ref.cls_pos)];
      uint32_t tid =
          ref.cls_pos < 0 ? tids[static_cast<size_t>(fpos)] : tids[static_cast<size_t>(ref.cls_pos)];
      const auto& tv = classes[static_cast<size_t>(cls)].tile_verts[tid][static_cast<size_t>(ref.member)];
      verts.insert(verts.end(), tv.begin(), tv.end());
    }
    std::sort(verts.begin(), verts.end());
    return verts;
  }

  // Splits S into exactly `parts` cliques of the plan's auxiliary graph,
  // each containing a marked (forgotten-class) tile.
  std::vector<uint32_t> partition_witness(const ForgetPlan& plan, uint32_t marked, uint32_t S,
                                          int parts) {
    std::vector<uint32_t> out;
    if (parts == 0) return out;
    if (plan.complete) {
      // Peel singleton marked tiles; the last part takes the rest.
      uint32_t rest = S;
      for (int i = 0; i < parts - 1; ++i) {
        uint32_t m = (rest & marked) & -(rest & marked);
        out.push_back(m);
        rest &= ~m;
      }
      out.push_back(rest);
      return out;
    }
    std::vector<uint32_t> d =
        aux_subset_table(static_cast<int>(plan.tiles.size()), plan.adj, marked);
    uint32_t rest = S;
    int left = parts;
    while (rest) {
      uint32_t pick = 0;
      for_each_clique_at_lowest(plan.adj, rest, [&](uint32_t clique) {
        if (pick) return;
        if ((clique & marked) && left > 0 && (d[rest & ~clique] >> (left - 1) & 1)) pick = clique;
      });
      if (!pick) throw std::logic_error("dp_solve: witness extraction failed");
      out.push_back(pick);
      rest &= ~pick;
      --left;
    }
    return out;
  }

  void walk(int t, const FKey& key, int ell) {
    const auto& node = nice.nodes[static_cast<size_t>(t)];
    switch (node.kind) {
      case NodeKind::kLeaf:
        return;
      case NodeKind::kIntroduce: {
        size_t pos = static_cast<size_t>(
            std::lower_bound(node.bag.begin(), node.bag.end(), node.delta_class) -
            node.bag.begin());
        FKey ckey = key;
        ckey.erase(ckey.begin() + static_cast<long>(pos));
        walk(node.child, ckey, ell);
        return;
      }
      case NodeKind::kForget: {
        const Table& child = tables[static_cast<size_t>(node.child)];
        const auto& child_bag = nice.nodes[static_cast<size_t>(node.child)].bag;
        int fpos = static_cast<int>(
            std::lower_bound(child_bag.begin(), child_bag.end(), node.delta_class) -
            child_bag.begin());
        std::map<std::vector<uint32_t>, ForgetPlan> plans;
        for (const auto& [ckey, cset] : child) {
          // Target must agree with the entry outside P, with flags only
          // flipped 0 -> 1.
          bool compatible = true;
          for (size_t p = 0, q = 0; p < ckey.size() && compatible; ++p) {
            if (static_cast<int>(p) == fpos) continue;
            uint64_t target = key[q++];
            if (entry_tiling(ckey[p]) != entry_tiling(target) ||
                (entry_flags(ckey[p]) & ~entry_flags(target)) != 0)
              compatible = false;
          }
          if (!compatible) continue;

          std::vector<uint32_t> tids(ckey.size());
          for (size_t i = 0; i < ckey.size(); ++i) tids[i] = entry_tiling(ckey[i]);
          auto pit = plans.find(tids);
          if (pit == plans.end())
            pit = plans.emplace(tids, build_forget_plan(node.delta_class, child_bag, tids)).first;
          const ForgetPlan& plan = pit->second;

          uint32_t marked = plan.forgotten_mask & ~entry_flags(ckey[static_cast<size_t>(fpos)]);
          uint32_t flips = 0;
          for (size_t i = 0; i < plan.tiles.size(); ++i) {
            const TileRef& ref = plan.tiles[i];
            if (ref.cls_pos < 0) continue;
            size_t q = static_cast<size_t>(ref.cls_pos < fpos ? ref.cls_pos : ref.cls_pos - 1);
            bool before = entry_flags(ckey[static_cast<size_t>(ref.cls_pos)]) >> ref.member & 1;
            bool after = entry_flags(key[q]) >> ref.member & 1;
            if (!before && after) flips |= uint32_t(1) << i;
          }
          uint32_t S = marked | flips;

          uint32_t kmask;
          if (plan.complete) {
            if (!marked)
              kmask = (S == 0) ? 1 : 0;
            else
              kmask = ((uint32_t(1) << __builtin_popcount(marked)) - 1) << 1;
          } else {
            std::vector<uint32_t> d =
                aux_subset_table(static_cast<int>(plan.tiles.size()), plan.adj, marked);
            kmask = d[S];
          }
          for (int parts = 0; parts <= ell && parts <= 31; ++parts) {
            if (!(kmask >> parts & 1)) continue;
            if (!cset.test(ell - parts)) continue;
            for (uint32_t part : partition_witness(plan, marked, S, parts))
              raw_cliques.push_back(
                  materialize_part(part, plan, node.delta_class, child_bag, tids, fpos));
            walk(node.child, ckey, ell - parts);
            return;
          }
        }
        throw std::logic_error("dp_solve: reconstruction failed at forget node");
      }
      case NodeKind::kJoin: {
        const Table& left = tables[static_cast<size_t>(node.child)];
        const Table& right = tables[static_cast<size_t>(node.child2)];
        for (const auto& [lkey, lset] : left) {
          bool lcomp = true;
          for (size_t i = 0; i < lkey.size() && lcomp; ++i)
            if (entry_tiling(lkey[i]) != entry_tiling(key[i]) ||
                (entry_flags(lkey[i]) & ~entry_flags(key[i])) != 0)
              lcomp = false;
          if (!lcomp) continue;
          for (const auto& [rkey, rset] : right) {
            bool match = true;
            for (size_t i = 0; i < rkey.size() && match; ++i)
              if ((lkey[i] | rkey[i]) != key[i]) match = false;
            if (!match) continue;
            for (int l1 = 0; l1 <= ell; ++l1) {
              if (!lset.test(l1) || !rset.test(ell - l1)) continue;
              walk(node.child, lkey, l1);
              walk(node.child2, rkey, ell - l1);
              return;
            }
          }
        }
        throw std::logic_error("dp_solve: reconstruction failed at join node");
      }
    }
  }

  void reconstruct() {
    raw_cliques.clear();
    walk(nice.root, FKey{}, result.min_k);

    // The table semantics allow overlapping cliques; keep each vertex in
    // its first clique and drop anything that empties out.
    std::vector<bool> seen(static_cast<size_t>(graph.n), false);
    CliqueCover cover;
    for (const auto& clique : raw_cliques) {
      std::vector<int> kept;
      for (int v : clique)
        if (!seen[static_cast<size_t>(v)]) {
          seen[static_cast<size_t>(v)] = true;
          kept.push_back(v);
        }
      if (!kept.empty()) cover.cliques.push_back(std::move(kept));
    }
    CoverReport report = verify_cover(inst, cover, true);
    if (!report.ok)
      throw std::logic_error("dp_solve: witness failed verification: " +
                             report.violations.front());
    if (static_cast<int>(cover.cliques.size()) < result.min_k)
      result.min_k = static_cast<int>(cover.cliques.size());
    result.cover = std::move(cover);
  }
};

}  // namespace

DpResult dp_solve(const Instance& inst, const UnitBallGraph& graph,
                  const KappaPartition& partition, const NiceTreeDecomposition& nice,
                  const DpOptions& opts) {
  auto start = std::chrono::steady_clock::now();
  DpEngine engine(inst, graph, partition, nice, opts);
  engine.run();
  DpResult result = std::move(engine.result);
  result.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

SolveResult solve_min_cover(const Instance& inst, const SolveOptions& opts) {
  inst.check();
  UnitBallGraph graph = build_graph(inst);
  KappaPartition partition = build_kappa_partition(inst);
  ContractionGraph cg = contraction_graph(partition, graph);
  WeightFunction gamma{opts.epsilon};
  TreeDecomposition td = opts.single_bag ? single_bag_decomposition(partition.num_classes())
                                         : tree_decomposition(cg, gamma, partition);
  NiceTreeDecomposition nice = to_nice(td);
  ValidationReport nice_ok = validate_nice(nice, cg);
  if (!nice_ok.ok)
    throw std::logic_error("solve_min_cover: invalid nice decomposition: " +
                           nice_ok.violations.front());

  SolveResult out;
  out.width = weighted_width(nice, gamma, partition);

  int lambda = opts.lambda, h = opts.h;
  std::optional<DpResult> prev;
  int prev_lambda = 0, prev_h = 0;
  for (int round = 0; round < opts.max_rounds; ++round) {
    DpOptions dp_opts;
    dp_opts.lambda = lambda;
    dp_opts.h = h;
    try {
      DpResult res = dp_solve(inst, graph, partition, nice, dp_opts);
      if (prev && prev->min_k == res.min_k) {
        out.k = res.min_k;
        out.cover = std::move(prev->cover);
        out.stats = prev->stats;
        out.stats.escalations = round - 1;
        out.final_lambda = prev_lambda;
        out.final_h = prev_h;
        return out;
      }
      prev = std::move(res);
      prev_lambda = lambda;
      prev_h = h;
      lambda += 4;
      h += 1;
    } catch (const EscalationNeeded&) {
      prev.reset();
      lambda += 4;
    }
  }
  throw EscalationCapReached("solve_min_cover: no stable answer within " +
                             std::to_string(opts.max_rounds) + " escalation rounds");
}

}  // namespace diamcover
