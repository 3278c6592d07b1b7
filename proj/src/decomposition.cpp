#include "diamcover/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace diamcover {

namespace {

std::vector<int> sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

KappaPartition build_kappa_partition(const Instance& inst) {
  inst.check();
  if (inst.dim != 2) throw DimensionMismatch("build_kappa_partition: 2-d instances only");
  KappaPartition part;
  // s = D * 239/338 < D/sqrt(2) (2*239^2 = 114242 < 338^2 = 114244), and
  // s > D/2, so cells are cliques and adjacency reaches <= 2 cells.
  part.cell_side = inst.diameter * rat_from_long(239, 338);
  part.kappa = 1;

  std::map<std::pair<long, long>, std::vector<int>> cells;
  for (int v = 0; v < inst.n(); ++v) {
    long cx = rat_floor_div(inst.points[v][0], part.cell_side);
    long cy = rat_floor_div(inst.points[v][1], part.cell_side);
    cells[{cx, cy}].push_back(v);
  }
  for (auto& [coord, members] : cells) {
    for (size_t off = 0; off < members.size(); off += KappaPartition::kMaxClassSize) {
      size_t end = std::min(members.size(), off + KappaPartition::kMaxClassSize);
      part.classes.emplace_back(members.begin() + off, members.begin() + end);
      part.cells.push_back(coord);
    }
  }
  return part;
}

ContractionGraph contraction_graph(const KappaPartition& partition, const UnitBallGraph& graph) {
  int nc = partition.num_classes();
  std::vector<int> cls(static_cast<size_t>(graph.n), -1);
  for (int c = 0; c < nc; ++c)
    for (int v : partition.classes[c]) cls[static_cast<size_t>(v)] = c;
  for (int v = 0; v < graph.n; ++v)
    if (cls[static_cast<size_t>(v)] < 0)
      throw std::invalid_argument("contraction_graph: partition does not cover all vertices");

  ContractionGraph cg;
  cg.n = nc;
  cg.adj.assign(nc, std::vector<bool>(nc, false));
  cg.neighbors.assign(nc, {});
  for (int u = 0; u < graph.n; ++u)
    for (int v : graph.neighbors[u]) {
      int cu = cls[static_cast<size_t>(u)], cv = cls[static_cast<size_t>(v)];
      if (cu != cv && !cg.adj[cu][cv]) {
        cg.adj[cu][cv] = cg.adj[cv][cu] = true;
        cg.neighbors[cu].push_back(cv);
        cg.neighbors[cv].push_back(cu);
      }
    }
  for (auto& nb : cg.neighbors) std::sort(nb.begin(), nb.end());
  return cg;
}

double WeightFunction::gamma(size_t class_size) const {
  return epsilon.get_d() * std::log2(static_cast<double>(class_size)) + 1.0;
}

double weighted_width(const TreeDecomposition& td, const WeightFunction& gamma,
                      const KappaPartition& partition) {
  double width = 0;
  for (const auto& bag : td.bags) {
    double w = 0;
    for (int c : bag) w += gamma.gamma(partition.classes[static_cast<size_t>(c)].size());
    width = std::max(width, w);
  }
  return width;
}

double weighted_width(const NiceTreeDecomposition& nice, const WeightFunction& gamma,
                      const KappaPartition& partition) {
  double width = 0;
  for (const auto& node : nice.nodes) {
    double w = 0;
    for (int c : node.bag) w += gamma.gamma(partition.classes[static_cast<size_t>(c)].size());
    width = std::max(width, w);
  }
  return width;
}

ValidationReport validate(const TreeDecomposition& td, const ContractionGraph& cg) {
  ValidationReport report;
  int nn = td.num_nodes();
  if (nn == 0) {
    report.violations.push_back("decomposition has no nodes");
    return report;
  }
  if (td.root < 0 || td.root >= nn || td.parent[static_cast<size_t>(td.root)] != -1)
    report.violations.push_back("invalid root");
  // Parent pointers must form a tree rooted at root.
  for (int t = 0; t < nn; ++t) {
    if (t == td.root) continue;
    int p = td.parent[static_cast<size_t>(t)];
    if (p < 0 || p >= nn) {
      report.violations.push_back("node " + std::to_string(t) + " has invalid parent");
      continue;
    }
    int hops = 0, cur = t;
    while (cur != td.root && hops <= nn) {
      cur = td.parent[static_cast<size_t>(cur)];
      ++hops;
    }
    if (cur != td.root) report.violations.push_back("node " + std::to_string(t) + " not connected to root");
  }

  std::vector<std::vector<int>> bags_of_class(static_cast<size_t>(cg.n));
  for (int t = 0; t < nn; ++t)
    for (int c : td.bags[static_cast<size_t>(t)]) {
      if (c < 0 || c >= cg.n) {
        report.violations.push_back("bag contains unknown class");
        continue;
      }
      bags_of_class[static_cast<size_t>(c)].push_back(t);
    }
  for (int c = 0; c < cg.n; ++c)
    if (bags_of_class[static_cast<size_t>(c)].empty())
      report.violations.push_back("class " + std::to_string(c) + " appears in no bag");

  // Every contraction edge realized in some bag.
  for (int u = 0; u < cg.n; ++u)
    for (int v : cg.neighbors[u]) {
      if (v < u) continue;
      bool found = false;
      for (int t : bags_of_class[static_cast<size_t>(u)]) {
        const auto& bag = td.bags[static_cast<size_t>(t)];
        if (std::binary_search(bag.begin(), bag.end(), v)) {
          found = true;
          break;
        }
      }
      if (!found) {
        std::ostringstream os;
        os << "edge (" << u << ", " << v << ") appears in no bag";
        report.violations.push_back(os.str());
      }
    }

  // Bags containing a class form a connected subtree: count nodes whose
  // parent does not contain the class; exactly one allowed.
  for (int c = 0; c < cg.n; ++c) {
    int tops = 0;
    for (int t : bags_of_class[static_cast<size_t>(c)]) {
      int p = td.parent[static_cast<size_t>(t)];
      const bool parent_has =
          p >= 0 && std::binary_search(td.bags[static_cast<size_t>(p)].begin(),
                                       td.bags[static_cast<size_t>(p)].end(), c);
      if (!parent_has) ++tops;
    }
    if (tops > 1)
      report.violations.push_back("class " + std::to_string(c) + " occurs in a disconnected set of bags");
  }

  report.ok = report.violations.empty();
  return report;
}

namespace {

// Recursive balanced separator construction over grid cells; see the
// header for the invariants. `interface` cells are always a subset of the
// parent's bag, which keeps every class's occurrence set connected.
struct SeparatorBuilder {
  const ContractionGraph& cg;
  const KappaPartition& partition;
  const WeightFunction& gamma;
  TreeDecomposition td;

  int new_node(std::vector<int> bag, int parent) {
    td.bags.push_back(sorted(std::move(bag)));
    td.parent.push_back(parent);
    return static_cast<int>(td.bags.size()) - 1;
  }

  long coord(int c, int axis) const {
    return axis == 0 ? partition.cells[static_cast<size_t>(c)].first
                     : partition.cells[static_cast<size_t>(c)].second;
  }

  bool adjacent_to_region(int x, const std::vector<int>& region) const {
    for (int r : region)
      if (cg.adjacent(x, r)) return true;
    return false;
  }

  int build(const std::vector<int>& region, const std::vector<int>& interface, int parent) {
    if (region.size() <= 4) {
      std::vector<int> bag = region;
      bag.insert(bag.end(), interface.begin(), interface.end());
      return new_node(std::move(bag), parent);
    }

    long spread[2];
    for (int axis = 0; axis < 2; ++axis) {
      long lo = coord(region[0], axis), hi = lo;
      for (int c : region) {
        lo = std::min(lo, coord(c, axis));
        hi = std::max(hi, coord(c, axis));
      }
      spread[axis] = hi - lo;
    }
    int axis = spread[0] >= spread[1] ? 0 : 1;
    if (spread[axis] <= 3) {
      std::vector<int> bag = region;
      bag.insert(bag.end(), interface.begin(), interface.end());
      return new_node(std::move(bag), parent);
    }

    // Weighted median cut along the chosen axis.
    std::vector<int> by_coord = region;
    std::stable_sort(by_coord.begin(), by_coord.end(),
                     [&](int a, int b) { return coord(a, axis) < coord(b, axis); });
    double total = 0;
    for (int c : region) total += gamma.gamma(partition.classes[static_cast<size_t>(c)].size());
    double acc = 0;
    long cut = coord(by_coord.front(), axis);
    for (int c : by_coord) {
      acc += gamma.gamma(partition.classes[static_cast<size_t>(c)].size());
      cut = coord(c, axis);
      if (acc * 2 >= total) break;
    }

    // Slab of cells within Chebyshev distance 2 of the cut line between
    // coordinates `cut` and `cut`+1; contraction edges reach at most 2
    // cells, so the slab separates the two remaining sides.
    std::vector<int> slab, left, right;
    for (int c : region) {
      long x = coord(c, axis);
      if (x >= cut - 1 && x <= cut + 2)
        slab.push_back(c);
      else if (x < cut - 1)
        left.push_back(c);
      else
        right.push_back(c);
    }
    if (left.empty() && right.empty()) {
      std::vector<int> bag = region;
      bag.insert(bag.end(), interface.begin(), interface.end());
      return new_node(std::move(bag), parent);
    }

    std::vector<int> bag = slab;
    bag.insert(bag.end(), interface.begin(), interface.end());
    int q = new_node(std::move(bag), parent);

    for (const std::vector<int>* side : {&left, &right}) {
      if (side->empty()) continue;
      std::vector<int> child_interface;
      for (int x : slab)
        if (adjacent_to_region(x, *side)) child_interface.push_back(x);
      for (int x : interface)
        if (adjacent_to_region(x, *side)) child_interface.push_back(x);
      build(*side, child_interface, q);
    }
    return q;
  }
};

// Greedy fill-in elimination ordering turned into a tree decomposition.
TreeDecomposition min_fill_decomposition(const ContractionGraph& cg) {
  int n = cg.n;
  TreeDecomposition td;
  if (n == 0) {
    td.bags.push_back({});
    td.parent.push_back(-1);
    td.root = 0;
    return td;
  }

  std::vector<std::set<int>> adj(static_cast<size_t>(n));
  for (int u = 0; u < n; ++u)
    for (int v : cg.neighbors[u]) adj[static_cast<size_t>(u)].insert(v);

  std::vector<bool> eliminated(static_cast<size_t>(n), false);
  std::vector<int> order, position(static_cast<size_t>(n), -1);
  std::vector<std::vector<int>> bag_of(static_cast<size_t>(n));

  for (int step = 0; step < n; ++step) {
    int best = -1;
    long best_fill = -1;
    for (int v = 0; v < n; ++v) {
      if (eliminated[static_cast<size_t>(v)]) continue;
      long fill = 0;
      const auto& nb = adj[static_cast<size_t>(v)];
      for (auto it = nb.begin(); it != nb.end(); ++it)
        for (auto jt = std::next(it); jt != nb.end(); ++jt)
          if (!adj[static_cast<size_t>(*it)].count(*jt)) ++fill;
      if (best == -1 || fill < best_fill) {
        best = v;
        best_fill = fill;
      }
    }
    order.push_back(best);
    position[static_cast<size_t>(best)] = step;
    eliminated[static_cast<size_t>(best)] = true;
    std::vector<int> nb(adj[static_cast<size_t>(best)].begin(), adj[static_cast<size_t>(best)].end());
    bag_of[static_cast<size_t>(best)] = nb;
    bag_of[static_cast<size_t>(best)].push_back(best);
    for (size_t i = 0; i < nb.size(); ++i) {
      adj[static_cast<size_t>(nb[i])].erase(best);
      for (size_t j = i + 1; j < nb.size(); ++j) {
        adj[static_cast<size_t>(nb[i])].insert(nb[j]);
        adj[static_cast<size_t>(nb[j])].insert(nb[i]);
      }
    }
  }

  // Bag of v attaches under the earliest-eliminated later neighbor.
  td.bags.assign(static_cast<size_t>(n), {});
  td.parent.assign(static_cast<size_t>(n), -1);
  int root = order.back();
  for (int v = 0; v < n; ++v) td.bags[static_cast<size_t>(v)] = sorted(bag_of[static_cast<size_t>(v)]);
  for (int v = 0; v < n; ++v) {
    int nxt = -1;
    for (int u : bag_of[static_cast<size_t>(v)]) {
      if (u == v) continue;
      if (nxt == -1 || position[static_cast<size_t>(u)] < position[static_cast<size_t>(nxt)]) nxt = u;
    }
    if (nxt != -1)
      td.parent[static_cast<size_t>(v)] = nxt;
    else if (v != root)
      td.parent[static_cast<size_t>(v)] = root;  // ties disconnected components together
  }
  td.root = root;
  return td;
}

}  // namespace

TreeDecomposition tree_decomposition(const ContractionGraph& cg, const WeightFunction& gamma,
                                     const KappaPartition& partition) {
  TreeDecomposition separator_td;
  if (cg.n == 0) {
    separator_td.bags.push_back({});
    separator_td.parent.push_back(-1);
    separator_td.root = 0;
  } else {
    SeparatorBuilder builder{cg, partition, gamma, {}};
    std::vector<int> all(static_cast<size_t>(cg.n));
    for (int i = 0; i < cg.n; ++i) all[static_cast<size_t>(i)] = i;
    builder.build(all, {}, -1);
    builder.td.root = 0;
    separator_td = std::move(builder.td);
  }

  ValidationReport sep_ok = validate(separator_td, cg);
  if (!sep_ok.ok)
    throw std::logic_error("tree_decomposition: separator construction invalid: " +
                           sep_ok.violations.front());

  TreeDecomposition fill_td = min_fill_decomposition(cg);
  ValidationReport fill_ok = validate(fill_td, cg);
  if (!fill_ok.ok)
    throw std::logic_error("tree_decomposition: min-fill construction invalid: " +
                           fill_ok.violations.front());

  double ws = weighted_width(separator_td, gamma, partition);
  double wf = weighted_width(fill_td, gamma, partition);
  return wf < ws ? fill_td : separator_td;
}

TreeDecomposition single_bag_decomposition(int num_classes) {
  TreeDecomposition td;
  std::vector<int> bag(static_cast<size_t>(num_classes));
  for (int i = 0; i < num_classes; ++i) bag[static_cast<size_t>(i)] = i;
  td.bags.push_back(std::move(bag));
  td.parent.push_back(-1);
  td.root = 0;
  return td;
}

NiceTreeDecomposition to_nice(const TreeDecomposition& td) {
  NiceTreeDecomposition nice;
  auto add = [&](NodeKind kind, std::vector<int> bag, int child, int child2, int delta) {
    nice.nodes.push_back({kind, std::move(bag), child, child2, delta});
    return static_cast<int>(nice.nodes.size()) - 1;
  };

  // Chain from bag `from` to bag `to`: forget what disappears, then
  // introduce what appears. Returns the top node (whose bag is `to`).
  auto adapt = [&](int node, std::vector<int> from, const std::vector<int>& to) {
    std::vector<int> current = from;
    for (int c : from) {
      if (std::binary_search(to.begin(), to.end(), c)) continue;
      current.erase(std::find(current.begin(), current.end(), c));
      node = add(NodeKind::kForget, current, node, -1, c);
    }
    for (int c : to) {
      if (std::binary_search(from.begin(), from.end(), c)) continue;
      current.insert(std::lower_bound(current.begin(), current.end(), c), c);
      node = add(NodeKind::kIntroduce, current, node, -1, c);
    }
    return node;
  };

  std::vector<std::vector<int>> children(td.bags.size());
  for (int t = 0; t < td.num_nodes(); ++t)
    if (td.parent[static_cast<size_t>(t)] != -1)
      children[static_cast<size_t>(td.parent[static_cast<size_t>(t)])].push_back(t);

  // Post-order construction without recursion (decompositions get deep).
  std::vector<int> stack{td.root}, post;
  while (!stack.empty()) {
    int t = stack.back();
    stack.pop_back();
    post.push_back(t);
    for (int c : children[static_cast<size_t>(t)]) stack.push_back(c);
  }
  std::reverse(post.begin(), post.end());

  std::vector<int> built(td.bags.size(), -1);
  for (int t : post) {
    const std::vector<int>& bag = td.bags[static_cast<size_t>(t)];
    std::vector<int> adapted;
    for (int c : children[static_cast<size_t>(t)]) {
      int sub = built[static_cast<size_t>(c)];
      adapted.push_back(adapt(sub, td.bags[static_cast<size_t>(c)], bag));
    }
    int node;
    if (adapted.empty()) {
      node = add(NodeKind::kLeaf, {}, -1, -1, -1);
      node = adapt(node, {}, bag);
    } else {
      node = adapted[0];
      for (size_t i = 1; i < adapted.size(); ++i)
        node = add(NodeKind::kJoin, bag, node, adapted[i], -1);
    }
    built[static_cast<size_t>(t)] = node;
  }

  nice.root = adapt(built[static_cast<size_t>(td.root)], td.bags[static_cast<size_t>(td.root)], {});
  return nice;
}

ValidationReport validate_nice(const NiceTreeDecomposition& nice, const ContractionGraph& cg) {
  ValidationReport report;
  if (nice.root < 0 || nice.root >= nice.num_nodes()) {
    report.violations.push_back("invalid root");
    return report;
  }
  if (!nice.nodes[static_cast<size_t>(nice.root)].bag.empty())
    report.violations.push_back("root bag not empty");

  for (int t = 0; t < nice.num_nodes(); ++t) {
    const auto& node = nice.nodes[static_cast<size_t>(t)];
    if (!std::is_sorted(node.bag.begin(), node.bag.end()))
      report.violations.push_back("bag not sorted at node " + std::to_string(t));
    auto bag_with = [&](int cls) {
      std::vector<int> b = node.bag;
      b.insert(std::lower_bound(b.begin(), b.end(), cls), cls);
      return b;
    };
    switch (node.kind) {
      case NodeKind::kLeaf:
        if (node.child != -1 || !node.bag.empty())
          report.violations.push_back("malformed leaf at node " + std::to_string(t));
        break;
      case NodeKind::kIntroduce: {
        if (node.child < 0 || node.delta_class < 0) {
          report.violations.push_back("malformed introduce at node " + std::to_string(t));
          break;
        }
        const auto& cb = nice.nodes[static_cast<size_t>(node.child)].bag;
        std::vector<int> expect = cb;
        expect.insert(std::lower_bound(expect.begin(), expect.end(), node.delta_class),
                      node.delta_class);
        if (expect != node.bag ||
            std::binary_search(cb.begin(), cb.end(), node.delta_class))
          report.violations.push_back("introduce bag mismatch at node " + std::to_string(t));
        break;
      }
      case NodeKind::kForget: {
        if (node.child < 0 || node.delta_class < 0) {
          report.violations.push_back("malformed forget at node " + std::to_string(t));
          break;
        }
        if (bag_with(node.delta_class) != nice.nodes[static_cast<size_t>(node.child)].bag)
          report.violations.push_back("forget bag mismatch at node " + std::to_string(t));
        break;
      }
      case NodeKind::kJoin:
        if (node.child < 0 || node.child2 < 0 ||
            nice.nodes[static_cast<size_t>(node.child)].bag != node.bag ||
            nice.nodes[static_cast<size_t>(node.child2)].bag != node.bag)
          report.violations.push_back("join bag mismatch at node " + std::to_string(t));
        break;
    }
  }

  // The nice tree is itself a tree decomposition of the contraction graph.
  TreeDecomposition flat;
  flat.bags.resize(nice.nodes.size());
  flat.parent.assign(nice.nodes.size(), -1);
  for (int t = 0; t < nice.num_nodes(); ++t) {
    flat.bags[static_cast<size_t>(t)] = nice.nodes[static_cast<size_t>(t)].bag;
    const auto& node = nice.nodes[static_cast<size_t>(t)];
    if (node.child >= 0) flat.parent[static_cast<size_t>(node.child)] = t;
    if (node.child2 >= 0) flat.parent[static_cast<size_t>(node.child2)] = t;
  }
  flat.root = nice.root;
  ValidationReport base = validate(flat, cg);
  report.violations.insert(report.violations.end(), base.violations.begin(),
                           base.violations.end());
  report.ok = report.violations.empty();
  return report;
}

std::string decomposition_to_json(const NiceTreeDecomposition& nice, const WeightFunction& gamma,
                                  const KappaPartition& partition) {
  nlohmann::ordered_json j;
  j["num_nodes"] = nice.num_nodes();
  j["root"] = nice.root;
  j["weighted_width"] = weighted_width(nice, gamma, partition);
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  static const char* kNames[] = {"leaf", "introduce", "forget", "join"};
  for (const auto& node : nice.nodes) {
    nlohmann::ordered_json nj;
    nj["kind"] = kNames[static_cast<int>(node.kind)];
    nj["bag"] = node.bag;
    if (node.child >= 0) nj["child"] = node.child;
    if (node.child2 >= 0) nj["child2"] = node.child2;
    if (node.delta_class >= 0) nj["class"] = node.delta_class;
    nodes.push_back(std::move(nj));
  }
  j["nodes"] = std::move(nodes);
  return j.dump(2) + "\n";
}

}  // namespace diamcover
