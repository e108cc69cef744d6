// SPDX-License-Identifier: Apache-2.0
//
// Undirected graph machinery: moralization, node elimination, chordality,
// maximal cliques and junction trees.

#pragma once

#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "msbn/core.hpp"
#include "msbn/model.hpp"

namespace msbn {

enum class EdgeTag : std::uint8_t { kOriginal, kMoral, kFillin };

inline std::string_view to_string(EdgeTag t) {
  switch (t) {
    case EdgeTag::kOriginal: return "original";
    case EdgeTag::kMoral: return "moral";
    case EdgeTag::kFillin: return "fill-in";
  }
  return "?";
}

using PairSet = std::set<VarPair>;

// Undirected graph over variables.  Each node carries a weight (the
// variable's cardinality) used by elimination heuristics; each edge carries
// the tag it was created with.
class LabeledGraph {
 public:
  void add_node(VarId v, std::size_t weight = 2) {
    adj_.try_emplace(v);
    weight_.try_emplace(v, weight);
  }

  bool has_node(VarId v) const { return adj_.count(v) != 0; }

  // Adds an edge unless it exists already; an existing edge keeps its tag.
  bool add_edge(VarId a, VarId b, EdgeTag tag) {
    if (a == b) throw Error(ErrorKind::kInvalidArgument, "self-loop");
    if (!has_node(a) || !has_node(b)) {
      throw Error(ErrorKind::kNodeAbsent, "edge endpoint is not a node");
    }
    if (adj_[a].count(b)) return false;
    adj_[a][b] = tag;
    adj_[b][a] = tag;
    return true;
  }

  bool adjacent(VarId a, VarId b) const {
    auto it = adj_.find(a);
    return it != adj_.end() && it->second.count(b) != 0;
  }

  std::optional<EdgeTag> tag(VarId a, VarId b) const {
    auto it = adj_.find(a);
    if (it == adj_.end()) return std::nullopt;
    auto jt = it->second.find(b);
    if (jt == it->second.end()) return std::nullopt;
    return jt->second;
  }

  void remove_node(VarId v) {
    auto it = adj_.find(v);
    if (it == adj_.end()) throw Error(ErrorKind::kNodeAbsent, "remove_node");
    for (const auto& [n, t] : it->second) adj_[n].erase(v);
    adj_.erase(it);
    weight_.erase(v);
  }

  VarSet nodes() const {
    VarSet out;
    out.reserve(adj_.size());
    for (const auto& [v, n] : adj_) out.push_back(v);
    return out;
  }

  VarSet neighbors(VarId v) const {
    auto it = adj_.find(v);
    if (it == adj_.end()) throw Error(ErrorKind::kNodeAbsent, "neighbors");
    VarSet out;
    for (const auto& [n, t] : it->second) out.push_back(n);
    return out;
  }

  std::size_t weight(VarId v) const { return weight_.at(v); }
  std::size_t node_count() const { return adj_.size(); }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& [v, nb] : adj_) n += nb.size();
    return n / 2;
  }

  // All edges as sorted pairs, optionally only those with `only` tag.
  PairSet edges(std::optional<EdgeTag> only = std::nullopt) const {
    PairSet out;
    for (const auto& [v, nb] : adj_) {
      for (const auto& [w, t] : nb) {
        if (v < w && (!only || *only == t)) out.insert({v, w});
      }
    }
    return out;
  }

  bool is_complete(const VarSet& s) const {
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = i + 1; j < s.size(); ++j) {
        if (!adjacent(s[i], s[j])) return false;
      }
    }
    return true;
  }

  // Subgraph spanned by `keep` (tags preserved).
  LabeledGraph induced(const VarSet& keep) const {
    LabeledGraph g;
    for (VarId v : keep) {
      if (has_node(v)) g.add_node(v, weight(v));
    }
    for (const auto& [a, b] : edges()) {
      if (g.has_node(a) && g.has_node(b)) g.add_edge(a, b, *tag(a, b));
    }
    return g;
  }

  friend bool operator==(const LabeledGraph& a, const LabeledGraph& b) {
    return a.adj_ == b.adj_;
  }

 private:
  std::map<VarId, std::map<VarId, EdgeTag>> adj_;
  std::map<VarId, std::size_t> weight_;
};

// Graph over the DAG's nodes with its arcs as `original` edges and every
// co-parent pair as a `moral` edge.
inline LabeledGraph moralize(const Dag& dag, const Universe& u) {
  LabeledGraph g;
  for (VarId v : dag.nodes) g.add_node(v, u.card(v));
  for (const auto& [child, ps] : dag.parents) {
    for (VarId p : ps) g.add_edge(p, child, EdgeTag::kOriginal);
  }
  for (const auto& [child, ps] : dag.parents) {
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (std::size_t j = i + 1; j < ps.size(); ++j) {
        g.add_edge(ps[i], ps[j], EdgeTag::kMoral);
      }
    }
  }
  return g;
}

// Completes the neighbourhood of `node`, then removes it.  Returns the edges
// that had to be added.
inline PairSet eliminate(LabeledGraph& g, VarId node) {
  if (!g.has_node(node)) throw Error(ErrorKind::kNodeAbsent, "eliminate");
  const VarSet nb = g.neighbors(node);
  PairSet fill;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    for (std::size_t j = i + 1; j < nb.size(); ++j) {
      if (g.add_edge(nb[i], nb[j], EdgeTag::kFillin)) fill.insert({nb[i], nb[j]});
    }
  }
  g.remove_node(node);
  return fill;
}

namespace detail {

inline std::size_t fill_count(const LabeledGraph& g, VarId v) {
  const VarSet nb = g.neighbors(v);
  std::size_t missing = 0;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    for (std::size_t j = i + 1; j < nb.size(); ++j) {
      missing += !g.adjacent(nb[i], nb[j]);
    }
  }
  return missing;
}

inline double clique_weight(const LabeledGraph& g, VarId v) {
  double w = static_cast<double>(g.weight(v));
  for (VarId n : g.neighbors(v)) w *= static_cast<double>(g.weight(n));
  return w;
}

}  // namespace detail

// Picks the next node to eliminate among `candidates`: fewest fill-ins, then
// smallest resulting clique weight, then smallest id.
inline VarId min_fill_choice(const LabeledGraph& g, const VarSet& candidates) {
  VarId best = candidates.front();
  std::size_t best_fill = SIZE_MAX;
  double best_weight = 0.0;
  for (VarId v : candidates) {
    const std::size_t f = detail::fill_count(g, v);
    const double w = detail::clique_weight(g, v);
    if (f < best_fill || (f == best_fill && w < best_weight)) {
      best = v;
      best_fill = f;
      best_weight = w;
    }
  }
  return best;
}

// Chooses the order in which a set of nodes is eliminated.  Called with the
// current working graph and the nodes still to go.
using EliminationChooser =
    std::function<VarId(const LabeledGraph&, const VarSet&)>;

inline EliminationChooser min_fill_chooser() { return min_fill_choice; }

// Uniformly random choice, for order-independence experiments.
inline EliminationChooser random_chooser(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng](const LabeledGraph&, const VarSet& c) {
    return c[(*rng)() % c.size()];
  };
}

struct LocalTriangulation {
  LabeledGraph graph;        // input graph plus every fill-in produced
  PairSet separator_fillins;  // fill-ins with both endpoints in `keep`
  std::vector<VarId> order;   // elimination order used
};

// Simulates eliminating every node outside `keep` on a working copy and adds
// all produced fill-ins back into the full graph.
inline LocalTriangulation triangulate_local(
    const LabeledGraph& g, const VarSet& keep,
    const EliminationChooser& choose = min_fill_chooser()) {
  LocalTriangulation out{g, {}, {}};
  LabeledGraph work = g;
  VarSet todo = set_difference(g.nodes(), keep);
  while (!todo.empty()) {
    const VarId v = choose(work, todo);
    for (const auto& [a, b] : eliminate(work, v)) {
      out.graph.add_edge(a, b, EdgeTag::kFillin);
      if (contains(keep, a) && contains(keep, b)) {
        out.separator_fillins.insert({a, b});
      }
    }
    out.order.push_back(v);
    todo.erase(std::find(todo.begin(), todo.end(), v));
  }
  return out;
}

// Eliminates every node.  The result is chordal.
inline LabeledGraph triangulate(const LabeledGraph& g,
                                const EliminationChooser& choose = min_fill_chooser()) {
  return triangulate_local(g, {}, choose).graph;
}

//===========================================================================
// Chordality.

struct ChordalityResult {
  bool chordal = false;
  std::vector<VarId> perfect_order;   // witness when chordal
  std::vector<VarId> chordless_cycle;  // witness otherwise
};

// Maximum cardinality search, smallest id first on ties.  Returns the
// visiting order; its reverse is a perfect elimination order iff the graph
// is chordal.
inline std::vector<VarId> maximum_cardinality_search(const LabeledGraph& g) {
  const VarSet nodes = g.nodes();
  std::map<VarId, std::size_t> label;
  for (VarId v : nodes) label[v] = 0;
  std::vector<VarId> order;
  while (!label.empty()) {
    VarId best = label.begin()->first;
    std::size_t best_label = label.begin()->second;
    for (const auto& [v, l] : label) {
      if (l > best_label) {
        best = v;
        best_label = l;
      }
    }
    order.push_back(best);
    label.erase(best);
    for (VarId n : g.neighbors(best)) {
      auto it = label.find(n);
      if (it != label.end()) ++it->second;
    }
  }
  return order;
}

namespace detail {

// A chordless cycle of length >= 4, searched through every node and every
// non-adjacent pair of its neighbours.
inline std::vector<VarId> chordless_cycle(const LabeledGraph& g) {
  for (VarId v : g.nodes()) {
    const VarSet nb = g.neighbors(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        const VarId a = nb[i], b = nb[j];
        if (g.adjacent(a, b)) continue;
        // Shortest a..b path avoiding v and v's other neighbours.
        std::map<VarId, VarId> prev;
        std::vector<VarId> queue{a};
        prev[a] = a;
        bool found = false;
        for (std::size_t k = 0; k < queue.size() && !found; ++k) {
          for (VarId n : g.neighbors(queue[k])) {
            if (prev.count(n) || n == v) continue;
            if (n != b && contains(nb, n)) continue;
            prev[n] = queue[k];
            if (n == b) {
              found = true;
              break;
            }
            queue.push_back(n);
          }
        }
        if (!found) continue;
        std::vector<VarId> cycle{v};
        std::vector<VarId> path{b};
        while (path.back() != a) path.push_back(prev[path.back()]);
        cycle.insert(cycle.end(), path.rbegin(), path.rend());
        return cycle;
      }
    }
  }
  return {};
}

}  // namespace detail

inline ChordalityResult is_chordal(const LabeledGraph& g) {
  std::vector<VarId> order = maximum_cardinality_search(g);
  std::reverse(order.begin(), order.end());
  LabeledGraph work = g;
  for (VarId v : order) {
    if (detail::fill_count(work, v) != 0) {
      return {false, {}, detail::chordless_cycle(g)};
    }
    work.remove_node(v);
  }
  return {true, std::move(order), {}};
}

// Maximal cliques of a chordal graph, sorted lexicographically.
inline std::vector<VarSet> max_cliques(const LabeledGraph& g) {
  ChordalityResult c = is_chordal(g);
  if (!c.chordal) throw Error(ErrorKind::kNotChordal, "max_cliques");
  std::map<VarId, std::size_t> position;
  for (std::size_t i = 0; i < c.perfect_order.size(); ++i) {
    position[c.perfect_order[i]] = i;
  }
  std::vector<VarSet> candidates;
  for (VarId v : c.perfect_order) {
    VarSet clique{v};
    for (VarId n : g.neighbors(v)) {
      if (position[n] > position[v]) clique.push_back(n);
    }
    candidates.push_back(make_set(std::move(clique)));
  }
  std::vector<VarSet> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < candidates.size() && maximal; ++j) {
      if (i == j) continue;
      if (candidates[i].size() < candidates[j].size() &&
          is_subset(candidates[i], candidates[j])) {
        maximal = false;
      }
    }
    if (maximal) out.push_back(candidates[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Maximal complete sets of an arbitrary (small) graph, Bron-Kerbosch with
// pivoting; sorted lexicographically.
inline std::vector<VarSet> maximal_complete_sets(const LabeledGraph& g) {
  std::vector<VarSet> out;
  auto bk = [&](auto&& self, VarSet r, VarSet p, VarSet x) -> void {
    if (p.empty() && x.empty()) {
      out.push_back(r);
      return;
    }
    const VarSet px = set_union(p, x);
    VarId pivot = px.front();
    std::size_t best = 0;
    for (VarId u : px) {
      std::size_t k = set_intersection(p, g.neighbors(u)).size();
      if (k >= best) {
        best = k;
        pivot = u;
      }
    }
    for (VarId v : set_difference(p, g.neighbors(pivot))) {
      const VarSet nb = g.neighbors(v);
      self(self, set_union(r, VarSet{v}), set_intersection(p, nb),
           set_intersection(x, nb));
      p.erase(std::find(p.begin(), p.end(), v));
      x = set_union(x, VarSet{v});
    }
  };
  if (g.node_count() > 0) bk(bk, {}, g.nodes(), {});
  std::sort(out.begin(), out.end());
  return out;
}

//===========================================================================
// Junction trees.

struct JunctionTree {
  std::vector<VarSet> clusters;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // first < second

  std::vector<std::size_t> neighbors(std::size_t c) const {
    std::vector<std::size_t> out;
    for (auto [a, b] : edges) {
      if (a == c) out.push_back(b);
      if (b == c) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  VarSet sepset(std::size_t a, std::size_t b) const {
    return set_intersection(clusters.at(a), clusters.at(b));
  }

  VarSet variables() const {
    VarSet out;
    for (const VarSet& c : clusters) out = set_union(out, c);
    return out;
  }

  // Clusters on the tree path from a to b, inclusive.
  std::vector<std::size_t> path(std::size_t a, std::size_t b) const {
    std::vector<std::size_t> prev(clusters.size(), SIZE_MAX);
    std::vector<std::size_t> queue{a};
    prev[a] = a;
    for (std::size_t k = 0; k < queue.size(); ++k) {
      for (std::size_t n : neighbors(queue[k])) {
        if (prev[n] == SIZE_MAX) {
          prev[n] = queue[k];
          queue.push_back(n);
        }
      }
    }
    if (prev[b] == SIZE_MAX) return {};
    std::vector<std::size_t> out{b};
    while (out.back() != a) out.push_back(prev[out.back()]);
    std::reverse(out.begin(), out.end());
    return out;
  }

  bool is_tree() const {
    if (clusters.empty()) return edges.empty();
    if (edges.size() + 1 != clusters.size()) return false;
    for (std::size_t c = 1; c < clusters.size(); ++c) {
      if (path(0, c).empty()) return false;
    }
    return true;
  }

  // Running intersection checked by explicit path walks for every pair.
  bool has_running_intersection() const {
    if (!is_tree()) return false;
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        const VarSet common = set_intersection(clusters[a], clusters[b]);
        for (std::size_t c : path(a, b)) {
          if (!is_subset(common, clusters[c])) return false;
        }
      }
    }
    return true;
  }
};

// Maximum-weight spanning tree over the clusters, weight = |intersection|.
// Zero-weight edges join otherwise disconnected parts.  Ties prefer the
// lexicographically smallest (cluster, cluster) pair.
inline JunctionTree build_junction_tree(std::vector<VarSet> cliques) {
  std::sort(cliques.begin(), cliques.end());
  JunctionTree jt;
  jt.clusters = std::move(cliques);
  const std::size_t n = jt.clusters.size();
  struct Candidate {
    std::size_t weight, a, b;
  };
  std::vector<Candidate> cand;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      cand.push_back({set_intersection(jt.clusters[a], jt.clusters[b]).size(), a, b});
    }
  }
  std::stable_sort(cand.begin(), cand.end(),
                   [](const Candidate& x, const Candidate& y) {
                     if (x.weight != y.weight) return x.weight > y.weight;
                     return std::tie(x.a, x.b) < std::tie(y.a, y.b);
                   });
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Candidate& c : cand) {
    std::size_t ra = find(c.a), rb = find(c.b);
    if (ra == rb) continue;
    parent[ra] = rb;
    jt.edges.emplace_back(c.a, c.b);
  }
  std::sort(jt.edges.begin(), jt.edges.end());
  if (!jt.has_running_intersection()) {
    throw Error(ErrorKind::kRunningIntersectionUnsatisfiable,
                "cliques do not come from a chordal graph");
  }
  return jt;
}

//===========================================================================
// Debug export in Graphviz DOT.  Node names are quoted variable names; edge
// attribute `tag` is one of original, moral, fill-in.

inline void write_dot(std::ostream& os, const LabeledGraph& g, const Universe& u,
                      const std::string& name = "G") {
  os << "graph \"" << name << "\" {\n";
  for (VarId v : g.nodes()) os << "  \"" << u.name(v) << "\";\n";
  for (const auto& [a, b] : g.edges()) {
    const EdgeTag t = *g.tag(a, b);
    os << "  \"" << u.name(a) << "\" -- \"" << u.name(b) << "\" [tag=\""
       << to_string(t) << "\"" << (t == EdgeTag::kFillin ? ", style=dashed" : "")
       << "];\n";
  }
  os << "}\n";
}

inline void write_dot(std::ostream& os, const JunctionTree& jt, const Universe& u,
                      const std::string& name = "T") {
  os << "graph \"" << name << "\" {\n";
  for (std::size_t c = 0; c < jt.clusters.size(); ++c) {
    os << "  c" << c << " [label=\"" << u.names(jt.clusters[c]) << "\"];\n";
  }
  for (auto [a, b] : jt.edges) {
    os << "  c" << a << " -- c" << b << " [label=\"" << u.names(jt.sepset(a, b))
       << "\"];\n";
  }
  os << "}\n";
}

}  // namespace msbn
