// SPDX-License-Identifier: Apache-2.0
//
// Compilation of a hypertree MSBN into a linked junction forest: per subnet
// one inference junction tree plus one message junction forest per
// neighbour, linkages from message hosts to the receiving structures, and
// the placement of every owned CPT.

#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "msbn/graph.hpp"
#include "msbn/hypertree.hpp"
#include "msbn/model.hpp"

namespace msbn {

// A junction forest built from G_{i->j}*.  Each tree yields one submessage
// read from its host cluster.
struct MessageJF {
  std::vector<JunctionTree> trees;
  std::vector<std::size_t> hosts;  // per tree
  std::vector<VarSet> candidates;  // maximal complete sets of the d-sepset
};

// Either an inference JT (one tree, no hosts) or a message JF.
struct Structure {
  std::size_t subnet = 0;
  std::optional<std::size_t> target;  // set for message JFs
  std::vector<JunctionTree> trees;
  std::vector<std::size_t> hosts;
  VarSet dsepset;
  std::vector<VarSet> candidates;

  bool is_inference() const { return !target.has_value(); }
};

struct ClusterAddr {
  std::size_t structure = 0;
  std::size_t tree = 0;
  std::size_t cluster = 0;

  friend auto operator<=>(const ClusterAddr&, const ClusterAddr&) = default;
};

// Directed pairing of a sending host and a receiving cluster.
struct Linkage {
  ClusterAddr source;
  ClusterAddr destination;
  VarSet label;
};

struct LinkedJunctionForest {
  std::vector<Structure> structures;
  std::vector<std::size_t> inference;                         // subnet -> structure
  std::vector<std::map<std::size_t, std::size_t>> outgoing;   // subnet -> {neighbour -> structure}
  std::vector<Linkage> linkages;
  // Per structure: owned CPT variable -> (tree, cluster).
  std::vector<std::map<VarId, std::pair<std::size_t, std::size_t>>> assignment;

  // Compilation intermediates, kept for inspection and tests.
  std::vector<LabeledGraph> moral;
  FillinPropagation fillins;

  const VarSet& cluster(const ClusterAddr& a) const {
    return structures.at(a.structure).trees.at(a.tree).clusters.at(a.cluster);
  }

  // Structures belonging to a subnet: inference JT first, then message JFs
  // by neighbour.
  std::vector<std::size_t> structures_of(std::size_t subnet) const {
    std::vector<std::size_t> out{inference.at(subnet)};
    for (const auto& [nb, s] : outgoing.at(subnet)) out.push_back(s);
    return out;
  }

  std::vector<std::size_t> linkages_into(std::size_t structure) const {
    std::vector<std::size_t> out;
    for (std::size_t l = 0; l < linkages.size(); ++l) {
      if (linkages[l].destination.structure == structure) out.push_back(l);
    }
    return out;
  }
  std::vector<std::size_t> linkages_from(std::size_t structure) const {
    std::vector<std::size_t> out;
    for (std::size_t l = 0; l < linkages.size(); ++l) {
      if (linkages[l].source.structure == structure) out.push_back(l);
    }
    return out;
  }
};

inline double state_space(const VarSet& s, const Universe& u) {
  double n = 1.0;
  for (VarId v : s) n *= static_cast<double>(u.card(v));
  return n;
}

// Smallest cluster (by state space, then variable list, then position) of
// the given trees containing `needed`.
inline std::optional<std::pair<std::size_t, std::size_t>> smallest_containing(
    const std::vector<JunctionTree>& trees, const VarSet& needed,
    const Universe& u) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  double best_size = 0.0;
  for (std::size_t t = 0; t < trees.size(); ++t) {
    for (std::size_t c = 0; c < trees[t].clusters.size(); ++c) {
      const VarSet& cl = trees[t].clusters[c];
      if (!is_subset(needed, cl)) continue;
      const double size = state_space(cl, u);
      if (!best || size < best_size ||
          (size == best_size && cl < trees[best->first].clusters[best->second])) {
        best = {t, c};
        best_size = size;
      }
    }
  }
  return best;
}

inline JunctionTree build_inference_jt(const LabeledGraph& g_star) {
  return build_junction_tree(max_cliques(g_star));
}

namespace detail {

// Rebuilds a tree from a subset of clusters of `jt` (plus optional extra
// cluster attached to `attach_to`), with clusters sorted.  Returns the tree
// and the new index of `host_old` (or of the extra cluster when
// host_old == SIZE_MAX).
inline std::pair<JunctionTree, std::size_t> rebuild_tree(
    const JunctionTree& jt, const std::vector<std::size_t>& members,
    const std::optional<VarSet>& extra, std::size_t attach_to,
    std::size_t host_old) {
  std::vector<std::pair<VarSet, std::size_t>> items;  // cluster, old index
  for (std::size_t m : members) items.emplace_back(jt.clusters[m], m);
  if (extra) items.emplace_back(*extra, SIZE_MAX);
  std::sort(items.begin(), items.end());
  std::map<std::size_t, std::size_t> renum;
  JunctionTree out;
  std::size_t host_new = 0;
  for (std::size_t k = 0; k < items.size(); ++k) {
    out.clusters.push_back(items[k].first);
    renum[items[k].second] = k;
    if (items[k].second == host_old) host_new = k;
  }
  for (auto [a, b] : jt.edges) {
    if (renum.count(a) && renum.count(b) && a != SIZE_MAX && b != SIZE_MAX) {
      auto x = renum[a], y = renum[b];
      out.edges.emplace_back(std::min(x, y), std::max(x, y));
    }
  }
  if (extra) {
    auto x = renum[SIZE_MAX], y = renum[attach_to];
    out.edges.emplace_back(std::min(x, y), std::max(x, y));
  }
  std::sort(out.edges.begin(), out.edges.end());
  if (!out.has_running_intersection()) {
    throw Error(ErrorKind::kRunningIntersectionUnsatisfiable,
                "message junction forest tree");
  }
  return {std::move(out), host_new};
}

}  // namespace detail

// Organizes the cliques of G_{i->j}* into a forest so that each submessage
// over a maximal complete subset of the d-sepset can be read from one host
// cluster per tree.
inline MessageJF build_message_jf(const LabeledGraph& g_dir, const VarSet& dsepset,
                                  const Universe& u) {
  for (VarId v : dsepset) {
    if (!g_dir.has_node(v)) throw Error(ErrorKind::kNodeAbsent, "d-sepset node");
  }
  MessageJF jf;
  if (dsepset.empty()) {
    jf.candidates = {VarSet{}};
  } else {
    jf.candidates = maximal_complete_sets(g_dir.induced(dsepset));
  }

  if (g_dir.is_complete(dsepset)) {
    JunctionTree jt = build_junction_tree(max_cliques(g_dir));
    auto host = smallest_containing({jt}, dsepset, u);
    jf.candidates = {dsepset};
    jf.hosts = {host->second};
    jf.trees = {std::move(jt)};
    return jf;
  }

  // Complete the d-sepset, re-triangulate with the other nodes eliminated
  // first, and split the junction tree at the d-sepset cluster.
  LabeledGraph completed = g_dir;
  for (std::size_t a = 0; a < dsepset.size(); ++a) {
    for (std::size_t b = a + 1; b < dsepset.size(); ++b) {
      completed.add_edge(dsepset[a], dsepset[b], EdgeTag::kFillin);
    }
  }
  completed = triangulate_local(completed, dsepset).graph;
  completed = triangulate(completed);
  const JunctionTree whole = build_junction_tree(max_cliques(completed));
  auto where = std::find(whole.clusters.begin(), whole.clusters.end(), dsepset);
  if (where == whole.clusters.end()) {
    throw Error(ErrorKind::kAttachmentAmbiguous,
                "completed d-sepset {" + u.names(dsepset) + "} is not a cluster");
  }
  const std::size_t cut = static_cast<std::size_t>(where - whole.clusters.begin());

  std::vector<bool> used(jf.candidates.size(), false);
  for (std::size_t x : whole.neighbors(cut)) {
    // Clusters reachable from x without passing the cut.
    std::vector<std::size_t> members{x};
    std::vector<bool> seen(whole.clusters.size(), false);
    seen[cut] = seen[x] = true;
    for (std::size_t k = 0; k < members.size(); ++k) {
      for (std::size_t nb : whole.neighbors(members[k])) {
        if (!seen[nb]) {
          seen[nb] = true;
          members.push_back(nb);
        }
      }
    }
    std::sort(members.begin(), members.end());

    const VarSet& xc = whole.clusters[x];
    const VarSet xs = set_intersection(xc, dsepset);
    // Candidate with the largest overlap with X; lexicographic on ties.
    std::optional<std::size_t> pick;
    std::size_t best = 0;
    for (std::size_t q = 0; q < jf.candidates.size(); ++q) {
      const std::size_t overlap = set_intersection(jf.candidates[q], xc).size();
      if (!pick || overlap > best) {
        pick = q;
        best = overlap;
      }
    }
    if (!pick || !is_subset(xs, jf.candidates[*pick])) {
      throw Error(ErrorKind::kAttachmentAmbiguous,
                  "no candidate cluster covers {" + u.names(xs) + "}");
    }
    const VarSet& q = jf.candidates[*pick];
    used[*pick] = true;

    // Absorb into an existing cluster when possible.
    std::optional<std::size_t> absorber;
    for (std::size_t mbr : members) {
      const VarSet& c = whole.clusters[mbr];
      if (!is_subset(q, c)) continue;
      if (!absorber || state_space(c, u) < state_space(whole.clusters[*absorber], u) ||
          (state_space(c, u) == state_space(whole.clusters[*absorber], u) &&
           c < whole.clusters[*absorber])) {
        absorber = mbr;
      }
    }
    auto [tree, host] =
        absorber ? detail::rebuild_tree(whole, members, std::nullopt, 0, *absorber)
                 : detail::rebuild_tree(whole, members, q, x, SIZE_MAX);
    jf.trees.push_back(std::move(tree));
    jf.hosts.push_back(host);
  }
  for (std::size_t q = 0; q < jf.candidates.size(); ++q) {
    if (used[q]) continue;
    JunctionTree single;
    single.clusters = {jf.candidates[q]};
    jf.trees.push_back(std::move(single));
    jf.hosts.push_back(0);
  }
  return jf;
}

// One linkage from every host of T_{i->j} to T_j and to each T_{j->k},
// k != i.  The receiving cluster is the smallest one containing the label.
inline std::vector<Linkage> build_linkages(const LinkedJunctionForest& ljf,
                                           const Msbn& m) {
  std::vector<Linkage> out;
  for (std::size_t s = 0; s < ljf.structures.size(); ++s) {
    const Structure& src = ljf.structures[s];
    if (src.is_inference()) continue;
    const std::size_t i = src.subnet, j = *src.target;
    std::vector<std::size_t> dests{ljf.inference[j]};
    for (const auto& [k, d] : ljf.outgoing[j]) {
      if (k != i) dests.push_back(d);
    }
    for (std::size_t t = 0; t < src.trees.size(); ++t) {
      const std::size_t h = src.hosts[t];
      const VarSet label = set_intersection(src.trees[t].clusters[h], src.dsepset);
      for (std::size_t d : dests) {
        auto where = smallest_containing(ljf.structures[d].trees, label, m.universe);
        if (!where) {
          throw Error(ErrorKind::kNoCoveringCluster,
                      "no cluster of structure " + std::to_string(d) +
                          " contains {" + m.universe.names(label) + "}");
        }
        out.push_back({{s, t, h}, {d, where->first, where->second}, label});
      }
    }
  }
  return out;
}

// Places each owned CPT in the smallest cluster containing its family, in
// every structure of the owner subnet.
inline std::vector<std::map<VarId, std::pair<std::size_t, std::size_t>>> assign_cpts(
    const Msbn& m, const LinkedJunctionForest& ljf) {
  std::vector<std::map<VarId, std::pair<std::size_t, std::size_t>>> out(
      ljf.structures.size());
  for (std::size_t s = 0; s < ljf.structures.size(); ++s) {
    const Structure& st = ljf.structures[s];
    for (const auto& [v, cpt] : m.subnets[st.subnet].cpts) {
      const VarSet family = cpt.scope_set();
      auto where = smallest_containing(st.trees, family, m.universe);
      if (!where) {
        throw Error(ErrorKind::kNoContainingCluster,
                    "family of '" + m.universe.name(v) + "' in structure " +
                        std::to_string(s));
      }
      out[s][v] = *where;
    }
  }
  return out;
}

struct CompileOptions {
  EliminationChooser chooser = min_fill_chooser();
  std::size_t root = 0;
};

inline LinkedJunctionForest compile(const Msbn& m, const CompileOptions& opt = {}) {
  LinkedJunctionForest ljf;
  const std::size_t n = m.subnets.size();
  ljf.moral = propagate_moral_links(m, opt.root);
  ljf.fillins = propagate_fillins(m, ljf.moral, opt.chooser, opt.root);
  ljf.inference.resize(n);
  ljf.outgoing.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Structure inf;
    inf.subnet = i;
    inf.trees = {build_inference_jt(ljf.fillins.chordal[i])};
    ljf.inference[i] = ljf.structures.size();
    ljf.structures.push_back(std::move(inf));
    for (std::size_t j : m.neighbors(i)) {
      Structure msg;
      msg.subnet = i;
      msg.target = j;
      msg.dsepset = m.separator(i, j);
      MessageJF jf = build_message_jf(ljf.fillins.directed.at({i, j}), msg.dsepset,
                                      m.universe);
      msg.trees = std::move(jf.trees);
      msg.hosts = std::move(jf.hosts);
      msg.candidates = std::move(jf.candidates);
      ljf.outgoing[i][j] = ljf.structures.size();
      ljf.structures.push_back(std::move(msg));
    }
  }
  ljf.linkages = build_linkages(ljf, m);
  ljf.assignment = assign_cpts(m, ljf);
  return ljf;
}

//===========================================================================
// Storage statistics.

struct StorageStats {
  std::size_t lazy_parameters = 0;    // independent CPT parameters
  std::size_t full_cpt_values = 0;    // all CPT cells
  std::size_t hugin_table_cells = 0;  // cluster tables, one JT per subnet
};

// The comparator compiles each subnet into a single junction tree that
// serves every direction: all separators completed, non-separator nodes
// eliminated first.
inline std::vector<JunctionTree> single_jt_per_subnet(const Msbn& m,
                                                      const LinkedJunctionForest& ljf) {
  std::vector<JunctionTree> out;
  for (std::size_t i = 0; i < m.subnets.size(); ++i) {
    LabeledGraph g = ljf.moral[i];
    VarSet keep;
    for (std::size_t j : m.neighbors(i)) {
      for (const auto& [a, b] : ljf.fillins.messages.at({j, i})) {
        g.add_edge(a, b, EdgeTag::kFillin);
      }
      const VarSet sep = m.separator(i, j);
      for (std::size_t a = 0; a < sep.size(); ++a)
        for (std::size_t b = a + 1; b < sep.size(); ++b)
          g.add_edge(sep[a], sep[b], EdgeTag::kFillin);
      keep = set_union(keep, sep);
    }
    g = triangulate_local(g, keep).graph;
    g = triangulate(g);
    out.push_back(build_junction_tree(max_cliques(g)));
  }
  return out;
}

inline StorageStats storage_stats(const Msbn& m, const LinkedJunctionForest& ljf) {
  StorageStats st;
  for (const Subnet& s : m.subnets) {
    for (const auto& [v, cpt] : s.cpts) {
      const std::size_t card = m.universe.card(v);
      const std::size_t configs = cpt.size() / card;
      st.lazy_parameters += (card - 1) * configs;
      st.full_cpt_values += card * configs;
    }
  }
  for (const JunctionTree& jt : single_jt_per_subnet(m, ljf)) {
    for (const VarSet& c : jt.clusters) {
      st.hugin_table_cells += static_cast<std::size_t>(state_space(c, m.universe));
    }
  }
  return st;
}

//===========================================================================
// Text serialization of a compiled forest (see docs/formats.md).

inline void write_ljf(std::ostream& os, const Msbn& m, const LinkedJunctionForest& ljf) {
  const Universe& u = m.universe;
  auto set = [&](const VarSet& s) { return "{" + u.names(s) + "}"; };
  auto addr = [&](const ClusterAddr& a) {
    return std::to_string(a.structure) + "." + std::to_string(a.tree) + "." +
           std::to_string(a.cluster);
  };
  os << "ljf-format 1\n";
  for (std::size_t s = 0; s < ljf.structures.size(); ++s) {
    const Structure& st = ljf.structures[s];
    os << "structure " << s << " subnet " << m.subnets[st.subnet].id;
    if (st.is_inference()) {
      os << " inference\n";
    } else {
      os << " message " << m.subnets[*st.target].id << " dsepset " << set(st.dsepset)
         << "\n";
      os << "  candidates";
      for (const VarSet& c : st.candidates) os << ' ' << set(c);
      os << "\n";
    }
    for (std::size_t t = 0; t < st.trees.size(); ++t) {
      const JunctionTree& jt = st.trees[t];
      os << "  tree " << t;
      if (!st.is_inference()) os << " host " << st.hosts[t];
      os << "\n";
      for (std::size_t c = 0; c < jt.clusters.size(); ++c) {
        os << "    cluster " << c << ' ' << set(jt.clusters[c]) << "\n";
      }
      for (auto [a, b] : jt.edges) {
        os << "    edge " << a << ' ' << b << ' ' << set(jt.sepset(a, b)) << "\n";
      }
    }
    for (const auto& [v, where] : ljf.assignment[s]) {
      os << "  assign " << u.name(v) << ' ' << where.first << '.' << where.second
         << "\n";
    }
  }
  for (const Linkage& l : ljf.linkages) {
    os << "linkage " << addr(l.source) << " -> " << addr(l.destination) << ' '
       << set(l.label) << "\n";
  }
}

inline std::string to_text(const Msbn& m, const LinkedJunctionForest& ljf) {
  std::ostringstream os;
  write_ljf(os, m, ljf);
  return os.str();
}

}  // namespace msbn
