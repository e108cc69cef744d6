// SPDX-License-Identifier: Apache-2.0
//
// Moralization and triangulation of a sectioned DAG, each carried out as a
// full propagation over the hypertree of subnets.  Messages are sets of
// links over the separator of the hyperlink they travel on.

#pragma once

#include <map>
#include <vector>

#include "msbn/graph.hpp"
#include "msbn/model.hpp"
#include "msbn/propagation.hpp"

namespace msbn {

inline TreeTopology hypertree_topology(const Msbn& m) {
  return TreeTopology(m.subnets.size(), m.links);
}

namespace detail {

inline PairSet pairs_within(const LabeledGraph& g, const VarSet& s, EdgeTag tag) {
  PairSet out;
  for (const auto& [a, b] : g.edges(tag)) {
    if (contains(s, a) && contains(s, b)) out.insert({a, b});
  }
  return out;
}

inline void absorb(LabeledGraph& g, const Inbox<PairSet>& inbox, EdgeTag tag) {
  for (const auto& [from, msg] : inbox) {
    for (const auto& [a, b] : *msg) g.add_edge(a, b, tag);
  }
}

}  // namespace detail

// Each subnet completes its local parents once; moral links over a
// separator are then forwarded to the neighbour on the other side.  The
// result holds, per subnet, the local moral graph plus every moral link
// received over its separators.
inline std::vector<LabeledGraph> propagate_moral_links(const Msbn& m,
                                                       std::size_t root = 0) {
  const std::size_t n = m.subnets.size();
  std::vector<LabeledGraph> base(n), result(n);
  for (std::size_t i = 0; i < n; ++i) base[i] = moralize(m.subnets[i].dag, m.universe);
  if (n == 0) return result;

  auto send = [&](std::size_t i, std::size_t j, const Inbox<PairSet>& in) {
    LabeledGraph g = base[i];
    detail::absorb(g, in, EdgeTag::kMoral);
    return detail::pairs_within(g, m.separator(i, j), EdgeTag::kMoral);
  };
  auto finish = [&](std::size_t i, const Inbox<PairSet>& in) {
    result[i] = base[i];
    detail::absorb(result[i], in, EdgeTag::kMoral);
  };
  full_propagate<PairSet>(hypertree_topology(m), root, send, finish);
  return result;
}

struct FillinPropagation {
  // G_i*: subnet graph with fill-ins from all neighbours, fully triangulated.
  std::vector<LabeledGraph> chordal;
  // G_{i->j}*: fill-ins from every neighbour except j, with everything
  // outside the separator I_ij eliminated.
  std::map<DirectedEdge, LabeledGraph> directed;
  // The fill-in message sent along each directed hyperlink.
  std::map<DirectedEdge, PairSet> messages;
};

// Full propagation of fill-ins.  `choose` picks local elimination orders;
// the messages do not depend on it.
inline FillinPropagation propagate_fillins(
    const Msbn& m, const std::vector<LabeledGraph>& moral,
    const EliminationChooser& choose = min_fill_chooser(), std::size_t root = 0) {
  const std::size_t n = m.subnets.size();
  FillinPropagation out;
  out.chordal.resize(n);
  if (n == 0) return out;

  auto send = [&](std::size_t i, std::size_t j, const Inbox<PairSet>& in) {
    LabeledGraph g = moral[i];
    detail::absorb(g, in, EdgeTag::kFillin);
    const VarSet sep = m.separator(i, j);
    LocalTriangulation t = triangulate_local(g, sep, choose);
    PairSet msg = detail::pairs_within(t.graph, sep, EdgeTag::kFillin);
    out.directed.emplace(DirectedEdge{i, j}, std::move(t.graph));
    return msg;
  };
  auto finish = [&](std::size_t i, const Inbox<PairSet>& in) {
    LabeledGraph g = moral[i];
    detail::absorb(g, in, EdgeTag::kFillin);
    out.chordal[i] = triangulate_local(g, {}, choose).graph;
  };
  Propagation<PairSet> p =
      full_propagate<PairSet>(hypertree_topology(m), root, send, finish);
  out.messages = std::move(p.messages);
  return out;
}

}  // namespace msbn
