// SPDX-License-Identifier: Apache-2.0

#include <set>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace msbn {
namespace {

using testing::fig6;
using testing::fixtures_in;
using testing::load_file;
using testing::single_bn;
using testing::vars;

class Fig6Forest : public ::testing::Test {
 protected:
  Msbn m = fig6();
  const Universe& u = m.universe;
  LinkedJunctionForest ljf = compile(m);
  std::size_t g0 = m.subnet_index("G0"), g1 = m.subnet_index("G1"),
              g2 = m.subnet_index("G2"), g3 = m.subnet_index("G3");

  const Structure& message(std::size_t i, std::size_t j) const {
    return ljf.structures[ljf.outgoing[i].at(j)];
  }
  VarSet host(const Structure& s, std::size_t t) const {
    return s.trees[t].clusters[s.hosts[t]];
  }
  std::vector<VarSet> clusters(const Structure& s) const {
    std::vector<VarSet> out;
    for (const JunctionTree& jt : s.trees) {
      out.insert(out.end(), jt.clusters.begin(), jt.clusters.end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

TEST_F(Fig6Forest, InferenceTreeOfG1HoldsSeparator) {
  const JunctionTree& t1 = ljf.structures[ljf.inference[g1]].trees[0];
  const VarSet fgh = vars(u, {"f", "g", "h"});
  EXPECT_TRUE(std::any_of(t1.clusters.begin(), t1.clusters.end(),
                          [&](const VarSet& c) { return is_subset(fgh, c); }));
}

TEST_F(Fig6Forest, CompleteDsepsetGivesOneTree) {
  const Structure& t32 = message(g3, g2);
  ASSERT_EQ(t32.trees.size(), 1u);
  EXPECT_EQ(host(t32, 0), vars(u, {"j", "k", "l", "m"}));
  EXPECT_EQ(t32.candidates, (std::vector<VarSet>{vars(u, {"j", "k", "l"})}));
}

TEST_F(Fig6Forest, SplicedForestFromG1) {
  const Structure& t12 = message(g1, g2);
  EXPECT_EQ(t12.candidates,
            (std::vector<VarSet>{vars(u, {"f", "g"}), vars(u, {"g", "h"})}));
  ASSERT_EQ(t12.trees.size(), 2u);
  // {g,h} is a new cluster next to {b,h}; {f,g} is absorbed by {e,f,g}.
  const JunctionTree& a = t12.trees[0];
  EXPECT_EQ(host(t12, 0), vars(u, {"g", "h"}));
  const std::size_t bh = static_cast<std::size_t>(
      std::find(a.clusters.begin(), a.clusters.end(), vars(u, {"b", "h"})) - a.clusters.begin());
  ASSERT_LT(bh, a.clusters.size());
  const auto nb = a.neighbors(t12.hosts[0]);
  EXPECT_NE(std::find(nb.begin(), nb.end(), bh), nb.end());
  EXPECT_EQ(host(t12, 1), vars(u, {"e", "f", "g"}));
  EXPECT_EQ(clusters(t12), (std::vector<VarSet>{vars(u, {"a", "b", "c"}), vars(u, {"b", "h"}),
                                                vars(u, {"d", "e"}), vars(u, {"e", "f", "g"}),
                                                vars(u, {"g", "h"})}));
}

TEST_F(Fig6Forest, TwoLinkagesFromG1IntoG2ToG0) {
  const std::size_t src = ljf.outgoing[g1].at(g2), dst = ljf.outgoing[g2].at(g0);
  std::vector<VarSet> labels;
  for (const Linkage& l : ljf.linkages) {
    if (l.source.structure == src && l.destination.structure == dst) labels.push_back(l.label);
  }
  std::sort(labels.begin(), labels.end());
  EXPECT_EQ(labels, (std::vector<VarSet>{vars(u, {"f", "g"}), vars(u, {"g", "h"})}));
}

TEST_F(Fig6Forest, G2ToG1ReceivesFromBothOtherNeighbours) {
  const std::size_t t21 = ljf.outgoing[g2].at(g1);
  std::vector<VarSet> hosts;
  for (std::size_t l : ljf.linkages_into(t21)) hosts.push_back(ljf.cluster(ljf.linkages[l].source));
  std::sort(hosts.begin(), hosts.end());
  EXPECT_EQ(hosts, (std::vector<VarSet>{vars(u, {"f", "i", "j", "p"}),
                                        vars(u, {"j", "k", "l", "m"})}));
  EXPECT_EQ(host(message(g2, g1), 0), vars(u, {"f", "g", "h", "i"}));
}

TEST_F(Fig6Forest, LinkageDirections) {
  for (const Linkage& l : ljf.linkages) {
    const Structure& src = ljf.structures[l.source.structure];
    const Structure& dst = ljf.structures[l.destination.structure];
    ASSERT_FALSE(src.is_inference());
    EXPECT_EQ(dst.subnet, *src.target);
    if (!dst.is_inference()) {
      EXPECT_NE(*dst.target, src.subnet);
    }
  }
  // Three message hosts per direction into G2 from G1 reach T_2 and the two
  // other outgoing forests of G2.
  EXPECT_EQ(ljf.linkages.size(), 17u);
}

TEST_F(Fig6Forest, StorageCounts) {
  const StorageStats st = storage_stats(m, ljf);
  EXPECT_EQ(st.lazy_parameters, 44u);
  EXPECT_EQ(st.full_cpt_values, 88u);
  EXPECT_EQ(st.hugin_table_cells, 120u);
}

TEST(BuildInferenceJt, CompleteGraphIsOneCluster) {
  LabeledGraph g;
  for (VarId v = 0; v < 4; ++v) g.add_node(v);
  for (VarId a = 0; a < 4; ++a)
    for (VarId b = a + 1; b < 4; ++b) g.add_edge(a, b, EdgeTag::kOriginal);
  JunctionTree jt = build_inference_jt(g);
  EXPECT_EQ(jt.clusters, (std::vector<VarSet>{{0, 1, 2, 3}}));
}

TEST(BuildInferenceJt, RejectsNonChordal) {
  LabeledGraph g;
  for (VarId v = 0; v < 4; ++v) g.add_node(v);
  for (VarId v = 0; v < 4; ++v) g.add_edge(v, (v + 1) % 4, EdgeTag::kOriginal);
  try {
    build_inference_jt(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotChordal);
  }
}

TEST(BuildMessageJf, WholeGraphAsDsepset) {
  Universe u({{"a", 2, {}}, {"b", 2, {}}, {"c", 2, {}}});
  LabeledGraph g;
  for (VarId v = 0; v < 3; ++v) g.add_node(v);
  g.add_edge(0, 1, EdgeTag::kOriginal);
  g.add_edge(1, 2, EdgeTag::kOriginal);
  MessageJF jf = build_message_jf(g, {0, 1, 2}, u);
  EXPECT_EQ(jf.candidates, (std::vector<VarSet>{{0, 1}, {1, 2}}));
  std::vector<VarSet> hosts;
  for (std::size_t t = 0; t < jf.trees.size(); ++t) {
    hosts.push_back(jf.trees[t].clusters[jf.hosts[t]]);
  }
  std::sort(hosts.begin(), hosts.end());
  EXPECT_EQ(hosts, max_cliques(g));
}

TEST(Compile, TwoSubnetLinkages) {
  MsbnDocument doc = parse_msbn(
      "msbn-format 1\n[variables]\na 2\nb 2\nc 2\n"
      "[subnet L]\nnodes: a b\narc: a -> b\ncpt: a = 0.3 0.7\ncpt: b | a = 0.1 0.2 0.9 0.8\n"
      "[subnet R]\nnodes: b c\narc: b -> c\ncpt: c | b = 0.5 0.6 0.5 0.4\n"
      "[links]\nL R\n");
  Msbn m = to_msbn(doc);
  LinkedJunctionForest ljf = compile(m);
  ASSERT_EQ(ljf.linkages.size(), 2u);
  for (const Linkage& l : ljf.linkages) {
    const Structure& src = ljf.structures[l.source.structure];
    EXPECT_EQ(l.destination.structure, ljf.inference[*src.target]);
    EXPECT_EQ(l.label, VarSet{m.universe.id("b")});
  }
}

TEST(Compile, SingleSubnetIsOrdinaryJt) {
  Msbn m = single_bn({{"a", {}, {0.4, 0.6}},
                      {"b", {"a"}, {0.1, 0.7, 0.9, 0.3}},
                      {"c", {"a", "b"}, {0.2, 0.3, 0.4, 0.5, 0.8, 0.7, 0.6, 0.5}}});
  LinkedJunctionForest ljf = compile(m);
  ASSERT_EQ(ljf.structures.size(), 1u);
  EXPECT_TRUE(ljf.linkages.empty());
  EXPECT_EQ(ljf.structures[0].trees[0].clusters, (std::vector<VarSet>{{0, 1, 2}}));
}

TEST(Storage, SmallNetworks) {
  const StorageStats root = storage_stats(single_bn({{"a", {}, {0.4, 0.6}}}),
                                          compile(single_bn({{"a", {}, {0.4, 0.6}}})));
  EXPECT_EQ(root.lazy_parameters, 1u);
  EXPECT_EQ(root.full_cpt_values, 2u);
  EXPECT_EQ(root.hugin_table_cells, 2u);

  Msbn chain = single_bn({{"a", {}, {0.4, 0.6}}, {"b", {"a"}, {0.1, 0.7, 0.9, 0.3}}});
  const StorageStats st = storage_stats(chain, compile(chain));
  EXPECT_EQ(st.lazy_parameters, 3u);
  EXPECT_EQ(st.full_cpt_values, 6u);
  EXPECT_EQ(st.hugin_table_cells, 4u);
}

// Structural invariants over the random fixtures.
TEST(Compile, StructuralInvariants) {
  for (const std::string& path : fixtures_in("random")) {
    SCOPED_TRACE(path);
    const Msbn m = load_file(path);
    const Universe& u = m.universe;
    const LinkedJunctionForest ljf = compile(m);
    EXPECT_EQ(to_text(m, ljf), to_text(m, compile(m)));

    for (std::size_t i = 0; i < m.subnets.size(); ++i) {
      EXPECT_TRUE(is_chordal(ljf.fillins.chordal[i]).chordal);
      for (std::size_t j : m.neighbors(i)) {
        EXPECT_TRUE(is_chordal(ljf.fillins.directed.at({i, j})).chordal);
      }
    }

    for (std::size_t s = 0; s < ljf.structures.size(); ++s) {
      const Structure& st = ljf.structures[s];
      VarSet covered;
      for (const JunctionTree& jt : st.trees) {
        EXPECT_TRUE(jt.is_tree());
        EXPECT_TRUE(jt.has_running_intersection());
        for (const VarSet& c : jt.clusters) covered = set_union(covered, c);
      }
      EXPECT_EQ(covered, m.subnets[st.subnet].nodes());

      // Each owned CPT sits in exactly one containing cluster.
      const Subnet& sub = m.subnets[st.subnet];
      ASSERT_EQ(ljf.assignment[s].size(), sub.cpts.size());
      for (const auto& [v, where] : ljf.assignment[s]) {
        EXPECT_TRUE(is_subset(sub.cpts.at(v).scope_set(),
                              st.trees[where.first].clusters[where.second]));
      }

      if (st.is_inference()) {
        EXPECT_EQ(st.trees[0].clusters, max_cliques(ljf.fillins.chordal[st.subnet]));
        continue;
      }
      // Host intersections with the d-sepset cover exactly the candidates.
      // Two subtrees may carry the same candidate.
      std::set<VarSet> labels;
      for (std::size_t t = 0; t < st.trees.size(); ++t) {
        labels.insert(set_intersection(st.trees[t].clusters[st.hosts[t]], st.dsepset));
      }
      EXPECT_EQ(std::vector<VarSet>(labels.begin(), labels.end()), st.candidates);
      EXPECT_EQ(st.candidates, maximal_complete_sets(
                                   ljf.fillins.directed.at({st.subnet, *st.target})
                                       .induced(st.dsepset)));
    }

    for (const Linkage& l : ljf.linkages) {
      const VarSet& src = ljf.cluster(l.source);
      const VarSet& dst = ljf.cluster(l.destination);
      EXPECT_EQ(l.label, set_intersection(src, dst));
      EXPECT_EQ(l.label, set_intersection(src, ljf.structures[l.source.structure].dsepset));
      // Covering: the label is complete wherever it is received.
      const Structure& d = ljf.structures[l.destination.structure];
      const LabeledGraph& g = d.is_inference()
                                  ? ljf.fillins.chordal[d.subnet]
                                  : ljf.fillins.directed.at({d.subnet, *d.target});
      EXPECT_TRUE(g.is_complete(l.label)) << u.names(l.label);
    }
    // One linkage per host and destination.
    std::size_t expected = 0;
    for (const Structure& st : ljf.structures) {
      if (!st.is_inference()) expected += st.trees.size() * m.neighbors(*st.target).size();
    }
    EXPECT_EQ(ljf.linkages.size(), expected);
  }
}

// The product of the CPTs assigned in any structure is the joint of the
// subnet's owned CPTs, and all structures of a subnet agree.
TEST(Compile, AssignedBeliefsAgreeAcrossStructures) {
  const auto files = fixtures_in("random");
  for (std::size_t k = 0; k < 20; ++k) {
    const Msbn m = load_file(files[k]);
    const LinkedJunctionForest ljf = compile(m);
    for (std::size_t i = 0; i < m.subnets.size(); ++i) {
      std::vector<Factor> products;
      for (std::size_t s : ljf.structures_of(i)) {
        Factor p;
        for (const auto& [v, where] : ljf.assignment[s]) {
          p = multiply(p, m.subnets[i].cpts.at(v));
        }
        products.push_back(reorder(p, make_set(p.scope())));
      }
      for (const Factor& p : products) EXPECT_LT(max_abs_diff(p, products[0]), 1e-15);
    }
  }
}

}  // namespace
}  // namespace msbn
