// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace msbn {
namespace {

using testing::edges;
using testing::fig6;
using testing::fixtures_in;
using testing::load_file;

class Fig6Hypertree : public ::testing::Test {
 protected:
  Msbn m = fig6();
  const Universe& u = m.universe;
  std::size_t g0 = m.subnet_index("G0"), g1 = m.subnet_index("G1"),
              g2 = m.subnet_index("G2"), g3 = m.subnet_index("G3");
};

TEST_F(Fig6Hypertree, MoralLinksCrossSeparators) {
  std::vector<LabeledGraph> moral = propagate_moral_links(m);
  EXPECT_EQ(moral[g2].edges(EdgeTag::kMoral), edges(u, {{"f", "i"}, {"i", "k"}}));
  EXPECT_EQ(moral[g0].edges(EdgeTag::kMoral), edges(u, {{"f", "i"}}));
  EXPECT_EQ(moral[g1].edges(EdgeTag::kMoral), edges(u, {{"a", "b"}}));
  EXPECT_TRUE(moral[g3].edges(EdgeTag::kMoral).empty());
}

TEST_F(Fig6Hypertree, FillinMessages) {
  FillinPropagation f = propagate_fillins(m, propagate_moral_links(m));
  EXPECT_EQ(f.messages.at({g3, g2}), edges(u, {{"j", "k"}, {"j", "l"}}));
  EXPECT_EQ(f.messages.at({g0, g2}), edges(u, {{"f", "j"}, {"i", "j"}}));
  EXPECT_TRUE(f.messages.at({g1, g2}).empty());
  EXPECT_EQ(f.messages.at({g2, g1}), edges(u, {{"f", "h"}}));
  EXPECT_EQ(f.messages.at({g2, g3}), edges(u, {{"j", "k"}}));
  EXPECT_EQ(f.chordal[g1].tag(u.id("f"), u.id("h")), EdgeTag::kFillin);

  // G3* only hears j-k from G2 and needs nothing more, unlike G_{3->2}*.
  const LabeledGraph& g3_star = f.chordal[g3];
  EXPECT_TRUE(g3_star.adjacent(u.id("j"), u.id("k")));
  EXPECT_FALSE(g3_star.adjacent(u.id("j"), u.id("l")));
  EXPECT_TRUE(f.directed.at({g3, g2}).adjacent(u.id("j"), u.id("l")));
  EXPECT_EQ(max_cliques(g3_star).size(), 3u);
}

TEST_F(Fig6Hypertree, IndependentOfRoot) {
  const std::vector<LabeledGraph> moral = propagate_moral_links(m);
  const FillinPropagation ref = propagate_fillins(m, moral);
  for (std::size_t r = 0; r < m.subnets.size(); ++r) {
    EXPECT_EQ(propagate_moral_links(m, r), moral);
    FillinPropagation f = propagate_fillins(m, moral, min_fill_chooser(), r);
    EXPECT_EQ(f.messages, ref.messages);
    EXPECT_EQ(f.chordal, ref.chordal);
  }
}

// Every moral link of the union DAG whose ends share a subnet must reach
// that subnet.
TEST(Hypertree, MoralLinksMatchUnionGraph) {
  for (const std::string& path : fixtures_in("random")) {
    const Msbn m = load_file(path);
    const LabeledGraph whole = moralize(merge_subnets(m).subnets[0].dag, m.universe);
    const std::vector<LabeledGraph> moral = propagate_moral_links(m);
    for (std::size_t i = 0; i < m.subnets.size(); ++i) {
      const LabeledGraph expect = whole.induced(m.subnets[i].nodes());
      EXPECT_EQ(moral[i].edges(), expect.edges()) << path << " subnet " << i;
    }
  }
}

TEST(Hypertree, FillinMessagesIndependentOfOrder) {
  const auto files = fixtures_in("random");
  for (std::size_t k = 0; k < 60; ++k) {
    const Msbn m = load_file(files[k]);
    const auto moral = propagate_moral_links(m);
    const FillinPropagation ref = propagate_fillins(m, moral);
    for (std::uint64_t s = 0; s < 5; ++s) {
      EXPECT_EQ(propagate_fillins(m, moral, random_chooser(s)).messages, ref.messages)
          << files[k];
    }
  }
}

// Rooted at r, G_r* together with each G_{i->parent}* is a triangulation of
// the whole graph whose cliques each fit inside one subnet.
TEST(Hypertree, RootedUnionIsConstrainedTriangulation) {
  for (const std::string& path : fixtures_in("random")) {
    const Msbn m = load_file(path);
    const FillinPropagation f = propagate_fillins(m, propagate_moral_links(m));
    for (std::size_t r = 0; r < m.subnets.size(); ++r) {
      EXPECT_TRUE(is_chordal(f.chordal[r]).chordal) << path;
      LabeledGraph all = f.chordal[r];
      for (std::size_t i = 0; i < m.subnets.size(); ++i) {
        if (i == r) continue;
        const std::size_t parent = detail::tree_path(m, i, r)[1];
        const LabeledGraph& g = f.directed.at({i, parent});
        for (VarId v : g.nodes()) all.add_node(v);
        for (const auto& [a, b] : g.edges()) all.add_edge(a, b, *g.tag(a, b));
      }
      ASSERT_TRUE(is_chordal(all).chordal) << path << " root " << r;
      for (const VarSet& c : max_cliques(all)) {
        bool inside = false;
        for (const Subnet& s : m.subnets) inside = inside || is_subset(c, s.nodes());
        EXPECT_TRUE(inside) << path;
      }
    }
  }
}

}  // namespace
}  // namespace msbn
