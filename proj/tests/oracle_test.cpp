// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace msbn {
namespace {

using testing::fig6;
using testing::fixtures_in;
using testing::load_file;
using testing::single_bn;

TEST(Oracle, OneVariable) {
  const Msbn m = single_bn({{"a", {}, {0.3, 0.7}}});
  EXPECT_EQ(joint_enumerate(m).values, (std::vector<double>{0.3, 0.7}));
}

TEST(Oracle, IndependentUniform) {
  const Msbn m = single_bn({{"a", {}, {0.5, 0.5}}, {"b", {}, {0.5, 0.5}}});
  EXPECT_EQ(joint_enumerate(m).values, (std::vector<double>(4, 0.25)));
  EXPECT_EQ(oracle_posterior(m, 0).distribution, (std::vector<double>{0.5, 0.5}));
}

// P(a) = (.4, .6), P(b=1 | a) = (.9, .3).  P(b=1) = .36 + .18 = .54 and
// P(a=0 | b=1) = .36 / .54 = 2/3.
TEST(Oracle, ChainInversionByHand) {
  const Msbn m = single_bn({{"a", {}, {0.4, 0.6}}, {"b", {"a"}, {0.1, 0.7, 0.9, 0.3}}});
  Evidence e;
  e.set(m.universe.id("b"), 1);
  const OracleAnswer a = oracle_posterior(m, m.universe.id("a"), e);
  EXPECT_NEAR(a.evidence_probability, 0.54, 1e-15);
  EXPECT_NEAR(a.distribution[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(a.distribution[1], 1.0 / 3.0, 1e-15);
  const OracleAnswer b = oracle_posterior(m, m.universe.id("b"), e);
  EXPECT_EQ(b.distribution, (std::vector<double>{0.0, 1.0}));
}

TEST(Oracle, NormalizedOnFixtures) {
  for (const std::string& path : fixtures_in("random")) {
    const Msbn m = load_file(path);
    EXPECT_NEAR(joint_enumerate(m).total(), 1.0, 1e-12) << path;
    const Evidence e = random_evidence(m, 2, 3);
    const JointTable j = joint_enumerate(m, e);
    for (double x : j.values) EXPECT_GE(x, 0.0);
    EXPECT_NEAR(oracle_posterior(j, 0).evidence_probability, j.total(), 1e-15);
  }
}

TEST(Oracle, Errors) {
  const Msbn m = fig6();
  try {
    joint_enumerate(m, {}, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kStateSpaceTooLarge);
  }
  Evidence e;
  e.set(0, 0);
  e.set(0, 1);
  try {
    oracle_posterior(m, 1, e);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::kImpossibleEvidence);
  }
}

// Renames every variable so that name order is reversed.
MsbnDocument reverse_names(MsbnDocument doc) {
  std::map<std::string, std::string> to;
  const std::size_t n = doc.variables.size();
  for (std::size_t i = 0; i < n; ++i) {
    to[doc.variables[i].name] = "r" + std::to_string(1000 + n - i);
  }
  for (DocVariable& v : doc.variables) v.name = to.at(v.name);
  for (DocSubnet& s : doc.subnets) {
    for (std::string& x : s.nodes) x = to.at(x);
    for (auto& [p, c] : s.arcs) {
      p = to.at(p);
      c = to.at(c);
    }
    for (DocCpt& c : s.cpts) {
      c.child = to.at(c.child);
      for (std::string& p : c.parents) p = to.at(p);
    }
  }
  return doc;
}

TEST(Oracle, VariableOrderBarelyMatters) {
  const auto files = fixtures_in("random");
  for (std::size_t k = 0; k < 20; ++k) {
    const Msbn m = load_file(files[k]);
    const MsbnDocument doc = to_document(m);
    const Msbn r = to_msbn(reverse_names(doc));
    const Evidence e = random_evidence(m, 2, k);
    Evidence er;
    for (const Finding& f : e.findings) {
      er.set(static_cast<VarId>(m.universe.size() - 1 - f.var), f.state);
    }
    const JointTable jm = joint_enumerate(m, e), jr = joint_enumerate(r, er);
    for (VarId v = 0; v < m.universe.size(); ++v) {
      const auto a = oracle_posterior(jm, v).distribution;
      const auto b = oracle_posterior(jr, static_cast<VarId>(m.universe.size() - 1 - v)).distribution;
      for (std::size_t s = 0; s < a.size(); ++s) EXPECT_NEAR(a[s], b[s], 1e-12);
    }
  }
}

TEST(Oracle, IndependentOfSectioning) {
  const Msbn m = fig6();
  const Msbn one = merge_subnets(m);
  Evidence e;
  e.set(m.universe.id("c"), 1);
  e.set(m.universe.id("l"), 0);
  const JointTable a = joint_enumerate(m, e), b = joint_enumerate(one, e);
  ASSERT_EQ(a.values.size(), b.values.size());
  // Only the order of the CPT product differs.
  for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-17);
}

}  // namespace
}  // namespace msbn
