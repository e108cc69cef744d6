// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "msbn/factor.hpp"
#include "msbn/random.hpp"

namespace msbn {
namespace {

Factor random_factor(std::vector<VarId> scope, Rng& rng) {
  std::vector<std::size_t> cards(scope.size(), 2);
  std::size_t n = std::size_t{1} << scope.size();
  std::vector<double> v(n);
  for (double& x : v) x = rng.real();
  return Factor(std::move(scope), std::move(cards), std::move(v));
}

TEST(Factor, DefaultIsScalarOne) {
  Factor f;
  EXPECT_TRUE(f.scope().empty());
  EXPECT_EQ(f.values(), std::vector<double>{1.0});
  EXPECT_TRUE(f.is_unity());
}

TEST(Factor, RejectsWrongValueCount) {
  EXPECT_THROW(Factor({0, 1}, {2, 2}, {1, 2, 3}), Error);
  EXPECT_THROW(Factor({0, 0}, {2, 2}, {1, 2, 3, 4}), Error);
}

TEST(Factor, MultiplyByUnitReordersOnly) {
  Factor f({1, 0}, {2, 3}, {1, 2, 3, 4, 5, 6});
  Factor one = Factor::filled({0}, {3}, 1.0);
  Factor h = multiply(f, one);
  EXPECT_EQ(h.scope(), (std::vector<VarId>{0, 1}));
  // h(a, b) = f(b, a)
  EXPECT_EQ(h.values(), (std::vector<double>{1, 4, 2, 5, 3, 6}));
}

TEST(Factor, MultiplyElementwise) {
  Factor f({0}, {2}, {.2, .8});
  Factor g({0}, {2}, {.5, .5});
  Factor h = multiply(f, g);
  EXPECT_DOUBLE_EQ(h.values()[0], .1);
  EXPECT_DOUBLE_EQ(h.values()[1], .4);
}

TEST(Factor, MultiplyMatchesTripleLoop) {
  Rng rng(3);
  Factor f = random_factor({0, 1}, rng);
  Factor g = random_factor({1, 2}, rng);
  Factor h = multiply(f, g);
  ASSERT_EQ(h.scope(), (std::vector<VarId>{0, 1, 2}));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        EXPECT_DOUBLE_EQ(h.values()[i * 4 + j * 2 + k],
                         f.values()[i * 2 + j] * g.values()[j * 2 + k]);
}

TEST(Factor, MultiplyRespectsBudget) {
  Factor f = Factor::filled({0, 1, 2}, {4, 4, 4}, 1.0);
  Factor g = Factor::filled({3, 4}, {4, 4}, 1.0);
  EXPECT_NO_THROW(multiply(f, g, 1024));
  try {
    multiply(f, g, 1023);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kScopeOverflow);
  }
}

TEST(Factor, MarginalizeNothingIsIdentity) {
  Factor f({0, 1}, {2, 2}, {1, 2, 3, 4});
  Factor g = marginalize(f, {});
  EXPECT_EQ(g.scope(), f.scope());
  EXPECT_EQ(g.values(), f.values());
}

TEST(Factor, MarginalizeUniform) {
  Factor f = Factor::filled({0, 1}, {2, 2}, .25);
  Factor g = marginalize(f, {1});
  EXPECT_EQ(g.scope(), std::vector<VarId>{0});
  EXPECT_DOUBLE_EQ(g.values()[0], .5);
  EXPECT_DOUBLE_EQ(g.values()[1], .5);
}

TEST(Factor, MarginalizeAbsentVariable) {
  Factor f({0}, {2}, {1, 2});
  try {
    marginalize(f, {5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kVariableAbsent);
  }
}

TEST(Factor, MarginalizeMatchesEnumeration) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Factor f = random_factor({0, 1, 2, 3}, rng);
    const VarId out = static_cast<VarId>(rng.between(0, 3));
    Factor g = marginalize(f, {out});
    std::vector<double> expect(8, 0.0);
    for (std::size_t cell = 0; cell < 16; ++cell) {
      std::size_t digits[4] = {(cell >> 3) & 1, (cell >> 2) & 1, (cell >> 1) & 1, cell & 1};
      std::size_t idx = 0;
      for (VarId v = 0; v < 4; ++v) {
        if (v != out) idx = idx * 2 + digits[v];
      }
      expect[idx] += f.values()[cell];
    }
    for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(g.values()[i], expect[i], 1e-15);
  }
}

TEST(Factor, ProjectAndReorder) {
  Factor f({2, 0}, {2, 3}, {1, 2, 3, 4, 5, 6});
  Factor p = project(f, {0});
  EXPECT_EQ(p.values(), (std::vector<double>{5, 7, 9}));
  Factor r = reorder(f, {0, 2});
  EXPECT_EQ(r.values(), (std::vector<double>{1, 4, 2, 5, 3, 6}));
  EXPECT_DOUBLE_EQ(max_abs_diff(reorder(r, {2, 0}), f), 0.0);
}

TEST(Factor, IndicatorAndMeter) {
  Factor i = Factor::indicator(3, 3, 1);
  EXPECT_EQ(i.values(), (std::vector<double>{0, 1, 0}));
  CellMeter m;
  m.allocate(10);
  m.allocate(5);
  m.release(12);
  m.allocate(4);
  EXPECT_EQ(m.live(), 7u);
  EXPECT_EQ(m.peak(), 15u);
}

}  // namespace
}  // namespace msbn
