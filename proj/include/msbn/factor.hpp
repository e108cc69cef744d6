// SPDX-License-Identifier: Apache-2.0
//
// Discrete factor tables and the two operations every propagation scheme is
// built from: pointwise product and summing variables out.

#pragma once

#include <cmath>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "msbn/core.hpp"

namespace msbn {

inline constexpr std::size_t kDefaultCellBudget = std::size_t{1} << 22;

// Tracks the number of table cells alive in a propagation session and the
// high-water mark.  Engines report allocations and releases explicitly.
class CellMeter {
 public:
  void allocate(std::size_t cells) {
    live_ += cells;
    if (live_ > peak_) peak_ = live_;
  }
  void release(std::size_t cells) { live_ -= std::min(cells, live_); }

  std::size_t live() const { return live_; }
  std::size_t peak() const { return peak_; }

 private:
  std::size_t live_ = 0;
  std::size_t peak_ = 0;
};

// A nonnegative table over an ordered scope.  Values are row-major: the first
// scope variable is the most significant digit of the flat index.
class Factor {
 public:
  // The scalar 1.
  Factor() : values_{1.0} {}

  Factor(std::vector<VarId> scope, std::vector<std::size_t> cards,
         std::vector<double> values)
      : scope_(std::move(scope)),
        cards_(std::move(cards)),
        values_(std::move(values)) {
    if (scope_.size() != cards_.size()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "factor scope and cardinality lists differ in length");
    }
    VarSet sorted = make_set(scope_);
    if (sorted.size() != scope_.size()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "factor scope has a duplicate variable");
    }
    std::size_t n = 1;
    for (std::size_t c : cards_) {
      if (c == 0) {
        throw Error(ErrorKind::kInvalidArgument, "zero cardinality");
      }
      n *= c;
    }
    if (values_.size() != n) {
      throw Error(ErrorKind::kInvalidArgument,
                  "factor has " + std::to_string(values_.size()) +
                      " values, expected " + std::to_string(n));
    }
  }

  static Factor constant(double value) {
    Factor f;
    f.values_[0] = value;
    return f;
  }

  // Same scope, every cell equal to `value`.
  static Factor filled(std::vector<VarId> scope, std::vector<std::size_t> cards,
                       double value) {
    std::size_t n = 1;
    for (std::size_t c : cards) n *= c;
    return Factor(std::move(scope), std::move(cards),
                  std::vector<double>(n, value));
  }

  // 1 at `state`, 0 elsewhere.
  static Factor indicator(VarId var, std::size_t card, std::size_t state) {
    std::vector<double> v(card, 0.0);
    v.at(state) = 1.0;
    return Factor({var}, {card}, std::move(v));
  }

  const std::vector<VarId>& scope() const { return scope_; }
  const std::vector<std::size_t>& cards() const { return cards_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  std::size_t size() const { return values_.size(); }

  bool mentions(VarId v) const {
    return std::find(scope_.begin(), scope_.end(), v) != scope_.end();
  }

  std::size_t card_of(VarId v) const {
    for (std::size_t i = 0; i < scope_.size(); ++i) {
      if (scope_[i] == v) return cards_[i];
    }
    throw Error(ErrorKind::kVariableAbsent, "variable not in factor scope");
  }

  VarSet scope_set() const { return make_set(scope_); }

  double sum() const {
    return std::accumulate(values_.begin(), values_.end(), 0.0);
  }
  double max() const {
    return values_.empty() ? 0.0
                           : *std::max_element(values_.begin(), values_.end());
  }
  bool is_unity() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](double x) { return x == 1.0; });
  }

 private:
  std::vector<VarId> scope_;
  std::vector<std::size_t> cards_;
  std::vector<double> values_;
};

using FactorPtr = std::shared_ptr<const Factor>;

namespace detail {

inline std::vector<std::size_t> strides_of(const std::vector<std::size_t>& c) {
  std::vector<std::size_t> s(c.size());
  std::size_t acc = 1;
  for (std::size_t i = c.size(); i-- > 0;) {
    s[i] = acc;
    acc *= c[i];
  }
  return s;
}

// Stride of each `target` variable inside factor `f`; 0 when absent.
inline std::vector<std::size_t> aligned_strides(
    const Factor& f, const std::vector<VarId>& target) {
  std::vector<std::size_t> own = strides_of(f.cards());
  std::vector<std::size_t> out(target.size(), 0);
  for (std::size_t t = 0; t < target.size(); ++t) {
    for (std::size_t i = 0; i < f.scope().size(); ++i) {
      if (f.scope()[i] == target[t]) {
        out[t] = own[i];
        break;
      }
    }
  }
  return out;
}

inline std::size_t checked_cells(const std::vector<std::size_t>& cards,
                                 std::size_t budget) {
  std::size_t n = 1;
  for (std::size_t c : cards) {
    if (n > budget / c) {
      throw Error(ErrorKind::kScopeOverflow,
                  "factor would exceed the cell budget of " +
                      std::to_string(budget));
    }
    n *= c;
  }
  if (n > budget) {
    throw Error(ErrorKind::kScopeOverflow,
                "factor would exceed the cell budget of " +
                    std::to_string(budget));
  }
  return n;
}

}  // namespace detail

// Pointwise product.  The result scope is the sorted union of both scopes.
inline Factor multiply(const Factor& f, const Factor& g,
                       std::size_t budget = kDefaultCellBudget) {
  std::vector<VarId> scope;
  std::vector<std::size_t> cards;
  {
    std::vector<std::pair<VarId, std::size_t>> vc;
    for (std::size_t i = 0; i < f.scope().size(); ++i)
      vc.emplace_back(f.scope()[i], f.cards()[i]);
    for (std::size_t i = 0; i < g.scope().size(); ++i) {
      if (!f.mentions(g.scope()[i])) vc.emplace_back(g.scope()[i], g.cards()[i]);
      else if (f.card_of(g.scope()[i]) != g.cards()[i])
        throw Error(ErrorKind::kInvalidArgument, "cardinality mismatch");
    }
    std::sort(vc.begin(), vc.end());
    for (auto& [v, c] : vc) {
      scope.push_back(v);
      cards.push_back(c);
    }
  }
  const std::size_t n = detail::checked_cells(cards, budget);
  const std::vector<std::size_t> fs = detail::aligned_strides(f, scope);
  const std::vector<std::size_t> gs = detail::aligned_strides(g, scope);
  std::vector<double> out(n);
  std::vector<std::size_t> counter(scope.size(), 0);
  std::size_t fi = 0, gi = 0;
  const auto& fv = f.values();
  const auto& gv = g.values();
  for (std::size_t idx = 0; idx < n; ++idx) {
    out[idx] = fv[fi] * gv[gi];
    for (std::size_t k = scope.size(); k-- > 0;) {
      if (++counter[k] < cards[k]) {
        fi += fs[k];
        gi += gs[k];
        break;
      }
      counter[k] = 0;
      fi -= fs[k] * (cards[k] - 1);
      gi -= gs[k] * (cards[k] - 1);
    }
  }
  return Factor(std::move(scope), std::move(cards), std::move(out));
}

// Sums the variables in `out` away.  Remaining variables keep their order.
inline Factor marginalize(const Factor& f, const VarSet& out) {
  for (VarId v : out) {
    if (!f.mentions(v)) {
      throw Error(ErrorKind::kVariableAbsent,
                  "cannot sum out variable " + std::to_string(v) +
                      ": not in scope");
    }
  }
  if (out.empty()) return f;
  std::vector<VarId> scope;
  std::vector<std::size_t> cards;
  for (std::size_t i = 0; i < f.scope().size(); ++i) {
    if (!contains(out, f.scope()[i])) {
      scope.push_back(f.scope()[i]);
      cards.push_back(f.cards()[i]);
    }
  }
  Factor result = Factor::filled(scope, cards, 0.0);
  // Stride of each source variable in the result (0 for summed variables).
  const std::vector<std::size_t> rs_full = detail::strides_of(cards);
  std::vector<std::size_t> rs(f.scope().size(), 0);
  for (std::size_t i = 0, r = 0; i < f.scope().size(); ++i) {
    if (!contains(out, f.scope()[i])) rs[i] = rs_full[r++];
  }
  const auto& src = f.values();
  auto& dst = result.values();
  std::vector<std::size_t> counter(f.scope().size(), 0);
  std::size_t ri = 0;
  for (std::size_t idx = 0; idx < src.size(); ++idx) {
    dst[ri] += src[idx];
    for (std::size_t k = f.scope().size(); k-- > 0;) {
      if (++counter[k] < f.cards()[k]) {
        ri += rs[k];
        break;
      }
      counter[k] = 0;
      ri -= rs[k] * (f.cards()[k] - 1);
    }
  }
  return result;
}

// Keeps only the variables in `onto`.
inline Factor project(const Factor& f, const VarSet& onto) {
  return marginalize(f, set_difference(f.scope_set(), onto));
}

// Rearranges `f` so that its scope is exactly `order` (a permutation).
inline Factor reorder(const Factor& f, const std::vector<VarId>& order) {
  if (make_set(order) != f.scope_set()) {
    throw Error(ErrorKind::kInvalidArgument, "reorder: not a permutation");
  }
  std::vector<std::size_t> cards;
  for (VarId v : order) cards.push_back(f.card_of(v));
  const std::vector<std::size_t> src = detail::aligned_strides(f, order);
  std::vector<double> out(f.size());
  std::vector<std::size_t> counter(order.size(), 0);
  std::size_t si = 0;
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    out[idx] = f.values()[si];
    for (std::size_t k = order.size(); k-- > 0;) {
      if (++counter[k] < cards[k]) {
        si += src[k];
        break;
      }
      counter[k] = 0;
      si -= src[k] * (cards[k] - 1);
    }
  }
  return Factor(order, std::move(cards), std::move(out));
}

// Largest absolute cell difference after aligning scopes; infinity when the
// scopes differ as sets.
inline double max_abs_diff(const Factor& a, const Factor& b) {
  if (a.scope_set() != b.scope_set()) return INFINITY;
  Factor bb = reorder(b, a.scope());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a.values()[i] - bb.values()[i]));
  }
  return d;
}

}  // namespace msbn
