// SPDX-License-Identifier: Apache-2.0
//
// Brute-force reference answers.  The joint distribution is enumerated
// directly from the owned CPTs; nothing here touches junction trees or the
// factor algebra used by the engines.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "msbn/model.hpp"

namespace msbn {

inline constexpr std::size_t kOracleStateBound = std::size_t{1} << 24;

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// The joint over every variable of the network, variables in name order,
// the first one most significant.
struct JointTable {
  std::vector<VarId> vars;
  std::vector<std::size_t> cards;
  std::vector<double> values;

  double total() const {
    CompensatedSum s;
    for (double x : values) s.add(x);
    return s.value();
  }
};

inline JointTable joint_enumerate(const Msbn& m, const Evidence& evidence = {},
                                  std::size_t bound = kOracleStateBound) {
  JointTable jt;
  const std::size_t n = m.universe.size();
  std::size_t cells = 1;
  for (VarId v = 0; v < n; ++v) {
    jt.vars.push_back(v);
    jt.cards.push_back(m.universe.card(v));
    if (cells > bound / jt.cards.back()) {
      throw Error(ErrorKind::kStateSpaceTooLarge,
                  "joint state space exceeds " + std::to_string(bound));
    }
    cells *= jt.cards.back();
  }

  std::vector<long> fixed(n, -1);
  std::vector<bool> contradictory(n, false);
  for (const Finding& f : evidence.findings) {
    if (f.var >= n) throw Error(ErrorKind::kUnknownVariable, "evidence variable");
    if (f.state >= m.universe.card(f.var)) {
      throw Error(ErrorKind::kInvalidArgument, "evidence state out of range");
    }
    if (fixed[f.var] >= 0 && fixed[f.var] != static_cast<long>(f.state)) {
      contradictory[f.var] = true;
    }
    fixed[f.var] = static_cast<long>(f.state);
  }
  bool impossible = false;
  for (bool c : contradictory) impossible = impossible || c;

  struct Table {
    std::vector<VarId> scope;
    std::vector<std::size_t> weight;
    const std::vector<double>* values;
  };
  std::vector<Table> tables;
  for (const Subnet& s : m.subnets) {
    for (const auto& [v, cpt] : s.cpts) {
      Table t{cpt.scope(), std::vector<std::size_t>(cpt.scope().size()), &cpt.values()};
      std::size_t w = 1;
      for (std::size_t k = cpt.scope().size(); k-- > 0;) {
        t.weight[k] = w;
        w *= m.universe.card(cpt.scope()[k]);
      }
      tables.push_back(std::move(t));
    }
  }

  jt.values.assign(cells, 0.0);
  std::vector<std::size_t> state(n, 0);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    bool consistent = !impossible;
    for (VarId v = 0; v < n && consistent; ++v) {
      consistent = fixed[v] < 0 || static_cast<long>(state[v]) == fixed[v];
    }
    if (consistent) {
      double p = 1.0;
      for (const Table& t : tables) {
        std::size_t idx = 0;
        for (std::size_t k = 0; k < t.scope.size(); ++k) idx += state[t.scope[k]] * t.weight[k];
        p *= (*t.values)[idx];
      }
      jt.values[cell] = p;
    }
    for (std::size_t k = n; k-- > 0;) {
      if (++state[k] < jt.cards[k]) break;
      state[k] = 0;
    }
  }
  return jt;
}

struct OracleAnswer {
  std::vector<double> distribution;
  double evidence_probability = 0.0;
};

inline OracleAnswer oracle_posterior(const JointTable& joint, VarId var) {
  const std::size_t n = joint.vars.size();
  if (var >= n) throw Error(ErrorKind::kUnknownVariable, "query variable");
  std::size_t below = 1;
  for (std::size_t k = var + 1; k < n; ++k) below *= joint.cards[k];
  const std::size_t card = joint.cards[var];

  std::vector<CompensatedSum> sums(card);
  for (std::size_t cell = 0; cell < joint.values.size(); ++cell) {
    sums[(cell / below) % card].add(joint.values[cell]);
  }
  OracleAnswer out;
  CompensatedSum total;
  for (const CompensatedSum& s : sums) total.add(s.value());
  out.evidence_probability = total.value();
  if (!(out.evidence_probability > 0.0)) {
    throw Error(ErrorKind::kImpossibleEvidence, "probability of the evidence is 0");
  }
  for (const CompensatedSum& s : sums) {
    out.distribution.push_back(s.value() / out.evidence_probability);
  }
  return out;
}

inline OracleAnswer oracle_posterior(const Msbn& m, VarId var, const Evidence& evidence = {},
                                     std::size_t bound = kOracleStateBound) {
  return oracle_posterior(joint_enumerate(m, evidence, bound), var);
}

}  // namespace msbn
