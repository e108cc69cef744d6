// SPDX-License-Identifier: Apache-2.0
//
// Seeded generators for random MSBNs and evidence.  Output depends only on
// the seed and options: the engine is mt19937_64 and all range mapping is
// done here, so results are identical across standard libraries.

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "msbn/model.hpp"

namespace msbn {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform integer in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<std::size_t>(x % span);
  }

  // Uniform real in [0, 1).
  double real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return real() < p; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[between(0, i - 1)]);
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct RandomMsbnOptions {
  std::size_t min_subnets = 3;
  std::size_t max_subnets = 5;
  std::size_t min_variables = 8;
  std::size_t max_variables = 14;
  std::size_t max_cardinality = 2;
  std::size_t max_parents = 3;
  std::size_t max_separator = 3;
  double extend_probability = 0.3;  // a shared variable spreads one more hop
  double root_probability = 0.15;   // chance a variable gets no parents
  double deterministic_probability = 0.0;  // chance a CPT column is 0/1
  bool state_labels = false;
};

namespace detail {

inline std::string var_name(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "v%02zu", i);
  return buf;
}

}  // namespace detail

// A valid MSBN: the hypertree is a random tree, every variable is held by a
// connected set of subnets, parents of a variable are held wherever the
// variable is, and each CPT lives in one holder.
inline Msbn random_msbn(std::uint64_t seed, const RandomMsbnOptions& opt = {}) {
  Rng rng(seed);
  const std::size_t k = rng.between(opt.min_subnets, opt.max_subnets);
  std::vector<std::pair<std::size_t, std::size_t>> links;
  std::vector<std::vector<std::size_t>> adj(k);
  for (std::size_t i = 1; i < k; ++i) {
    const std::size_t p = rng.between(0, i - 1);
    links.emplace_back(p, i);
    adj[p].push_back(i);
    adj[i].push_back(p);
  }

  // Holders of each variable, as sorted subnet lists.
  std::vector<std::vector<std::size_t>> holders;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> sep_size;
  auto sep = [&](std::size_t a, std::size_t b) -> std::size_t& {
    return sep_size[{std::min(a, b), std::max(a, b)}];
  };
  const std::size_t n_target = rng.between(opt.min_variables, opt.max_variables);
  for (auto [a, b] : links) {
    const std::size_t want = std::max<std::size_t>(
        1, std::min(rng.between(1, opt.max_separator), n_target / (2 * links.size())));
    while (sep(a, b) < want && holders.size() < n_target) {
      std::vector<std::size_t> h{a, b};
      ++sep(a, b);
      if (rng.chance(opt.extend_probability)) {
        const std::size_t from = rng.chance(0.5) ? a : b;
        const std::size_t other = from == a ? b : a;
        std::vector<std::size_t> options;
        for (std::size_t c : adj[from]) {
          if (c != other && sep(from, c) < opt.max_separator) options.push_back(c);
        }
        if (!options.empty()) {
          const std::size_t c = options[rng.between(0, options.size() - 1)];
          h.push_back(c);
          ++sep(from, c);
        }
      }
      std::sort(h.begin(), h.end());
      holders.push_back(std::move(h));
    }
  }
  std::vector<std::size_t> has_private(k, 0);
  while (holders.size() < n_target) {
    std::size_t s = rng.between(0, k - 1);
    for (std::size_t i = 0; i < k; ++i) {
      if (!has_private[i]) {
        s = i;
        break;
      }
    }
    has_private[s] = 1;
    holders.push_back({s});
  }
  const std::size_t n = holders.size();

  // Names are shuffled against the topological order.
  std::vector<std::size_t> label(n);
  for (std::size_t i = 0; i < n; ++i) label[i] = i;
  rng.shuffle(label);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);

  std::vector<Variable> vars(n);
  for (std::size_t i = 0; i < n; ++i) {
    vars[i].name = detail::var_name(label[i]);
    vars[i].cardinality = rng.between(2, std::max<std::size_t>(2, opt.max_cardinality));
    if (opt.state_labels && rng.chance(0.5)) {
      for (std::size_t s = 0; s < vars[i].cardinality; ++s) {
        vars[i].states.push_back("s" + std::to_string(s));
      }
    }
  }

  Msbn m;
  m.universe = Universe(vars);
  std::vector<VarId> id(n);
  for (std::size_t i = 0; i < n; ++i) id[i] = m.universe.id(vars[i].name);
  m.subnets.resize(k);
  for (std::size_t s = 0; s < k; ++s) m.subnets[s].id = "G" + std::to_string(s);
  m.links = links;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s : holders[i]) m.subnets[s].dag.nodes.push_back(id[i]);
  }
  for (Subnet& s : m.subnets) s.dag.nodes = make_set(s.dag.nodes);

  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t x = order[pos];
    std::vector<std::size_t> candidates;
    for (std::size_t q = 0; q < pos; ++q) {
      const std::size_t p = order[q];
      if (std::includes(holders[p].begin(), holders[p].end(), holders[x].begin(),
                        holders[x].end())) {
        candidates.push_back(p);
      }
    }
    rng.shuffle(candidates);
    std::size_t np = 0;
    if (!candidates.empty() && opt.max_parents > 0 && !rng.chance(opt.root_probability)) {
      np = rng.between(1, std::min(opt.max_parents, candidates.size()));
    }
    candidates.resize(np);

    std::vector<VarId> scope{id[x]};
    std::vector<std::size_t> cards{m.universe.card(id[x])};
    for (std::size_t p : candidates) {
      scope.push_back(id[p]);
      cards.push_back(m.universe.card(id[p]));
      for (std::size_t s : holders[x]) m.subnets[s].dag.parents[id[x]].push_back(id[p]);
    }
    const std::size_t card = cards[0];
    std::size_t columns = 1;
    for (std::size_t c = 1; c < cards.size(); ++c) columns *= cards[c];
    std::vector<double> values(card * columns);
    for (std::size_t c = 0; c < columns; ++c) {
      std::vector<double> col(card);
      if (rng.chance(opt.deterministic_probability)) {
        col[rng.between(0, card - 1)] = 1.0;
      } else {
        double total = 0.0;
        for (double& w : col) total += (w = 0.05 + rng.real());
        for (double& w : col) w /= total;
      }
      for (std::size_t s = 0; s < card; ++s) values[s * columns + c] = col[s];
    }
    const std::size_t owner = holders[x][rng.between(0, holders[x].size() - 1)];
    m.subnets[owner].cpts.emplace(id[x], Factor(std::move(scope), std::move(cards),
                                                std::move(values)));
  }
  return m;
}

// `count` findings on distinct variables, states uniform.
inline Evidence random_evidence(const Msbn& m, std::size_t count, Rng& rng) {
  std::vector<VarId> vars(m.universe.size());
  for (VarId v = 0; v < vars.size(); ++v) vars[v] = v;
  rng.shuffle(vars);
  Evidence e;
  for (std::size_t i = 0; i < std::min(count, vars.size()); ++i) {
    e.set(vars[i], rng.between(0, m.universe.card(vars[i]) - 1));
  }
  return e;
}

inline Evidence random_evidence(const Msbn& m, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  return random_evidence(m, count, rng);
}

}  // namespace msbn
