// SPDX-License-Identifier: Apache-2.0
//
// Propagation engines.  Two architectures share one driver:
//
//   ShaferShenoy  each cluster holds one belief table; a message multiplies
//                 the table with the incoming messages and sums down to the
//                 sepset.
//   Lazy          each cluster holds a set of factors; a message takes the
//                 union of the local and incoming sets and eliminates the
//                 non-sepset variables one at a time, multiplying only the
//                 factors that mention the variable.
//
// JtSession runs either architecture in a single junction tree.
// LjfSession runs the extended form over a linked junction forest: messages
// between subnets are computed by collect propagations in the message
// forests and travel along linkages; each inference tree is then calibrated
// with its incoming linkage submessages as extra leaf inputs.

#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "msbn/compile.hpp"
#include "msbn/factor.hpp"
#include "msbn/model.hpp"
#include "msbn/propagation.hpp"

namespace msbn {

using FactorSet = std::vector<FactorPtr>;

inline constexpr double kImpossibleEvidence = 1e-12;
inline constexpr double kUnderflow = 1e-300;

struct EngineOptions {
  std::size_t cell_budget = kDefaultCellBudget;
};

struct EngineStats {
  std::size_t sepset_messages = 0;
  std::size_t linkage_messages = 0;
  std::size_t peak_cells = 0;
};

enum class SessionStatus { kFresh, kCollected, kCalibrated };

struct Posterior {
  std::vector<double> distribution;
  double evidence_probability = 0.0;
};

// Shared state of one propagation.
struct EngineContext {
  CellMeter meter;
  std::size_t budget = kDefaultCellBudget;
  EngineStats stats;
};

namespace detail {

inline void check_underflow(const Factor& f) {
  const double mx = f.max();
  if (mx > 0.0 && mx < kUnderflow) {
    throw Error(ErrorKind::kNumericUnderflow, "message cells below 1e-300");
  }
}

inline Factor unit_over(const VarSet& s, const Universe& u) {
  std::vector<std::size_t> cards;
  for (VarId v : s) cards.push_back(u.card(v));
  return Factor::filled(std::vector<VarId>(s.begin(), s.end()), std::move(cards), 1.0);
}

// Order in which lazy elimination removes variables: fewest fill-ins in the
// interaction graph of the live factors, smallest id on ties.
inline VarId lazy_choice(const std::vector<FactorPtr>& pool, const VarSet& todo) {
  std::map<VarId, VarSet> nb;
  for (const FactorPtr& f : pool) {
    const VarSet s = f->scope_set();
    for (VarId a : s) nb[a] = set_union(nb[a], s);
  }
  VarId best = todo.front();
  std::size_t best_fill = SIZE_MAX;
  for (VarId v : todo) {
    VarSet around = set_difference(nb[v], VarSet{v});
    std::size_t fill = 0;
    for (std::size_t i = 0; i < around.size(); ++i) {
      for (std::size_t j = i + 1; j < around.size(); ++j) {
        fill += !contains(nb[around[i]], around[j]);
      }
    }
    if (fill < best_fill) {
      best = v;
      best_fill = fill;
    }
  }
  return best;
}

}  // namespace detail

// Union of the local and incoming factor sets with every variable outside
// `sepset` summed out.  Each returned factor has scope within the sepset.
inline FactorSet lazy_message(const FactorSet& local,
                              const std::vector<const FactorSet*>& incoming,
                              const VarSet& sepset, EngineContext& ctx) {
  std::vector<FactorPtr> pool = local;
  for (const FactorSet* in : incoming) pool.insert(pool.end(), in->begin(), in->end());
  std::set<const Factor*> created;

  VarSet todo;
  for (const FactorPtr& f : pool) todo = set_union(todo, f->scope_set());
  todo = set_difference(todo, sepset);

  while (!todo.empty()) {
    const VarId v = detail::lazy_choice(pool, todo);
    todo.erase(std::find(todo.begin(), todo.end(), v));
    std::vector<FactorPtr> rest, touching;
    for (FactorPtr& f : pool) (f->mentions(v) ? touching : rest).push_back(std::move(f));
    if (touching.empty()) {
      pool = std::move(rest);
      continue;
    }
    Factor product = *touching.front();
    bool product_counted = false;
    for (std::size_t k = 1; k < touching.size(); ++k) {
      Factor next = multiply(product, *touching[k], ctx.budget);
      ctx.meter.allocate(next.size());
      if (product_counted) ctx.meter.release(product.size());
      product = std::move(next);
      product_counted = true;
    }
    Factor summed = marginalize(product, VarSet{v});
    ctx.meter.allocate(summed.size());
    if (product_counted) ctx.meter.release(product.size());
    for (const FactorPtr& f : touching) {
      if (created.erase(f.get())) ctx.meter.release(f->size());
    }
    pool = std::move(rest);
    if (summed.is_unity()) {
      ctx.meter.release(summed.size());
      continue;
    }
    auto ptr = std::make_shared<const Factor>(std::move(summed));
    created.insert(ptr.get());
    pool.push_back(std::move(ptr));
  }

  FactorSet out;
  for (FactorPtr& f : pool) {
    if (f->is_unity()) {
      if (created.erase(f.get())) ctx.meter.release(f->size());
      continue;
    }
    if (created.count(f.get())) detail::check_underflow(*f);
    out.push_back(std::move(f));
  }
  return out;
}

inline FactorSet lazy_message(const FactorSet& local,
                              const std::vector<const FactorSet*>& incoming,
                              const VarSet& sepset) {
  EngineContext ctx;
  return lazy_message(local, incoming, sepset, ctx);
}

struct ShaferShenoy {
  using Potential = FactorPtr;
  static constexpr const char* kName = "ss";

  // The cluster's belief table: product of its factors over the whole cluster.
  static Potential make_local(const std::vector<FactorPtr>& factors,
                              const VarSet& cluster, const Universe& u,
                              EngineContext& ctx) {
    Factor table = detail::unit_over(cluster, u);
    detail::checked_cells(table.cards(), ctx.budget);
    for (const FactorPtr& f : factors) table = multiply(table, *f, ctx.budget);
    ctx.meter.allocate(table.size());
    return std::make_shared<const Factor>(std::move(table));
  }

  static Factor combine(const Potential& local,
                        const std::vector<const Potential*>& incoming,
                        EngineContext& ctx) {
    Factor product = *local;
    for (const Potential* in : incoming) product = multiply(product, **in, ctx.budget);
    return product;
  }

  static Potential message(const Potential& local,
                           const std::vector<const Potential*>& incoming,
                           const VarSet& onto, EngineContext& ctx) {
    Factor product = combine(local, incoming, ctx);
    ctx.meter.allocate(product.size());
    Factor msg = project(product, onto);
    ctx.meter.release(product.size());
    ctx.meter.allocate(msg.size());
    detail::check_underflow(msg);
    return std::make_shared<const Factor>(std::move(msg));
  }

  static Factor marginal(const Potential& local,
                         const std::vector<const Potential*>& incoming,
                         const VarSet& onto, const Universe&, EngineContext& ctx) {
    return project(combine(local, incoming, ctx), onto);
  }

  static std::vector<FactorPtr> factors(const Potential& p) { return {p}; }
};

struct Lazy {
  using Potential = FactorSet;
  static constexpr const char* kName = "lazy";

  static Potential make_local(const std::vector<FactorPtr>& factors, const VarSet&,
                              const Universe&, EngineContext&) {
    return factors;
  }

  static Potential message(const Potential& local,
                           const std::vector<const Potential*>& incoming,
                           const VarSet& onto, EngineContext& ctx) {
    return lazy_message(local, incoming, onto, ctx);
  }

  // Multiplies out the lazily computed marginal; scope exactly `onto`.
  static Factor marginal(const Potential& local,
                         const std::vector<const Potential*>& incoming,
                         const VarSet& onto, const Universe& u, EngineContext& ctx) {
    FactorSet parts = lazy_message(local, incoming, onto, ctx);
    Factor out = detail::unit_over(onto, u);
    for (const FactorPtr& f : parts) out = multiply(out, *f, ctx.budget);
    return out;
  }

  static std::vector<FactorPtr> factors(const Potential& p) { return p; }
};

//===========================================================================
// Propagation inside one junction tree.

template <class Arch>
struct TreeRun {
  using Potential = typename Arch::Potential;

  const JunctionTree* jt = nullptr;
  std::vector<Potential> local;
  std::vector<std::vector<const Potential*>> extra;  // linkage inputs per cluster
  std::map<DirectedEdge, Potential> messages;

  std::vector<const Potential*> inputs(std::size_t c, const Inbox<Potential>& in) const {
    std::vector<const Potential*> out = extra[c];
    for (const auto& [from, msg] : in) out.push_back(msg);
    return out;
  }

  // All messages into c (sepsets and linkages).
  std::vector<const Potential*> all_inputs(std::size_t c) const {
    std::vector<const Potential*> out = extra[c];
    for (std::size_t n : jt->neighbors(c)) out.push_back(&messages.at({n, c}));
    return out;
  }

  void collect(std::size_t root, EngineContext& ctx) {
    TreeTopology topo(jt->clusters.size(), jt->edges);
    auto send = [&](std::size_t a, std::size_t b, const Inbox<Potential>& in) {
      ++ctx.stats.sepset_messages;
      return Arch::message(local[a], inputs(a, in), jt->sepset(a, b), ctx);
    };
    messages = collect_propagate<Potential>(topo, root, send).messages;
  }

  void calibrate(EngineContext& ctx) {
    TreeTopology topo(jt->clusters.size(), jt->edges);
    auto send = [&](std::size_t a, std::size_t b, const Inbox<Potential>& in) {
      ++ctx.stats.sepset_messages;
      return Arch::message(local[a], inputs(a, in), jt->sepset(a, b), ctx);
    };
    auto finish = [](std::size_t, const Inbox<Potential>&) {};
    messages = full_propagate<Potential>(topo, 0, send, finish).messages;
  }

  Factor marginal(std::size_t c, const VarSet& onto, const Universe& u,
                  EngineContext& ctx) const {
    return Arch::marginal(local[c], all_inputs(c), onto, u, ctx);
  }
};

namespace detail {

inline void check_finding(const Universe& u, const Finding& f) {
  if (f.var >= u.size()) throw Error(ErrorKind::kUnknownVariable, "evidence variable");
  if (f.state >= u.card(f.var)) {
    throw Error(ErrorKind::kInvalidArgument,
                "state " + std::to_string(f.state) + " out of range for '" +
                    u.name(f.var) + "'");
  }
}

inline Posterior normalized(const Factor& marginal) {
  Posterior p;
  p.evidence_probability = marginal.sum();
  for (double x : marginal.values()) {
    p.distribution.push_back(x / p.evidence_probability);
  }
  return p;
}

inline void check_evidence_probability(double pe) {
  if (!(pe > kImpossibleEvidence)) {
    throw Error(ErrorKind::kImpossibleEvidence,
                "probability of the evidence is " + std::to_string(pe));
  }
}

}  // namespace detail

// Single junction tree engine.  CPTs and evidence indicators go to the
// smallest cluster containing their scope.
template <class Arch>
class JtSession {
 public:
  JtSession(const JunctionTree& jt, const Universe& u, const std::vector<Factor>& cpts,
            const Evidence& evidence, EngineOptions opt = {})
      : jt_(std::make_shared<const JunctionTree>(jt)), universe_(u) {
    ctx_.budget = opt.cell_budget;
    std::vector<std::vector<FactorPtr>> assigned(jt.clusters.size());
    auto place = [&](FactorPtr f) {
      auto where = smallest_containing({jt}, f->scope_set(), u);
      if (!where) {
        throw Error(ErrorKind::kNoContainingCluster, "factor scope not covered");
      }
      assigned[where->second].push_back(std::move(f));
    };
    for (const Factor& f : cpts) place(std::make_shared<const Factor>(f));
    for (const Finding& f : evidence.findings) {
      detail::check_finding(u, f);
      if (!contains(jt.variables(), f.var)) {
        throw Error(ErrorKind::kUnknownVariable, "'" + u.name(f.var) + "' not in tree");
      }
      auto ind = std::make_shared<const Factor>(
          Factor::indicator(f.var, u.card(f.var), f.state));
      ctx_.meter.allocate(ind->size());
      place(std::move(ind));
    }
    run_.jt = jt_.get();
    run_.extra.resize(jt.clusters.size());
    for (std::size_t c = 0; c < jt.clusters.size(); ++c) {
      run_.local.push_back(Arch::make_local(assigned[c], jt.clusters[c], u, ctx_));
    }
  }

  void propagate() {
    if (status_ == SessionStatus::kCalibrated) return;
    run_.calibrate(ctx_);
    status_ = SessionStatus::kCalibrated;
    if (!jt_->clusters.empty()) {
      evidence_probability_ = run_.marginal(0, {}, universe_, ctx_).values()[0];
    }
    detail::check_evidence_probability(evidence_probability_);
  }

  SessionStatus status() const { return status_; }
  double evidence_probability() const { return evidence_probability_; }

  Factor cluster_belief(std::size_t c) const {
    require_calibrated();
    return run_.marginal(c, jt_->clusters.at(c), universe_, ctx_);
  }

  Posterior posterior(VarId v) const {
    require_calibrated();
    auto where = smallest_containing({*jt_}, VarSet{v}, universe_);
    if (!where) throw Error(ErrorKind::kUnknownVariable, "variable not in tree");
    return detail::normalized(run_.marginal(where->second, {v}, universe_, ctx_));
  }

  const EngineStats& stats() const {
    ctx_.stats.peak_cells = ctx_.meter.peak();
    return ctx_.stats;
  }

 private:
  void require_calibrated() const {
    if (status_ != SessionStatus::kCalibrated) {
      throw Error(ErrorKind::kNotCalibrated, "propagate() first");
    }
  }

  std::shared_ptr<const JunctionTree> jt_;  // shared so copies keep run_.jt valid
  const Universe& universe_;
  mutable EngineContext ctx_;
  TreeRun<Arch> run_;
  SessionStatus status_ = SessionStatus::kFresh;
  double evidence_probability_ = 1.0;
};

template <class Arch>
JtSession<Arch> propagate_jt(const JunctionTree& jt, const Universe& u,
                             const std::vector<Factor>& cpts, const Evidence& e,
                             EngineOptions opt = {}) {
  JtSession<Arch> s(jt, u, cpts, e, opt);
  s.propagate();
  return s;
}

inline JtSession<ShaferShenoy> ss_propagate_jt(const JunctionTree& jt, const Universe& u,
                                               const std::vector<Factor>& cpts,
                                               const Evidence& e, EngineOptions opt = {}) {
  return propagate_jt<ShaferShenoy>(jt, u, cpts, e, opt);
}

inline JtSession<Lazy> lazy_propagate_jt(const JunctionTree& jt, const Universe& u,
                                         const std::vector<Factor>& cpts,
                                         const Evidence& e, EngineOptions opt = {}) {
  return propagate_jt<Lazy>(jt, u, cpts, e, opt);
}

//===========================================================================
// Extended propagation over a linked junction forest.

template <class Arch>
class LjfSession {
 public:
  using Potential = typename Arch::Potential;

  LjfSession(const Msbn& m, const LinkedJunctionForest& ljf, EngineOptions opt = {})
      : msbn_(m), ljf_(ljf) {
    ctx_.budget = opt.cell_budget;
    for (std::size_t i = 0; i < m.subnets.size(); ++i) {
      for (const auto& [v, cpt] : m.subnets[i].cpts) {
        cpts_[v] = std::make_shared<const Factor>(cpt);
      }
    }
    placed_.resize(ljf.structures.size());
    for (std::size_t s = 0; s < ljf.structures.size(); ++s) {
      const Structure& st = ljf.structures[s];
      placed_[s].resize(st.trees.size());
      for (std::size_t t = 0; t < st.trees.size(); ++t) {
        placed_[s][t].resize(st.trees[t].clusters.size());
      }
      for (const auto& [v, where] : ljf.assignment[s]) {
        placed_[s][where.first][where.second].push_back(cpts_.at(v));
      }
    }
    submessages_.resize(ljf.linkages.size());
    written_.assign(ljf.linkages.size(), false);
  }

  // Attaches an indicator for each finding to one cluster of every
  // structure of the finding's subnet (the owner unless overridden).
  void enter_evidence(const Evidence& e) {
    if (status_ != SessionStatus::kFresh) {
      throw Error(ErrorKind::kInvalidArgument, "evidence after propagation");
    }
    for (const Finding& f : e.findings) {
      detail::check_finding(msbn_.universe, f);
      const std::size_t subnet = f.subnet ? *f.subnet : msbn_.owner(f.var);
      if (subnet >= msbn_.subnets.size() ||
          !contains(msbn_.subnets[subnet].nodes(), f.var)) {
        throw Error(ErrorKind::kUnknownVariable,
                    "'" + msbn_.universe.name(f.var) + "' is not in the chosen subnet");
      }
      auto ind = std::make_shared<const Factor>(
          Factor::indicator(f.var, msbn_.universe.card(f.var), f.state));
      ctx_.meter.allocate(ind->size());
      indicators_[subnet].push_back(ind);
      for (std::size_t s : ljf_.structures_of(subnet)) {
        auto where = smallest_containing(ljf_.structures[s].trees, {f.var}, msbn_.universe);
        placed_[s][where->first][where->second].push_back(ind);
      }
    }
  }

  void propagate() {
    if (status_ == SessionStatus::kCalibrated) return;
    build_locals();
    const std::size_t n = msbn_.subnets.size();
    runs_.resize(n);
    auto send = [&](std::size_t i, std::size_t j, const Inbox<int>&) {
      send_message(i, j);
      return 0;
    };
    bool root_done = false;
    auto finish = [&](std::size_t i, const Inbox<int>&) {
      if (!root_done) {
        status_ = SessionStatus::kCollected;
        root_done = true;
      }
      calibrate_inference(i);
    };
    full_propagate<int>(TreeTopology(n, msbn_.links), 0, send, finish);
    status_ = SessionStatus::kCalibrated;
    evidence_probability_ = evidence_probability(0, 0);
    detail::check_evidence_probability(evidence_probability_);
  }

  SessionStatus status() const { return status_; }
  double evidence_probability() const { return evidence_probability_; }

  // P(e) read from one cluster of a subnet's inference tree.
  double evidence_probability(std::size_t subnet, std::size_t cluster) const {
    require_ready();
    return runs_.at(subnet).marginal(cluster, {}, msbn_.universe, ctx_).values()[0];
  }

  Factor cluster_belief(std::size_t subnet, std::size_t cluster) const {
    require_calibrated();
    const JunctionTree& jt = inference_tree(subnet);
    return runs_.at(subnet).marginal(cluster, jt.clusters.at(cluster), msbn_.universe, ctx_);
  }

  // Posterior read from the owner subnet's inference tree.
  Posterior posterior(VarId v) const {
    if (v >= msbn_.universe.size()) throw Error(ErrorKind::kUnknownVariable, "query");
    return posterior_in(v, msbn_.owner(v));
  }

  Posterior posterior_in(VarId v, std::size_t subnet) const {
    require_calibrated();
    if (v >= msbn_.universe.size() || !contains(msbn_.subnets.at(subnet).nodes(), v)) {
      throw Error(ErrorKind::kUnknownVariable, "variable not in subnet");
    }
    auto where = smallest_containing({inference_tree(subnet)}, {v}, msbn_.universe);
    return detail::normalized(
        runs_[subnet].marginal(where->second, {v}, msbn_.universe, ctx_));
  }

  // Product over the inference tree's clusters of their local factors and
  // incoming linkage submessages, materialized over N_i.
  Factor subnet_belief(std::size_t subnet) const {
    require_calibrated();
    const TreeRun<Arch>& run = runs_.at(subnet);
    Factor out = detail::unit_over(msbn_.subnets[subnet].nodes(), msbn_.universe);
    for (std::size_t c = 0; c < run.local.size(); ++c) {
      for (const FactorPtr& f : Arch::factors(run.local[c])) out = multiply(out, *f, ctx_.budget);
      for (const Potential* p : run.extra[c]) {
        for (const FactorPtr& f : Arch::factors(*p)) out = multiply(out, *f, ctx_.budget);
      }
    }
    return out;
  }

  // Owned CPTs and entered indicators of a subnet, before any propagation.
  Factor initial_subnet_belief(std::size_t subnet) const {
    Factor out = detail::unit_over(msbn_.subnets.at(subnet).nodes(), msbn_.universe);
    for (const auto& [v, cpt] : msbn_.subnets[subnet].cpts) out = multiply(out, cpt, ctx_.budget);
    auto it = indicators_.find(subnet);
    if (it != indicators_.end()) {
      for (const FactorPtr& f : it->second) out = multiply(out, *f, ctx_.budget);
    }
    return out;
  }

  const Potential& submessage(std::size_t linkage) const {
    if (!written_.at(linkage)) throw Error(ErrorKind::kNotCalibrated, "linkage not sent");
    return submessages_[linkage];
  }

  const EngineStats& stats() const {
    ctx_.stats.peak_cells = ctx_.meter.peak();
    return ctx_.stats;
  }

 private:
  const JunctionTree& inference_tree(std::size_t subnet) const {
    return ljf_.structures.at(ljf_.inference.at(subnet)).trees.front();
  }

  void require_calibrated() const {
    if (status_ != SessionStatus::kCalibrated) {
      throw Error(ErrorKind::kNotCalibrated, "propagate() first");
    }
  }
  void require_ready() const {
    if (status_ == SessionStatus::kFresh) {
      throw Error(ErrorKind::kNotCalibrated, "propagate() first");
    }
  }

  void build_locals() {
    locals_.resize(ljf_.structures.size());
    for (std::size_t s = 0; s < ljf_.structures.size(); ++s) {
      const Structure& st = ljf_.structures[s];
      locals_[s].resize(st.trees.size());
      for (std::size_t t = 0; t < st.trees.size(); ++t) {
        for (std::size_t c = 0; c < st.trees[t].clusters.size(); ++c) {
          locals_[s][t].push_back(Arch::make_local(placed_[s][t][c], st.trees[t].clusters[c],
                                                   msbn_.universe, ctx_));
        }
      }
    }
  }

  TreeRun<Arch> prepare(std::size_t s, std::size_t t) const {
    TreeRun<Arch> run;
    run.jt = &ljf_.structures[s].trees[t];
    run.local = locals_[s][t];
    run.extra.resize(run.jt->clusters.size());
    for (std::size_t l : ljf_.linkages_into(s)) {
      const Linkage& lk = ljf_.linkages[l];
      if (lk.destination.tree != t) continue;
      if (!written_[l]) {
        throw Error(ErrorKind::kNotCalibrated, "linkage input not yet available");
      }
      run.extra[lk.destination.cluster].push_back(&submessages_[l]);
    }
    return run;
  }

  // Computes every submessage of T_{i->j}: a collect in each tree towards
  // its host, then the host belief projected onto each linkage label.
  void send_message(std::size_t i, std::size_t j) {
    const std::size_t s = ljf_.outgoing[i].at(j);
    const Structure& st = ljf_.structures[s];
    const std::vector<std::size_t> out = ljf_.linkages_from(s);
    for (std::size_t t = 0; t < st.trees.size(); ++t) {
      TreeRun<Arch> run = prepare(s, t);
      const std::size_t host = st.hosts[t];
      run.collect(host, ctx_);
      for (std::size_t l : out) {
        const Linkage& lk = ljf_.linkages[l];
        if (lk.source.tree != t) continue;
        if (written_[l]) throw Error(ErrorKind::kInvalidArgument, "linkage written twice");
        submessages_[l] = Arch::message(run.local[host], run.all_inputs(host), lk.label, ctx_);
        written_[l] = true;
        ++ctx_.stats.linkage_messages;
      }
    }
  }

  void calibrate_inference(std::size_t i) {
    runs_[i] = prepare(ljf_.inference[i], 0);
    runs_[i].calibrate(ctx_);
  }

  const Msbn& msbn_;
  const LinkedJunctionForest& ljf_;
  mutable EngineContext ctx_;
  std::map<VarId, FactorPtr> cpts_;
  std::map<std::size_t, std::vector<FactorPtr>> indicators_;
  std::vector<std::vector<std::vector<std::vector<FactorPtr>>>> placed_;
  std::vector<std::vector<std::vector<Potential>>> locals_;
  std::vector<Potential> submessages_;
  std::vector<bool> written_;
  std::vector<TreeRun<Arch>> runs_;
  SessionStatus status_ = SessionStatus::kFresh;
  double evidence_probability_ = 1.0;
};

template <class Arch>
LjfSession<Arch> extended_propagate(const Msbn& m, const LinkedJunctionForest& ljf,
                                    const Evidence& e, EngineOptions opt = {}) {
  LjfSession<Arch> s(m, ljf, opt);
  s.enter_evidence(e);
  s.propagate();
  return s;
}

inline LjfSession<ShaferShenoy> extended_ss_propagate(const Msbn& m,
                                                      const LinkedJunctionForest& ljf,
                                                      const Evidence& e,
                                                      EngineOptions opt = {}) {
  return extended_propagate<ShaferShenoy>(m, ljf, e, opt);
}

inline LjfSession<Lazy> extended_lazy_propagate(const Msbn& m,
                                                const LinkedJunctionForest& ljf,
                                                const Evidence& e,
                                                EngineOptions opt = {}) {
  return extended_propagate<Lazy>(m, ljf, e, opt);
}

}  // namespace msbn
