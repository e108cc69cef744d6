// SPDX-License-Identifier: Apache-2.0
//
// Domain model: variables, DAGs, Bayesian subnets and the hypertree of
// subnets, together with every structural check an input has to pass before
// it can be compiled.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "msbn/core.hpp"
#include "msbn/factor.hpp"

namespace msbn {

inline constexpr double kCptTolerance = 1e-9;

struct Variable {
  std::string name;
  std::size_t cardinality = 2;
  std::vector<std::string> states;  // empty, or one label per state
};

// All variables of a network, sorted by name.  A VarId is an index into it.
class Universe {
 public:
  Universe() = default;
  explicit Universe(std::vector<Variable> vars) : vars_(std::move(vars)) {
    std::sort(vars_.begin(), vars_.end(),
              [](const Variable& a, const Variable& b) { return a.name < b.name; });
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      const Variable& v = vars_[i];
      if (v.name.empty()) {
        throw Error(ErrorKind::kInvalidModel, "empty variable name");
      }
      if (v.cardinality < 2) {
        throw Error(ErrorKind::kInvalidModel,
                    "variable '" + v.name + "' has cardinality below 2");
      }
      if (!v.states.empty() && v.states.size() != v.cardinality) {
        throw Error(ErrorKind::kInvalidModel,
                    "variable '" + v.name + "' has " +
                        std::to_string(v.states.size()) + " state labels for " +
                        std::to_string(v.cardinality) + " states");
      }
      if (!index_.emplace(v.name, static_cast<VarId>(i)).second) {
        throw Error(ErrorKind::kInvalidModel,
                    "duplicate variable '" + v.name + "'");
      }
    }
  }

  std::size_t size() const { return vars_.size(); }
  const Variable& operator[](VarId id) const { return vars_.at(id); }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::string& name(VarId id) const { return vars_.at(id).name; }
  std::size_t card(VarId id) const { return vars_.at(id).cardinality; }

  std::optional<VarId> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  VarId id(const std::string& name) const {
    auto v = find(name);
    if (!v) throw Error(ErrorKind::kUnknownVariable, "'" + name + "'");
    return *v;
  }

  std::string names(const VarSet& s) const {
    std::string out;
    for (VarId v : s) {
      if (!out.empty()) out += ' ';
      out += name(v);
    }
    return out;
  }

 private:
  std::vector<Variable> vars_;
  std::map<std::string, VarId> index_;
};

struct Dag {
  VarSet nodes;
  std::map<VarId, std::vector<VarId>> parents;  // declared order

  const std::vector<VarId>& parents_of(VarId v) const {
    static const std::vector<VarId> kNone;
    auto it = parents.find(v);
    return it == parents.end() ? kNone : it->second;
  }
  bool has_arc(VarId from, VarId to) const {
    const auto& p = parents_of(to);
    return std::find(p.begin(), p.end(), from) != p.end();
  }
};

// A Bayesian subnet.  `cpts` holds only the CPTs this subnet owns; every other
// occurrence of a variable implicitly carries the all-ones table.
struct Subnet {
  std::string id;
  Dag dag;
  std::map<VarId, Factor> cpts;

  const VarSet& nodes() const { return dag.nodes; }
  bool owns(VarId v) const { return cpts.count(v) != 0; }
};

struct Msbn {
  Universe universe;
  std::vector<Subnet> subnets;
  std::vector<std::pair<std::size_t, std::size_t>> links;

  std::size_t subnet_index(const std::string& id) const {
    for (std::size_t i = 0; i < subnets.size(); ++i) {
      if (subnets[i].id == id) return i;
    }
    throw Error(ErrorKind::kInvalidArgument, "unknown subnet '" + id + "'");
  }

  VarSet separator(std::size_t i, std::size_t j) const {
    return set_intersection(subnets.at(i).nodes(), subnets.at(j).nodes());
  }

  std::vector<std::size_t> neighbors(std::size_t i) const {
    std::vector<std::size_t> out;
    for (auto [a, b] : links) {
      if (a == i) out.push_back(b);
      if (b == i) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Parents of `v` in the union DAG.
  VarSet union_parents(VarId v) const {
    VarSet out;
    for (const Subnet& s : subnets) {
      const auto& p = s.dag.parents_of(v);
      out = set_union(out, make_set(p));
    }
    return out;
  }

  // Subnets that hold a CPT for `v`.
  std::vector<std::size_t> owners(VarId v) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < subnets.size(); ++i) {
      if (subnets[i].owns(v)) out.push_back(i);
    }
    return out;
  }

  std::size_t owner(VarId v) const {
    auto o = owners(v);
    if (o.empty()) {
      throw Error(ErrorKind::kMissingCpt, "'" + universe.name(v) + "'");
    }
    return o.front();
  }

  // Subnets containing `v`, in index order.
  std::vector<std::size_t> holders(VarId v) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < subnets.size(); ++i) {
      if (contains(subnets[i].nodes(), v)) out.push_back(i);
    }
    return out;
  }

  VarSet all_nodes() const {
    VarSet out;
    for (const Subnet& s : subnets) out = set_union(out, s.nodes());
    return out;
  }
};

// One finding: `var` observed in `state`.  `subnet` overrides where the
// indicator is entered (default: the variable's owner subnet).
struct Finding {
  VarId var = 0;
  std::size_t state = 0;
  std::optional<std::size_t> subnet;
};

struct Evidence {
  std::vector<Finding> findings;

  bool empty() const { return findings.empty(); }
  void set(VarId var, std::size_t state) { findings.push_back({var, state, {}}); }
};

//===========================================================================
// Validation.

// Returns a directed cycle (in arc order) if the DAG has one.
inline std::optional<std::vector<VarId>> find_cycle(const Dag& dag) {
  std::map<VarId, std::vector<VarId>> children;
  for (const auto& [child, ps] : dag.parents) {
    for (VarId p : ps) children[p].push_back(child);
  }
  for (auto& [p, cs] : children) std::sort(cs.begin(), cs.end());

  std::map<VarId, int> color;  // 0 white, 1 on stack, 2 done
  std::vector<VarId> stack;
  std::optional<std::vector<VarId>> found;

  auto dfs = [&](auto&& self, VarId v) -> bool {
    color[v] = 1;
    stack.push_back(v);
    for (VarId c : children[v]) {
      if (color[c] == 1) {
        auto it = std::find(stack.begin(), stack.end(), c);
        found = std::vector<VarId>(it, stack.end());
        return true;
      }
      if (color[c] == 0 && self(self, c)) return true;
    }
    stack.pop_back();
    color[v] = 2;
    return false;
  };

  VarSet all = dag.nodes;
  for (const auto& [child, ps] : dag.parents) {
    all = set_union(all, make_set(ps));
    all = set_union(all, VarSet{child});
  }
  for (VarId v : all) {
    if (color[v] == 0 && dfs(dfs, v)) return found;
  }
  return std::nullopt;
}

inline void validate_dag(const Dag& dag, const Universe* universe = nullptr) {
  auto label = [&](VarId v) {
    return universe ? universe->name(v) : std::to_string(v);
  };
  for (const auto& [child, ps] : dag.parents) {
    if (!contains(dag.nodes, child)) {
      throw Error(ErrorKind::kDanglingParent,
                  "arc into '" + label(child) + "', which is not a node");
    }
    for (VarId p : ps) {
      if (!contains(dag.nodes, p)) {
        throw Error(ErrorKind::kDanglingParent,
                    "parent '" + label(p) + "' of '" + label(child) +
                        "' is not a node");
      }
    }
  }
  if (auto cycle = find_cycle(dag)) {
    std::string names;
    for (VarId v : *cycle) names += (names.empty() ? "" : ",") + label(v);
    throw Error(ErrorKind::kCycleDetected, "[" + names + "]");
  }
}

// Def. 7 check for a pair of subnets: every shared variable has all of its
// parents (in the union of the two DAGs) on one side.
inline void validate_d_sepset(const Subnet& a, const Subnet& b,
                              const Universe* universe = nullptr) {
  const VarSet shared = set_intersection(a.nodes(), b.nodes());
  for (VarId x : shared) {
    VarSet parents = set_union(make_set(a.dag.parents_of(x)),
                               make_set(b.dag.parents_of(x)));
    if (!is_subset(parents, a.nodes()) && !is_subset(parents, b.nodes())) {
      throw Error(ErrorKind::kDSepsetViolation,
                  universe ? "'" + universe->name(x) + "'" : std::to_string(x));
    }
  }
}

enum class ViolationKind {
  kEmptySubnet,
  kDuplicateSubnet,
  kBadLink,
  kNotATree,
  kRunningIntersection,
  kDanglingParent,
  kUnionCycle,
  kSeparatorMismatch,
  kDSepset,
  kMultipleOwners,
};

inline std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::kEmptySubnet: return "EmptySubnet";
    case ViolationKind::kDuplicateSubnet: return "DuplicateSubnet";
    case ViolationKind::kBadLink: return "BadLink";
    case ViolationKind::kNotATree: return "NotATree";
    case ViolationKind::kRunningIntersection: return "RunningIntersection";
    case ViolationKind::kDanglingParent: return "DanglingParent";
    case ViolationKind::kUnionCycle: return "UnionCycle";
    case ViolationKind::kSeparatorMismatch: return "SeparatorMismatch";
    case ViolationKind::kDSepset: return "DSepset";
    case ViolationKind::kMultipleOwners: return "MultipleOwners";
  }
  return "Unknown";
}

struct Violation {
  ViolationKind kind;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

inline std::string describe(const ValidationReport& report) {
  std::string out;
  for (const Violation& v : report) {
    out += std::string(to_string(v.kind)) + ": " + v.message + "\n";
  }
  return out;
}

namespace detail {

// Subnets reachable from `start` without crossing the link start-`blocked`.
inline std::vector<std::size_t> side_of(const Msbn& m, std::size_t start,
                                        std::size_t blocked) {
  std::vector<std::size_t> out{start};
  std::vector<bool> seen(m.subnets.size(), false);
  seen[start] = seen[blocked] = true;
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (std::size_t n : m.neighbors(out[k])) {
      if (!seen[n]) {
        seen[n] = true;
        out.push_back(n);
      }
    }
  }
  return out;
}

// Path between two subnets in the hypertree (inclusive), empty if none.
inline std::vector<std::size_t> tree_path(const Msbn& m, std::size_t from,
                                          std::size_t to) {
  std::vector<std::size_t> prev(m.subnets.size(), SIZE_MAX);
  std::vector<std::size_t> queue{from};
  prev[from] = from;
  for (std::size_t k = 0; k < queue.size(); ++k) {
    for (std::size_t n : m.neighbors(queue[k])) {
      if (prev[n] == SIZE_MAX) {
        prev[n] = queue[k];
        queue.push_back(n);
      }
    }
  }
  if (prev[to] == SIZE_MAX) return {};
  std::vector<std::size_t> path{to};
  while (path.back() != from) path.push_back(prev[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace detail

// Lists every violated structural invariant of a hypertree MSBN.  Empty iff
// the structure is valid.  CPT contents are checked separately.
inline ValidationReport validate_hypertree(const Msbn& m) {
  ValidationReport report;
  const Universe& u = m.universe;
  const std::size_t n = m.subnets.size();
  auto add = [&](ViolationKind k, std::string msg) {
    report.push_back({k, std::move(msg)});
  };

  std::set<std::string> ids;
  for (const Subnet& s : m.subnets) {
    if (s.nodes().empty()) add(ViolationKind::kEmptySubnet, "'" + s.id + "'");
    if (!ids.insert(s.id).second) {
      add(ViolationKind::kDuplicateSubnet, "'" + s.id + "'");
    }
    for (const auto& [child, ps] : s.dag.parents) {
      for (VarId p : ps) {
        if (!contains(s.nodes(), p) || !contains(s.nodes(), child)) {
          add(ViolationKind::kDanglingParent,
              "arc " + u.name(p) + " -> " + u.name(child) + " in '" + s.id +
                  "' leaves the subnet");
        }
      }
    }
  }

  // Tree shape.
  bool links_ok = true;
  std::set<std::pair<std::size_t, std::size_t>> seen_links;
  for (auto [a, b] : m.links) {
    if (a >= n || b >= n || a == b ||
        !seen_links.insert({std::min(a, b), std::max(a, b)}).second) {
      add(ViolationKind::kBadLink, "link " + std::to_string(a) + "-" +
                                       std::to_string(b) +
                                       " is a self, duplicate or unknown link");
      links_ok = false;
    }
  }
  bool tree = false;
  if (links_ok && n > 0) {
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    bool cycle = false;
    for (auto [a, b] : m.links) {
      std::size_t ra = find(a), rb = find(b);
      if (ra == rb) cycle = true;
      else parent[ra] = rb;
    }
    std::size_t roots = 0;
    for (std::size_t i = 0; i < n; ++i) roots += find(i) == i;
    if (cycle) add(ViolationKind::kNotATree, "hyperlinks contain a cycle");
    if (roots != 1) {
      add(ViolationKind::kNotATree, "hyperlinks do not connect all subnets");
    }
    tree = !cycle && roots == 1;
  }

  // Union DAG.
  Dag united;
  for (const Subnet& s : m.subnets) {
    united.nodes = set_union(united.nodes, s.nodes());
    for (const auto& [child, ps] : s.dag.parents) {
      auto& dst = united.parents[child];
      for (VarId p : ps) {
        if (std::find(dst.begin(), dst.end(), p) == dst.end()) dst.push_back(p);
      }
    }
  }
  if (auto cycle = find_cycle(united)) {
    std::string names;
    for (VarId v : *cycle) names += (names.empty() ? "" : ",") + u.name(v);
    add(ViolationKind::kUnionCycle, "[" + names + "]");
  }

  // Identical separator subgraphs.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const VarSet sep = m.separator(i, j);
      for (VarId x : sep) {
        for (VarId y : sep) {
          if (m.subnets[i].dag.has_arc(x, y) != m.subnets[j].dag.has_arc(x, y)) {
            add(ViolationKind::kSeparatorMismatch,
                "arc " + u.name(x) + " -> " + u.name(y) + " present in only one of '" +
                    m.subnets[i].id + "' and '" + m.subnets[j].id + "'");
          }
        }
      }
    }
  }

  if (tree) {
    // Running intersection over the hypertree.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const VarSet sep = m.separator(i, j);
        if (sep.empty()) continue;
        for (std::size_t k : detail::tree_path(m, i, j)) {
          if (!is_subset(sep, m.subnets[k].nodes())) {
            add(ViolationKind::kRunningIntersection,
                "'" + m.subnets[k].id + "' lies between '" + m.subnets[i].id +
                    "' and '" + m.subnets[j].id + "' but misses part of {" +
                    u.names(sep) + "}");
          }
        }
      }
    }
    // Each hyperlink d-separates its two subtrees.
    for (auto [a, b] : m.links) {
      VarSet side_a, side_b;
      for (std::size_t k : detail::side_of(m, a, b))
        side_a = set_union(side_a, m.subnets[k].nodes());
      for (std::size_t k : detail::side_of(m, b, a))
        side_b = set_union(side_b, m.subnets[k].nodes());
      for (VarId x : m.separator(a, b)) {
        VarSet ps = m.union_parents(x);
        if (!is_subset(ps, side_a) && !is_subset(ps, side_b)) {
          add(ViolationKind::kDSepset,
              "parents of '" + u.name(x) + "' straddle the hyperlink '" +
                  m.subnets[a].id + "'-'" + m.subnets[b].id + "'");
        }
      }
    }
  }

  for (VarId v = 0; v < u.size(); ++v) {
    auto owners = m.owners(v);
    if (owners.size() > 1) {
      std::string where;
      for (auto o : owners) where += " '" + m.subnets[o].id + "'";
      add(ViolationKind::kMultipleOwners, "'" + u.name(v) + "' owned by" + where);
    }
  }
  return report;
}

// Checks that every variable has exactly one owned, well-placed and
// normalized CPT.  Throws on the first problem.
inline void check_cpt_assignment(const Msbn& m) {
  const Universe& u = m.universe;
  const VarSet all = m.all_nodes();
  for (std::size_t i = 0; i < m.subnets.size(); ++i) {
    for (const auto& [v, f] : m.subnets[i].cpts) {
      if (!contains(m.subnets[i].nodes(), v)) {
        throw Error(ErrorKind::kMisplacedCpt,
                    "'" + u.name(v) + "' is not a node of '" + m.subnets[i].id + "'");
      }
    }
  }
  for (VarId v : all) {
    auto owners = m.owners(v);
    if (owners.empty()) throw Error(ErrorKind::kMissingCpt, "'" + u.name(v) + "'");
    if (owners.size() > 1) {
      throw Error(ErrorKind::kMultipleCpts, "'" + u.name(v) + "'");
    }
    const Subnet& s = m.subnets[owners.front()];
    const VarSet family = set_union(VarSet{v}, m.union_parents(v));
    if (!is_subset(family, s.nodes())) {
      throw Error(ErrorKind::kMisplacedCpt,
                  "'" + u.name(v) + "' is owned by '" + s.id +
                      "', which lacks some of its parents");
    }
    const Factor& cpt = s.cpts.at(v);
    const std::vector<VarId>& scope = cpt.scope();
    if (scope.empty() || scope[0] != v ||
        make_set({scope.begin() + 1, scope.end()}) != make_set(s.dag.parents_of(v))) {
      throw Error(ErrorKind::kMisplacedCpt,
                  "CPT of '" + u.name(v) + "' does not follow its parent list in '" +
                      s.id + "'");
    }
    for (std::size_t k = 0; k < cpt.scope().size(); ++k) {
      if (cpt.cards()[k] != u.card(cpt.scope()[k])) {
        throw Error(ErrorKind::kInvalidModel,
                    "CPT of '" + u.name(v) + "' has a wrong cardinality");
      }
    }
    const std::size_t card = u.card(v);
    const std::size_t columns = cpt.size() / card;
    for (std::size_t c = 0; c < columns; ++c) {
      double sum = 0.0;
      for (std::size_t s_ = 0; s_ < card; ++s_) {
        double x = cpt.values()[s_ * columns + c];
        if (!(x >= 0.0) || !std::isfinite(x)) {
          throw Error(ErrorKind::kInvalidModel,
                      "CPT of '" + u.name(v) + "' has a negative or non-finite entry");
        }
        sum += x;
      }
      if (std::abs(sum - 1.0) > kCptTolerance) {
        std::ostringstream os;
        os << "'" << u.name(v) << "' parent configuration " << c << " sums to "
           << sum;
        throw Error(ErrorKind::kUnnormalizedCpt, os.str());
      }
    }
  }
}

// The union Bayesian network as a single subnet.
inline Msbn merge_subnets(const Msbn& m) {
  Msbn out;
  out.universe = m.universe;
  Subnet all;
  all.id = "union";
  all.dag.nodes = m.all_nodes();
  for (const Subnet& s : m.subnets) {
    for (const auto& [v, cpt] : s.cpts) {
      all.dag.parents[v].assign(cpt.scope().begin() + 1, cpt.scope().end());
      all.cpts.emplace(v, cpt);
    }
  }
  for (auto it = all.dag.parents.begin(); it != all.dag.parents.end();) {
    it = it->second.empty() ? all.dag.parents.erase(it) : std::next(it);
  }
  out.subnets.push_back(std::move(all));
  return out;
}

// Full check used before compilation.
inline void validate(const Msbn& m) {
  for (const Subnet& s : m.subnets) validate_dag(s.dag, &m.universe);
  ValidationReport report = validate_hypertree(m);
  if (!report.empty()) throw Error(ErrorKind::kInvalidModel, describe(report));
  check_cpt_assignment(m);
}

}  // namespace msbn
