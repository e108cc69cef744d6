// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "msbn/msbn.hpp"

namespace msbn::testing {

inline std::string data_path(const std::string& name) {
  return std::string(MSBN_DATA_DIR) + "/" + name;
}

inline std::string fixture_path(const std::string& name) {
  return std::string(MSBN_FIXTURE_DIR) + "/" + name;
}

inline Msbn load_file(const std::string& path) {
  return to_msbn(parse_msbn(cli::read_file(path)));
}

inline Msbn fig6() { return load_file(data_path("fig6.msbn")); }

inline std::vector<std::string> fixtures_in(const std::string& dir) {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(fixture_path(dir))) {
    if (e.path().extension() == ".msbn") out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline VarPair edge(const Universe& u, const std::string& a, const std::string& b) {
  return make_pair_sorted(u.id(a), u.id(b));
}

inline PairSet edges(const Universe& u,
                     const std::vector<std::pair<std::string, std::string>>& list) {
  PairSet out;
  for (const auto& [a, b] : list) out.insert(edge(u, a, b));
  return out;
}

inline VarSet vars(const Universe& u, const std::vector<std::string>& names) {
  std::vector<VarId> ids;
  for (const std::string& n : names) ids.push_back(u.id(n));
  return make_set(ids);
}

// A one-subnet network from (child, parents, values) triples over binary
// variables.
struct FamilySpec {
  std::string child;
  std::vector<std::string> parents;
  std::vector<double> values;
};

inline Msbn single_bn(const std::vector<FamilySpec>& fams) {
  MsbnDocument doc;
  DocSubnet s{"bn", {}, {}, {}};
  for (const FamilySpec& f : fams) {
    doc.variables.push_back({f.child, 2, {}});
    s.nodes.push_back(f.child);
    for (const std::string& p : f.parents) s.arcs.emplace_back(p, f.child);
    s.cpts.push_back({f.child, f.parents, f.values});
  }
  doc.subnets.push_back(std::move(s));
  return to_msbn(doc);
}

}  // namespace msbn::testing
