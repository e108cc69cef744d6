// SPDX-License-Identifier: Apache-2.0
//
// Shared vocabulary: variable ids, sorted variable sets and the error type
// used throughout the library.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace msbn {

// Variables are identified by their position in the universe, which is kept
// sorted by name.  Comparing ids therefore compares names lexicographically.
using VarId = std::uint32_t;

// A set of variables, stored as a strictly increasing vector.
using VarSet = std::vector<VarId>;

enum class ErrorKind {
  kCycleDetected,
  kDanglingParent,
  kDSepsetViolation,
  kMissingCpt,
  kMultipleCpts,
  kUnnormalizedCpt,
  kMisplacedCpt,
  kNodeAbsent,
  kNotChordal,
  kRunningIntersectionUnsatisfiable,
  kAttachmentAmbiguous,
  kNoCoveringCluster,
  kNoContainingCluster,
  kScopeOverflow,
  kVariableAbsent,
  kImpossibleEvidence,
  kNumericUnderflow,
  kUnknownVariable,
  kNotCalibrated,
  kStateSpaceTooLarge,
  kSyntaxError,
  kSemanticError,
  kInvalidModel,
  kInvalidArgument,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kCycleDetected: return "CycleDetected";
    case ErrorKind::kDanglingParent: return "DanglingParent";
    case ErrorKind::kDSepsetViolation: return "DSepsetViolation";
    case ErrorKind::kMissingCpt: return "MissingCpt";
    case ErrorKind::kMultipleCpts: return "MultipleCpts";
    case ErrorKind::kUnnormalizedCpt: return "UnnormalizedCpt";
    case ErrorKind::kMisplacedCpt: return "MisplacedCpt";
    case ErrorKind::kNodeAbsent: return "NodeAbsent";
    case ErrorKind::kNotChordal: return "NotChordal";
    case ErrorKind::kRunningIntersectionUnsatisfiable:
      return "RunningIntersectionUnsatisfiable";
    case ErrorKind::kAttachmentAmbiguous: return "AttachmentAmbiguous";
    case ErrorKind::kNoCoveringCluster: return "NoCoveringCluster";
    case ErrorKind::kNoContainingCluster: return "NoContainingCluster";
    case ErrorKind::kScopeOverflow: return "ScopeOverflow";
    case ErrorKind::kVariableAbsent: return "VariableAbsent";
    case ErrorKind::kImpossibleEvidence: return "ImpossibleEvidence";
    case ErrorKind::kNumericUnderflow: return "NumericUnderflow";
    case ErrorKind::kUnknownVariable: return "UnknownVariable";
    case ErrorKind::kNotCalibrated: return "NotCalibrated";
    case ErrorKind::kStateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorKind::kSyntaxError: return "SyntaxError";
    case ErrorKind::kSemanticError: return "SemanticError";
    case ErrorKind::kInvalidModel: return "InvalidModel";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

//===========================================================================
// Sorted-vector set helpers.

inline VarSet make_set(std::vector<VarId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline bool contains(const VarSet& s, VarId v) {
  return std::binary_search(s.begin(), s.end(), v);
}

inline bool is_subset(const VarSet& a, const VarSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline VarSet set_union(const VarSet& a, const VarSet& b) {
  VarSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

inline VarSet set_intersection(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

inline VarSet set_difference(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

// Unordered variable pair, normalized so that first < second.
using VarPair = std::pair<VarId, VarId>;

inline VarPair make_pair_sorted(VarId a, VarId b) {
  return a < b ? VarPair{a, b} : VarPair{b, a};
}

}  // namespace msbn
