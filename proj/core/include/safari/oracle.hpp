#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "safari/model.hpp"

namespace safari {

/// Every diagnosis of SD & alpha, found by trying all 2^|COMPS| health
/// assignments.
struct DiagnosisCensus {
  std::size_t num_comps = 0;
  std::uint64_t all_count = 0;
  /// Subset-minimal diagnoses in canonical order.
  std::vector<HealthAssignment> minimal;
  /// Minimal-cardinality diagnoses in canonical order.
  std::vector<HealthAssignment> min_cardinality;
  /// Unset when there is no diagnosis at all.
  std::optional<std::size_t> min_card;
  /// `is_diagnosis[mask]`, bit i of mask set when component i is faulty.
  std::vector<std::uint8_t> is_diagnosis;

  std::uint64_t non_minimal_count() const { return all_count - minimal.size(); }
  bool diagnosis(const HealthAssignment& w) const;
  bool minimal_diagnosis(const HealthAssignment& w) const;
  /// All diagnoses in canonical order.
  std::vector<HealthAssignment> all() const;
};

inline constexpr std::size_t kCensusLimit = 24;

/// Health assignments are visited in Gray-code order so that consecutive
/// candidates differ in one literal; an incremental BCP pass rejects most
/// inconsistent ones before the complete solver runs. `jobs` workers split
/// the code sequence into contiguous ranges. Throws LimitExceeded when
/// |COMPS| > limit.
DiagnosisCensus census(const DiagnosticSystem& ds, const Observation& alpha, std::size_t limit = kCensusLimit,
                       unsigned jobs = 1);

/// Counts as JSON; with `listing`, also the minimal and minimal-cardinality
/// fault sets by name.
std::string census_json(const DiagnosticSystem& ds, const DiagnosisCensus& c, bool listing = false);

/// Consistency of SD & alpha & w decided by evaluating the original formula
/// under every assignment of the remaining variables. Shares no code with the
/// CNF path. Throws LimitExceeded when more than `limit` variables are free.
bool brute_force_consistent(const DiagnosticSystem& ds, const Observation& alpha, const HealthAssignment& w,
                            std::size_t limit = 26);

}  // namespace safari
