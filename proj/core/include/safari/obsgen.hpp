#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "safari/model.hpp"

namespace safari {

/// Observations with the smallest diagnosis cardinality SAFARI found for
/// them. The recorded cardinality is an upper bound on MinCard.
struct ObservationSuite {
  struct Entry {
    Observation alpha;
    std::size_t cardinality = 0;
    /// Round that produced the entry.
    std::size_t round = 0;
  };

  std::vector<Entry> entries;
  std::uint64_t seed = 0;
  std::size_t rounds = 0;
  std::size_t tries = 0;
};

/// Each of `rounds` rounds draws uniform random inputs, computes the nominal
/// outputs with every component healthy, and then, for each output in turn,
/// negates that one output and diagnoses the result with SAFARI (M = |COMPS|,
/// N = `tries`). A candidate is kept when its smallest diagnosis is larger
/// than every one kept earlier in the round. Candidates inconsistent with SD
/// are skipped. Observations produced twice are kept once, with the larger
/// cardinality. Throws InvalidModel when the system has no input/output
/// partition.
ObservationSuite make_alphas(const DiagnosticSystem& ds, std::size_t tries, std::size_t rounds, std::uint64_t seed,
                             unsigned jobs = 1);

/// One JSON object per line: {"inputs": {...}, "outputs": {...},
/// "estimated_cardinality": c, "round": r, "seed": s}.
std::string suite_jsonl(const DiagnosticSystem& ds, const ObservationSuite& suite);

}  // namespace safari
