#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "codemap/region.hpp"

namespace codemap {

/// Listed in tie-break priority order.
enum class Origin { kDiff, kMovement, kSearch };

std::string_view to_string(Origin origin);

struct Candidate {
  Region region = Region::deleted();
  Origin origin = Origin::kDiff;
  /// Set by the selector.
  std::optional<double> similarity;
  /// For Deleted candidates: the target line the removed code sat above
  /// (one past the last line when it was at the end of the file).
  std::optional<int> deletion_anchor;
};

/// Appends `candidate` unless one with the same file and range (or another
/// Deleted) is present. When present, the higher-priority origin is kept,
/// except that a region found by movement detection is always a movement
/// candidate.
void add_unique(std::vector<Candidate>& candidates, Candidate candidate);

}  // namespace codemap
