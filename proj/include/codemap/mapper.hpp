#pragma once

#include <optional>
#include <string>
#include <vector>

#include "codemap/candidate.hpp"
#include "codemap/diff_parser.hpp"
#include "codemap/git_gateway.hpp"
#include "codemap/region.hpp"
#include "codemap/selector.hpp"

namespace codemap {

struct MapRequest {
  std::string source_commit;
  std::string file;
  CharacterRange range{1, 1, 1, 1};
  std::string target_commit;
};

/// Everything a mapping reads from the repository, loaded once so several
/// configurations can run over the same inputs.
struct MapInputs {
  std::string source_commit;
  std::string target_commit;
  std::string source_file;
  /// nullopt when the file has no counterpart at the target commit.
  std::optional<std::string> target_file;
  CharacterRange range{1, 1, 1, 1};
  Document source;
  Document target;
  std::vector<RawDiffReport> reports;
  /// Parsed hunks, parallel to `reports`.
  std::vector<std::vector<Hunk>> hunks;
};

/// Reads both file versions and the diff reports. Throws kRepoError,
/// kNotFound, kBinaryFile, kDiffToolFailure, kMalformedDiff, and
/// kOutOfBounds when the range does not fit the source file.
MapInputs load_inputs(const GitGateway& git, const MapRequest& request,
                      int diff_context = 0);

struct MapResult {
  Region target = Region::deleted();
  /// "file_deleted" when the whole file is gone, else empty.
  std::string reason;
  std::vector<Candidate> ranked;
  double candidates_ms = 0.0;
  double selection_ms = 0.0;
};

/// Both phases over preloaded inputs; performs no I/O.
MapResult map_region(const MapInputs& inputs, const SelectionConfig& config);

MapResult map_region(const GitGateway& git, const MapRequest& request,
                     const SelectionConfig& config, int diff_context = 0);

}  // namespace codemap
