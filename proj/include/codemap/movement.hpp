#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "codemap/candidate.hpp"
#include "codemap/diff_parser.hpp"
#include "codemap/region.hpp"

namespace codemap {

enum class MovementKind { kVertical, kHorizontal };

/// True when every line of the range lies inside some hunk's source block.
bool fully_deleted(const CharacterRange& range, const std::vector<Hunk>& hunks);

/// Relocations of the range's lines into the added blocks of one line-level
/// report. A block equal line for line gives a vertical candidate with the
/// same columns; a block equal after stripping surrounding whitespace gives
/// a horizontal one with columns shifted by the change in indentation.
/// Empty when the range is not fully deleted by the report.
std::vector<Candidate> detect_movements(const CharacterRange& range,
                                        const Document& source,
                                        const std::vector<Hunk>& hunks,
                                        const Document& target,
                                        const std::string& target_commit,
                                        const std::string& target_file);

}  // namespace codemap
