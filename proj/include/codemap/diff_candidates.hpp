#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "codemap/candidate.hpp"
#include "codemap/diff_parser.hpp"
#include "codemap/region.hpp"

namespace codemap {

enum class OverlapKind { kFullyCovered, kTop, kMiddle, kBottom, kDisjoint };

std::string_view to_string(OverlapKind kind);

struct OverlapRelation {
  OverlapKind kind = OverlapKind::kDisjoint;
  const Hunk* hunk = nullptr;
};

/// Position of the hunk's source block [hs, he] relative to region lines
/// [r1, r2]. An empty block has he == hs - 1.
OverlapKind classify_overlap(int hs, int he, int r1, int r2);
OverlapKind classify_overlap(const Hunk& hunk, const CharacterRange& range);

/// Source-to-target line arithmetic for one report.
class LineMapper {
 public:
  explicit LineMapper(const std::vector<Hunk>& hunks) : hunks_(&hunks) {}

  /// Hunk whose non-empty source block contains the line.
  const Hunk* hunk_containing(int source_line) const;
  /// Target line of an unchanged source line; nullopt inside a hunk.
  std::optional<int> map(int source_line) const;
  /// Last target line at or before the end of the source line.
  int map_floor(int source_line) const;
  /// First target line at or after the start of the source line.
  int map_ceil(int source_line) const;

 private:
  const std::vector<Hunk>* hunks_;
};

/// Copies word rows into line-level hunks from word-level hunks with the
/// same bounds.
void attach_word_data(std::vector<Hunk>& line_hunks,
                      const std::vector<Hunk>& word_hunks);

struct DiffExtractionInput {
  const Document* source = nullptr;
  const Document* target = nullptr;
  CharacterRange range{1, 1, 1, 1};
  std::string target_commit;
  std::string target_file;
  bool refine = true;
};

/// Candidates from one report's hunks. Throws kOutOfBounds when the hunks do
/// not fit the target text.
std::vector<Candidate> extract_report_candidates(
    const std::vector<Hunk>& hunks, const DiffExtractionInput& input);

/// Candidates from every report, deduplicated in report order.
std::vector<Candidate> extract_diff_candidates(
    const std::vector<std::vector<Hunk>>& reports,
    const DiffExtractionInput& input);

/// Moves the start of `coarse` to the character of the hunk's target line
/// that corresponds to the source range start. Returns `coarse` when the
/// hunk has no usable word data for that line.
CharacterRange refine_start(const CharacterRange& source_range,
                            const Hunk& ref_hunk,
                            const CharacterRange& coarse,
                            const Document& source, const Document& target);

/// Mirror of refine_start for the end of the range.
CharacterRange refine_end(const CharacterRange& source_range,
                          const Hunk& ref_hunk, const CharacterRange& coarse,
                          const Document& source, const Document& target);

}  // namespace codemap
