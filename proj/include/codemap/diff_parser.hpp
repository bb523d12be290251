#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace codemap {

struct RawDiffReport;

enum class LineOpKind { kDelete, kAdd, kUnchanged };

struct LineOp {
  LineOpKind kind = LineOpKind::kUnchanged;
  std::string text;
  std::optional<int> source_line;
  std::optional<int> target_line;

  bool operator==(const LineOp&) const = default;
};

enum class FragmentKind { kDeleted, kAdded, kUnchanged };

struct Fragment {
  FragmentKind kind = FragmentKind::kUnchanged;
  std::string text;

  bool operator==(const Fragment&) const = default;
};

/// One row of a word-level hunk. A modified line carries both line numbers;
/// rows that only remove or only add text carry one.
struct WordLine {
  std::optional<int> source_line;
  std::optional<int> target_line;
  std::vector<Fragment> fragments;

  /// Unchanged and deleted fragments joined. Whitespace between words is
  /// taken from the target side, so this may differ from the real line.
  std::string source_text() const;
  /// Unchanged and added fragments joined.
  std::string target_text() const;
};

/// A change block. An empty side is encoded as end == start - 1, where start
/// is the first line after the position of the change in that file.
struct Hunk {
  int source_start = 1;
  int source_end = 0;
  int target_start = 1;
  int target_end = 0;
  std::vector<LineOp> ops;
  /// Filled for word-level reports whose rows agree with the header counts.
  std::vector<WordLine> word_lines;

  int source_count() const { return source_end - source_start + 1; }
  int target_count() const { return target_end - target_start + 1; }
  bool source_empty() const { return source_count() == 0; }
  bool target_empty() const { return target_count() == 0; }
  bool has_word_data() const { return !word_lines.empty(); }

  /// Word row covering the given source line, or nullptr.
  const WordLine* word_line_for_source(int line) const;
};

/// Parses `git diff` output (any context size). Hunks come back in source
/// order with bounds taken from the @@ headers. Throws kMalformedDiff.
std::vector<Hunk> parse_line_diff(std::string_view report);

/// Parses `git diff --word-diff=porcelain` output. A hunk whose newline
/// records cannot be matched to its header counts keeps its bounds but no
/// word rows. Throws kMalformedDiff.
std::vector<Hunk> parse_word_diff(std::string_view report);

/// Dispatches on the report's granularity.
std::vector<Hunk> parse_report(const RawDiffReport& report);

}  // namespace codemap
