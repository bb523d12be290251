#pragma once

#include <string>
#include <vector>

#include "codemap/candidate.hpp"
#include "codemap/diff_parser.hpp"
#include "codemap/levenshtein.hpp"
#include "codemap/region.hpp"

namespace codemap {

struct SelectionConfig {
  /// Unchanged lines taken above and below a region when scoring.
  int context_lines = 15;
  bool diff = true;
  bool refinement = true;
  bool movement = true;
  bool search = true;
  bool context = true;

  int effective_context() const { return context ? context_lines : 0; }
};

enum class DiffSide { kSource, kTarget };

/// Lines of one file version that no hunk touches on the given side.
class ContextBuilder {
 public:
  ContextBuilder(const Document& doc, const std::vector<Hunk>& hunks,
                 DiffSide side);

  bool unchanged(int line) const { return !changed_[line - 1]; }

  /// Up to n unchanged lines above `first_line`, nearest last.
  std::vector<int> lines_above(int first_line, int n) const;
  /// Up to n unchanged lines below `last_line`, nearest first.
  std::vector<int> lines_below(int last_line, int n) const;

  /// Lines above, the range text, and lines below joined with "\n".
  std::string with_context(const CharacterRange& range, int n) const;
  /// Context around a position between lines: the lines above `anchor` and
  /// those from `anchor` on, with nothing in between.
  std::string around(int anchor, int n) const;

 private:
  const Document* doc_;
  std::vector<bool> changed_;
};

/// add_context over raw inputs.
std::string add_context(const CharacterRange& range, const Document& doc,
                        const std::vector<Hunk>& hunks, int n,
                        DiffSide side = DiffSide::kSource);

struct Selection {
  Region region = Region::deleted();
  /// Scored candidates, best first.
  std::vector<Candidate> ranked;
};

/// Scores every candidate and picks the best one. `context_hunks` is the
/// line-level report that decides which lines count as unchanged.
Selection select_target(const CharacterRange& source_range,
                        const Document& source, const Document& target,
                        const std::vector<Hunk>& context_hunks,
                        std::vector<Candidate> candidates,
                        const SelectionConfig& config);

/// Total order used for ranking scored candidates.
bool ranks_before(const Candidate& a, const Candidate& b);

}  // namespace codemap
