#include "codemap/selector.hpp"

#include <algorithm>
#include <tuple>

namespace codemap {

ContextBuilder::ContextBuilder(const Document& doc,
                               const std::vector<Hunk>& hunks, DiffSide side)
    : doc_(&doc), changed_(static_cast<std::size_t>(doc.line_count()), false) {
  for (const Hunk& h : hunks) {
    const int first = side == DiffSide::kSource ? h.source_start : h.target_start;
    const int last = side == DiffSide::kSource ? h.source_end : h.target_end;
    for (int l = std::max(first, 1); l <= std::min(last, doc.line_count()); ++l) {
      changed_[l - 1] = true;
    }
  }
}

std::vector<int> ContextBuilder::lines_above(int first_line, int n) const {
  std::vector<int> out;
  for (int l = std::min(first_line - 1, doc_->line_count());
       l >= 1 && static_cast<int>(out.size()) < n; --l) {
    if (unchanged(l)) out.push_back(l);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<int> ContextBuilder::lines_below(int last_line, int n) const {
  std::vector<int> out;
  for (int l = std::max(last_line + 1, 1);
       l <= doc_->line_count() && static_cast<int>(out.size()) < n; ++l) {
    if (unchanged(l)) out.push_back(l);
  }
  return out;
}

std::string ContextBuilder::with_context(const CharacterRange& range,
                                         int n) const {
  std::string out;
  for (int l : lines_above(range.l1(), n)) {
    out += doc_->line(l);
    out += '\n';
  }
  out += doc_->extract(range);
  for (int l : lines_below(range.l2(), n)) {
    out += '\n';
    out += doc_->line(l);
  }
  return out;
}

std::string ContextBuilder::around(int anchor, int n) const {
  std::vector<std::string_view> parts;
  for (int l : lines_above(anchor, n)) parts.push_back(doc_->line(l));
  for (int l : lines_below(anchor - 1, n)) parts.push_back(doc_->line(l));
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += '\n';
    out += parts[i];
  }
  return out;
}

std::string add_context(const CharacterRange& range, const Document& doc,
                        const std::vector<Hunk>& hunks, int n, DiffSide side) {
  return ContextBuilder(doc, hunks, side).with_context(range, n);
}

bool ranks_before(const Candidate& a, const Candidate& b) {
  const double sa = a.similarity.value_or(0.0);
  const double sb = b.similarity.value_or(0.0);
  if (sa != sb) return sa > sb;
  if (a.origin != b.origin) return a.origin < b.origin;
  if (a.region.is_deleted() != b.region.is_deleted()) {
    return !a.region.is_deleted();
  }
  if (a.region.is_deleted()) return false;
  const CharacterRange& x = a.region.range();
  const CharacterRange& y = b.region.range();
  return std::tie(a.region.file(), x) < std::tie(b.region.file(), y);
}

Selection select_target(const CharacterRange& source_range,
                        const Document& source, const Document& target,
                        const std::vector<Hunk>& context_hunks,
                        std::vector<Candidate> candidates,
                        const SelectionConfig& config) {
  Selection selection;
  if (candidates.empty()) return selection;
  const int n = config.effective_context();
  const ContextBuilder source_ctx(source, context_hunks, DiffSide::kSource);
  const ContextBuilder target_ctx(target, context_hunks, DiffSide::kTarget);
  const std::string plain = source.extract(source_range);
  const std::string with_ctx = source_ctx.with_context(source_range, n);

  for (Candidate& c : candidates) {
    if (c.region.is_deleted()) {
      const int anchor = c.deletion_anchor.value_or(target.line_count() + 1);
      c.similarity = levenshtein_similarity(with_ctx, target_ctx.around(anchor, n));
    } else if (c.origin == Origin::kMovement) {
      c.similarity =
          levenshtein_similarity(plain, target.extract(c.region.range()));
    } else {
      c.similarity = levenshtein_similarity(
          with_ctx, target_ctx.with_context(c.region.range(), n));
    }
  }
  std::sort(candidates.begin(), candidates.end(), ranks_before);
  selection.region = candidates.front().region;
  selection.ranked = std::move(candidates);
  return selection;
}

}  // namespace codemap
