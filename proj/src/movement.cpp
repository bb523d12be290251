#include "codemap/movement.hpp"

#include <algorithm>

namespace codemap {

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\f' || c == '\v'; }

std::string_view strip(std::string_view s) {
  while (!s.empty() && is_blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_blank(s.back())) s.remove_suffix(1);
  return s;
}

// Indentation width in characters; indentation is ASCII whitespace, so
// bytes and characters agree.
int indent(std::string_view s) {
  int n = 0;
  while (n < static_cast<int>(s.size()) && is_blank(s[n])) ++n;
  return n;
}

}  // namespace

bool fully_deleted(const CharacterRange& range,
                   const std::vector<Hunk>& hunks) {
  for (int line = range.l1(); line <= range.l2(); ++line) {
    const bool inside = std::any_of(hunks.begin(), hunks.end(), [&](const Hunk& h) {
      return h.source_start <= line && line <= h.source_end;
    });
    if (!inside) return false;
  }
  return true;
}

std::vector<Candidate> detect_movements(const CharacterRange& range,
                                        const Document& source,
                                        const std::vector<Hunk>& hunks,
                                        const Document& target,
                                        const std::string& target_commit,
                                        const std::string& target_file) {
  std::vector<Candidate> out;
  if (!fully_deleted(range, hunks)) return out;
  const int height = range.l2() - range.l1() + 1;
  std::vector<std::string_view> lines;
  for (int l = range.l1(); l <= range.l2(); ++l) lines.push_back(source.line(l));

  for (const Hunk& h : hunks) {
    if (h.target_count() < height || h.target_end > target.line_count()) continue;
    for (int t = h.target_start; t + height - 1 <= h.target_end; ++t) {
      bool exact = true;
      bool stripped = true;
      for (int k = 0; k < height && stripped; ++k) {
        const std::string_view a = lines[k];
        const std::string_view b = target.line(t + k);
        exact = exact && a == b;
        stripped = strip(a) == strip(b);
      }
      if (!stripped) continue;
      const int last = t + height - 1;
      int c1 = range.c1();
      int c2 = range.c2();
      if (!exact) {
        c1 = std::max(1, c1 - indent(lines.front()) + indent(target.line(t)));
        c2 = c2 - indent(lines.back()) + indent(target.line(last));
        c2 = std::min(c2, target.line_length(last));
        c1 = std::min(c1, target.line_length(t));
      }
      if (c1 < 1 || c2 < 1 || (height == 1 && c1 > c2)) continue;
      const CharacterRange found = make_range(t, c1, last, c2);
      if (!target.contains(found)) continue;
      Candidate c;
      c.region = Region::at(target_commit, target_file, found);
      c.origin = Origin::kMovement;
      add_unique(out, std::move(c));
    }
  }
  return out;
}

}  // namespace codemap
