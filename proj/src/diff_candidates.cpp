#include "codemap/diff_candidates.hpp"

#include <algorithm>
#include <tuple>

#include "codemap/error.hpp"

namespace codemap {

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::kDiff:
      return "diff";
    case Origin::kMovement:
      return "movement";
    case Origin::kSearch:
      return "search";
  }
  return "diff";
}

void add_unique(std::vector<Candidate>& candidates, Candidate candidate) {
  for (Candidate& existing : candidates) {
    const bool same =
        existing.region.is_deleted() == candidate.region.is_deleted() &&
        (existing.region.is_deleted() ||
         (existing.region.file() == candidate.region.file() &&
          existing.region.range() == candidate.region.range()));
    if (!same) continue;
    if (existing.origin == Origin::kMovement) return;
    if (candidate.origin == Origin::kMovement ||
        candidate.origin < existing.origin) {
      existing.origin = candidate.origin;
      existing.deletion_anchor = candidate.deletion_anchor;
    }
    return;
  }
  candidates.push_back(std::move(candidate));
}

std::string_view to_string(OverlapKind kind) {
  switch (kind) {
    case OverlapKind::kFullyCovered:
      return "fully_covered";
    case OverlapKind::kTop:
      return "top";
    case OverlapKind::kMiddle:
      return "middle";
    case OverlapKind::kBottom:
      return "bottom";
    case OverlapKind::kDisjoint:
      return "disjoint";
  }
  return "disjoint";
}

OverlapKind classify_overlap(int hs, int he, int r1, int r2) {
  if (hs <= r1 && he >= r2) return OverlapKind::kFullyCovered;
  if (hs <= r1 && r1 <= he && he < r2) return OverlapKind::kTop;
  if (r1 < hs && hs <= r2 && r2 <= he) return OverlapKind::kBottom;
  if (r1 < hs && he < r2) return OverlapKind::kMiddle;
  return OverlapKind::kDisjoint;
}

OverlapKind classify_overlap(const Hunk& hunk, const CharacterRange& range) {
  return classify_overlap(hunk.source_start, hunk.source_end, range.l1(),
                          range.l2());
}

const Hunk* LineMapper::hunk_containing(int source_line) const {
  for (const Hunk& h : *hunks_) {
    if (h.source_start <= source_line && source_line <= h.source_end) return &h;
  }
  return nullptr;
}

std::optional<int> LineMapper::map(int source_line) const {
  int delta = 0;
  for (const Hunk& h : *hunks_) {
    if (h.source_end < source_line) {
      delta += h.target_count() - h.source_count();
    } else if (h.source_start <= source_line) {
      return std::nullopt;
    }
  }
  return source_line + delta;
}

int LineMapper::map_floor(int source_line) const {
  if (const Hunk* h = hunk_containing(source_line)) return h->target_end;
  return *map(source_line);
}

int LineMapper::map_ceil(int source_line) const {
  if (const Hunk* h = hunk_containing(source_line)) return h->target_start;
  return *map(source_line);
}

void attach_word_data(std::vector<Hunk>& line_hunks,
                      const std::vector<Hunk>& word_hunks) {
  for (Hunk& h : line_hunks) {
    if (h.has_word_data()) continue;
    for (const Hunk& w : word_hunks) {
      if (w.has_word_data() && w.source_start == h.source_start &&
          w.source_end == h.source_end && w.target_start == h.target_start &&
          w.target_end == h.target_end) {
        h.word_lines = w.word_lines;
        break;
      }
    }
  }
}

namespace {

bool is_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\f' || c == U'\v' || c == U'\r';
}

struct Aligned {
  FragmentKind kind;
  std::u32string text;
  std::size_t s0 = 0;
  std::size_t s1 = 0;
  std::size_t t0 = 0;
  std::size_t t1 = 0;
};

// Finds `frag` in `text` at `pos`, skipping leading whitespace and letting
// whitespace runs differ in length.
std::optional<std::pair<std::size_t, std::size_t>> align(
    const std::u32string& text, std::size_t pos, const std::u32string& frag) {
  std::size_t i = pos;
  std::size_t j = 0;
  if (!frag.empty() && !is_space(frag[0])) {
    while (i < text.size() && is_space(text[i])) ++i;
  }
  const std::size_t begin = i;
  while (j < frag.size()) {
    if (is_space(frag[j])) {
      while (j < frag.size() && is_space(frag[j])) ++j;
      while (i < text.size() && is_space(text[i])) ++i;
    } else if (i < text.size() && text[i] == frag[j]) {
      ++i;
      ++j;
    } else {
      return std::nullopt;
    }
  }
  return std::make_pair(begin, i);
}

std::optional<std::vector<Aligned>> align_row(const WordLine& row,
                                              const std::u32string& src,
                                              const std::u32string& tgt) {
  std::vector<Aligned> out;
  std::size_t sp = 0;
  std::size_t tp = 0;
  for (const Fragment& f : row.fragments) {
    Aligned a{f.kind, decode_utf8(f.text)};
    if (f.kind != FragmentKind::kAdded) {
      auto m = align(src, sp, a.text);
      if (!m) return std::nullopt;
      std::tie(a.s0, a.s1) = *m;
      sp = a.s1;
    } else {
      a.s0 = a.s1 = sp;
    }
    if (f.kind != FragmentKind::kDeleted) {
      auto m = align(tgt, tp, a.text);
      if (!m) return std::nullopt;
      std::tie(a.t0, a.t1) = *m;
      tp = a.t1;
    } else {
      a.t0 = a.t1 = tp;
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::size_t common_prefix(const std::u32string& a, const std::u32string& b) {
  std::size_t n = 0;
  while (n < a.size() && n < b.size() && a[n] == b[n]) ++n;
  return n;
}

std::size_t common_suffix(const std::u32string& a, const std::u32string& b,
                          std::size_t limit) {
  std::size_t n = 0;
  while (n < limit && a[a.size() - 1 - n] == b[b.size() - 1 - n]) ++n;
  return n;
}

// Position of the k-th non-space character of text[from, to).
std::optional<std::size_t> nth_word_char(const std::u32string& text,
                                         std::size_t from, std::size_t to,
                                         std::size_t k) {
  for (std::size_t i = from; i < to; ++i) {
    if (is_space(text[i])) continue;
    if (k == 0) return i;
    --k;
  }
  return std::nullopt;
}

// Maps source character p of the row to a target character.
std::optional<std::size_t> map_char(const std::vector<Aligned>& frags,
                                    const std::u32string& src,
                                    const std::u32string& tgt, std::size_t p,
                                    bool is_start) {
  std::optional<std::size_t> index;
  for (std::size_t i = 0; i < frags.size(); ++i) {
    const Aligned& f = frags[i];
    if (f.kind == FragmentKind::kAdded || f.s0 == f.s1) continue;
    if (f.s0 <= p && p < f.s1) {
      index = i;
      break;
    }
    if (is_start && f.s0 > p) {
      index = i;
      p = f.s0;
      break;
    }
    if (!is_start && f.s1 <= p) {
      index = i;
    }
  }
  if (!index) return std::nullopt;
  const Aligned& f = frags[*index];
  if (!is_start && p >= f.s1) p = f.s1 - 1;

  if (f.kind == FragmentKind::kUnchanged) {
    std::size_t k = 0;
    for (std::size_t i = f.s0; i < p; ++i) k += is_space(src[i]) ? 0 : 1;
    if (is_space(src[p]) && !is_start) {
      if (k == 0) return f.t0 == 0 ? std::nullopt : std::optional(f.t0 - 1);
      --k;
    }
    return nth_word_char(tgt, f.t0, f.t1, k);
  }

  // Deleted fragment: pair it with the additions that follow.
  std::size_t a0 = 0;
  std::size_t a1 = 0;
  std::u32string added;
  bool paired = false;
  for (std::size_t j = *index + 1;
       j < frags.size() && frags[j].kind == FragmentKind::kAdded; ++j) {
    if (!paired) a0 = frags[j].t0;
    a1 = frags[j].t1;
    added += frags[j].text;
    paired = true;
  }
  if (!paired) {
    if (is_start) return f.t0;
    return f.t0 == 0 ? std::nullopt : std::optional(f.t0 - 1);
  }
  const std::size_t q = p - f.s0;
  const std::size_t len = f.s1 - f.s0;
  const std::size_t lcp = common_prefix(f.text, added);
  const std::size_t lcs = common_suffix(
      f.text, added, std::min(f.text.size(), added.size()) - lcp);
  if (q < lcp) return a0 + q;
  if (len - q <= lcs) return a1 - (len - q);
  if (is_start) return a0 + lcp;
  if (a1 < lcs + 1) return std::nullopt;
  return a1 - lcs - 1;
}

std::optional<Position> refine_position(const CharacterRange& source_range,
                                        const Hunk& hunk,
                                        const Document& source,
                                        const Document& target,
                                        bool is_start) {
  if (hunk.source_empty()) return std::nullopt;
  const int line = is_start ? source_range.l1() : source_range.l2();
  const WordLine* row = hunk.word_line_for_source(line);
  if (row == nullptr || !row->target_line) return std::nullopt;
  const bool has_delete =
      std::any_of(row->fragments.begin(), row->fragments.end(),
                  [](const Fragment& f) { return f.kind == FragmentKind::kDeleted; });
  if (!has_delete) return std::nullopt;
  if (*row->target_line < 1 || *row->target_line > target.line_count()) {
    return std::nullopt;
  }
  const std::u32string src = decode_utf8(source.line(line));
  const std::u32string tgt = decode_utf8(target.line(*row->target_line));
  const auto frags = align_row(*row, src, tgt);
  if (!frags) return std::nullopt;
  const int col = is_start ? source_range.c1() : source_range.c2();
  if (col < 1 || static_cast<std::size_t>(col) > src.size()) return std::nullopt;
  const auto mapped =
      map_char(*frags, src, tgt, static_cast<std::size_t>(col - 1), is_start);
  if (!mapped || *mapped >= tgt.size()) return std::nullopt;
  return Position{*row->target_line, static_cast<int>(*mapped) + 1};
}

}  // namespace

CharacterRange refine_start(const CharacterRange& source_range,
                            const Hunk& ref_hunk,
                            const CharacterRange& coarse,
                            const Document& source, const Document& target) {
  const auto start =
      refine_position(source_range, ref_hunk, source, target, true);
  if (!start || *start < coarse.start() || *start > coarse.end()) return coarse;
  return make_range(*start, coarse.end());
}

CharacterRange refine_end(const CharacterRange& source_range,
                          const Hunk& ref_hunk, const CharacterRange& coarse,
                          const Document& source, const Document& target) {
  const auto end =
      refine_position(source_range, ref_hunk, source, target, false);
  if (!end || *end > coarse.end() || *end < coarse.start()) return coarse;
  return make_range(coarse.start(), *end);
}

namespace {

// Moves a start position forward off empty lines and line ends.
std::optional<Position> clamp_start(const Document& doc, Position pos) {
  if (pos.line < 1) pos = {1, 1};
  while (pos.line <= doc.line_count()) {
    if (pos.col <= doc.line_length(pos.line)) return pos;
    pos = {pos.line + 1, 1};
  }
  return std::nullopt;
}

// Moves an end position backward off empty lines.
std::optional<Position> clamp_end(const Document& doc, Position pos) {
  if (pos.line > doc.line_count()) {
    pos.line = doc.line_count();
    pos.col = pos.line >= 1 ? doc.line_length(pos.line) : 0;
  }
  while (pos.line >= 1) {
    const int len = doc.line_length(pos.line);
    if (len > 0) {
      pos.col = std::min(pos.col, len);
      return pos;
    }
    --pos.line;
    pos.col = pos.line >= 1 ? doc.line_length(pos.line) : 0;
  }
  return std::nullopt;
}

std::optional<CharacterRange> clamped(const Document& doc, Position start,
                                      Position end) {
  const auto s = clamp_start(doc, start);
  const auto e = clamp_end(doc, end);
  if (!s || !e || *e < *s) return std::nullopt;
  return make_range(*s, *e);
}

class ReportExtractor {
 public:
  ReportExtractor(const std::vector<Hunk>& hunks,
                  const DiffExtractionInput& in)
      : hunks_(hunks), in_(in), src_(*in.source), tgt_(*in.target),
        mapper_(hunks) {}

  std::vector<Candidate> run() {
    check_bounds();
    const int r1 = in_.range.l1();
    const int r2 = in_.range.l2();
    std::vector<bool> covered(static_cast<std::size_t>(r2 - r1 + 1), false);
    int covered_count = 0;
    bool any_overlap = false;
    for (const Hunk& h : hunks_) {
      const OverlapKind kind = classify_overlap(h, in_.range);
      if (kind == OverlapKind::kDisjoint) continue;
      any_overlap = true;
      switch (kind) {
        case OverlapKind::kFullyCovered:
          fully_covered(h);
          break;
        case OverlapKind::kTop:
          top(h);
          break;
        case OverlapKind::kBottom:
          bottom(h);
          break;
        case OverlapKind::kMiddle:
          middle();
          break;
        case OverlapKind::kDisjoint:
          break;
      }
      for (int l = std::max(h.source_start, r1); l <= std::min(h.source_end, r2);
           ++l) {
        if (!covered[l - r1]) {
          covered[l - r1] = true;
          ++covered_count;
        }
      }
      if (covered_count == r2 - r1 + 1) break;
    }
    if (!any_overlap) shifted();
    if (top_start_ && bottom_end_) {
      if (auto r = clamped(tgt_, *top_start_, *bottom_end_)) emit(*r);
    }
    return std::move(out_);
  }

 private:
  void check_bounds() const {
    for (const Hunk& h : hunks_) {
      if (h.target_end > tgt_.line_count() ||
          h.source_end > src_.line_count()) {
        throw Error(ErrorKind::kOutOfBounds,
                    "diff hunk exceeds the file contents");
      }
    }
  }

  // Target position of an unchanged source position.
  Position mapped(int line, int col) const {
    const int target_line = *mapper_.map(line);
    if (target_line < 1 || target_line > tgt_.line_count() ||
        col > tgt_.line_length(target_line)) {
      throw Error(ErrorKind::kOutOfBounds,
                  "mapped position outside the target file");
    }
    return {target_line, col};
  }

  int line_end(int line) const {
    return line >= 1 && line <= tgt_.line_count() ? tgt_.line_length(line) : 0;
  }

  void emit(const CharacterRange& range) {
    Candidate c;
    c.region = Region::at(in_.target_commit, in_.target_file, range);
    c.origin = Origin::kDiff;
    add_unique(out_, std::move(c));
  }

  void fully_covered(const Hunk& h) {
    if (h.target_empty()) {
      Candidate c;
      c.origin = Origin::kDiff;
      c.deletion_anchor = h.target_start;
      add_unique(out_, std::move(c));
      return;
    }
    auto coarse = clamped(tgt_, {h.target_start, 1},
                          {h.target_end, line_end(h.target_end)});
    if (!coarse) return;
    CharacterRange range = *coarse;
    if (in_.refine) {
      range = refine_start(in_.range, h, range, src_, tgt_);
      range = refine_end(in_.range, h, range, src_, tgt_);
    }
    emit(range);
  }

  void top(const Hunk& h) {
    Position end;
    if (mapper_.map(in_.range.l2())) {
      end = mapped(in_.range.l2(), in_.range.c2());
    } else {
      const Hunk* next = mapper_.hunk_containing(in_.range.l2());
      const int line = mapper_.map_floor(next->source_start - 1);
      end = {line, line_end(line)};
    }
    auto coarse = clamped(tgt_, {h.target_start, 1}, end);
    if (!coarse) return;
    CharacterRange range = *coarse;
    if (in_.refine && !h.target_empty()) {
      range = refine_start(in_.range, h, range, src_, tgt_);
    }
    top_start_ = range.start();
    emit(range);
  }

  void bottom(const Hunk& h) {
    Position start;
    if (mapper_.map(in_.range.l1())) {
      start = mapped(in_.range.l1(), in_.range.c1());
    } else {
      const Hunk* prev = mapper_.hunk_containing(in_.range.l1());
      start = {mapper_.map_ceil(prev->source_end + 1), 1};
    }
    const int last = h.target_empty() ? h.target_start - 1 : h.target_end;
    auto coarse = clamped(tgt_, start, {last, line_end(last)});
    if (!coarse) return;
    CharacterRange range = *coarse;
    if (in_.refine && !h.target_empty()) {
      range = refine_end(in_.range, h, range, src_, tgt_);
    }
    bottom_end_ = range.end();
    emit(range);
  }

  void middle() {
    if (!mapper_.map(in_.range.l1()) || !mapper_.map(in_.range.l2())) return;
    const Position start = mapped(in_.range.l1(), in_.range.c1());
    const Position end = mapped(in_.range.l2(), in_.range.c2());
    if (end < start) return;
    emit(make_range(start, end));
  }

  void shifted() {
    const Position start = mapped(in_.range.l1(), in_.range.c1());
    const Position end = mapped(in_.range.l2(), in_.range.c2());
    emit(make_range(start, end));
  }

  const std::vector<Hunk>& hunks_;
  const DiffExtractionInput& in_;
  const Document& src_;
  const Document& tgt_;
  LineMapper mapper_;
  std::optional<Position> top_start_;
  std::optional<Position> bottom_end_;
  std::vector<Candidate> out_;
};

}  // namespace

std::vector<Candidate> extract_report_candidates(
    const std::vector<Hunk>& hunks, const DiffExtractionInput& input) {
  return ReportExtractor(hunks, input).run();
}

std::vector<Candidate> extract_diff_candidates(
    const std::vector<std::vector<Hunk>>& reports,
    const DiffExtractionInput& input) {
  std::vector<Candidate> out;
  if (reports.empty()) {
    for (Candidate& c : extract_report_candidates({}, input)) {
      add_unique(out, std::move(c));
    }
    return out;
  }
  for (const auto& hunks : reports) {
    for (Candidate& c : extract_report_candidates(hunks, input)) {
      add_unique(out, std::move(c));
    }
  }
  return out;
}

}  // namespace codemap
