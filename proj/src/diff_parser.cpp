#include "codemap/diff_parser.hpp"

#include <charconv>

#include "codemap/error.hpp"
#include "codemap/git_gateway.hpp"

namespace codemap {

std::string WordLine::source_text() const {
  std::string out;
  for (const Fragment& f : fragments) {
    if (f.kind != FragmentKind::kAdded) out += f.text;
  }
  return out;
}

std::string WordLine::target_text() const {
  std::string out;
  for (const Fragment& f : fragments) {
    if (f.kind != FragmentKind::kDeleted) out += f.text;
  }
  return out;
}

const WordLine* Hunk::word_line_for_source(int line) const {
  for (const WordLine& row : word_lines) {
    if (row.source_line == line) return &row;
  }
  return nullptr;
}

namespace {

[[noreturn]] void malformed(const std::string& what, int line_no) {
  throw Error(ErrorKind::kMalformedDiff,
              "malformed diff at line " + std::to_string(line_no) + ": " +
                  what);
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    const std::size_t nl = text_.find('\n', pos_);
    const std::size_t stop = nl == std::string_view::npos ? text_.size() : nl;
    line = text_.substr(pos_, stop - pos_);
    pos_ = stop + 1;
    ++line_no_;
    return true;
  }
  void unread(std::string_view line) {
    pos_ -= line.size() + 1;
    --line_no_;
  }
  int line_no() const { return line_no_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_no_ = 0;
};

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && out >= 0;
}

// Parses "-a[,b]" or "+c[,d]" into start/end line bounds.
bool parse_side(std::string_view spec, int& start, int& end) {
  int first = 0;
  int count = 1;
  const std::size_t comma = spec.find(',');
  if (!parse_int(spec.substr(0, comma), first)) return false;
  if (comma != std::string_view::npos &&
      !parse_int(spec.substr(comma + 1), count)) {
    return false;
  }
  if (count == 0) {
    start = first + 1;
    end = first;
  } else {
    start = first;
    end = first + count - 1;
  }
  return true;
}

bool is_header(std::string_view line) { return line.rfind("@@ -", 0) == 0; }

Hunk parse_header(std::string_view line, int line_no) {
  // @@ -a,b +c,d @@ optional section heading
  const std::size_t minus = 3;
  const std::size_t space = line.find(' ', minus);
  if (space == std::string_view::npos || space + 1 >= line.size() ||
      line[space + 1] != '+') {
    malformed("bad hunk header", line_no);
  }
  const std::size_t close = line.find(" @@", space + 1);
  if (close == std::string_view::npos) malformed("bad hunk header", line_no);
  Hunk hunk;
  if (!parse_side(line.substr(minus + 1, space - minus - 1), hunk.source_start,
                  hunk.source_end) ||
      !parse_side(line.substr(space + 2, close - space - 2), hunk.target_start,
                  hunk.target_end)) {
    malformed("bad hunk range", line_no);
  }
  return hunk;
}

}  // namespace

std::vector<Hunk> parse_line_diff(std::string_view report) {
  std::vector<Hunk> hunks;
  LineReader reader(report);
  std::string_view line;
  while (reader.next(line)) {
    if (!is_header(line)) continue;
    Hunk hunk = parse_header(line, reader.line_no());
    int src = hunk.source_start;
    int tgt = hunk.target_start;
    int src_left = hunk.source_count();
    int tgt_left = hunk.target_count();
    while ((src_left > 0 || tgt_left > 0) && reader.next(line)) {
      if (line.empty()) malformed("empty record inside hunk", reader.line_no());
      const std::string text(line.substr(1));
      switch (line.front()) {
        case '-':
          if (src_left-- == 0) malformed("too many deletions", reader.line_no());
          hunk.ops.push_back({LineOpKind::kDelete, text, src++, std::nullopt});
          break;
        case '+':
          if (tgt_left-- == 0) malformed("too many additions", reader.line_no());
          hunk.ops.push_back({LineOpKind::kAdd, text, std::nullopt, tgt++});
          break;
        case ' ':
          if (src_left-- == 0 || tgt_left-- == 0) {
            malformed("too many context lines", reader.line_no());
          }
          hunk.ops.push_back({LineOpKind::kUnchanged, text, src++, tgt++});
          break;
        case '\\':
          break;
        default:
          malformed("unexpected record inside hunk", reader.line_no());
      }
    }
    if (src_left > 0 || tgt_left > 0) {
      malformed("hunk shorter than its header", reader.line_no());
    }
    if (!hunks.empty() && hunk.source_start < hunks.back().source_start) {
      malformed("hunks out of order", reader.line_no());
    }
    hunks.push_back(std::move(hunk));
  }
  return hunks;
}

namespace {

struct Row {
  std::vector<Fragment> fragments;
  bool has_source = false;
  bool has_target = false;
};

// Decides which side's line each newline record terminates and numbers the
// rows. Returns false when the result disagrees with the header counts.
bool assign_rows(const std::vector<Row>& rows, Hunk& hunk) {
  int src_left = hunk.source_count();
  int tgt_left = hunk.target_count();
  int src = hunk.source_start;
  int tgt = hunk.target_start;
  bool prev_source = src_left > 0;
  bool prev_target = tgt_left > 0;
  std::vector<WordLine> lines;
  for (const Row& row : rows) {
    bool source = row.has_source;
    bool target = row.has_target;
    if (!source && !target) {
      if (src_left > 0 && tgt_left > 0) {
        source = prev_source;
        target = prev_target;
      } else {
        source = src_left > 0;
        target = tgt_left > 0;
      }
    }
    if ((source && src_left == 0) || (target && tgt_left == 0)) return false;
    WordLine line;
    line.fragments = row.fragments;
    if (source) {
      line.source_line = src++;
      --src_left;
    }
    if (target) {
      line.target_line = tgt++;
      --tgt_left;
    }
    prev_source = source;
    prev_target = target;
    lines.push_back(std::move(line));
  }
  if (src_left != 0 || tgt_left != 0) return false;
  hunk.word_lines = std::move(lines);
  return true;
}

void build_ops(Hunk& hunk) {
  for (const WordLine& row : hunk.word_lines) {
    bool changed = false;
    for (const Fragment& f : row.fragments) {
      changed = changed || f.kind != FragmentKind::kUnchanged;
    }
    if (row.source_line && row.target_line && !changed) {
      hunk.ops.push_back({LineOpKind::kUnchanged, row.target_text(),
                          row.source_line, row.target_line});
      continue;
    }
    if (row.source_line) {
      hunk.ops.push_back(
          {LineOpKind::kDelete, row.source_text(), row.source_line, std::nullopt});
    }
    if (row.target_line) {
      hunk.ops.push_back(
          {LineOpKind::kAdd, row.target_text(), std::nullopt, row.target_line});
    }
  }
}

}  // namespace

std::vector<Hunk> parse_word_diff(std::string_view report) {
  std::vector<Hunk> hunks;
  LineReader reader(report);
  std::string_view line;
  while (reader.next(line)) {
    if (!is_header(line)) continue;
    Hunk hunk = parse_header(line, reader.line_no());
    std::vector<Row> rows;
    Row current;
    bool pending = false;
    while (reader.next(line)) {
      if (is_header(line)) {
        reader.unread(line);
        break;
      }
      if (line.empty()) malformed("empty record inside hunk", reader.line_no());
      const char tag = line.front();
      if (tag == '~') {
        rows.push_back(std::move(current));
        current = Row();
        pending = false;
        continue;
      }
      if (tag == '\\') continue;
      if (tag != ' ' && tag != '-' && tag != '+') {
        // Start of another file section.
        reader.unread(line);
        break;
      }
      Fragment fragment;
      fragment.text = std::string(line.substr(1));
      if (tag == ' ') {
        fragment.kind = FragmentKind::kUnchanged;
        current.has_source = true;
        current.has_target = true;
      } else if (tag == '-') {
        fragment.kind = FragmentKind::kDeleted;
        current.has_source = true;
      } else {
        fragment.kind = FragmentKind::kAdded;
        current.has_target = true;
      }
      current.fragments.push_back(std::move(fragment));
      pending = true;
    }
    if (pending) rows.push_back(std::move(current));
    if (assign_rows(rows, hunk)) build_ops(hunk);
    if (!hunks.empty() && hunk.source_start < hunks.back().source_start) {
      malformed("hunks out of order", reader.line_no());
    }
    hunks.push_back(std::move(hunk));
  }
  return hunks;
}

std::vector<Hunk> parse_report(const RawDiffReport& report) {
  return report.config.granularity == DiffGranularity::kWord
             ? parse_word_diff(report.text)
             : parse_line_diff(report.text);
}

}  // namespace codemap
