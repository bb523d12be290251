#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace codemap {

/// 1-based (line, column) pair. Columns count Unicode scalar values.
struct Position {
  int line = 1;
  int col = 1;

  auto operator<=>(const Position&) const = default;
};

/// Inclusive span (l1, c1) .. (l2, c2) inside one file version.
///
/// Both endpoints name characters that belong to the range, so a
/// single-character range has (l1, c1) == (l2, c2). Construction validates the
/// ordering invariants; bounds against a concrete file are checked by
/// Document.
class CharacterRange {
 public:
  /// Throws Error{kInvalidRange} when the ordering invariants do not hold.
  CharacterRange(int l1, int c1, int l2, int c2);

  int l1() const { return l1_; }
  int c1() const { return c1_; }
  int l2() const { return l2_; }
  int c2() const { return c2_; }
  Position start() const { return {l1_, c1_}; }
  Position end() const { return {l2_, c2_}; }

  auto operator<=>(const CharacterRange&) const = default;

 private:
  int l1_;
  int c1_;
  int l2_;
  int c2_;
};

CharacterRange make_range(int l1, int c1, int l2, int c2);
CharacterRange make_range(Position start, Position end);

std::string to_string(const CharacterRange& range);

/// A code region pinned to a commit and a file, or the distinguished Deleted
/// value for code that has no counterpart.
class Region {
 public:
  static Region at(std::string commit, std::string file, CharacterRange range);
  static Region deleted() { return Region(); }

  bool is_deleted() const { return !range_.has_value(); }
  const std::string& commit() const { return commit_; }
  const std::string& file() const { return file_; }
  /// Precondition: !is_deleted().
  const CharacterRange& range() const { return *range_; }

  bool operator==(const Region&) const = default;

 private:
  Region() = default;

  std::string commit_;
  std::string file_;
  std::optional<CharacterRange> range_;
};

std::string to_string(const Region& region);

/// Half-open interval of 0-based character offsets into a normalized file.
struct AbsInterval {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  auto operator<=>(const AbsInterval&) const = default;
};

/// Converts CRLF and lone CR line terminators to "\n".
std::string normalize_newlines(std::string_view text);

/// Lenient UTF-8 decoding: every invalid byte becomes one U+FFFD character.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);
std::size_t utf8_length(std::string_view text);

/// Newline-normalized file text with a line index for character arithmetic.
///
/// Line numbers and columns are 1-based. A trailing "\n" terminates the last
/// line rather than opening an empty one, so "a\nb\n" has two lines.
class Document {
 public:
  Document() = default;
  explicit Document(std::string_view text);

  const std::string& text() const { return text_; }
  int line_count() const { return static_cast<int>(line_start_byte_.size()); }
  std::size_t char_count() const { return char_count_; }

  /// Line content without its terminating newline. Throws kOutOfBounds.
  std::string_view line(int line) const;
  /// Length of the line in characters, excluding the newline.
  int line_length(int line) const;

  /// True when the range lies inside the file: both endpoints address
  /// existing characters (never a newline position).
  bool contains(const CharacterRange& range) const;

  /// Throws kOutOfBounds when the position is outside the line; col may be
  /// line_length + 1 to address the newline (or end of text) after the line.
  std::size_t char_offset(Position pos) const;
  /// Inverse of char_offset for offsets in [0, char_count()).
  Position position_at(std::size_t char_offset) const;

  AbsInterval to_abs_interval(const CharacterRange& range) const;
  std::string extract(const CharacterRange& range) const;
  std::string_view slice(AbsInterval interval) const;

  std::size_t byte_offset(std::size_t char_offset) const;
  std::size_t char_offset_of_byte(std::size_t byte_offset) const;

  /// The range spanning the whole text. Requires at least one character.
  CharacterRange full_range() const;

 private:
  void check_line(int line) const;

  std::string text_;
  std::vector<std::size_t> line_start_byte_;
  std::vector<std::size_t> line_start_char_;
  std::vector<int> line_length_;
  std::size_t char_count_ = 0;
  bool ascii_ = true;
};

/// Free-function forms over raw text; the text is normalized first.
AbsInterval to_abs_interval(std::string_view file_text,
                            const CharacterRange& range);
std::string extract_text(std::string_view file_text,
                         const CharacterRange& range);

}  // namespace codemap
