#include "codemap/region.hpp"

#include <algorithm>

#include "codemap/error.hpp"

namespace codemap {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidRange:
      return "InvalidRange";
    case ErrorKind::kOutOfBounds:
      return "OutOfBounds";
    case ErrorKind::kRepoError:
      return "RepoError";
    case ErrorKind::kNotFound:
      return "NotFound";
    case ErrorKind::kBinaryFile:
      return "BinaryFile";
    case ErrorKind::kDiffToolFailure:
      return "DiffToolFailure";
    case ErrorKind::kMalformedDiff:
      return "MalformedDiff";
    case ErrorKind::kFileMismatch:
      return "FileMismatch";
    case ErrorKind::kDatasetError:
      return "DatasetError";
  }
  return "Unknown";
}

CharacterRange::CharacterRange(int l1, int c1, int l2, int c2)
    : l1_(l1), c1_(c1), l2_(l2), c2_(c2) {
  if (l1 < 1 || c1 < 1 || l2 < 1 || c2 < 1) {
    throw Error(ErrorKind::kInvalidRange,
                "range components must be >= 1: " + to_string(*this));
  }
  if (l1 > l2 || (l1 == l2 && c1 > c2)) {
    throw Error(ErrorKind::kInvalidRange,
                "range start after end: " + to_string(*this));
  }
}

CharacterRange make_range(int l1, int c1, int l2, int c2) {
  return CharacterRange(l1, c1, l2, c2);
}

CharacterRange make_range(Position start, Position end) {
  return CharacterRange(start.line, start.col, end.line, end.col);
}

std::string to_string(const CharacterRange& range) {
  return std::to_string(range.l1()) + ":" + std::to_string(range.c1()) + "-" +
         std::to_string(range.l2()) + ":" + std::to_string(range.c2());
}

Region Region::at(std::string commit, std::string file, CharacterRange range) {
  if (commit.empty() || file.empty()) {
    throw Error(ErrorKind::kInvalidRange,
                "region requires a commit and a file path");
  }
  Region region;
  region.commit_ = std::move(commit);
  region.file_ = std::move(file);
  region.range_ = range;
  return region;
}

std::string to_string(const Region& region) {
  if (region.is_deleted()) return "deleted";
  return region.file() + "@" + region.commit() + ":" +
         to_string(region.range());
}

std::string normalize_newlines(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\r') {
      out.push_back('\n');
      if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

namespace {

// Length of the UTF-8 sequence starting at text[i], or 0 when invalid.
std::size_t sequence_length(std::string_view text, std::size_t i) {
  const auto lead = static_cast<unsigned char>(text[i]);
  std::size_t len = 0;
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0 && lead >= 0xC2) {
    len = 2;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
  } else if ((lead & 0xF8) == 0xF0 && lead <= 0xF4) {
    len = 4;
  } else {
    return 0;
  }
  if (i + len > text.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) return 0;
  }
  return len;
}

char32_t decode_at(std::string_view text, std::size_t i, std::size_t len) {
  const auto b = [&](std::size_t k) {
    return static_cast<char32_t>(static_cast<unsigned char>(text[i + k]));
  };
  switch (len) {
    case 1:
      return b(0);
    case 2:
      return ((b(0) & 0x1F) << 6) | (b(1) & 0x3F);
    case 3:
      return ((b(0) & 0x0F) << 12) | ((b(1) & 0x3F) << 6) | (b(2) & 0x3F);
    case 4:
      return ((b(0) & 0x07) << 18) | ((b(1) & 0x3F) << 12) |
             ((b(2) & 0x3F) << 6) | (b(3) & 0x3F);
  }
  return U'�';
}

// Byte width of the character starting at i; invalid bytes count as one.
std::size_t char_width(std::string_view text, std::size_t i) {
  const std::size_t len = sequence_length(text, i);
  return len == 0 ? 1 : len;
}

}  // namespace

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    const std::size_t len = sequence_length(text, i);
    if (len == 0) {
      out.push_back(U'�');
      ++i;
    } else {
      out.push_back(decode_at(text, i, len));
      i += len;
    }
  }
  return out;
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (c >> 12)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (c >> 18)));
      out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

std::size_t utf8_length(std::string_view text) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < text.size(); i += char_width(text, i)) ++n;
  return n;
}

Document::Document(std::string_view text) : text_(normalize_newlines(text)) {
  ascii_ = std::all_of(text_.begin(), text_.end(), [](char c) {
    return static_cast<unsigned char>(c) < 0x80;
  });
  std::size_t byte = 0;
  std::size_t chars = 0;
  while (byte < text_.size()) {
    line_start_byte_.push_back(byte);
    line_start_char_.push_back(chars);
    const std::size_t nl = text_.find('\n', byte);
    const std::size_t stop = nl == std::string::npos ? text_.size() : nl;
    const std::size_t len =
        ascii_ ? stop - byte
               : utf8_length(std::string_view(text_).substr(byte, stop - byte));
    line_length_.push_back(static_cast<int>(len));
    chars += len;
    if (nl == std::string::npos) {
      byte = text_.size();
    } else {
      chars += 1;
      byte = nl + 1;
    }
  }
  char_count_ = chars;
}

void Document::check_line(int line) const {
  if (line < 1 || line > line_count()) {
    throw Error(ErrorKind::kOutOfBounds,
                "line " + std::to_string(line) + " outside file of " +
                    std::to_string(line_count()) + " lines");
  }
}

std::string_view Document::line(int line) const {
  check_line(line);
  const std::size_t start = line_start_byte_[line - 1];
  const std::size_t nl = text_.find('\n', start);
  const std::size_t stop = nl == std::string::npos ? text_.size() : nl;
  return std::string_view(text_).substr(start, stop - start);
}

int Document::line_length(int line) const {
  check_line(line);
  return line_length_[line - 1];
}

bool Document::contains(const CharacterRange& range) const {
  if (range.l1() > line_count() || range.l2() > line_count()) return false;
  return range.c1() <= line_length_[range.l1() - 1] &&
         range.c2() <= line_length_[range.l2() - 1];
}

std::size_t Document::char_offset(Position pos) const {
  check_line(pos.line);
  if (pos.col < 1 || pos.col > line_length_[pos.line - 1] + 1) {
    throw Error(ErrorKind::kOutOfBounds,
                "column " + std::to_string(pos.col) + " outside line " +
                    std::to_string(pos.line));
  }
  return line_start_char_[pos.line - 1] + static_cast<std::size_t>(pos.col - 1);
}

Position Document::position_at(std::size_t offset) const {
  if (offset >= char_count_) {
    throw Error(ErrorKind::kOutOfBounds,
                "offset " + std::to_string(offset) + " beyond end of text");
  }
  const auto it = std::upper_bound(line_start_char_.begin(),
                                   line_start_char_.end(), offset);
  const auto index = static_cast<int>(it - line_start_char_.begin()) - 1;
  return {index + 1,
          static_cast<int>(offset - line_start_char_[index]) + 1};
}

AbsInterval Document::to_abs_interval(const CharacterRange& range) const {
  if (!contains(range)) {
    throw Error(ErrorKind::kOutOfBounds,
                "range " + to_string(range) + " outside file");
  }
  return {char_offset(range.start()), char_offset(range.end()) + 1};
}

std::size_t Document::byte_offset(std::size_t offset) const {
  if (ascii_) return std::min(offset, text_.size());
  if (offset >= char_count_) return text_.size();
  const Position pos = position_at(offset);
  std::size_t byte = line_start_byte_[pos.line - 1];
  for (int c = 1; c < pos.col; ++c) byte += char_width(text_, byte);
  return byte;
}

std::size_t Document::char_offset_of_byte(std::size_t byte) const {
  if (ascii_) return byte;
  if (byte >= text_.size()) return char_count_;
  const auto it = std::upper_bound(line_start_byte_.begin(),
                                   line_start_byte_.end(), byte);
  const auto index = static_cast<std::size_t>(it - line_start_byte_.begin()) - 1;
  std::size_t chars = line_start_char_[index];
  for (std::size_t b = line_start_byte_[index]; b < byte;
       b += char_width(text_, b)) {
    ++chars;
  }
  return chars;
}

std::string_view Document::slice(AbsInterval interval) const {
  const std::size_t begin = byte_offset(interval.start);
  const std::size_t end = byte_offset(interval.end);
  return std::string_view(text_).substr(begin, end - begin);
}

std::string Document::extract(const CharacterRange& range) const {
  return std::string(slice(to_abs_interval(range)));
}

CharacterRange Document::full_range() const {
  int first = 1;
  while (first <= line_count() && line_length_[first - 1] == 0) ++first;
  if (first > line_count()) {
    throw Error(ErrorKind::kOutOfBounds, "file has no addressable text");
  }
  int last = line_count();
  while (line_length_[last - 1] == 0) --last;
  return make_range(first, 1, last, line_length_[last - 1]);
}

AbsInterval to_abs_interval(std::string_view file_text,
                            const CharacterRange& range) {
  return Document(file_text).to_abs_interval(range);
}

std::string extract_text(std::string_view file_text,
                         const CharacterRange& range) {
  return Document(file_text).extract(range);
}

}  // namespace codemap
