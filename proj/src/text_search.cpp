#include "codemap/text_search.hpp"

namespace codemap {

std::vector<Candidate> search_text(std::string_view needle,
                                   const Document& target,
                                   const std::string& target_commit,
                                   const std::string& target_file) {
  std::vector<Candidate> out;
  if (needle.empty()) return out;
  const std::string_view hay = target.text();
  const std::size_t width = utf8_length(needle);
  for (std::size_t pos = hay.find(needle); pos != std::string_view::npos;
       pos = hay.find(needle, pos + 1)) {
    const std::size_t first = target.char_offset_of_byte(pos);
    // A match that begins inside a multi-byte sequence is not a character
    // boundary match.
    if (target.byte_offset(first) != pos) continue;
    const Position start = target.position_at(first);
    const Position end = target.position_at(first + width - 1);
    const CharacterRange range = make_range(start, end);
    if (!target.contains(range)) continue;
    Candidate c;
    c.region = Region::at(target_commit, target_file, range);
    c.origin = Origin::kSearch;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace codemap
