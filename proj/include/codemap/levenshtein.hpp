#pragma once

#include <cstddef>
#include <string_view>

namespace codemap {

/// Unit-cost edit distance over code points (bit-parallel, any length).
std::size_t levenshtein_distance(std::u32string_view a, std::u32string_view b);
/// As above on UTF-8 input.
std::size_t levenshtein_distance(std::string_view a, std::string_view b);

/// 1 - distance / max(len(a), len(b)) in code points; 1 when both are empty.
double levenshtein_similarity(std::string_view a, std::string_view b);

}  // namespace codemap
