#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "codemap/candidate.hpp"
#include "codemap/region.hpp"

namespace codemap {

/// Every occurrence of `needle` in the target text, overlapping ones
/// included, in ascending order. Empty needles match nothing.
std::vector<Candidate> search_text(std::string_view needle,
                                   const Document& target,
                                   const std::string& target_commit,
                                   const std::string& target_file);

}  // namespace codemap
