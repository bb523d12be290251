#include "codemap/levenshtein.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "codemap/region.hpp"

namespace codemap {

namespace {

using Word = std::uint64_t;
constexpr std::size_t kBits = 64;

// Match masks of the pattern, one word per 64-character block.
class PatternMasks {
 public:
  PatternMasks(std::u32string_view pattern)
      : blocks_((pattern.size() + kBits - 1) / kBits),
        ascii_(blocks_ * 128, 0) {
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      const std::size_t block = i / kBits;
      const Word bit = Word{1} << (i % kBits);
      const char32_t c = pattern[i];
      if (c < 128) {
        ascii_[block * 128 + c] |= bit;
      } else {
        auto& masks = other_[c];
        masks.resize(blocks_, 0);
        masks[block] |= bit;
      }
    }
  }

  std::size_t blocks() const { return blocks_; }

  Word get(std::size_t block, char32_t c) const {
    if (c < 128) return ascii_[block * 128 + c];
    const auto it = other_.find(c);
    return it == other_.end() ? 0 : it->second[block];
  }

 private:
  std::size_t blocks_;
  std::vector<Word> ascii_;
  std::unordered_map<char32_t, std::vector<Word>> other_;
};

std::size_t myers_distance(std::u32string_view pattern,
                           std::u32string_view text) {
  const PatternMasks masks(pattern);
  const std::size_t blocks = masks.blocks();
  std::vector<Word> pv(blocks, ~Word{0});
  std::vector<Word> mv(blocks, 0);
  const Word last_bit = Word{1} << ((pattern.size() - 1) % kBits);
  std::size_t score = pattern.size();

  for (const char32_t c : text) {
    // Horizontal delta entering the top of the block: +1 in the first row.
    int hin = 1;
    for (std::size_t b = 0; b < blocks; ++b) {
      Word eq = masks.get(b, c);
      const Word p = pv[b];
      const Word m = mv[b];
      const Word hin_neg = hin < 0 ? 1 : 0;
      const Word hin_pos = hin > 0 ? 1 : 0;
      const Word xv = eq | m;
      eq |= hin_neg;
      const Word xh = (((eq & p) + p) ^ p) | eq;
      Word ph = m | ~(xh | p);
      Word mh = p & xh;
      const Word out_bit = b + 1 == blocks ? last_bit : Word{1} << (kBits - 1);
      int hout = 0;
      if (ph & out_bit) hout = 1;
      if (mh & out_bit) hout = -1;
      ph = (ph << 1) | hin_pos;
      mh = (mh << 1) | hin_neg;
      pv[b] = mh | ~(xv | ph);
      mv[b] = ph & xv;
      hin = hout;
    }
    score = static_cast<std::size_t>(static_cast<long long>(score) + hin);
  }
  return score;
}

}  // namespace

std::size_t levenshtein_distance(std::u32string_view a, std::u32string_view b) {
  while (!a.empty() && !b.empty() && a.front() == b.front()) {
    a.remove_prefix(1);
    b.remove_prefix(1);
  }
  while (!a.empty() && !b.empty() && a.back() == b.back()) {
    a.remove_suffix(1);
    b.remove_suffix(1);
  }
  if (a.size() > b.size()) std::swap(a, b);
  if (a.empty()) return b.size();
  return myers_distance(a, b);
}

std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
  return levenshtein_distance(decode_utf8(a), decode_utf8(b));
}

double levenshtein_similarity(std::string_view a, std::string_view b) {
  const std::u32string x = decode_utf8(a);
  const std::u32string y = decode_utf8(b);
  const std::size_t longest = std::max(x.size(), y.size());
  if (longest == 0) return 1.0;
  const std::size_t d = levenshtein_distance(x, y);
  return 1.0 - static_cast<double>(d) / static_cast<double>(longest);
}

}  // namespace codemap
