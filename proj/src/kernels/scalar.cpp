#include <bit>

#include "patternset/kernels.hpp"

namespace patternset::kernels {
namespace {

std::uint64_t count_and(const Word* a, const Word* b, std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i) total += std::popcount(a[i] & b[i]);
  return total;
}

std::uint64_t count_xor(const Word* a, const Word* b, std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i) total += std::popcount(a[i] ^ b[i]);
  return total;
}

std::uint64_t count_or_xor(const Word* a, const Word* extra, const Word* b, std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i) total += std::popcount((a[i] | extra[i]) ^ b[i]);
  return total;
}

CellCounts count_uncovered(const Word* mask, const Word* covered, const Word* data,
                           std::size_t words) {
  std::uint64_t fresh = 0;
  std::uint64_t ones = 0;
  for (std::size_t i = 0; i < words; ++i) {
    const Word m = mask[i] & ~covered[i];
    fresh += std::popcount(m);
    ones += std::popcount(m & data[i]);
  }
  return {ones, fresh - ones};
}

void or_into(Word* dst, const Word* src, std::size_t words) {
  for (std::size_t i = 0; i < words; ++i) dst[i] |= src[i];
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{count_and, count_xor, count_or_xor, count_uncovered, or_into};
  return table;
}

}  // namespace patternset::kernels
