// AVX2 variants. This file is compiled with -mavx2 -mpopcnt and must only be
// entered after a runtime CPU check (see dispatch.cpp).

#include <immintrin.h>

#include "patternset/kernels.hpp"

namespace patternset::kernels {
namespace {

// Nibble-LUT population count, four 64-bit lane sums.
inline __m256i popcount_lanes(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low);
  const __m256i counts = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
  return _mm256_sad_epu8(counts, _mm256_setzero_si256());
}

inline std::uint64_t horizontal_sum(__m256i acc) {
  const __m128i sum = _mm_add_epi64(_mm256_castsi256_si128(acc), _mm256_extracti128_si256(acc, 1));
  return static_cast<std::uint64_t>(_mm_cvtsi128_si64(sum)) +
         static_cast<std::uint64_t>(_mm_extract_epi64(sum, 1));
}

inline __m256i load(const Word* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }

std::uint64_t count_and(const Word* a, const Word* b, std::size_t words) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    acc = _mm256_add_epi64(acc, popcount_lanes(_mm256_and_si256(load(a + i), load(b + i))));
  }
  std::uint64_t total = horizontal_sum(acc);
  for (; i < words; ++i) total += _mm_popcnt_u64(a[i] & b[i]);
  return total;
}

std::uint64_t count_xor(const Word* a, const Word* b, std::size_t words) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    acc = _mm256_add_epi64(acc, popcount_lanes(_mm256_xor_si256(load(a + i), load(b + i))));
  }
  std::uint64_t total = horizontal_sum(acc);
  for (; i < words; ++i) total += _mm_popcnt_u64(a[i] ^ b[i]);
  return total;
}

std::uint64_t count_or_xor(const Word* a, const Word* extra, const Word* b, std::size_t words) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    const __m256i cover = _mm256_or_si256(load(a + i), load(extra + i));
    acc = _mm256_add_epi64(acc, popcount_lanes(_mm256_xor_si256(cover, load(b + i))));
  }
  std::uint64_t total = horizontal_sum(acc);
  for (; i < words; ++i) total += _mm_popcnt_u64((a[i] | extra[i]) ^ b[i]);
  return total;
}

CellCounts count_uncovered(const Word* mask, const Word* covered, const Word* data,
                           std::size_t words) {
  __m256i fresh_acc = _mm256_setzero_si256();
  __m256i ones_acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    const __m256i fresh = _mm256_andnot_si256(load(covered + i), load(mask + i));
    fresh_acc = _mm256_add_epi64(fresh_acc, popcount_lanes(fresh));
    ones_acc = _mm256_add_epi64(ones_acc, popcount_lanes(_mm256_and_si256(fresh, load(data + i))));
  }
  std::uint64_t fresh_total = horizontal_sum(fresh_acc);
  std::uint64_t ones = horizontal_sum(ones_acc);
  for (; i < words; ++i) {
    const Word m = mask[i] & ~covered[i];
    fresh_total += _mm_popcnt_u64(m);
    ones += _mm_popcnt_u64(m & data[i]);
  }
  return {ones, fresh_total - ones};
}

void or_into(Word* dst, const Word* src, std::size_t words) {
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    const __m256i v = _mm256_or_si256(load(dst + i), load(src + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), v);
  }
  for (; i < words; ++i) dst[i] |= src[i];
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{count_and, count_xor, count_or_xor, count_uncovered, or_into};
  return table;
}

}  // namespace patternset::kernels
