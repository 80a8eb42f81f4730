// NEON variants for aarch64, where Advanced SIMD is architecturally guaranteed.

#include <arm_neon.h>

#include <bit>

#include "patternset/kernels.hpp"

namespace patternset::kernels {
namespace {

inline uint64x2_t popcount_lanes(uint64x2_t v) {
  return vpaddlq_u32(vpaddlq_u16(vpaddlq_u8(vcntq_u8(vreinterpretq_u8_u64(v)))));
}

inline std::uint64_t horizontal_sum(uint64x2_t acc) { return vgetq_lane_u64(acc, 0) + vgetq_lane_u64(acc, 1); }

std::uint64_t count_and(const Word* a, const Word* b, std::size_t words) {
  uint64x2_t acc = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + 2 <= words; i += 2) {
    acc = vaddq_u64(acc, popcount_lanes(vandq_u64(vld1q_u64(a + i), vld1q_u64(b + i))));
  }
  std::uint64_t total = horizontal_sum(acc);
  for (; i < words; ++i) total += std::popcount(a[i] & b[i]);
  return total;
}

std::uint64_t count_xor(const Word* a, const Word* b, std::size_t words) {
  uint64x2_t acc = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + 2 <= words; i += 2) {
    acc = vaddq_u64(acc, popcount_lanes(veorq_u64(vld1q_u64(a + i), vld1q_u64(b + i))));
  }
  std::uint64_t total = horizontal_sum(acc);
  for (; i < words; ++i) total += std::popcount(a[i] ^ b[i]);
  return total;
}

std::uint64_t count_or_xor(const Word* a, const Word* extra, const Word* b, std::size_t words) {
  uint64x2_t acc = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + 2 <= words; i += 2) {
    const uint64x2_t cover = vorrq_u64(vld1q_u64(a + i), vld1q_u64(extra + i));
    acc = vaddq_u64(acc, popcount_lanes(veorq_u64(cover, vld1q_u64(b + i))));
  }
  std::uint64_t total = horizontal_sum(acc);
  for (; i < words; ++i) total += std::popcount((a[i] | extra[i]) ^ b[i]);
  return total;
}

CellCounts count_uncovered(const Word* mask, const Word* covered, const Word* data,
                           std::size_t words) {
  uint64x2_t fresh_acc = vdupq_n_u64(0);
  uint64x2_t ones_acc = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + 2 <= words; i += 2) {
    const uint64x2_t fresh = vbicq_u64(vld1q_u64(mask + i), vld1q_u64(covered + i));
    fresh_acc = vaddq_u64(fresh_acc, popcount_lanes(fresh));
    ones_acc = vaddq_u64(ones_acc, popcount_lanes(vandq_u64(fresh, vld1q_u64(data + i))));
  }
  std::uint64_t fresh_total = horizontal_sum(fresh_acc);
  std::uint64_t ones = horizontal_sum(ones_acc);
  for (; i < words; ++i) {
    const Word m = mask[i] & ~covered[i];
    fresh_total += std::popcount(m);
    ones += std::popcount(m & data[i]);
  }
  return {ones, fresh_total - ones};
}

void or_into(Word* dst, const Word* src, std::size_t words) {
  std::size_t i = 0;
  for (; i + 2 <= words; i += 2) vst1q_u64(dst + i, vorrq_u64(vld1q_u64(dst + i), vld1q_u64(src + i)));
  for (; i < words; ++i) dst[i] |= src[i];
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{count_and, count_xor, count_or_xor, count_uncovered, or_into};
  return table;
}

}  // namespace patternset::kernels
