#pragma once

// Packed-bit row kernels behind coverage and reconstruction-error counting.
//
// Every kernel works on rows of 64-bit words. A scalar reference version is
// always built; vectorized variants (AVX2 on x86-64, NEON on aarch64) are
// compiled into separate translation units and picked at runtime. All
// variants must return identical results for identical inputs.

#include <cstddef>
#include <cstdint>
#include <span>

namespace patternset::kernels {

using Word = std::uint64_t;

inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

struct CellCounts {
  std::uint64_t ones = 0;
  std::uint64_t zeros = 0;

  friend bool operator==(const CellCounts&, const CellCounts&) = default;
};

enum class Backend { scalar, avx2, neon };

const char* to_string(Backend backend);

// Raw function table; all pointers take `words` elements per operand.
struct KernelTable {
  // popcount(a & b)
  std::uint64_t (*count_and)(const Word* a, const Word* b, std::size_t words);
  // popcount(a ^ b)
  std::uint64_t (*count_xor)(const Word* a, const Word* b, std::size_t words);
  // popcount((a | extra) ^ b)
  std::uint64_t (*count_or_xor)(const Word* a, const Word* extra, const Word* b, std::size_t words);
  // cells of `mask` not yet in `covered`, split by whether `data` has a 1 there
  CellCounts (*count_uncovered)(const Word* mask, const Word* covered, const Word* data,
                                std::size_t words);
  // dst |= src
  void (*or_into)(Word* dst, const Word* src, std::size_t words);
};

const KernelTable& scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_table();
#endif
#if defined(__aarch64__)
const KernelTable& neon_table();
#endif

bool backend_available(Backend backend);
const KernelTable& table_for(Backend backend);

// Best backend the running CPU supports, unless PATTERNSET_SIMD=scalar|avx2|neon
// overrides it or force_backend() was called.
Backend active_backend();
const KernelTable& active();

// Throws patternset::Error if the backend is unavailable on this CPU.
void force_backend(Backend backend);
void reset_backend();

inline std::uint64_t count_and(std::span<const Word> a, std::span<const Word> b) {
  return active().count_and(a.data(), b.data(), a.size());
}

inline std::uint64_t count_xor(std::span<const Word> a, std::span<const Word> b) {
  return active().count_xor(a.data(), b.data(), a.size());
}

inline std::uint64_t count_or_xor(std::span<const Word> a, std::span<const Word> extra,
                                  std::span<const Word> b) {
  return active().count_or_xor(a.data(), extra.data(), b.data(), a.size());
}

inline CellCounts count_uncovered(std::span<const Word> mask, std::span<const Word> covered,
                                  std::span<const Word> data) {
  return active().count_uncovered(mask.data(), covered.data(), data.data(), mask.size());
}

inline void or_into(std::span<Word> dst, std::span<const Word> src) {
  active().or_into(dst.data(), src.data(), dst.size());
}

}  // namespace patternset::kernels
