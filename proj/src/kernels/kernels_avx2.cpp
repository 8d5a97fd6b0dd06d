/*
 * Copyright 2026 the moctopus-sim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "moctopus/kernels.hpp"

#if defined(MOCTOPUS_HAVE_AVX2)

#include <immintrin.h>

#include <array>
#include <bit>
#include <limits>

namespace moctopus::kernels::avx2 {

namespace {

constexpr std::uint64_t kSentinel = std::numeric_limits<std::uint64_t>::max();

// Left-pack shuffle table: entry m lists the epi32 lane indices that move the
// kept u64 lanes (bit i of m = keep lane i) to the front of the register.
constexpr std::array<std::array<std::int32_t, 8>, 16> make_pack_table() {
  std::array<std::array<std::int32_t, 8>, 16> table{};
  for (int mask = 0; mask < 16; ++mask) {
    int out = 0;
    for (int lane = 0; lane < 4; ++lane) {
      if (mask & (1 << lane)) {
        table[mask][out++] = 2 * lane;
        table[mask][out++] = 2 * lane + 1;
      }
    }
    for (; out < 8; ++out) table[mask][out] = 0;
  }
  return table;
}

alignas(32) constexpr auto kPackTable = make_pack_table();

// 64x64 -> low 64 multiply. AVX2 has no epi64 mullo; assemble it from the
// three 32x32 partial products.
inline __m256i mullo64(__m256i a, __m256i b) {
  __m256i lolo = _mm256_mul_epu32(a, b);
  __m256i lohi = _mm256_mul_epu32(a, _mm256_srli_epi64(b, 32));
  __m256i hilo = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), b);
  __m256i cross = _mm256_add_epi64(lohi, hilo);
  return _mm256_add_epi64(lolo, _mm256_slli_epi64(cross, 32));
}

inline __m256i mix64x4(__m256i x) {
  const __m256i gold = _mm256_set1_epi64x(std::int64_t(0x9e3779b97f4a7c15ull));
  const __m256i m1 = _mm256_set1_epi64x(std::int64_t(0xbf58476d1ce4e5b9ull));
  const __m256i m2 = _mm256_set1_epi64x(std::int64_t(0x94d049bb133111ebull));
  __m256i z = _mm256_add_epi64(x, gold);
  z = mullo64(_mm256_xor_si256(z, _mm256_srli_epi64(z, 30)), m1);
  z = mullo64(_mm256_xor_si256(z, _mm256_srli_epi64(z, 27)), m2);
  return _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
}

inline int sentinel_mask(__m256i v) {
  __m256i cmp = _mm256_cmpeq_epi64(v, _mm256_set1_epi64x(-1));
  return _mm256_movemask_pd(_mm256_castsi256_pd(cmp));
}

inline std::uint64_t hsum64(__m256i v) {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

}  // namespace

bool supported() noexcept {
#if defined(__GNUC__) || defined(__clang__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

std::size_t compact_nonsentinel(const std::uint64_t* src, std::size_t n, std::uint64_t* dst) {
  std::size_t out = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    int keep = ~sentinel_mask(v) & 0xF;
    __m256i idx =
        _mm256_load_si256(reinterpret_cast<const __m256i*>(kPackTable[std::size_t(keep)].data()));
    __m256i packed = _mm256_permutevar8x32_epi32(v, idx);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + out), packed);
    out += std::size_t(std::popcount(unsigned(keep)));
  }
  for (; i < n; ++i) {
    std::uint64_t v = src[i];
    dst[out] = v;
    out += (v != kSentinel);
  }
  return out;
}

std::size_t count_nonsentinel(const std::uint64_t* src, std::size_t n) {
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    count += std::size_t(std::popcount(unsigned(~sentinel_mask(v) & 0xF)));
  }
  for (; i < n; ++i) count += (src[i] != kSentinel);
  return count;
}

void mix64_bulk(const std::uint64_t* src, std::size_t n, std::uint64_t* dst) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), mix64x4(v));
  }
  for (; i < n; ++i) dst[i] = mix64(src[i]);
}

std::uint64_t checksum_pairs(std::uint64_t tag, const std::uint64_t* ids, std::size_t n) {
  const std::uint64_t tag_mixed = mix64(tag);
  const __m256i tagv = _mm256_set1_epi64x(std::int64_t(tag_mixed));
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(ids + i));
    __m256i h = mix64x4(_mm256_xor_si256(mix64x4(v), tagv));
    acc = _mm256_add_epi64(acc, h);
  }
  std::uint64_t sum = hsum64(acc);
  for (; i < n; ++i) sum += mix64(mix64(ids[i]) ^ tag_mixed);
  return sum;
}

}  // namespace moctopus::kernels::avx2

#endif  // MOCTOPUS_HAVE_AVX2
