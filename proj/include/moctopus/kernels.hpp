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
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

// Data-parallel inner loops used by the simulator: sentinel filtering over
// contiguous u64 slot arrays, bulk integer hashing, and order-independent
// checksum reduction. Every entry point has a scalar reference
// implementation; on x86-64 an AVX2 variant is compiled alongside and picked
// at runtime when the CPU supports it. The two variants are required to be
// bit-identical and are equivalence-tested against each other.

namespace moctopus::kernels {

/// splitmix64 finalizer — the one integer hash used across the project
/// (supplementary-shard placement, hash fallback assignment, checksums,
/// seeded random streams). Fixed, seed-independent, documented here so the
/// on-disk and cross-run behaviour never drifts.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  std::uint64_t z = x + 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Deterministic seeded stream (splitmix64). Same sequence on every
/// platform and build; all randomness in the simulator flows through this.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Modulo draw; bias is irrelevant at the bounds used here and the simple
  // definition keeps streams reproducible.
  constexpr std::uint64_t next_below(std::uint64_t bound) noexcept {
    return bound ? next() % bound : 0;
  }

  constexpr double next_unit() noexcept { return double(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

enum class Backend : std::uint8_t { kScalar, kAvx2 };

Backend active_backend() noexcept;
/// Force a backend; returns false (and leaves the selection untouched) when
/// the requested backend is not available on this CPU/build.
bool set_backend(Backend) noexcept;
const char* backend_name(Backend) noexcept;

// Dispatched entry points.

/// Copies every value != sentinel from src to dst, preserving order.
/// Returns the number of values written; dst must have room for src.size().
std::size_t compact_nonsentinel(std::span<const std::uint64_t> src, std::uint64_t* dst);

std::size_t count_nonsentinel(std::span<const std::uint64_t> src);

/// dst[i] = mix64(src[i]); dst must have room for src.size().
void mix64_bulk(std::span<const std::uint64_t> src, std::uint64_t* dst);

/// Order-independent reduction: wrapping sum of mix64(mix64(id) ^ mix64(tag))
/// over ids. Two equal id multisets under the same tag always agree.
std::uint64_t checksum_pairs(std::uint64_t tag, std::span<const std::uint64_t> ids);

// Direct access to the individual variants, for equivalence tests and
// benchmarks. Regular code goes through the dispatched entry points above.
namespace scalar {
std::size_t compact_nonsentinel(const std::uint64_t* src, std::size_t n, std::uint64_t* dst);
std::size_t count_nonsentinel(const std::uint64_t* src, std::size_t n);
void mix64_bulk(const std::uint64_t* src, std::size_t n, std::uint64_t* dst);
std::uint64_t checksum_pairs(std::uint64_t tag, const std::uint64_t* ids, std::size_t n);
}  // namespace scalar

#if defined(MOCTOPUS_HAVE_AVX2)
namespace avx2 {
bool supported() noexcept;  // runtime CPU check
std::size_t compact_nonsentinel(const std::uint64_t* src, std::size_t n, std::uint64_t* dst);
std::size_t count_nonsentinel(const std::uint64_t* src, std::size_t n);
void mix64_bulk(const std::uint64_t* src, std::size_t n, std::uint64_t* dst);
std::uint64_t checksum_pairs(std::uint64_t tag, const std::uint64_t* ids, std::size_t n);
}  // namespace avx2
#endif

}  // namespace moctopus::kernels
