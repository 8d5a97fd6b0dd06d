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

#include <limits>

namespace moctopus::kernels::scalar {

namespace {
constexpr std::uint64_t kSentinel = std::numeric_limits<std::uint64_t>::max();
}

std::size_t compact_nonsentinel(const std::uint64_t* src, std::size_t n, std::uint64_t* dst) {
  std::size_t out = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t v = src[i];
    dst[out] = v;
    out += (v != kSentinel);
  }
  return out;
}

std::size_t count_nonsentinel(const std::uint64_t* src, std::size_t n) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += (src[i] != kSentinel);
  return count;
}

void mix64_bulk(const std::uint64_t* src, std::size_t n, std::uint64_t* dst) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = mix64(src[i]);
}

std::uint64_t checksum_pairs(std::uint64_t tag, const std::uint64_t* ids, std::size_t n) {
  const std::uint64_t tag_mixed = mix64(tag);
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += mix64(mix64(ids[i]) ^ tag_mixed);
  return acc;
}

}  // namespace moctopus::kernels::scalar
