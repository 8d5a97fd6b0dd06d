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

namespace moctopus::kernels {

namespace {

struct KernelTable {
  Backend backend;
  std::size_t (*compact)(const std::uint64_t*, std::size_t, std::uint64_t*);
  std::size_t (*count)(const std::uint64_t*, std::size_t);
  void (*mix_bulk)(const std::uint64_t*, std::size_t, std::uint64_t*);
  std::uint64_t (*checksum)(std::uint64_t, const std::uint64_t*, std::size_t);
};

constexpr KernelTable kScalarTable{Backend::kScalar, &scalar::compact_nonsentinel,
                                   &scalar::count_nonsentinel, &scalar::mix64_bulk,
                                   &scalar::checksum_pairs};

#if defined(MOCTOPUS_HAVE_AVX2)
constexpr KernelTable kAvx2Table{Backend::kAvx2, &avx2::compact_nonsentinel,
                                 &avx2::count_nonsentinel, &avx2::mix64_bulk,
                                 &avx2::checksum_pairs};
#endif

bool avx2_available() noexcept {
#if defined(MOCTOPUS_HAVE_AVX2)
  return avx2::supported();
#else
  return false;
#endif
}

KernelTable& active_table() {
  static KernelTable table = [] {
#if defined(MOCTOPUS_HAVE_AVX2)
    if (avx2_available()) return kAvx2Table;
#endif
    return kScalarTable;
  }();
  return table;
}

}  // namespace

Backend active_backend() noexcept { return active_table().backend; }

bool set_backend(Backend backend) noexcept {
  switch (backend) {
    case Backend::kScalar:
      active_table() = kScalarTable;
      return true;
    case Backend::kAvx2:
#if defined(MOCTOPUS_HAVE_AVX2)
      if (avx2_available()) {
        active_table() = kAvx2Table;
        return true;
      }
#endif
      return false;
  }
  return false;
}

const char* backend_name(Backend backend) noexcept {
  switch (backend) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
  }
  return "unknown";
}

std::size_t compact_nonsentinel(std::span<const std::uint64_t> src, std::uint64_t* dst) {
  return active_table().compact(src.data(), src.size(), dst);
}

std::size_t count_nonsentinel(std::span<const std::uint64_t> src) {
  return active_table().count(src.data(), src.size());
}

void mix64_bulk(std::span<const std::uint64_t> src, std::uint64_t* dst) {
  active_table().mix_bulk(src.data(), src.size(), dst);
}

std::uint64_t checksum_pairs(std::uint64_t tag, std::span<const std::uint64_t> ids) {
  return active_table().checksum(tag, ids.data(), ids.size());
}

}  // namespace moctopus::kernels
