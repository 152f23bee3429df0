// Copyright 2026 The polarembed Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version and a serial
// reference with identical results; the reference is what the unit tests and
// benchmarks compare against.

#include <cstdint>
#include <span>
#include <vector>

namespace polarembed::kernels {

// Camp code per user: 0 unlabeled, 1 pro, 2 anti.
using CampCode = std::uint8_t;

// CSR adjacency: row r spans offsets[r] .. offsets[r + 1] of `targets`.
struct Csr {
  std::vector<std::uint32_t> offsets{0};
  std::vector<std::uint32_t> targets;

  std::size_t rows() const { return offsets.size() - 1; }
  std::span<const std::uint32_t> row(std::size_t r) const {
    return {targets.data() + offsets[r], targets.data() + offsets[r + 1]};
  }
};

// Marks each key with the camps endorsing it (bit 0 pro, bit 1 anti).
void endorsement_serial(const Csr& key_to_users, std::span<const CampCode> labels, std::span<std::uint8_t> out);
void endorsement_omp(const Csr& key_to_users, std::span<const CampCode> labels, std::span<std::uint8_t> out);

// For every unlabeled user: the camp they qualify for under the exclusive
// threshold rule, or 0. Dual-endorsed keys count for neither camp.
void qualify_serial(const Csr& user_to_keys, std::span<const CampCode> labels,
                    std::span<const std::uint8_t> endorsement, std::uint32_t threshold, std::span<CampCode> out);
void qualify_omp(const Csr& user_to_keys, std::span<const CampCode> labels,
                 std::span<const std::uint8_t> endorsement, std::uint32_t threshold, std::span<CampCode> out);

// Cosine of `query` against each row of a row-major matrix whose rows are
// already L2-normalized (zero rows give 0). `query` is normalized here.
void cosine_scores_serial(std::span<const float> unit_rows, std::size_t dim, std::span<const float> query,
                          std::span<float> out);
void cosine_scores_omp(std::span<const float> unit_rows, std::size_t dim, std::span<const float> query,
                       std::span<float> out);

}  // namespace polarembed::kernels
