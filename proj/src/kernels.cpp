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

#include "polarembed/kernels.hpp"

#include <cmath>

namespace polarembed::kernels {

namespace {

inline std::uint8_t endorse_key(std::span<const std::uint32_t> users, std::span<const CampCode> labels) {
  std::uint8_t bits = 0;
  for (auto u : users) {
    const CampCode c = labels[u];
    if (c != 0) bits |= static_cast<std::uint8_t>(1u << (c - 1));
    if (bits == 3) break;
  }
  return bits;
}

inline CampCode qualify_user(std::span<const std::uint32_t> keys, std::span<const std::uint8_t> endorsement,
                             std::uint32_t threshold) {
  std::uint32_t pro = 0;
  std::uint32_t anti = 0;
  for (auto k : keys) {
    const auto e = endorsement[k];
    if (e == 1) {
      ++pro;
    } else if (e == 2) {
      ++anti;
    }
  }
  if (pro >= threshold && anti == 0) return 1;
  if (anti >= threshold && pro == 0) return 2;
  return 0;
}

inline float inv_norm(std::span<const float> v) {
  double sum = 0.0;
  for (float x : v) sum += static_cast<double>(x) * x;
  return sum > 0.0 ? static_cast<float>(1.0 / std::sqrt(sum)) : 0.0f;
}

inline float dot(const float* a, const float* b, std::size_t n) {
  float acc = 0.0f;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

inline float clamp_unit(float x) { return x > 1.0f ? 1.0f : (x < -1.0f ? -1.0f : x); }

}  // namespace

void endorsement_serial(const Csr& key_to_users, std::span<const CampCode> labels, std::span<std::uint8_t> out) {
  const auto n = key_to_users.rows();
  for (std::size_t k = 0; k < n; ++k) out[k] = endorse_key(key_to_users.row(k), labels);
}

void endorsement_omp(const Csr& key_to_users, std::span<const CampCode> labels, std::span<std::uint8_t> out) {
  const auto n = static_cast<std::int64_t>(key_to_users.rows());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) out[k] = endorse_key(key_to_users.row(k), labels);
}

void qualify_serial(const Csr& user_to_keys, std::span<const CampCode> labels,
                    std::span<const std::uint8_t> endorsement, std::uint32_t threshold, std::span<CampCode> out) {
  const auto n = user_to_keys.rows();
  for (std::size_t u = 0; u < n; ++u) {
    out[u] = labels[u] != 0 ? 0 : qualify_user(user_to_keys.row(u), endorsement, threshold);
  }
}

void qualify_omp(const Csr& user_to_keys, std::span<const CampCode> labels,
                 std::span<const std::uint8_t> endorsement, std::uint32_t threshold, std::span<CampCode> out) {
  const auto n = static_cast<std::int64_t>(user_to_keys.rows());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t u = 0; u < n; ++u) {
    out[u] = labels[u] != 0 ? 0 : qualify_user(user_to_keys.row(u), endorsement, threshold);
  }
}

void cosine_scores_serial(std::span<const float> unit_rows, std::size_t dim, std::span<const float> query,
                          std::span<float> out) {
  const float qn = inv_norm(query);
  const std::size_t n = out.size();
  for (std::size_t r = 0; r < n; ++r) out[r] = clamp_unit(dot(unit_rows.data() + r * dim, query.data(), dim) * qn);
}

void cosine_scores_omp(std::span<const float> unit_rows, std::size_t dim, std::span<const float> query,
                       std::span<float> out) {
  const float qn = inv_norm(query);
  const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < n; ++r) {
    out[r] = clamp_unit(dot(unit_rows.data() + r * dim, query.data(), dim) * qn);
  }
}

}  // namespace polarembed::kernels
