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

#include <gtest/gtest.h>

#include <cmath>

#include "polarembed/common.hpp"
#include "polarembed/kernels.hpp"

namespace pk = polarembed::kernels;

namespace {

pk::Csr random_csr(polarembed::SplitMix64& rng, std::size_t rows, std::uint32_t cols, double density) {
  pk::Csr m;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c)
      if (rng.bernoulli(density)) m.targets.push_back(c);
    m.offsets.push_back(static_cast<std::uint32_t>(m.targets.size()));
  }
  return m;
}

// Transpose, so user->key and key->user views describe the same edges.
pk::Csr transpose(const pk::Csr& m, std::size_t cols) {
  std::vector<std::vector<std::uint32_t>> rows(cols);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (auto c : m.row(r)) rows[c].push_back(static_cast<std::uint32_t>(r));
  pk::Csr t;
  for (const auto& row : rows) {
    t.targets.insert(t.targets.end(), row.begin(), row.end());
    t.offsets.push_back(static_cast<std::uint32_t>(t.targets.size()));
  }
  return t;
}

}  // namespace

TEST(Kernels, EndorsementAndQualifyExample) {
  // users: 0 pro, 1 anti, 2 unlabeled; keys: 0 {0}, 1 {0,1}, 2 {0,2}
  pk::Csr user_to_keys;
  user_to_keys.targets = {0, 1, 2, 1, 0, 2};
  user_to_keys.offsets = {0, 3, 4, 6};
  const auto key_to_users = transpose(user_to_keys, 3);
  const std::vector<pk::CampCode> labels{1, 2, 0};
  std::vector<std::uint8_t> endorsement(3);
  pk::endorsement_serial(key_to_users, labels, endorsement);
  EXPECT_EQ(endorsement, (std::vector<std::uint8_t>{1, 3, 1}));
  std::vector<pk::CampCode> out(3);
  pk::qualify_serial(user_to_keys, labels, endorsement, 2, out);
  EXPECT_EQ(out, (std::vector<pk::CampCode>{0, 0, 1}));
  pk::qualify_serial(user_to_keys, labels, endorsement, 3, out);
  EXPECT_EQ(out, (std::vector<pk::CampCode>{0, 0, 0}));
}

TEST(Kernels, OmpMatchesSerialOnRandomGraphs) {
  polarembed::SplitMix64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t users = 1 + rng.below(400);
    const auto keys = static_cast<std::uint32_t>(1 + rng.below(300));
    const auto u2k = random_csr(rng, users, keys, 0.01 + 0.1 * rng.uniform());
    const auto k2u = transpose(u2k, keys);
    std::vector<pk::CampCode> labels(users);
    for (auto& l : labels) l = static_cast<pk::CampCode>(rng.below(3));

    std::vector<std::uint8_t> e_serial(keys), e_omp(keys);
    pk::endorsement_serial(k2u, labels, e_serial);
    pk::endorsement_omp(k2u, labels, e_omp);
    ASSERT_EQ(e_serial, e_omp);

    const auto threshold = static_cast<std::uint32_t>(1 + rng.below(4));
    std::vector<pk::CampCode> q_serial(users), q_omp(users);
    pk::qualify_serial(u2k, labels, e_serial, threshold, q_serial);
    pk::qualify_omp(u2k, labels, e_serial, threshold, q_omp);
    ASSERT_EQ(q_serial, q_omp);
    for (std::size_t u = 0; u < users; ++u)
      if (labels[u] != 0) EXPECT_EQ(q_serial[u], 0);
  }
}

TEST(Kernels, CosineMatchesDirectFormula) {
  polarembed::SplitMix64 rng(5);
  const std::size_t rows = 257, dim = 17;
  std::vector<float> raw(rows * dim), unit(rows * dim);
  for (auto& x : raw) x = static_cast<float>(rng.uniform() * 2.0 - 1.0);
  for (std::size_t d = 0; d < dim; ++d) raw[3 * dim + d] = 0.0f;  // a zero row
  for (std::size_t r = 0; r < rows; ++r) {
    double n = 0;
    for (std::size_t d = 0; d < dim; ++d) n += double(raw[r * dim + d]) * raw[r * dim + d];
    n = std::sqrt(n);
    for (std::size_t d = 0; d < dim; ++d) unit[r * dim + d] = n > 0 ? static_cast<float>(raw[r * dim + d] / n) : 0.0f;
  }
  std::vector<float> q(dim);
  for (auto& x : q) x = static_cast<float>(rng.uniform() * 4.0 - 2.0);

  std::vector<float> serial(rows), omp(rows);
  pk::cosine_scores_serial(unit, dim, q, serial);
  pk::cosine_scores_omp(unit, dim, q, omp);
  EXPECT_EQ(serial, omp);

  double qn = 0;
  for (auto x : q) qn += double(x) * x;
  qn = std::sqrt(qn);
  for (std::size_t r = 0; r < rows; ++r) {
    double dot = 0, rn = 0;
    for (std::size_t d = 0; d < dim; ++d) {
      dot += double(raw[r * dim + d]) * q[d];
      rn += double(raw[r * dim + d]) * raw[r * dim + d];
    }
    const double expected = rn > 0 ? dot / (std::sqrt(rn) * qn) : 0.0;
    EXPECT_NEAR(serial[r], expected, 1e-5) << r;
    EXPECT_LE(std::fabs(serial[r]), 1.0f);
  }
}
