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

#include <fstream>
#include <string>
#include <vector>

#include "polarembed/textprep.hpp"

namespace tp = polarembed::textprep;

namespace {

std::vector<std::pair<std::string, std::string>> golden() {
  std::ifstream in(std::string(POLAREMBED_TEST_DATA) + "/stemmer_golden.tsv");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    out.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return out;
}

}  // namespace

TEST(StemmerGolden, ListIsComplete) {
  const auto g = golden();
  EXPECT_EQ(g.size(), 1000u);
  bool has_root_example = false;
  for (const auto& [w, s] : g) has_root_example |= (w == "okullarımızdan" && s == "okul");
  EXPECT_TRUE(has_root_example);
}

TEST(StemmerGolden, AgreementAtLeast99Percent) {
  const auto g = golden();
  ASSERT_FALSE(g.empty());
  std::size_t agree = 0;
  for (const auto& [word, expected] : g) {
    const auto got = tp::stem(word);
    if (got == expected) {
      ++agree;
    } else {
      ADD_FAILURE() << word << ": expected " << expected << ", got " << got;
    }
  }
  EXPECT_GE(static_cast<double>(agree) / static_cast<double>(g.size()), 0.99);
}

TEST(Stemmer, ReferenceOutputs) {
  // Values produced by the reference Snowball implementation.
  EXPECT_EQ(tp::stem("kitaplar"), "kitap");
  EXPECT_EQ(tp::stem("evlerimizden"), "ev");
  EXPECT_EQ(tp::stem("tamam"), "tama");
  EXPECT_EQ(tp::stem("iyi"), "i");
  EXPECT_EQ(tp::stem("güzel"), "güzel");
  EXPECT_EQ(tp::stem("erdogan"), "erdoga");
}

TEST(Stemmer, ShortAndForeignWordsPassThrough) {
  EXPECT_EQ(tp::stem("a"), "a");
  EXPECT_EQ(tp::stem("ve"), "ve");
  EXPECT_EQ(tp::stem("number"), "number");
}
