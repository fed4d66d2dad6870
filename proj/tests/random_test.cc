/*
 * Copyright 2026 The edpdiag Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "edpdiag/random.h"

#include <cmath>

#include <gtest/gtest.h>

namespace edpdiag {
namespace {

// Known-answer vectors from the Random123 distribution (kat_vectors).
TEST(PhiloxTest, KnownAnswers) {
  EXPECT_EQ(Philox4x32({0, 0, 0, 0}, {0, 0}),
            (PhiloxBlock{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                       {0xffffffff, 0xffffffff}),
            (PhiloxBlock{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                       {0xa4093822, 0x299f31d0}),
            (PhiloxBlock{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(CounterRngTest, DrawsAreKeyedNotSequential) {
  const CounterRng a(123), b(123), c(124);
  EXPECT_EQ(a.Normal(2, 17, 3), b.Normal(2, 17, 3));
  EXPECT_NE(a.Normal(2, 17, 3), c.Normal(2, 17, 3));
  EXPECT_NE(a.Normal(2, 17, 3), a.Normal(2, 17, 4));
  EXPECT_NE(a.Normal(2, 17, 3), a.Normal(3, 17, 3));
  // Order of evaluation does not matter.
  const double late = a.Uniform(1, 999);
  a.Uniform(1, 0);
  EXPECT_EQ(a.Uniform(1, 999), late);
}

TEST(CounterRngTest, MomentsAreReasonable) {
  const CounterRng rng(2024);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.Uniform(0, i);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = rng.Normal(1, i);
    sn += z;
    sn2 += z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 0.005);
  EXPECT_NEAR(sn / n, 0.0, 0.01);
  EXPECT_NEAR(sn2 / n, 1.0, 0.015);
}

}  // namespace
}  // namespace edpdiag
