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
#include <numbers>

namespace edpdiag {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void MulHiLo(std::uint32_t a, std::uint32_t b, std::uint32_t* hi,
                    std::uint32_t* lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  *hi = static_cast<std::uint32_t>(product >> 32);
  *lo = static_cast<std::uint32_t>(product);
}

// (0, 1) from 53 bits; never returns 0 so log() is safe.
inline double ToUnitOpen(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits =
      ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

PhiloxBlock Philox4x32(PhiloxBlock ctr, std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    MulHiLo(kMul0, ctr[0], &hi0, &lo0);
    MulHiLo(kMul1, ctr[2], &hi1, &lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

PhiloxBlock CounterRng::Block(std::uint32_t stream, std::uint64_t index,
                              std::uint32_t replicate) const {
  const PhiloxBlock counter = {static_cast<std::uint32_t>(index),
                               static_cast<std::uint32_t>(index >> 32), stream,
                               replicate};
  const std::array<std::uint32_t, 2> key = {
      static_cast<std::uint32_t>(seed_),
      static_cast<std::uint32_t>(seed_ >> 32)};
  return Philox4x32(counter, key);
}

double CounterRng::Uniform(std::uint32_t stream, std::uint64_t index,
                           std::uint32_t replicate) const {
  const auto block = Block(stream, index, replicate);
  return ToUnitOpen(block[0], block[1]);
}

double CounterRng::Normal(std::uint32_t stream, std::uint64_t index,
                          std::uint32_t replicate) const {
  const auto block = Block(stream, index, replicate);
  const double u1 = ToUnitOpen(block[0], block[1]);
  const double u2 = ToUnitOpen(block[2], block[3]);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace edpdiag
