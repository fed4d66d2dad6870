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
// Counter-based random numbers (Philox4x32-10). A draw is a pure function of
// (seed, stream, index, replicate), so rows can be generated in any order or
// in parallel and still reproduce bit-for-bit.

#ifndef EDPDIAG_RANDOM_H_
#define EDPDIAG_RANDOM_H_

#include <array>
#include <cstdint>

namespace edpdiag {

// Identifies the generator in reports; bump if the draw mapping changes.
inline constexpr const char* kRandomGeneratorName = "philox4x32-10/box-muller/v1";

using PhiloxBlock = std::array<std::uint32_t, 4>;

PhiloxBlock Philox4x32(PhiloxBlock counter, std::array<std::uint32_t, 2> key);

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  // Uniform on (0, 1), 53 bits of resolution.
  double Uniform(std::uint32_t stream, std::uint64_t index,
                 std::uint32_t replicate = 0) const;
  // Standard normal via Box-Muller on one Philox block.
  double Normal(std::uint32_t stream, std::uint64_t index,
                std::uint32_t replicate = 0) const;

  std::uint64_t seed() const { return seed_; }

 private:
  PhiloxBlock Block(std::uint32_t stream, std::uint64_t index,
                    std::uint32_t replicate) const;

  std::uint64_t seed_;
};

}  // namespace edpdiag

#endif  // EDPDIAG_RANDOM_H_
