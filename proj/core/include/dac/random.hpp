/*
 * Copyright (c) 2026, The dacluster Authors.
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

#include <cstdint>
#include <random>

namespace dac {

using Rng = std::mt19937_64;

// splitmix64 finalizer; derives independent child seeds (restarts, rounds,
// sub-stages) from a single run seed.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Named streams so the same run seed never feeds two stages identically.
namespace stream {
inline constexpr std::uint64_t split = 1;
inline constexpr std::uint64_t encoder_init = 2;
inline constexpr std::uint64_t pretrain_order = 3;
inline constexpr std::uint64_t head_init = 4;
inline constexpr std::uint64_t round_order = 5;
inline constexpr std::uint64_t kmeans = 6;
inline constexpr std::uint64_t estimate = 7;
inline constexpr std::uint64_t head_reinit = 8;
}  // namespace stream

}  // namespace dac
