// Copyright 2026 The privrewrite Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRIVREWRITE_CORE_RNG_H_
#define PRIVREWRITE_CORE_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace privrewrite {

// FNV-1a, 64 bit. Stable across platforms, unlike std::hash.
uint64_t Fnv1a64(std::string_view bytes);

uint64_t SplitMix64(uint64_t x);

// The single seeded random source. Every stochastic choice in the library
// draws from an Rng derived from SearchConfig::rng_seed, so runs replay
// exactly. Index and real draws avoid std::*_distribution, whose output is
// implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), engine_(SplitMix64(seed)) {}

  uint64_t seed() const { return seed_; }

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, n). Requires n > 0.
  uint64_t UniformIndex(uint64_t n);

  // Uniform in [0, 1) with 53 bits of resolution.
  double UniformDouble();

  // Independent child stream; does not advance this one.
  Rng Fork(std::string_view tag) const;
  Rng Fork(uint64_t index) const;

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace privrewrite

#endif  // PRIVREWRITE_CORE_RNG_H_
