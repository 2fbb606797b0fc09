// Copyright 2026 The LTM Authors
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

#ifndef LTM_RANDOM_H_
#define LTM_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace ltm {

// SplitMix64 finalizer; used to derive independent seeds.
uint64_t mix64(uint64_t x);
// Seed for sub-stream `index` of `seed`.
uint64_t derive_seed(uint64_t seed, uint64_t index);
// Seed for a named purpose ("data", "init", ...) of `seed`.
uint64_t derive_seed(uint64_t seed, std::string_view purpose);

// Seeded pseudorandom stream with a fixed, portable bit sequence.
//
// The engine is std::mt19937_64, whose output sequence is pinned by the C++
// standard. The standard distributions are not, so the conversions to
// doubles, bounded integers and normals are implemented here.
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed) : seed_(seed), engine_(seed) {}

  uint64_t seed() const { return seed_; }
  // Independent stream for worker/block `index`.
  RandomStream derive(uint64_t index) const {
    return RandomStream(derive_seed(seed_, index));
  }

  uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform01();
  // Uniform integer on [0, bound); bound > 0. Unbiased (rejection).
  uint64_t uniform_int(uint64_t bound);
  // Standard normal via Box-Muller (one draw per call).
  double normal();

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace ltm

#endif  // LTM_RANDOM_H_
