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

#include <vector>

#include <benchmark/benchmark.h>

#include "ltm/elections.h"
#include "ltm/random.h"
#include "ltm/voting_methods.h"

namespace ltm {
namespace {

std::vector<Profile> profiles(int n, int m, int count) {
  RandomStream stream(derive_seed(7, static_cast<uint64_t>(n * 16 + m)));
  std::vector<Profile> out;
  for (int k = 0; k < count; ++k) {
    std::vector<Ranking> ballots;
    for (int i = 0; i < n; ++i) {
      ballots.push_back(Ranking::from_index(m, stream.uniform_int(factorial(m))));
    }
    out.emplace_back(std::move(ballots));
  }
  return out;
}

// args: method code, n, m
void BM_RunMethod(benchmark::State& state) {
  const auto method = static_cast<MethodId>(state.range(0));
  const auto batch = profiles(static_cast<int>(state.range(1)),
                              static_cast<int>(state.range(2)), 64);
  size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_method(method, batch[k++ % batch.size()]));
  }
  state.SetLabel(std::string(method_name(method)));
}

void MethodArgs(benchmark::internal::Benchmark* b) {
  for (size_t id = 0; id < kAllMethods.size(); ++id) {
    for (int m : {3, 6}) b->Args({static_cast<int64_t>(id), 11, m});
  }
}
BENCHMARK(BM_RunMethod)->Apply(MethodArgs);

void BM_MarginMatrix(benchmark::State& state) {
  const auto batch = profiles(static_cast<int>(state.range(0)), 6, 64);
  size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(MarginMatrix(batch[k++ % batch.size()]));
  }
}
BENCHMARK(BM_MarginMatrix)->Arg(11)->Arg(21);

}  // namespace
}  // namespace ltm

BENCHMARK_MAIN();
