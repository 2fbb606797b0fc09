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

#include "ltm/oracle.h"
#include "ltm/random.h"
#include "ltm/samplers.h"

namespace ltm {
namespace {

// Full m! response table for voter 0. args: method code, m
void BM_ResponseTable(benchmark::State& state) {
  const auto method = static_cast<MethodId>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  RandomStream stream(11);
  std::vector<UtilityProfile> batch;
  for (int k = 0; k < 16; ++k) batch.push_back(sample_uniform(11, m, stream));
  size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(response_table(method, batch[k++ % batch.size()], 0));
  }
  state.SetLabel(std::string(method_name(method)));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(factorial(m)));
}

void OracleArgs(benchmark::internal::Benchmark* b) {
  for (size_t id = 0; id < kAllMethods.size(); ++id) {
    for (int m : {3, 5, 6}) b->Args({static_cast<int64_t>(id), m});
  }
}
BENCHMARK(BM_ResponseTable)->Apply(OracleArgs)->Unit(benchmark::kMicrosecond);

void BM_MakeInstance(benchmark::State& state) {
  RandomStream stream(12);
  const UtilityProfile u = sample_uniform(11, 4, stream);
  for (auto _ : state) {
    benchmark::DoNotOptimize(make_instance(MethodId::kBorda, u, 0,
                                           InfoType::kMajorityMatrix,
                                           Labeling::kOptimizing));
  }
}
BENCHMARK(BM_MakeInstance);

}  // namespace
}  // namespace ltm

BENCHMARK_MAIN();
