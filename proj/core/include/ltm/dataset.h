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

// Binary dataset of labeled manipulation instances.
//
// Layout (little-endian):
//   "LTMD" | u16 version | u8 method | u8 info | u8 model | u16 n | u8 m |
//   u8 labeling | u64 count | u32 feature_dim | u32 num_classes
// then `count` records of feature_dim f32 values followed by
// ceil(num_classes / 8) label bytes, least-significant bit first.

#ifndef LTM_DATASET_H_
#define LTM_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltm/information.h"
#include "ltm/oracle.h"
#include "ltm/samplers.h"
#include "ltm/voting_methods.h"

namespace ltm {

inline constexpr uint16_t kDatasetVersion = 1;
inline constexpr size_t kDatasetHeaderBytes = 29;

struct DatasetHeader {
  uint16_t version = kDatasetVersion;
  MethodId method = MethodId::kPlurality;
  InfoType info = InfoType::kPluralityScores;
  ModelKind model = ModelKind::kUniform;
  int n = 0;
  int m = 0;
  Labeling labeling = Labeling::kOptimizing;
  uint64_t count = 0;
  uint32_t feature_dim = 0;
  uint32_t num_classes = 0;

  // Header for `count` instances of the given cell; dims derived from m.
  static DatasetHeader for_cell(MethodId method, InfoType info,
                                ModelKind model, int n, int m,
                                Labeling labeling, uint64_t count);

  friend bool operator==(const DatasetHeader&, const DatasetHeader&) = default;
};

enum class DatasetErrorCode {
  kIo = 1,
  kBadMagic = 2,
  kUnsupportedVersion = 3,
  kCorruptHeader = 4,
  kTruncated = 5,
  kCorruptRecord = 6,
};

class DatasetError : public std::runtime_error {
 public:
  DatasetError(DatasetErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  DatasetErrorCode code() const { return code_; }

 private:
  DatasetErrorCode code_;
};

struct Dataset {
  DatasetHeader header;
  std::vector<LabeledInstance> instances;
};

// Throws DatasetError(kCorruptRecord) if an instance disagrees with the
// header.
std::vector<uint8_t> encode_dataset(const Dataset& dataset);
Dataset decode_dataset(std::span<const uint8_t> bytes);
void write_dataset(const std::filesystem::path& path, const Dataset& dataset);
Dataset read_dataset(const std::filesystem::path& path);
// Reads and validates only the header.
DatasetHeader read_dataset_header(const std::filesystem::path& path);

}  // namespace ltm

#endif  // LTM_DATASET_H_
