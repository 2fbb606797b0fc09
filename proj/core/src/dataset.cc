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

#include "ltm/dataset.h"

#include <fstream>

#include "binary_io.h"

namespace ltm {
namespace {

size_t label_bytes(uint32_t num_classes) { return (num_classes + 7) / 8; }

DatasetHeader parse_header(io::ByteReader& r) {
  DatasetHeader h;
  try {
    if (!r.tag("LTMD")) {
      throw DatasetError(DatasetErrorCode::kBadMagic, "not an LTMD dataset");
    }
    h.version = r.u16();
    if (h.version != kDatasetVersion) {
      throw DatasetError(DatasetErrorCode::kUnsupportedVersion,
                         "unsupported dataset version " +
                             std::to_string(h.version));
    }
    const uint8_t method = r.u8();
    const uint8_t info = r.u8();
    const uint8_t model = r.u8();
    h.n = r.u16();
    h.m = r.u8();
    const uint8_t labeling = r.u8();
    h.count = r.u64();
    h.feature_dim = r.u32();
    h.num_classes = r.u32();

    auto corrupt = [](const std::string& why) {
      return DatasetError(DatasetErrorCode::kCorruptHeader,
                          "corrupt dataset header: " + why);
    };
    if (method >= kAllMethods.size()) throw corrupt("method code");
    if (info >= kAllInfoTypes.size()) throw corrupt("info code");
    if (model > 2) throw corrupt("model code");
    if (labeling > 1) throw corrupt("labeling code");
    if (h.n < 1) throw corrupt("voter count");
    if (h.m < 2 || h.m > kMaxOracleCandidates) throw corrupt("candidate count");
    h.method = static_cast<MethodId>(method);
    h.info = static_cast<InfoType>(info);
    h.model = static_cast<ModelKind>(model);
    h.labeling = static_cast<Labeling>(labeling);
    if (h.feature_dim !=
        static_cast<uint32_t>(h.m + info_length(h.info, h.m))) {
      throw corrupt("feature_dim");
    }
    if (h.num_classes != factorial(h.m)) throw corrupt("num_classes");
  } catch (const io::TruncatedError&) {
    throw DatasetError(DatasetErrorCode::kTruncated, "truncated header");
  }
  return h;
}

}  // namespace

DatasetHeader DatasetHeader::for_cell(MethodId method, InfoType info,
                                      ModelKind model, int n, int m,
                                      Labeling labeling, uint64_t count) {
  DatasetHeader h;
  h.method = method;
  h.info = info;
  h.model = model;
  h.n = n;
  h.m = m;
  h.labeling = labeling;
  h.count = count;
  h.feature_dim = static_cast<uint32_t>(m + info_length(info, m));
  h.num_classes = static_cast<uint32_t>(factorial(m));
  return h;
}

std::vector<uint8_t> encode_dataset(const Dataset& dataset) {
  const DatasetHeader& h = dataset.header;
  if (h.count != dataset.instances.size()) {
    throw DatasetError(DatasetErrorCode::kCorruptHeader,
                       "header count does not match instances");
  }
  io::ByteWriter w;
  w.buffer().reserve(kDatasetHeaderBytes +
                     dataset.instances.size() *
                         (4 * h.feature_dim + label_bytes(h.num_classes)));
  w.tag("LTMD");
  w.u16(h.version);
  w.u8(static_cast<uint8_t>(h.method));
  w.u8(static_cast<uint8_t>(h.info));
  w.u8(static_cast<uint8_t>(h.model));
  w.u16(static_cast<uint16_t>(h.n));
  w.u8(static_cast<uint8_t>(h.m));
  w.u8(static_cast<uint8_t>(h.labeling));
  w.u64(h.count);
  w.u32(h.feature_dim);
  w.u32(h.num_classes);
  for (const LabeledInstance& inst : dataset.instances) {
    if (inst.features.size() != h.feature_dim ||
        inst.labels.size() != static_cast<int>(h.num_classes) ||
        !inst.labels.any()) {
      throw DatasetError(DatasetErrorCode::kCorruptRecord,
                         "instance does not match the dataset header");
    }
    for (float x : inst.features) w.f32(x);
    w.bytes(inst.labels.bytes());
  }
  return std::move(w.buffer());
}

Dataset decode_dataset(std::span<const uint8_t> bytes) {
  io::ByteReader r(bytes);
  Dataset d;
  d.header = parse_header(r);
  const DatasetHeader& h = d.header;
  const size_t record = 4 * size_t{h.feature_dim} + label_bytes(h.num_classes);
  if (r.remaining() / record < h.count) {
    throw DatasetError(DatasetErrorCode::kTruncated,
                       "dataset shorter than its record count");
  }
  if (r.remaining() != h.count * record) {
    throw DatasetError(DatasetErrorCode::kCorruptHeader,
                       "trailing bytes after the last record");
  }
  d.instances.reserve(h.count);
  const InstanceMeta meta{h.method, h.info, h.n, h.m};
  for (uint64_t k = 0; k < h.count; ++k) {
    LabeledInstance inst;
    inst.features.resize(h.feature_dim);
    for (float& x : inst.features) x = r.f32();
    try {
      inst.labels = LabelMask::from_bytes(static_cast<int>(h.num_classes),
                                          r.bytes(label_bytes(h.num_classes)));
    } catch (const std::invalid_argument& e) {
      throw DatasetError(DatasetErrorCode::kCorruptRecord, e.what());
    }
    if (!inst.labels.any()) {
      throw DatasetError(DatasetErrorCode::kCorruptRecord,
                         "record " + std::to_string(k) + " has no labels");
    }
    inst.meta = meta;
    d.instances.push_back(std::move(inst));
  }
  return d;
}

void write_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  try {
    io::write_file_atomic(path, encode_dataset(dataset));
  } catch (const DatasetError&) {
    throw;
  } catch (const std::exception& e) {
    throw DatasetError(DatasetErrorCode::kIo, e.what());
  }
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::vector<uint8_t> bytes;
  try {
    bytes = io::read_file(path);
  } catch (const std::exception& e) {
    throw DatasetError(DatasetErrorCode::kIo, e.what());
  }
  return decode_dataset(bytes);
}

DatasetHeader read_dataset_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError(DatasetErrorCode::kIo, "cannot open " + path.string());
  std::vector<uint8_t> head(kDatasetHeaderBytes);
  in.read(reinterpret_cast<char*>(head.data()),
          static_cast<std::streamsize>(head.size()));
  head.resize(static_cast<size_t>(in.gcount()));
  io::ByteReader r(head);
  return parse_header(r);
}

}  // namespace ltm
