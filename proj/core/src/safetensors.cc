// Copyright 2026 The AFN Authors.
//
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
#include "afn/safetensors.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <utility>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include "afn/error.h"

namespace afn {
namespace {

static_assert(std::endian::native == std::endian::little, "safetensors I/O assumes a little-endian host");

constexpr std::size_t kMaxHeaderBytes = 100u << 20;

std::size_t DTypeSize(DType dtype) {
  switch (dtype) {
    case DType::kF16:
    case DType::kBF16:
      return 2;
    case DType::kF32:
      return 4;
    case DType::kF64:
      return 8;
  }
  return 0;
}

std::optional<DType> ParseDType(const std::string& name) {
  if (name == "F32") return DType::kF32;
  if (name == "F16") return DType::kF16;
  if (name == "BF16") return DType::kBF16;
  if (name == "F64") return DType::kF64;
  return std::nullopt;
}

float HalfToFloat(std::uint16_t h) {
  const std::uint32_t sign = (h & 0x8000u) << 16;
  const std::uint32_t exp = (h >> 10) & 0x1Fu;
  const std::uint32_t mant = h & 0x3FFu;
  if (exp == 0) {
    // zero or subnormal
    const float magnitude = std::ldexp(static_cast<float>(mant), -24);
    return sign ? -magnitude : magnitude;
  }
  std::uint32_t bits;
  if (exp == 0x1F) {
    bits = sign | 0x7F800000u | (mant << 13);
  } else {
    bits = sign | ((exp + 112) << 23) | (mant << 13);
  }
  return std::bit_cast<float>(bits);
}

}  // namespace

std::size_t TensorInfo::num_elements() const {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

SafeTensorsFile SafeTensorsFile::Open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelLoadError(fmt::format("cannot open checkpoint '{}'", path.string()));
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return FromBytes(std::move(bytes), path.string());
}

SafeTensorsFile SafeTensorsFile::FromBytes(std::vector<std::uint8_t> bytes, std::string origin) {
  auto fail = [&origin](const std::string& what) { return ModelLoadError(fmt::format("{}: {}", origin, what)); };
  if (bytes.size() < 8) throw fail("file too short for a safetensors header");

  std::uint64_t header_len = 0;
  std::memcpy(&header_len, bytes.data(), 8);
  if (header_len > kMaxHeaderBytes || header_len > bytes.size() - 8) {
    throw fail(fmt::format("header length {} exceeds file size {}", header_len, bytes.size()));
  }

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.begin() + 8, bytes.begin() + 8 + static_cast<std::ptrdiff_t>(header_len));
  } catch (const nlohmann::json::exception& e) {
    throw fail(fmt::format("malformed header: {}", e.what()));
  }
  if (!header.is_object()) throw fail("malformed header: not a JSON object");

  SafeTensorsFile file;
  file.origin_ = std::move(origin);
  file.data_start_ = 8 + static_cast<std::size_t>(header_len);
  const std::size_t data_size = bytes.size() - file.data_start_;

  for (const auto& [name, entry] : header.items()) {
    if (name == "__metadata__") {
      if (!entry.is_object()) throw fail("__metadata__ must be an object");
      for (const auto& [key, value] : entry.items()) {
        file.metadata_[key] = value.is_string() ? value.get<std::string>() : value.dump();
      }
      continue;
    }
    try {
      TensorInfo info;
      const auto dtype = ParseDType(entry.at("dtype").get<std::string>());
      if (!dtype) throw fail(fmt::format("tensor '{}': unsupported dtype {}", name, entry.at("dtype").dump()));
      info.dtype = *dtype;
      info.shape = entry.at("shape").get<std::vector<std::size_t>>();
      const auto offsets = entry.at("data_offsets").get<std::vector<std::size_t>>();
      if (offsets.size() != 2 || offsets[0] > offsets[1] || offsets[1] > data_size) {
        throw fail(fmt::format("tensor '{}': data_offsets out of range", name));
      }
      info.begin = offsets[0];
      info.end = offsets[1];
      if (info.num_elements() * DTypeSize(info.dtype) != info.end - info.begin) {
        throw fail(fmt::format("tensor '{}': byte size does not match shape {}", name, info.shape));
      }
      file.tensors_.emplace(name, std::move(info));
    } catch (const nlohmann::json::exception& e) {
      throw fail(fmt::format("tensor '{}': malformed entry: {}", name, e.what()));
    }
  }
  file.bytes_ = std::move(bytes);
  return file;
}

const TensorInfo& SafeTensorsFile::Info(const std::string& name) const {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) throw ModelLoadError(fmt::format("{}: missing tensor '{}'", origin_, name));
  return it->second;
}

std::vector<std::string> SafeTensorsFile::Names() const {
  std::vector<std::string> names;
  names.reserve(tensors_.size());
  for (const auto& [name, info] : tensors_) names.push_back(name);
  return names;
}

std::vector<float> SafeTensorsFile::ReadFloat(const std::string& name) const {
  const TensorInfo& info = Info(name);
  const std::uint8_t* src = bytes_.data() + data_start_ + info.begin;
  const std::size_t n = info.num_elements();
  std::vector<float> out(n);
  switch (info.dtype) {
    case DType::kF32:
      std::memcpy(out.data(), src, n * 4);
      break;
    case DType::kF64:
      for (std::size_t i = 0; i < n; ++i) {
        double v;
        std::memcpy(&v, src + 8 * i, 8);
        out[i] = static_cast<float>(v);
      }
      break;
    case DType::kF16:
      for (std::size_t i = 0; i < n; ++i) {
        std::uint16_t h;
        std::memcpy(&h, src + 2 * i, 2);
        out[i] = HalfToFloat(h);
      }
      break;
    case DType::kBF16:
      for (std::size_t i = 0; i < n; ++i) {
        std::uint16_t h;
        std::memcpy(&h, src + 2 * i, 2);
        out[i] = std::bit_cast<float>(static_cast<std::uint32_t>(h) << 16);
      }
      break;
  }
  return out;
}

std::vector<std::uint8_t> EncodeSafeTensors(const std::vector<NamedTensor>& tensors,
                                           const std::map<std::string, std::string>& metadata) {
  nlohmann::json header = nlohmann::json::object();
  if (!metadata.empty()) header["__metadata__"] = metadata;
  std::size_t offset = 0;
  for (const NamedTensor& t : tensors) {
    std::size_t n = 1;
    for (std::size_t d : t.shape) n *= d;
    if (n != t.values.size()) {
      throw UsageError(fmt::format("tensor '{}': {} values do not fill shape {}", t.name, t.values.size(), t.shape));
    }
    header[t.name] = {{"dtype", "F32"}, {"shape", t.shape}, {"data_offsets", {offset, offset + 4 * n}}};
    offset += 4 * n;
  }
  std::string header_text = header.dump();
  // Pad so the data section starts 8-byte aligned, as the reference writer does.
  while ((header_text.size() + 8) % 8 != 0) header_text.push_back(' ');

  std::vector<std::uint8_t> out(8 + header_text.size() + offset);
  const std::uint64_t header_len = header_text.size();
  std::memcpy(out.data(), &header_len, 8);
  std::memcpy(out.data() + 8, header_text.data(), header_text.size());
  std::uint8_t* dst = out.data() + 8 + header_text.size();
  for (const NamedTensor& t : tensors) {
    std::memcpy(dst, t.values.data(), 4 * t.values.size());
    dst += 4 * t.values.size();
  }
  return out;
}

void WriteSafeTensors(const std::filesystem::path& path, const std::vector<NamedTensor>& tensors,
                      const std::map<std::string, std::string>& metadata) {
  const std::vector<std::uint8_t> bytes = EncodeSafeTensors(tensors, metadata);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace afn
