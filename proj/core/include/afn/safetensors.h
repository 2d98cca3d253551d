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
#ifndef AFN_SAFETENSORS_H_
#define AFN_SAFETENSORS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace afn {

enum class DType { kF32, kF16, kBF16, kF64 };

struct TensorInfo {
  DType dtype = DType::kF32;
  std::vector<std::size_t> shape;
  std::size_t begin = 0;  // byte offsets into the data section
  std::size_t end = 0;

  std::size_t num_elements() const;
};

// Read-only view of a safetensors file: an 8-byte little-endian header
// length, a JSON header mapping names to {dtype, shape, data_offsets}, then
// the raw tensor bytes. Malformed files throw afn::Error (kModelLoad).
class SafeTensorsFile {
 public:
  static SafeTensorsFile Open(const std::filesystem::path& path);
  static SafeTensorsFile FromBytes(std::vector<std::uint8_t> bytes, std::string origin);

  bool Contains(const std::string& name) const { return tensors_.count(name) > 0; }
  const TensorInfo& Info(const std::string& name) const;
  std::vector<std::string> Names() const;
  const std::map<std::string, std::string>& metadata() const { return metadata_; }

  // Converts any supported dtype to float32.
  std::vector<float> ReadFloat(const std::string& name) const;

 private:
  SafeTensorsFile() = default;

  std::string origin_;
  std::vector<std::uint8_t> bytes_;
  std::size_t data_start_ = 0;
  std::map<std::string, TensorInfo> tensors_;
  std::map<std::string, std::string> metadata_;
};

struct NamedTensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<float> values;
};

// Serializes float32 tensors. Used for synthetic checkpoints and fixtures.
std::vector<std::uint8_t> EncodeSafeTensors(const std::vector<NamedTensor>& tensors,
                                           const std::map<std::string, std::string>& metadata = {});
void WriteSafeTensors(const std::filesystem::path& path, const std::vector<NamedTensor>& tensors,
                      const std::map<std::string, std::string>& metadata = {});

}  // namespace afn

#endif  // AFN_SAFETENSORS_H_
