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
#ifndef AFN_FIXTURE_IO_H_
#define AFN_FIXTURE_IO_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace afn {

// On-disk fixture format: <stem>.f32 holds raw little-endian float32 values,
// <stem>.json a sidecar object with at least {"dtype": "F32", "shape": [...]}.
struct FixtureMatrix {
  std::vector<std::size_t> shape;
  std::vector<float> values;
  std::string sidecar;  // the full sidecar JSON text

  std::size_t num_elements() const;
};

// stem may name either file or neither extension.
FixtureMatrix ReadFixtureMatrix(const std::filesystem::path& stem);

// extra_json must be a JSON object (or empty); dtype and shape are added.
void WriteFixtureMatrix(const std::filesystem::path& stem, const std::vector<std::size_t>& shape,
                        const std::vector<float>& values, const std::string& extra_json = "{}");

struct NormRow {
  std::size_t index = 0;
  std::string token;
  std::map<int, double> by_layer;
};

// Parses "index,token,layer_<k>,..." CSV (RFC 4180 quoting).
std::vector<NormRow> ReadNormsCsv(const std::filesystem::path& path);

}  // namespace afn

#endif  // AFN_FIXTURE_IO_H_
