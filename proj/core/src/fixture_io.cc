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
#include "afn/fixture_io.h"

#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "afn/error.h"

namespace afn {
namespace {

std::filesystem::path StemOf(const std::filesystem::path& path) {
  const auto ext = path.extension();
  if (ext == ".json" || ext == ".f32") return std::filesystem::path(path).replace_extension();
  return path;
}

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open fixture '{}'", path.string()));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Splits one CSV record, honoring double-quoted fields.
std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace

std::size_t FixtureMatrix::num_elements() const {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

FixtureMatrix ReadFixtureMatrix(const std::filesystem::path& stem_or_file) {
  const std::filesystem::path stem = StemOf(stem_or_file);
  const auto json_path = std::filesystem::path(stem).concat(".json");
  const auto data_path = std::filesystem::path(stem).concat(".f32");

  FixtureMatrix fixture;
  fixture.sidecar = ReadText(json_path);
  try {
    const auto meta = nlohmann::json::parse(fixture.sidecar);
    if (meta.value("dtype", std::string("F32")) != "F32") {
      throw InputError(fmt::format("{}: only F32 fixtures are supported", json_path.string()));
    }
    fixture.shape = meta.at("shape").get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(fmt::format("{}: malformed sidecar: {}", json_path.string(), e.what()));
  }

  const std::string raw = ReadText(data_path);
  if (raw.size() != fixture.num_elements() * sizeof(float)) {
    throw InputError(fmt::format("{}: {} bytes do not match the sidecar shape", data_path.string(), raw.size()));
  }
  fixture.values.resize(fixture.num_elements());
  std::memcpy(fixture.values.data(), raw.data(), raw.size());
  return fixture;
}

void WriteFixtureMatrix(const std::filesystem::path& stem_or_file, const std::vector<std::size_t>& shape,
                        const std::vector<float>& values, const std::string& extra_json) {
  const std::filesystem::path stem = StemOf(stem_or_file);
  nlohmann::json meta = extra_json.empty() ? nlohmann::json::object() : nlohmann::json::parse(extra_json);
  if (!meta.is_object()) throw UsageError("fixture sidecar extras must be a JSON object");
  meta["dtype"] = "F32";
  meta["shape"] = shape;

  std::ofstream json_out(std::filesystem::path(stem).concat(".json"), std::ios::trunc);
  json_out << meta.dump(1) << "\n";
  std::ofstream data_out(std::filesystem::path(stem).concat(".f32"), std::ios::binary | std::ios::trunc);
  data_out.write(reinterpret_cast<const char*>(values.data()),
                 static_cast<std::streamsize>(values.size() * sizeof(float)));
  if (!json_out || !data_out) throw InputError(fmt::format("failed writing fixture '{}'", stem.string()));
}

std::vector<NormRow> ReadNormsCsv(const std::filesystem::path& path) {
  std::istringstream in(ReadText(path));
  std::string line;
  if (!std::getline(in, line)) throw InputError(fmt::format("{}: empty norms file", path.string()));
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = SplitCsv(line);
  if (header.size() < 2 || header[0] != "index" || header[1] != "token") {
    throw InputError(fmt::format("{}: expected header 'index,token,layer_<k>...'", path.string()));
  }
  std::vector<int> layers;
  for (std::size_t c = 2; c < header.size(); ++c) {
    if (header[c].rfind("layer_", 0) != 0) throw InputError(fmt::format("{}: bad column '{}'", path.string(), header[c]));
    try {
      layers.push_back(std::stoi(header[c].substr(6)));
    } catch (const std::logic_error&) {
      throw InputError(fmt::format("{}: bad column '{}'", path.string(), header[c]));
    }
  }
  std::vector<NormRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = SplitCsv(line);
    if (fields.size() != header.size()) {
      throw InputError(fmt::format("{}: row '{}' has {} fields", path.string(), line, fields.size()));
    }
    NormRow row;
    try {
      row.index = std::stoul(fields[0]);
      row.token = fields[1];
      for (std::size_t c = 0; c < layers.size(); ++c) row.by_layer[layers[c]] = std::stod(fields[c + 2]);
    } catch (const std::logic_error&) {
      throw InputError(fmt::format("{}: non-numeric field in row '{}'", path.string(), line));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace afn
