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
#ifndef AFN_SRC_JSON_WRITER_H_
#define AFN_SRC_JSON_WRITER_H_

#include <string>

#include <nlohmann/json.hpp>

namespace afn::internal {

// Pretty-prints with sorted keys and fixed six-decimal real numbers so that
// report files are byte-stable across runs.
std::string DumpReportJson(const nlohmann::json& value);

}  // namespace afn::internal

#endif  // AFN_SRC_JSON_WRITER_H_
