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

#ifndef AFN_ERROR_H_
#define AFN_ERROR_H_

#include <stdexcept>
#include <string>

namespace afn {

// Broad failure classes. The CLI maps them onto its exit codes.
enum class ErrorKind {
  kUsage = 1,
  kInputData = 2,
  kModelLoad = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error UsageError(const std::string& message) {
  return Error(ErrorKind::kUsage, message);
}
inline Error InputError(const std::string& message) {
  return Error(ErrorKind::kInputData, message);
}
inline Error ModelLoadError(const std::string& message) {
  return Error(ErrorKind::kModelLoad, message);
}

}  // namespace afn

#endif  // AFN_ERROR_H_
