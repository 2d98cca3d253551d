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

#ifndef AFN_TESTS_SUPPORT_CHECKS_H_
#define AFN_TESTS_SUPPORT_CHECKS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace afn::testing {

// Outcome of a multi-part check; `failures` lists every violated assertion.
struct CheckResult {
  std::vector<std::string> failures;
  std::string summary;

  bool ok() const { return failures.empty(); }
  void Fail(std::string message) { failures.push_back(std::move(message)); }
};

inline constexpr double kTriangleTolerance = 1e-5;
inline constexpr double kEncoderTolerance = 1e-5;
inline constexpr double kSoftmaxTolerance = 1e-5;

// Randomized metric properties: shift symmetry and identity, triangle
// inequality, threshold bounds, strict HIGH/LOW separation, R_H in [0, 1],
// ranking prefixes and quartile agreement with a counting oracle.
CheckResult CheckMetricProperties(std::uint32_t seed, int cases_per_property);

// Tiny random checkpoint against the naive oracle, softmax row sums and pad
// masking, over `inputs` random sequences.
CheckResult CheckTinyEquivalence(std::uint32_t seed, int inputs);

// Runs the afn binary over the sample corpus with a narrow synthetic model:
// schema validity, byte-identical reruns and exit codes.
CheckResult CheckCliContract(const std::filesystem::path& afn_binary);

}  // namespace afn::testing

#endif  // AFN_TESTS_SUPPORT_CHECKS_H_
