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

#ifndef AFN_TESTS_SUPPORT_NAIVE_BERT_H_
#define AFN_TESTS_SUPPORT_NAIVE_BERT_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "afn/safetensors.h"

namespace afn::testing {

// A deliberately plain double-precision BERT encoder used as a test oracle.
// It reads the raw named tensors and shares nothing with afn::Forward.
struct NaiveDims {
  int layers = 0;
  int hidden = 0;
  int heads = 0;
  double eps = 1e-12;
};

using NaiveMatrix = std::vector<std::vector<double>>;

// Returns layers + 1 matrices: the embedding output followed by each block.
// Keys at positions >= valid receive the -10000 additive mask.
std::vector<NaiveMatrix> NaiveForward(const std::vector<NamedTensor>& tensors, const NaiveDims& dims,
                                      const std::vector<std::int32_t>& ids, std::size_t valid);

}  // namespace afn::testing

#endif  // AFN_TESTS_SUPPORT_NAIVE_BERT_H_
