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
#ifndef AFN_ENCODER_H_
#define AFN_ENCODER_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "afn/matrix.h"
#include "afn/model_config.h"
#include "afn/safetensors.h"
#include "afn/wordpiece.h"

namespace afn {

struct Linear {
  Matrix weight;  // out_features x in_features
  std::vector<float> bias;
};

struct LayerNormParams {
  std::vector<float> gamma;
  std::vector<float> beta;
};

struct EncoderLayerWeights {
  Linear query;
  Linear key;
  Linear value;
  Linear attention_output;
  LayerNormParams attention_norm;
  Linear intermediate;
  Linear output;
  LayerNormParams output_norm;
};

struct ModelWeights {
  Matrix token_embeddings;     // vocab_size x hidden
  Matrix position_embeddings;  // max_position x hidden
  Matrix segment_embeddings;   // type_vocab_size x hidden
  LayerNormParams embedding_norm;
  std::vector<EncoderLayerWeights> layers;
};

// Loads encoder tensors using the Hugging Face BERT naming scheme. An
// optional "bert." prefix and the legacy LayerNorm gamma/beta names are
// accepted. Every tensor is shape-checked against config; failures name the
// offending tensor.
ModelWeights LoadWeights(const SafeTensorsFile& file, const ModelConfig& config);
ModelWeights LoadWeights(const std::filesystem::path& path, const ModelConfig& config);

// Canonical tensor names, without prefix.
std::vector<std::string> ExpectedTensorNames(const ModelConfig& config);

// Per-sentence hidden states. layers[0] is the embedding output and
// layers[k] the output of transformer block k.
struct HiddenStates {
  Encoding encoding;
  std::vector<Matrix> layers;

  std::size_t num_layers() const { return layers.size(); }
  std::size_t num_tokens() const { return encoding.size(); }
};

// Throws afn::Error (kUsage) when layer is outside [0, num_layers()).
const Matrix& LayerSlice(const HiddenStates& states, int layer);

// Test hook into forward-pass internals. Calls happen in execution order.
class ForwardObserver {
 public:
  virtual ~ForwardObserver() = default;
  // Row-softmaxed attention probabilities (tokens x tokens) of one head.
  virtual void OnAttentionProbs(std::size_t /*layer*/, std::size_t /*head*/, const Matrix& /*probs*/) {}
  // Rows after mean/variance normalization, before the affine step.
  // site is "embeddings", "attention" or "output".
  virtual void OnLayerNormInput(std::size_t /*layer*/, const std::string& /*site*/, const Matrix& /*normalized*/) {}
};

// Evaluation-mode forward pass (dropout is identity, segment ids are zero).
// Padding positions (index >= encoding.length) are masked out of attention
// with an additive -10000. Throws afn::Error (kInputData) for ids outside
// the vocabulary or sequences longer than max_position.
HiddenStates Forward(const Encoding& encoding, const ModelWeights& weights, const ModelConfig& config,
                     ForwardObserver* observer = nullptr);

}  // namespace afn

#endif  // AFN_ENCODER_H_
