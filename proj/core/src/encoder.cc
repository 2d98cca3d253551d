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
#include "afn/encoder.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "afn/error.h"

namespace afn {
namespace {

constexpr float kMaskedScore = -10000.0f;

// Reads a tensor, checking its shape against the expected extents.
class TensorReader {
 public:
  TensorReader(const SafeTensorsFile& file, std::string prefix) : file_(file), prefix_(std::move(prefix)) {}

  std::vector<float> Read(const std::string& name, const std::vector<std::size_t>& shape) const {
    const std::string full = prefix_ + name;
    const TensorInfo& info = file_.Info(full);
    if (info.shape != shape) {
      throw ModelLoadError(fmt::format("tensor '{}': shape mismatch, expected {} but found {}", full, shape, info.shape));
    }
    return file_.ReadFloat(full);
  }

  Matrix ReadMatrix(const std::string& name, std::size_t rows, std::size_t cols) const {
    return Matrix(rows, cols, Read(name, {rows, cols}));
  }

  Linear ReadLinear(const std::string& name, std::size_t out_features, std::size_t in_features) const {
    return Linear{ReadMatrix(name + ".weight", out_features, in_features), Read(name + ".bias", {out_features})};
  }

  // Accepts both LayerNorm.weight/bias and the legacy gamma/beta names.
  LayerNormParams ReadLayerNorm(const std::string& name, std::size_t size) const {
    const bool legacy = !file_.Contains(prefix_ + name + ".weight") && file_.Contains(prefix_ + name + ".gamma");
    return LayerNormParams{Read(name + (legacy ? ".gamma" : ".weight"), {size}),
                           Read(name + (legacy ? ".beta" : ".bias"), {size})};
  }

 private:
  const SafeTensorsFile& file_;
  std::string prefix_;
};

float Dot(const float* a, const float* b, std::size_t n) {
  float acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (std::size_t k = 0; k < 8; ++k) acc[k] += a[i + k] * b[i + k];
  }
  float sum = ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

// y = x W^T + b
Matrix Apply(const Linear& linear, const Matrix& x) {
  const std::size_t out_features = linear.weight.rows();
  const std::size_t in_features = linear.weight.cols();
  Matrix y(x.rows(), out_features);
  for (std::size_t o = 0; o < out_features; ++o) {
    const float* w = linear.weight.row(o).data();
    for (std::size_t i = 0; i < x.rows(); ++i) {
      y(i, o) = Dot(x.row(i).data(), w, in_features) + linear.bias[o];
    }
  }
  return y;
}

void AddInPlace(Matrix& x, const Matrix& residual) {
  auto dst = x.data();
  auto src = residual.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

Matrix LayerNorm(const Matrix& x, const LayerNormParams& params, float epsilon, ForwardObserver* observer,
                 std::size_t layer, const char* site) {
  const std::size_t width = x.cols();
  Matrix normalized(x.rows(), width);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto in = x.row(r);
    float mean = 0.0f;
    for (float v : in) mean += v;
    mean /= static_cast<float>(width);
    float var = 0.0f;
    for (float v : in) var += (v - mean) * (v - mean);
    var /= static_cast<float>(width);
    const float inv_std = 1.0f / std::sqrt(var + epsilon);
    auto out = normalized.row(r);
    for (std::size_t c = 0; c < width; ++c) out[c] = (in[c] - mean) * inv_std;
  }
  if (observer != nullptr) observer->OnLayerNormInput(layer, site, normalized);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto row = normalized.row(r);
    for (std::size_t c = 0; c < width; ++c) row[c] = row[c] * params.gamma[c] + params.beta[c];
  }
  return normalized;
}

float Gelu(float x) { return 0.5f * x * (1.0f + std::erf(x * 0.70710678118654752f)); }

Matrix SelfAttention(const Matrix& x, const EncoderLayerWeights& w, const ModelConfig& config, std::size_t valid,
                     std::size_t layer, ForwardObserver* observer) {
  const std::size_t n = x.rows();
  const std::size_t head_dim = config.head_dim();
  const float scale = 1.0f / std::sqrt(static_cast<float>(head_dim));
  const Matrix q = Apply(w.query, x);
  const Matrix k = Apply(w.key, x);
  const Matrix v = Apply(w.value, x);

  Matrix context(n, config.hidden_size);
  Matrix probs(n, n);
  for (std::size_t h = 0; h < config.num_heads; ++h) {
    const std::size_t offset = h * head_dim;
    for (std::size_t i = 0; i < n; ++i) {
      auto p = probs.row(i);
      float max_score = -INFINITY;
      for (std::size_t j = 0; j < n; ++j) {
        float s = Dot(q.row(i).data() + offset, k.row(j).data() + offset, head_dim) * scale;
        if (j >= valid) s += kMaskedScore;
        p[j] = s;
        max_score = std::max(max_score, s);
      }
      float sum = 0.0f;
      for (float& s : p) {
        s = std::exp(s - max_score);
        sum += s;
      }
      for (float& s : p) s /= sum;
    }
    if (observer != nullptr) observer->OnAttentionProbs(layer, h, probs);
    for (std::size_t i = 0; i < n; ++i) {
      float* out = context.row(i).data() + offset;
      for (std::size_t j = 0; j < n; ++j) {
        const float pij = probs(i, j);
        const float* vj = v.row(j).data() + offset;
        for (std::size_t c = 0; c < head_dim; ++c) out[c] += pij * vj[c];
      }
    }
  }
  return Apply(w.attention_output, context);
}

}  // namespace

std::vector<std::string> ExpectedTensorNames(const ModelConfig& config) {
  std::vector<std::string> names = {
      "embeddings.word_embeddings.weight", "embeddings.position_embeddings.weight",
      "embeddings.token_type_embeddings.weight", "embeddings.LayerNorm.weight", "embeddings.LayerNorm.bias"};
  for (std::size_t l = 0; l < config.num_layers; ++l) {
    const std::string p = fmt::format("encoder.layer.{}.", l);
    for (const char* suffix :
         {"attention.self.query", "attention.self.key", "attention.self.value", "attention.output.dense",
          "attention.output.LayerNorm", "intermediate.dense", "output.dense", "output.LayerNorm"}) {
      names.push_back(p + suffix + ".weight");
      names.push_back(p + suffix + ".bias");
    }
  }
  return names;
}

ModelWeights LoadWeights(const SafeTensorsFile& file, const ModelConfig& config) {
  config.Validate();
  const std::string anchor = "embeddings.word_embeddings.weight";
  std::string prefix;
  if (!file.Contains(anchor) && file.Contains("bert." + anchor)) prefix = "bert.";
  const TensorReader reader(file, prefix);

  const std::size_t hidden = config.hidden_size;
  ModelWeights weights;
  weights.token_embeddings = reader.ReadMatrix("embeddings.word_embeddings.weight", config.vocab_size, hidden);
  weights.position_embeddings =
      reader.ReadMatrix("embeddings.position_embeddings.weight", config.max_position, hidden);
  weights.segment_embeddings =
      reader.ReadMatrix("embeddings.token_type_embeddings.weight", config.type_vocab_size, hidden);
  weights.embedding_norm = reader.ReadLayerNorm("embeddings.LayerNorm", hidden);

  weights.layers.reserve(config.num_layers);
  for (std::size_t l = 0; l < config.num_layers; ++l) {
    const std::string p = fmt::format("encoder.layer.{}.", l);
    EncoderLayerWeights layer;
    layer.query = reader.ReadLinear(p + "attention.self.query", hidden, hidden);
    layer.key = reader.ReadLinear(p + "attention.self.key", hidden, hidden);
    layer.value = reader.ReadLinear(p + "attention.self.value", hidden, hidden);
    layer.attention_output = reader.ReadLinear(p + "attention.output.dense", hidden, hidden);
    layer.attention_norm = reader.ReadLayerNorm(p + "attention.output.LayerNorm", hidden);
    layer.intermediate = reader.ReadLinear(p + "intermediate.dense", config.intermediate_size, hidden);
    layer.output = reader.ReadLinear(p + "output.dense", hidden, config.intermediate_size);
    layer.output_norm = reader.ReadLayerNorm(p + "output.LayerNorm", hidden);
    weights.layers.push_back(std::move(layer));
  }
  return weights;
}

ModelWeights LoadWeights(const std::filesystem::path& path, const ModelConfig& config) {
  return LoadWeights(SafeTensorsFile::Open(path), config);
}

const Matrix& LayerSlice(const HiddenStates& states, int layer) {
  if (layer < 0 || static_cast<std::size_t>(layer) >= states.layers.size()) {
    throw UsageError(fmt::format("layer {} out of range [0, {}]", layer, states.layers.size() - 1));
  }
  return states.layers[static_cast<std::size_t>(layer)];
}

HiddenStates Forward(const Encoding& encoding, const ModelWeights& weights, const ModelConfig& config,
                     ForwardObserver* observer) {
  const std::size_t n = encoding.ids.size();
  const std::size_t hidden = config.hidden_size;
  if (n == 0) throw InputError("cannot run the encoder on an empty token sequence");
  if (n > config.max_position) {
    throw InputError(fmt::format("sequence of {} tokens exceeds max_position {}", n, config.max_position));
  }
  if (weights.layers.size() != config.num_layers || weights.token_embeddings.cols() != hidden) {
    throw UsageError("model weights do not match the model config");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = encoding.ids[i];
    if (id < 0 || static_cast<std::size_t>(id) >= config.vocab_size) {
      throw InputError(fmt::format("token id {} at position {} outside vocabulary of {}", id, i, config.vocab_size));
    }
  }
  const std::size_t valid = std::min(encoding.length == 0 ? n : encoding.length, n);

  HiddenStates states;
  states.encoding = encoding;
  states.layers.reserve(config.num_layers + 1);

  Matrix x(n, hidden);
  for (std::size_t i = 0; i < n; ++i) {
    auto tok = weights.token_embeddings.row(static_cast<std::size_t>(encoding.ids[i]));
    auto pos = weights.position_embeddings.row(i);
    auto seg = weights.segment_embeddings.row(0);
    auto out = x.row(i);
    for (std::size_t c = 0; c < hidden; ++c) out[c] = tok[c] + pos[c] + seg[c];
  }
  x = LayerNorm(x, weights.embedding_norm, config.layernorm_epsilon, observer, 0, "embeddings");
  states.layers.push_back(x);

  for (std::size_t l = 0; l < config.num_layers; ++l) {
    const EncoderLayerWeights& w = weights.layers[l];
    Matrix attended = SelfAttention(x, w, config, valid, l, observer);
    AddInPlace(attended, x);
    Matrix h1 = LayerNorm(attended, w.attention_norm, config.layernorm_epsilon, observer, l, "attention");

    Matrix inner = Apply(w.intermediate, h1);
    for (float& v : inner.data()) v = Gelu(v);
    Matrix out = Apply(w.output, inner);
    AddInPlace(out, h1);
    x = LayerNorm(out, w.output_norm, config.layernorm_epsilon, observer, l, "output");
    states.layers.push_back(x);
  }

  for (std::size_t l = 0; l < states.layers.size(); ++l) {
    for (float v : states.layers[l].data()) {
      if (!std::isfinite(v)) {
        throw ModelLoadError(fmt::format("checkpoint produced a non-finite activation at layer {}", l));
      }
    }
  }
  return states;
}

}  // namespace afn
