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

#include "naive_bert.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace afn::testing {
namespace {

struct Tensors {
  std::map<std::string, const NamedTensor*> by_name;

  const NamedTensor& Get(const std::string& name) const {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw std::runtime_error("oracle: missing " + name);
    return *it->second;
  }
  double At(const std::string& name, std::size_t r, std::size_t c) const {
    const NamedTensor& t = Get(name);
    return t.values[r * t.shape[1] + c];
  }
  double At(const std::string& name, std::size_t i) const { return Get(name).values[i]; }
};

// y[i][o] = b[o] + sum_k x[i][k] * W[o][k]
NaiveMatrix Dense(const Tensors& t, const std::string& name, const NaiveMatrix& x) {
  const NamedTensor& w = t.Get(name + ".weight");
  const std::size_t out_f = w.shape[0];
  const std::size_t in_f = w.shape[1];
  NaiveMatrix y(x.size(), std::vector<double>(out_f));
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t o = 0; o < out_f; ++o) {
      double acc = t.At(name + ".bias", o);
      for (std::size_t k = 0; k < in_f; ++k) acc += x[i][k] * t.At(name + ".weight", o, k);
      y[i][o] = acc;
    }
  }
  return y;
}

NaiveMatrix Norm(const Tensors& t, const std::string& name, const NaiveMatrix& x, double eps) {
  NaiveMatrix y = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double n = static_cast<double>(x[i].size());
    double mean = 0;
    for (double v : x[i]) mean += v;
    mean /= n;
    double var = 0;
    for (double v : x[i]) var += (v - mean) * (v - mean);
    var /= n;
    for (std::size_t k = 0; k < x[i].size(); ++k) {
      y[i][k] = (x[i][k] - mean) / std::sqrt(var + eps) * t.At(name + ".weight", k) + t.At(name + ".bias", k);
    }
  }
  return y;
}

NaiveMatrix Add(const NaiveMatrix& a, const NaiveMatrix& b) {
  NaiveMatrix c = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < a[i].size(); ++k) c[i][k] += b[i][k];
  return c;
}

}  // namespace

std::vector<NaiveMatrix> NaiveForward(const std::vector<NamedTensor>& tensors, const NaiveDims& dims,
                                      const std::vector<std::int32_t>& ids, std::size_t valid) {
  Tensors t;
  for (const NamedTensor& nt : tensors) t.by_name[nt.name] = &nt;

  const std::size_t n = ids.size();
  const std::size_t h = static_cast<std::size_t>(dims.hidden);
  const std::size_t dh = h / static_cast<std::size_t>(dims.heads);

  NaiveMatrix x(n, std::vector<double>(h));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < h; ++k) {
      x[i][k] = t.At("embeddings.word_embeddings.weight", static_cast<std::size_t>(ids[i]), k) +
                t.At("embeddings.position_embeddings.weight", i, k) +
                t.At("embeddings.token_type_embeddings.weight", 0, k);
    }
  }
  x = Norm(t, "embeddings.LayerNorm", x, dims.eps);
  std::vector<NaiveMatrix> states{x};

  for (int l = 0; l < dims.layers; ++l) {
    const std::string p = "encoder.layer." + std::to_string(l) + ".";
    const NaiveMatrix q = Dense(t, p + "attention.self.query", x);
    const NaiveMatrix k = Dense(t, p + "attention.self.key", x);
    const NaiveMatrix v = Dense(t, p + "attention.self.value", x);

    NaiveMatrix context(n, std::vector<double>(h, 0.0));
    for (int head = 0; head < dims.heads; ++head) {
      const std::size_t off = static_cast<std::size_t>(head) * dh;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> score(n);
        double best = -1e300;
        for (std::size_t j = 0; j < n; ++j) {
          double dot = 0;
          for (std::size_t d = 0; d < dh; ++d) dot += q[i][off + d] * k[j][off + d];
          score[j] = dot / std::sqrt(static_cast<double>(dh)) + (j >= valid ? -10000.0 : 0.0);
          best = std::max(best, score[j]);
        }
        double z = 0;
        for (double& s : score) {
          s = std::exp(s - best);
          z += s;
        }
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t d = 0; d < dh; ++d) context[i][off + d] += score[j] / z * v[j][off + d];
      }
    }
    const NaiveMatrix attended =
        Norm(t, p + "attention.output.LayerNorm", Add(Dense(t, p + "attention.output.dense", context), x), dims.eps);

    NaiveMatrix inter = Dense(t, p + "intermediate.dense", attended);
    for (auto& row : inter)
      for (double& u : row) u = 0.5 * u * (1.0 + std::erf(u / std::sqrt(2.0)));
    x = Norm(t, p + "output.LayerNorm", Add(Dense(t, p + "output.dense", inter), attended), dims.eps);
    states.push_back(x);
  }
  return states;
}

}  // namespace afn::testing
