// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "behave/error.hpp"
#include "behave/random.hpp"

namespace behave {

namespace detail {

// Eight independent partial sums so the compiler can vectorize without
// reassociating; the summation order is fixed.
template <typename Real>
Real dot(const Real* a, const Real* b, std::size_t n) noexcept {
  Real acc[8] = {};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    for (int k = 0; k < 8; ++k) acc[k] += a[i + k] * b[i + k];
  Real tail = 0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7])) + tail;
}

}  // namespace detail

/// Fully connected network with ReLU hidden layers and a linear output layer.
/// Parameters live in one flat vector: for each layer, weights (out x in,
/// row-major) followed by the bias.
template <typename Real>
class BasicMlp {
 public:
  /// Per-call intermediate values needed by backward().
  struct Cache {
    std::vector<std::vector<Real>> inputs;  // input to each layer
    std::vector<std::vector<Real>> gates;   // hidden layers: 0 or the dropout scale per unit
  };

  BasicMlp() = default;
  explicit BasicMlp(std::vector<std::size_t> dims, double dropout = 0.0)
      : dims_(std::move(dims)), dropout_(dropout) {
    if (dims_.size() < 2) throw Error(ErrorCode::InvalidConfig, "network needs at least one layer");
    for (auto d : dims_)
      if (d == 0) throw Error(ErrorCode::InvalidConfig, "layer widths must be positive");
    if (!(dropout_ >= 0.0 && dropout_ < 1.0))
      throw Error(ErrorCode::InvalidConfig, "dropout must be in [0, 1)");
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
      offsets_.push_back(off);
      off += dims_[l + 1] * dims_[l] + dims_[l + 1];
    }
    params_.assign(off, Real(0));
  }

  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t layers() const noexcept { return dims_.empty() ? 0 : dims_.size() - 1; }
  std::size_t input_dim() const noexcept { return dims_.front(); }
  std::size_t output_dim() const noexcept { return dims_.back(); }
  double dropout() const noexcept { return dropout_; }

  std::vector<Real>& params() noexcept { return params_; }
  const std::vector<Real>& params() const noexcept { return params_; }
  std::size_t weight_offset(std::size_t l) const { return offsets_.at(l); }
  std::size_t bias_offset(std::size_t l) const { return offsets_.at(l) + dims_[l + 1] * dims_[l]; }

  /// Weights and biases ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
  void init_uniform(std::uint64_t seed) {
    Rng rng(seed);
    for (std::size_t l = 0; l < layers(); ++l) {
      const double bound = 1.0 / std::sqrt(static_cast<double>(dims_[l]));
      const std::size_t n = dims_[l + 1] * dims_[l] + dims_[l + 1];
      for (std::size_t k = 0; k < n; ++k)
        params_[offsets_[l] + k] = static_cast<Real>(rng.uniform(-bound, bound));
    }
  }

  /// Linear output of the last layer. Dropout applies to hidden layers when
  /// `dropout_rng` is given (training); null means evaluation.
  std::vector<Real> forward(std::span<const Real> x, Cache* cache = nullptr,
                            Rng* dropout_rng = nullptr) const {
    if (x.size() != input_dim())
      throw Error(ErrorCode::DimMismatch, "input has " + std::to_string(x.size()) +
                                              " values, network expects " + std::to_string(input_dim()));
    if (cache) {
      cache->inputs.assign(layers(), {});
      cache->gates.assign(layers() - 1, {});
    }
    const bool drop = dropout_rng != nullptr && dropout_ > 0.0;
    const Real scale = static_cast<Real>(1.0 / (1.0 - dropout_));
    std::vector<Real> cur(x.begin(), x.end());
    for (std::size_t l = 0; l < layers(); ++l) {
      const std::size_t in = dims_[l];
      const std::size_t out = dims_[l + 1];
      const Real* w = params_.data() + offsets_[l];
      const Real* b = w + out * in;
      std::vector<Real> next(out);
      for (std::size_t o = 0; o < out; ++o) next[o] = detail::dot(w + o * in, cur.data(), in) + b[o];
      if (l + 1 < layers()) {
        std::vector<Real> gate(out);
        for (std::size_t o = 0; o < out; ++o) {
          Real g = next[o] > Real(0) ? Real(1) : Real(0);
          if (drop) g = dropout_rng->bernoulli(dropout_) ? Real(0) : g * scale;
          gate[o] = g;
          next[o] *= g;
        }
        if (cache) cache->gates[l] = std::move(gate);
      }
      if (cache) cache->inputs[l] = std::move(cur);
      cur = std::move(next);
    }
    return cur;
  }

  /// Adds d(loss)/d(params) into `grad` given d(loss)/d(output).
  void backward(const Cache& cache, std::span<const Real> grad_out, std::span<Real> grad) const {
    std::vector<Real> g(grad_out.begin(), grad_out.end());
    for (std::size_t l = layers(); l-- > 0;) {
      const std::size_t in = dims_[l];
      const std::size_t out = dims_[l + 1];
      const Real* w = params_.data() + offsets_[l];
      Real* gw = grad.data() + offsets_[l];
      Real* gb = gw + out * in;
      const Real* x = cache.inputs[l].data();
      for (std::size_t o = 0; o < out; ++o) {
        const Real go = g[o];
        gb[o] += go;
        if (go == Real(0)) continue;
        Real* row = gw + o * in;
        for (std::size_t i = 0; i < in; ++i) row[i] += go * x[i];
      }
      if (l == 0) break;
      std::vector<Real> gin(in, Real(0));
      for (std::size_t o = 0; o < out; ++o) {
        const Real go = g[o];
        if (go == Real(0)) continue;
        const Real* row = w + o * in;
        for (std::size_t i = 0; i < in; ++i) gin[i] += go * row[i];
      }
      const auto& gate = cache.gates[l - 1];
      for (std::size_t i = 0; i < in; ++i) gin[i] *= gate[i];
      g = std::move(gin);
    }
  }

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> offsets_;
  std::vector<Real> params_;
  double dropout_ = 0.0;
};

/// The alignment projector: an MLP whose output is L2-normalized.
template <typename Real>
class BasicProjector {
 public:
  struct Cache {
    typename BasicMlp<Real>::Cache mlp;
    std::vector<Real> unit;  // normalized output
    Real norm = 0;           // norm of the raw output
  };

  BasicProjector() = default;
  explicit BasicProjector(BasicMlp<Real> net) : net_(std::move(net)) {}

  BasicMlp<Real>& net() noexcept { return net_; }
  const BasicMlp<Real>& net() const noexcept { return net_; }
  std::size_t input_dim() const noexcept { return net_.input_dim(); }
  std::size_t output_dim() const noexcept { return net_.output_dim(); }

  std::vector<Real> forward(std::span<const Real> x, Cache* cache = nullptr,
                            Rng* dropout_rng = nullptr) const {
    std::vector<Real> y = net_.forward(x, cache ? &cache->mlp : nullptr, dropout_rng);
    double sq = 0.0;
    for (Real v : y) sq += static_cast<double>(v) * v;
    const double norm = std::sqrt(sq);
    if (norm <= 1e-12) {
      std::fill(y.begin(), y.end(), Real(0));
    } else {
      for (Real& v : y) v = static_cast<Real>(v / norm);
    }
    if (cache) {
      cache->unit = y;
      cache->norm = static_cast<Real>(norm);
    }
    return y;
  }

  /// grad_unit is d(loss)/d(normalized output). Chains through the
  /// normalization Jacobian (I - u u^T) / |y|.
  void backward(const Cache& cache, std::span<const Real> grad_unit, std::span<Real> grad) const {
    const std::size_t n = cache.unit.size();
    std::vector<Real> gy(n, Real(0));
    if (cache.norm > Real(1e-12)) {
      Real proj = 0;
      for (std::size_t k = 0; k < n; ++k) proj += cache.unit[k] * grad_unit[k];
      for (std::size_t k = 0; k < n; ++k) gy[k] = (grad_unit[k] - cache.unit[k] * proj) / cache.norm;
    }
    net_.backward(cache.mlp, gy, grad);
  }

 private:
  BasicMlp<Real> net_;
};

using Mlp = BasicMlp<float>;
using MlpProjector = BasicProjector<float>;

}  // namespace behave
