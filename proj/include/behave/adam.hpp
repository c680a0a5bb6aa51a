// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "behave/error.hpp"

namespace behave {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Bias-corrected Adam over a flat parameter vector.
template <typename Real>
class BasicAdam {
 public:
  BasicAdam(std::size_t n, AdamConfig config) : config_(config), m_(n, 0.0), v_(n, 0.0) {}

  std::uint64_t steps() const noexcept { return t_; }

  void step(std::span<Real> params, std::span<const Real> grads) {
    if (params.size() != m_.size() || grads.size() != m_.size())
      throw Error(ErrorCode::DimMismatch, "optimizer state does not match parameters");
    ++t_;
    const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
    for (std::size_t k = 0; k < params.size(); ++k) {
      const double g = grads[k];
      m_[k] = config_.beta1 * m_[k] + (1.0 - config_.beta1) * g;
      v_[k] = config_.beta2 * v_[k] + (1.0 - config_.beta2) * g * g;
      const double update = config_.learning_rate * (m_[k] / c1) / (std::sqrt(v_[k] / c2) + config_.eps);
      params[k] = static_cast<Real>(params[k] - update);
    }
  }

 private:
  AdamConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::uint64_t t_ = 0;
};

using Adam = BasicAdam<float>;

}  // namespace behave
