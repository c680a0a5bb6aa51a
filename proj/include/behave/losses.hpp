// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <span>
#include <string>

#include "behave/error.hpp"

namespace behave {

namespace detail {

inline void check_same_dim(std::size_t a, std::size_t b) {
  if (a != b)
    throw Error(ErrorCode::DimMismatch, "vectors of length " + std::to_string(a) + " and " + std::to_string(b));
}

}  // namespace detail

/// 1 - cos(a, b). When grad_a is non-empty it receives d(loss)/d(a) (overwritten).
template <typename Real>
double cosine_loss(std::span<const Real> a, std::span<const Real> b, std::span<Real> grad_a = {}) {
  detail::check_same_dim(a.size(), b.size());
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ab += static_cast<double>(a[k]) * b[k];
    aa += static_cast<double>(a[k]) * a[k];
    bb += static_cast<double>(b[k]) * b[k];
  }
  if (aa == 0.0 || bb == 0.0) throw Error(ErrorCode::ZeroVector, "cosine loss of a zero vector");
  const double na = std::sqrt(aa), nb = std::sqrt(bb);
  const double cos = ab / (na * nb);
  if (!grad_a.empty()) {
    // d/da [-(a.b)/(|a||b|)] = -b/(|a||b|) + (a.b) a / (|a|^3 |b|)
    const double c1 = 1.0 / (na * nb);
    const double c2 = ab / (aa * na * nb);
    for (std::size_t k = 0; k < a.size(); ++k)
      grad_a[k] = static_cast<Real>(-c1 * b[k] + c2 * a[k]);
  }
  return 1.0 - cos;
}

/// Mean squared difference.
template <typename Real>
double mse_loss(std::span<const Real> a, std::span<const Real> b, std::span<Real> grad_a = {}) {
  detail::check_same_dim(a.size(), b.size());
  if (a.empty()) throw Error(ErrorCode::EmptyInput, "mse of empty vectors");
  double sum = 0.0;
  const double n = static_cast<double>(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = static_cast<double>(a[k]) - b[k];
    sum += d * d;
    if (!grad_a.empty()) grad_a[k] = static_cast<Real>(2.0 * d / n);
  }
  return sum / n;
}

/// max(0, Lcos(z_i, c_i) - Lcos(z_j, c_i) + margin). Gradients are written for
/// z_i and z_j when the spans are non-empty (zero when the hinge is inactive).
template <typename Real>
double preference_loss(std::span<const Real> z_i, std::span<const Real> z_j, std::span<const Real> caption_i,
                       double margin, std::span<Real> grad_i = {}, std::span<Real> grad_j = {}) {
  detail::check_same_dim(z_i.size(), z_j.size());
  const double li = cosine_loss(z_i, caption_i, grad_i);
  const double lj = cosine_loss(z_j, caption_i, grad_j);
  const double v = li - lj + margin;
  if (v <= 0.0) {
    for (auto& g : grad_i) g = Real(0);
    for (auto& g : grad_j) g = Real(0);
    return 0.0;
  }
  for (auto& g : grad_j) g = -g;
  return v;
}

}  // namespace behave
