// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <set>

#include "behave/losses.hpp"

namespace behave::oracle {

double silhouette(const std::vector<std::vector<double>>& points, const std::vector<int>& labels) {
  const std::size_t n = points.size();
  auto dist = [&](std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t d = 0; d < points[i].size(); ++d) s += (points[i][d] - points[j][d]) * (points[i][d] - points[j][d]);
    return std::sqrt(s);
  };
  std::set<int> clusters(labels.begin(), labels.end());
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double a_sum = 0.0;
    int a_count = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && labels[j] == labels[i]) {
        a_sum += dist(i, j);
        ++a_count;
      }
    if (a_count == 0) continue;  // singleton scores 0
    const double a = a_sum / a_count;
    double b = std::numeric_limits<double>::infinity();
    for (int c : clusters) {
      if (c == labels[i]) continue;
      double s = 0.0;
      int m = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (labels[j] == c) {
          s += dist(i, j);
          ++m;
        }
      b = std::min(b, s / m);
    }
    const double denom = std::max(a, b);
    total += denom == 0.0 ? 0.0 : (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

std::vector<std::uint8_t> propagated(const std::vector<std::uint8_t>& raw, int delay, int length) {
  const int n = static_cast<int>(raw.size());
  std::vector<std::uint8_t> out(raw.size(), 0);
  for (int f = 0; f < n; ++f)
    for (int p = 0; p <= f; ++p)
      if (raw[p] && f >= p + delay && f <= p + delay + length - 1) out[f] = 1;
  return out;
}

std::vector<ReferenceWindow> preprocess(const std::vector<TimestepRecord>& records, const GameProfile& profile,
                                        const ActionCatalog& base, int window, int stride) {
  const ActionCatalog catalog = profile.effective_catalog(base);
  const int n = static_cast<int>(records.size());
  const std::size_t m = catalog.size();
  std::vector<std::vector<std::uint8_t>> raw(m, std::vector<std::uint8_t>(records.size(), 0));

  for (int t = 1; t < n; ++t) {
    const auto& cur = records[t];
    const auto& prev = records[t - 1];
    const bool reset = profile.mouse_mode == MouseMode::AutoCenter &&
                       std::abs(cur.mouse_x - profile.screen_center.x) <= profile.center_epsilon_px &&
                       std::abs(cur.mouse_y - profile.screen_center.y) <= profile.center_epsilon_px;
    if (reset) continue;
    const int dx = cur.mouse_x - prev.mouse_x;
    const int dy = cur.mouse_y - prev.mouse_y;
    const int th = profile.delta_threshold_px;
    for (std::size_t a = 0; a < m; ++a) {
      const auto& id = catalog[a].action_id;
      if (id == "mouse_left" && dx <= -th) raw[a][t] = 1;
      if (id == "mouse_right" && dx >= th) raw[a][t] = 1;
      if (id == "mouse_up" && dy <= -th) raw[a][t] = 1;
      if (id == "mouse_down" && dy >= th) raw[a][t] = 1;
    }
  }
  std::size_t k = 0;
  for (std::size_t a = 0; a < m; ++a) {
    if (catalog[a].device == Device::MouseMove) continue;
    for (int t = 0; t < n; ++t) raw[a][t] = records[t].keys[k];
    ++k;
  }

  std::vector<std::vector<std::uint8_t>> labels(m);
  for (std::size_t a = 0; a < m; ++a) labels[a] = propagated(raw[a], catalog[a].anim.delay, catalog[a].anim.length);

  std::vector<ReferenceWindow> out;
  for (int s = 0; s + window <= n; ++s) {
    if (s % stride != 0) continue;
    ReferenceWindow w;
    w.start_frame = records[s].frame_index;
    w.bits.assign(m, 0);
    for (std::size_t a = 0; a < m; ++a) {
      int count = 0;
      for (int f = s; f < s + window; ++f) count += labels[a][f];
      w.bits[a] = count >= catalog[a].anim.cutoff;
    }
    for (std::size_t a = 0; a < m; ++a) {
      if (!w.bits[a]) continue;
      if (!w.caption.empty()) w.caption += ", ";
      w.caption += catalog[a].phrase;
      w.panning |= catalog[a].category == Category::Panning;
      w.navigation |= catalog[a].category == Category::Navigation;
      w.weapon |= catalog[a].category == Category::Weapon;
    }
    if (w.caption.empty()) w.caption = "Idle";
    out.push_back(std::move(w));
  }
  return out;
}

namespace {

double loss_value(const BasicProjector<double>& p, std::span<const double> x, std::span<const double> x_other,
                  std::span<const double> caption, CheckLoss loss, double margin) {
  const auto z = p.forward(x);
  switch (loss) {
    case CheckLoss::Cosine: return cosine_loss<double>(z, caption);
    case CheckLoss::Mse: return mse_loss<double>(z, caption);
    case CheckLoss::Preference: {
      const auto zj = p.forward(x_other);
      return preference_loss<double>(z, zj, caption, margin);
    }
  }
  return 0.0;
}

}  // namespace

GradCheckResult gradient_check(const BasicProjector<double>& projector, std::span<const double> x,
                               std::span<const double> x_other, std::span<const double> caption, CheckLoss loss,
                               double margin, double h) {
  BasicProjector<double> p = projector;
  const std::size_t n = p.net().params().size();
  std::vector<double> analytic(n, 0.0);
  {
    typename BasicProjector<double>::Cache cache, cache_j;
    const auto z = p.forward(x, &cache);
    std::vector<double> gz(z.size()), gzj(z.size());
    switch (loss) {
      case CheckLoss::Cosine: cosine_loss<double>(z, caption, gz); break;
      case CheckLoss::Mse: mse_loss<double>(z, caption, gz); break;
      case CheckLoss::Preference: {
        const auto zj = p.forward(x_other, &cache_j);
        preference_loss<double>(z, zj, caption, margin, gz, gzj);
        p.backward(cache_j, gzj, analytic);
        break;
      }
    }
    p.backward(cache, gz, analytic);
  }
  GradCheckResult r;
  r.params = n;
  auto& params = p.net().params();
  for (std::size_t k = 0; k < n; ++k) {
    const double saved = params[k];
    params[k] = saved + h;
    const double up = loss_value(p, x, x_other, caption, loss, margin);
    params[k] = saved - h;
    const double down = loss_value(p, x, x_other, caption, loss, margin);
    params[k] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double denom = std::max({std::abs(numeric), std::abs(analytic[k]), kGradFloor});
    r.max_rel_error = std::max(r.max_rel_error, std::abs(numeric - analytic[k]) / denom);
  }
  return r;
}

}  // namespace behave::oracle
