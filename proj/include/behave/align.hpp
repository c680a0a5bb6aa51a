// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "behave/embeddings.hpp"
#include "behave/mlp.hpp"
#include "behave/parallel.hpp"

namespace behave {

enum class LossKind { Cosine, Mse, Preference };

std::string_view loss_name(LossKind kind) noexcept;
std::optional<LossKind> parse_loss(std::string_view name) noexcept;

struct TrainConfig {
  int epochs = 10;
  std::size_t batch_size = 128;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  double dropout = 0.5;
  LossKind loss = LossKind::Cosine;
  double margin = 0.2;
  std::vector<std::size_t> hidden = {256, 256, 256};
  std::uint64_t seed = 0;
  Exec exec = Exec::Parallel;

  void validate() const;
};

/// Video rows paired with caption rows, same order.
struct AlignmentData {
  std::size_t video_dim = 0;
  std::size_t text_dim = 0;
  std::vector<float> video;
  std::vector<float> text;

  std::size_t size() const noexcept { return video_dim == 0 ? 0 : video.size() / video_dim; }
  std::span<const float> video_row(std::size_t i) const { return {video.data() + i * video_dim, video_dim}; }
  std::span<const float> text_row(std::size_t i) const { return {text.data() + i * text_dim, text_dim}; }
};

/// Joins both tables against the manifest; rows follow manifest order.
AlignmentData make_alignment_data(const EmbeddingTable& video, const EmbeddingTable& text,
                                  const std::vector<WindowSample>& manifest);

struct TrainReport {
  std::vector<double> epoch_loss;
  MlpProjector projector;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
};

/// Projector with dims {in, hidden..., out}, dropout and seeded uniform init.
MlpProjector make_projector(std::size_t in, std::size_t out, const TrainConfig& config);

/// Mean loss of one batch and its parameter gradient (mean over the batch).
/// Exposed for tests; `order` lists dataset indices of the batch and
/// `positions` their global positions within the epoch (for dropout streams).
double batch_gradient(const MlpProjector& projector, const AlignmentData& data,
                      std::span<const std::size_t> order, std::span<const std::size_t> partners,
                      const TrainConfig& config, int epoch, std::size_t first_position,
                      bool train_mode, std::span<float> grad, Exec exec);

using EpochCallback = std::function<void(int epoch, double mean_loss)>;

TrainReport train_alignment(const AlignmentData& data, const TrainConfig& config,
                            const EpochCallback& on_epoch = {});

/// Same as above but starts from an existing projector.
TrainReport train_alignment(const AlignmentData& data, MlpProjector initial, const TrainConfig& config,
                            const EpochCallback& on_epoch = {});

/// Eval-mode projection of every row; ids are kept.
EmbeddingTable project(const MlpProjector& projector, const EmbeddingTable& table,
                       Exec exec = Exec::Parallel);
std::vector<float> project_rows(const MlpProjector& projector, std::span<const float> rows,
                                Exec exec = Exec::Parallel);

/// Checkpoint: "BHVC", u32 version, u32 header length, JSON header, then per
/// layer the weights and bias as little-endian float32.
struct CheckpointInfo {
  std::uint64_t seed = 0;
  LossKind loss = LossKind::Cosine;
};
void write_checkpoint(std::ostream& out, const MlpProjector& projector, const CheckpointInfo& info = {});
MlpProjector read_checkpoint(std::istream& in, CheckpointInfo* info = nullptr);
void save_checkpoint(const std::filesystem::path& path, const MlpProjector& projector,
                     const CheckpointInfo& info = {});
MlpProjector load_checkpoint(const std::filesystem::path& path, CheckpointInfo* info = nullptr);

}  // namespace behave
