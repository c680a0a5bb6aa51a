// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "behave/embeddings.hpp"
#include "behave/mlp.hpp"
#include "behave/parallel.hpp"

namespace behave {

// ---- silhouette ---------------------------------------------------------

struct SilhouetteOptions {
  std::size_t subsample_max = 5000;
  std::uint64_t seed = 0;
  Exec exec = Exec::Parallel;
};

struct SilhouetteReport {
  std::string label_kind;  // behaviour category name or "game"
  double score = 0.0;
  std::size_t n_points = 0;  // points actually evaluated
  bool subsampled = false;
  std::uint64_t seed = 0;
};

/// Mean silhouette over points (rows of a row-major n x dim matrix) with
/// Euclidean distance. Labels are arbitrary integers.
SilhouetteReport silhouette(std::span<const float> points, std::size_t dim, std::span<const int> labels,
                            const SilhouetteOptions& options = {});

/// For every point i and cluster c, the sum of distances from i to the points
/// of c (n x k, row-major). `labels` must be in [0, k).
void cluster_distance_sums_serial(std::span<const float> points, std::size_t dim, std::span<const int> labels,
                                  std::size_t k, std::span<double> out);
void cluster_distance_sums_parallel(std::span<const float> points, std::size_t dim,
                                    std::span<const int> labels, std::size_t k, std::span<double> out);

// ---- behaviour classifier ----------------------------------------------

struct ClassifierConfig {
  std::vector<std::size_t> hidden = {256, 64};
  double dropout = 0.4;
  double learning_rate = 1e-3;
  int epochs = 10;
  std::size_t batch_size = 128;
  bool balance_classes = false;
  std::uint64_t seed = 0;
  Exec exec = Exec::Parallel;

  void validate() const;
};

struct ClassifierModel {
  Mlp net;  // single logit output
  ClassifierConfig config;

  double predict(std::span<const float> x) const;  // probability of class 1
};

ClassifierModel train_classifier(std::span<const float> x, std::size_t dim, std::span<const std::uint8_t> y,
                                 const ClassifierConfig& config = {});

double accuracy(const ClassifierModel& model, std::span<const float> x, std::span<const std::uint8_t> y,
                double threshold = 0.5);

/// 100 * (aligned - unaligned) / unaligned.
double transferability(double acc_aligned, double acc_unaligned);

// ---- transfer experiments ------------------------------------------------

struct TransferRun {
  double source_aligned = 0.0;
  double source_unaligned = 0.0;
  double target_aligned = 0.0;
  double target_unaligned = 0.0;
  double percent = 0.0;
};

struct TransferCell {
  std::string name;  // behaviour category or action id
  double source_frequency = 0.0;
  bool skipped = false;
  std::string skip_reason;
  std::vector<TransferRun> runs;

  double mean_percent() const;    // mean of per-run percent differences
  double aggregate_percent() const;  // percent difference of mean target accuracies
  TransferRun mean() const;
};

struct TransferReport {
  std::vector<TransferCell> cells;
  int runs = 0;
  std::uint64_t seed = 0;

  const TransferCell* find(std::string_view name) const;
};

struct TransferConfig {
  int runs = 5;
  std::uint64_t seed = 0;
  double train_fraction = 0.8;
  ClassifierConfig classifier;
  Exec exec = Exec::Parallel;
};

/// Per behaviour category and run: split the source 80/20, train a classifier
/// on foundation rows and another on projected rows (same seed), score both on
/// the source hold-out and on all target rows pooled. Without a projector the
/// aligned arm uses the foundation rows.
TransferReport run_transfer_experiment(const PairedDataset& source, const std::vector<PairedDataset>& targets,
                                       const MlpProjector* projector, const TransferConfig& config);

/// One classifier per catalog action whose positive frequency in the source is
/// at least min_freq; other actions are reported as skipped.
TransferReport idm_marginal(const PairedDataset& source, const std::vector<PairedDataset>& targets,
                            const MlpProjector* projector, const ActionCatalog& catalog,
                            const TransferConfig& config, double min_freq = 0.30);

// ---- export ---------------------------------------------------------------

/// First two principal components of the rows. Each component's sign is fixed
/// so its largest-magnitude loading is positive.
std::vector<std::array<double, 2>> pca_2d(std::span<const float> rows, std::size_t dim);

// ---- reports --------------------------------------------------------------

/// Line-oriented report: `# key<TAB>value` config lines, then
/// `experiment<TAB>category<TAB>run<TAB>metric<TAB>value` records.
class ReportWriter {
 public:
  explicit ReportWriter(std::ostream& out) : out_(out) {}
  void config(std::string_view key, std::string_view value);
  void config(std::string_view key, double value);
  void record(std::string_view experiment, std::string_view category, std::string_view run,
              std::string_view metric, double value);

 private:
  std::ostream& out_;
};

std::string format_value(double v);

void write_transfer_report(ReportWriter& writer, std::string_view experiment, const TransferReport& report);

}  // namespace behave
