// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#include "behave/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>

#include <Eigen/Dense>

#include "behave/adam.hpp"
#include "behave/align.hpp"
#include "behave/error.hpp"
#include "behave/random.hpp"

namespace behave {

// ---- silhouette ---------------------------------------------------------

namespace {

double distance(const float* a, const float* b, std::size_t dim) {
  double sq = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    const double diff = static_cast<double>(a[d]) - b[d];
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

void distance_sums_row(std::span<const float> points, std::size_t dim, std::span<const int> labels,
                       std::size_t k, std::span<double> out, std::size_t i) {
  const std::size_t n = labels.size();
  double* row = out.data() + i * k;
  std::fill(row, row + k, 0.0);
  const float* pi = points.data() + i * dim;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    row[labels[j]] += distance(pi, points.data() + j * dim, dim);
  }
}

void check_kernel_args(std::span<const float> points, std::size_t dim, std::span<const int> labels,
                       std::size_t k, std::span<double> out) {
  if (points.size() != labels.size() * dim || out.size() != labels.size() * k)
    throw Error(ErrorCode::DimMismatch, "distance kernel buffers do not match");
}

}  // namespace

void cluster_distance_sums_serial(std::span<const float> points, std::size_t dim, std::span<const int> labels,
                                  std::size_t k, std::span<double> out) {
  check_kernel_args(points, dim, labels, k, out);
  for (std::size_t i = 0; i < labels.size(); ++i) distance_sums_row(points, dim, labels, k, out, i);
}

void cluster_distance_sums_parallel(std::span<const float> points, std::size_t dim,
                                    std::span<const int> labels, std::size_t k, std::span<double> out) {
  check_kernel_args(points, dim, labels, k, out);
  const long n = static_cast<long>(labels.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < n; ++i) distance_sums_row(points, dim, labels, k, out, static_cast<std::size_t>(i));
}

SilhouetteReport silhouette(std::span<const float> points, std::size_t dim, std::span<const int> labels,
                            const SilhouetteOptions& options) {
  if (labels.empty()) throw Error(ErrorCode::EmptyInput, "no points");
  if (dim == 0 || points.size() != labels.size() * dim)
    throw Error(ErrorCode::DimMismatch, "points and labels disagree");

  SilhouetteReport report;
  report.seed = options.seed;
  std::vector<std::size_t> chosen(labels.size());
  std::iota(chosen.begin(), chosen.end(), std::size_t{0});
  if (options.subsample_max >= 2 && chosen.size() > options.subsample_max) {
    Rng rng(options.seed);
    shuffle(std::span<std::size_t>(chosen), rng);
    chosen.resize(options.subsample_max);
    std::sort(chosen.begin(), chosen.end());
    report.subsampled = true;
  }

  std::map<int, int> remap;
  for (std::size_t i : chosen) remap.emplace(labels[i], 0);
  if (remap.size() < 2) throw Error(ErrorCode::SingleCluster, "fewer than two distinct labels");
  int next = 0;
  for (auto& [label, id] : remap) id = next++;
  const std::size_t k = remap.size();
  const std::size_t n = chosen.size();

  std::vector<float> sub(n * dim);
  std::vector<int> lab(n);
  std::vector<std::size_t> count(k, 0);
  for (std::size_t r = 0; r < n; ++r) {
    std::copy_n(points.data() + chosen[r] * dim, dim, sub.data() + r * dim);
    lab[r] = remap[labels[chosen[r]]];
    ++count[lab[r]];
  }
  std::vector<double> sums(n * k);
  if (options.exec == Exec::Serial)
    cluster_distance_sums_serial(sub, dim, lab, k, sums);
  else
    cluster_distance_sums_parallel(sub, dim, lab, k, sums);

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t own = static_cast<std::size_t>(lab[i]);
    if (count[own] <= 1) continue;
    const double a = sums[i * k + own] / static_cast<double>(count[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c)
      if (c != own && count[c] > 0) b = std::min(b, sums[i * k + c] / static_cast<double>(count[c]));
    const double m = std::max(a, b);
    if (m > 0.0) total += (b - a) / m;
  }
  report.score = total / static_cast<double>(n);
  report.n_points = n;
  return report;
}

// ---- classifier -----------------------------------------------------------

void ClassifierConfig::validate() const {
  if (epochs < 1) throw Error(ErrorCode::InvalidConfig, "classifier epochs must be >= 1");
  if (batch_size < 1) throw Error(ErrorCode::InvalidConfig, "classifier batch size must be >= 1");
  if (!(learning_rate >= 0.0)) throw Error(ErrorCode::InvalidConfig, "classifier learning rate must be >= 0");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw Error(ErrorCode::InvalidConfig, "dropout must be in [0, 1)");
}

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

double ClassifierModel::predict(std::span<const float> x) const {
  return sigmoid(net.forward(x)[0]);
}

ClassifierModel train_classifier(std::span<const float> x, std::size_t dim, std::span<const std::uint8_t> y,
                                 const ClassifierConfig& config) {
  config.validate();
  if (y.empty()) throw Error(ErrorCode::EmptyDataset, "no training rows");
  if (dim == 0 || x.size() != y.size() * dim) throw Error(ErrorCode::DimMismatch, "rows and labels disagree");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < y.size(); ++i) (y[i] ? pos : neg).push_back(i);
  if (pos.empty() || neg.empty()) throw Error(ErrorCode::SingleClass, "labels contain a single class");

  std::vector<std::size_t> order;
  if (config.balance_classes) {
    Rng rng(combine_seed(config.seed, 0xba1));
    shuffle(std::span<std::size_t>(pos), rng);
    shuffle(std::span<std::size_t>(neg), rng);
    const std::size_t m = std::min(pos.size(), neg.size());
    order.assign(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(m));
    order.insert(order.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(m));
    std::sort(order.begin(), order.end());
  } else {
    order.resize(y.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
  }

  std::vector<std::size_t> dims{dim};
  dims.insert(dims.end(), config.hidden.begin(), config.hidden.end());
  dims.push_back(1);
  ClassifierModel model{Mlp(dims, config.dropout), config};
  model.net.init_uniform(combine_seed(config.seed, 0xc1a5));

  auto& params = model.net.params();
  Adam adam(params.size(), {config.learning_rate, 0.9, 0.999, 1e-8});
  std::vector<float> grad(params.size());
  Rng shuffle_rng(combine_seed(config.seed, 0x5f1e));
  const std::size_t n = order.size();

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(std::span<std::size_t>(order), shuffle_rng);
    for (std::size_t begin = 0; begin < n; begin += config.batch_size) {
      const std::size_t size = std::min(n, begin + config.batch_size) - begin;
      const float inv = 1.0f / static_cast<float>(size);
      const auto per_sample = [&](std::size_t b, std::span<float> g) -> double {
        const std::size_t i = order[begin + b];
        Rng rng(combine_seed(combine_seed(config.seed, static_cast<std::uint64_t>(epoch) + 1), begin + b));
        Mlp::Cache cache;
        const double z = model.net.forward(x.subspan(i * dim, dim), &cache, &rng)[0];
        const double target = y[i] ? 1.0 : 0.0;
        const float gz = static_cast<float>((sigmoid(z) - target)) * inv;
        model.net.backward(cache, std::span<const float>(&gz, 1), g);
        return std::max(z, 0.0) - z * target + std::log1p(std::exp(-std::abs(z)));
      };
      accumulate_chunked<float>(size, std::span<float>(grad), per_sample, config.exec);
      adam.step(params, grad);
    }
  }
  return model;
}

double accuracy(const ClassifierModel& model, std::span<const float> x, std::span<const std::uint8_t> y,
                double threshold) {
  if (y.empty()) throw Error(ErrorCode::EmptyDataset, "no rows to score");
  const std::size_t dim = model.net.input_dim();
  if (x.size() != y.size() * dim) throw Error(ErrorCode::DimMismatch, "rows do not match the classifier");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const bool predicted = model.predict(x.subspan(i * dim, dim)) >= threshold;
    correct += predicted == (y[i] != 0);
  }
  return static_cast<double>(correct) / static_cast<double>(y.size());
}

double transferability(double acc_aligned, double acc_unaligned) {
  if (acc_unaligned == 0.0) throw Error(ErrorCode::DivisionByZero, "unaligned accuracy is zero");
  return 100.0 * (acc_aligned - acc_unaligned) / acc_unaligned;
}

// ---- transfer experiments ------------------------------------------------

TransferRun TransferCell::mean() const {
  TransferRun m;
  if (runs.empty()) return m;
  for (const auto& r : runs) {
    m.source_aligned += r.source_aligned;
    m.source_unaligned += r.source_unaligned;
    m.target_aligned += r.target_aligned;
    m.target_unaligned += r.target_unaligned;
    m.percent += r.percent;
  }
  const double n = static_cast<double>(runs.size());
  m.source_aligned /= n;
  m.source_unaligned /= n;
  m.target_aligned /= n;
  m.target_unaligned /= n;
  m.percent /= n;
  return m;
}

double TransferCell::mean_percent() const { return mean().percent; }

double TransferCell::aggregate_percent() const {
  const TransferRun m = mean();
  return transferability(m.target_aligned, m.target_unaligned);
}

const TransferCell* TransferReport::find(std::string_view name) const {
  for (const auto& c : cells)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

struct Arms {
  std::size_t dim_unaligned = 0;
  std::size_t dim_aligned = 0;
  std::vector<float> source_unaligned, source_aligned;
  std::vector<float> target_unaligned, target_aligned;  // targets pooled
};

Arms build_arms(const PairedDataset& source, const std::vector<PairedDataset>& targets,
                const MlpProjector* projector, Exec exec) {
  if (source.size() == 0) throw Error(ErrorCode::EmptyDataset, "empty source");
  Arms arms;
  arms.dim_unaligned = source.dim;
  arms.source_unaligned = source.x;
  for (const auto& t : targets) {
    if (t.dim != source.dim) throw Error(ErrorCode::DimMismatch, "target and source dims differ");
    arms.target_unaligned.insert(arms.target_unaligned.end(), t.x.begin(), t.x.end());
  }
  if (arms.target_unaligned.empty()) throw Error(ErrorCode::EmptyDataset, "no target rows");
  if (projector) {
    arms.dim_aligned = projector->output_dim();
    arms.source_aligned = project_rows(*projector, arms.source_unaligned, exec);
    arms.target_aligned = project_rows(*projector, arms.target_unaligned, exec);
  } else {
    arms.dim_aligned = arms.dim_unaligned;
    arms.source_aligned = arms.source_unaligned;
    arms.target_aligned = arms.target_unaligned;
  }
  return arms;
}

std::vector<float> gather(const std::vector<float>& rows, std::size_t dim, std::span<const std::size_t> idx) {
  std::vector<float> out;
  out.reserve(idx.size() * dim);
  for (std::size_t i : idx)
    out.insert(out.end(), rows.begin() + static_cast<std::ptrdiff_t>(i * dim),
               rows.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim));
  return out;
}

struct Split {
  std::vector<std::size_t> train, test;
};

Split split_source(std::size_t n, double fraction, std::uint64_t run_seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(combine_seed(run_seed, 0x5b17));
  shuffle(std::span<std::size_t>(idx), rng);
  std::size_t n_train = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n > 1 ? n - 1 : 1);
  Split s;
  s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  if (s.test.empty()) s.test = s.train;
  return s;
}

bool both_classes(std::span<const std::uint8_t> y, std::span<const std::size_t> idx) {
  bool pos = false, neg = false;
  for (std::size_t i : idx) (y[i] ? pos : neg) = true;
  return pos && neg;
}

std::vector<std::uint8_t> pick(std::span<const std::uint8_t> y, std::span<const std::size_t> idx) {
  std::vector<std::uint8_t> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(y[i]);
  return out;
}

TransferRun run_once(const Arms& arms, std::span<const std::uint8_t> source_y,
                     std::span<const std::uint8_t> target_y, const Split& split, std::uint64_t run_seed,
                     const TransferConfig& config) {
  ClassifierConfig cc = config.classifier;
  cc.seed = run_seed;
  cc.exec = config.exec;
  const auto y_train = pick(source_y, split.train);
  const auto y_test = pick(source_y, split.test);
  TransferRun r;

  const auto un_model = train_classifier(gather(arms.source_unaligned, arms.dim_unaligned, split.train),
                                         arms.dim_unaligned, y_train, cc);
  r.source_unaligned = accuracy(un_model, gather(arms.source_unaligned, arms.dim_unaligned, split.test), y_test);
  r.target_unaligned = accuracy(un_model, arms.target_unaligned, target_y);

  const auto al_model = train_classifier(gather(arms.source_aligned, arms.dim_aligned, split.train),
                                         arms.dim_aligned, y_train, cc);
  r.source_aligned = accuracy(al_model, gather(arms.source_aligned, arms.dim_aligned, split.test), y_test);
  r.target_aligned = accuracy(al_model, arms.target_aligned, target_y);

  r.percent = transferability(r.target_aligned, r.target_unaligned);
  return r;
}

template <typename LabelFn>
std::vector<std::uint8_t> labels_of(const std::vector<PairedDataset>& sets, LabelFn fn) {
  std::vector<std::uint8_t> y;
  for (const auto& s : sets)
    for (const auto& w : s.samples) y.push_back(fn(w) ? 1 : 0);
  return y;
}

void check_config(const TransferConfig& config) {
  if (config.runs < 1) throw Error(ErrorCode::InvalidConfig, "runs must be >= 1");
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0))
    throw Error(ErrorCode::InvalidConfig, "train fraction must be in (0, 1)");
  config.classifier.validate();
}

double frequency(std::span<const std::uint8_t> y) {
  return static_cast<double>(std::count(y.begin(), y.end(), std::uint8_t{1})) / static_cast<double>(y.size());
}

}  // namespace

TransferReport run_transfer_experiment(const PairedDataset& source, const std::vector<PairedDataset>& targets,
                                       const MlpProjector* projector, const TransferConfig& config) {
  check_config(config);
  const Arms arms = build_arms(source, targets, projector, config.exec);
  TransferReport report;
  report.runs = config.runs;
  report.seed = config.seed;
  for (Category c : kBehaviourCategories) {
    const auto flag = [c](const WindowSample& w) { return w.categories.get(c); };
    const auto source_y = labels_of({source}, flag);
    const auto target_y = labels_of(targets, flag);
    TransferCell cell;
    cell.name = std::string(category_name(c));
    cell.source_frequency = frequency(source_y);
    for (int r = 0; r < config.runs; ++r) {
      const std::uint64_t run_seed = combine_seed(config.seed, static_cast<std::uint64_t>(r));
      const Split split = split_source(source.size(), config.train_fraction, run_seed);
      if (!both_classes(source_y, split.train))
        throw Error(ErrorCode::SingleClass, cell.name + ": training split has a single class");
      cell.runs.push_back(run_once(arms, source_y, target_y, split, run_seed, config));
    }
    report.cells.push_back(std::move(cell));
  }
  return report;
}

TransferReport idm_marginal(const PairedDataset& source, const std::vector<PairedDataset>& targets,
                            const MlpProjector* projector, const ActionCatalog& catalog,
                            const TransferConfig& config, double min_freq) {
  check_config(config);
  if (!(min_freq >= 0.0 && min_freq <= 1.0)) throw Error(ErrorCode::InvalidConfig, "min_freq must be in [0, 1]");
  for (const auto& s : source.samples)
    if (s.actions.size() != catalog.size())
      throw Error(ErrorCode::DimMismatch, "source action vectors do not match the catalog");
  const Arms arms = build_arms(source, targets, projector, config.exec);
  TransferReport report;
  report.runs = config.runs;
  report.seed = config.seed;
  for (std::size_t a = 0; a < catalog.size(); ++a) {
    const auto flag = [a](const WindowSample& w) { return a < w.actions.size() && w.actions[a]; };
    const auto source_y = labels_of({source}, flag);
    TransferCell cell;
    cell.name = catalog[a].action_id;
    cell.source_frequency = frequency(source_y);
    if (cell.source_frequency == 0.0) {
      cell.skipped = true;
      cell.skip_reason = "absent from source";
    } else if (cell.source_frequency < min_freq) {
      cell.skipped = true;
      cell.skip_reason = "below minimum frequency";
    } else if (cell.source_frequency == 1.0) {
      cell.skipped = true;
      cell.skip_reason = "single class";
    }
    std::vector<Split> splits;
    std::vector<std::uint64_t> seeds;
    for (int r = 0; r < config.runs && !cell.skipped; ++r) {
      seeds.push_back(combine_seed(config.seed, static_cast<std::uint64_t>(r)));
      splits.push_back(split_source(source.size(), config.train_fraction, seeds.back()));
      if (!both_classes(source_y, splits.back().train)) {
        cell.skipped = true;
        cell.skip_reason = "single class in training split";
      }
    }
    if (!cell.skipped) {
      const auto target_y = labels_of(targets, flag);
      for (std::size_t r = 0; r < splits.size(); ++r)
        cell.runs.push_back(run_once(arms, source_y, target_y, splits[r], seeds[r], config));
    }
    report.cells.push_back(std::move(cell));
  }
  return report;
}

// ---- export ---------------------------------------------------------------

std::vector<std::array<double, 2>> pca_2d(std::span<const float> rows, std::size_t dim) {
  if (dim == 0 || rows.size() % dim != 0) throw Error(ErrorCode::DimMismatch, "rows do not match dim");
  const std::size_t n = rows.size() / dim;
  std::vector<std::array<double, 2>> out(n, {0.0, 0.0});
  if (n == 0) return out;
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < dim; ++d)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = rows[i * dim + d];
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(std::max<std::size_t>(n - 1, 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  const Eigen::MatrixXd& vecs = solver.eigenvectors();  // ascending eigenvalues
  const Eigen::Index m = vecs.cols();
  for (int c = 0; c < 2 && c < m; ++c) {
    Eigen::VectorXd v = vecs.col(m - 1 - c);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    const Eigen::VectorXd proj = x * v;
    for (std::size_t i = 0; i < n; ++i) out[i][static_cast<std::size_t>(c)] = proj(static_cast<Eigen::Index>(i));
  }
  return out;
}

// ---- reports --------------------------------------------------------------

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v == 0.0 ? 0.0 : v);
  return buf;
}

void ReportWriter::config(std::string_view key, std::string_view value) {
  out_ << "# " << key << '\t' << value << '\n';
}

void ReportWriter::config(std::string_view key, double value) { config(key, format_value(value)); }

void ReportWriter::record(std::string_view experiment, std::string_view category, std::string_view run,
                          std::string_view metric, double value) {
  out_ << experiment << '\t' << category << '\t' << run << '\t' << metric << '\t' << format_value(value) << '\n';
}

void write_transfer_report(ReportWriter& writer, std::string_view experiment, const TransferReport& report) {
  for (const auto& cell : report.cells) {
    writer.record(experiment, cell.name, "all", "source_frequency", cell.source_frequency);
    if (cell.skipped) {
      writer.record(experiment, cell.name, "all", "skipped", 1.0);
      writer.config("skip_reason " + cell.name, cell.skip_reason);
      continue;
    }
    for (std::size_t r = 0; r < cell.runs.size(); ++r) {
      const auto& run = cell.runs[r];
      const std::string id = std::to_string(r);
      writer.record(experiment, cell.name, id, "source_acc_unaligned", run.source_unaligned);
      writer.record(experiment, cell.name, id, "source_acc_aligned", run.source_aligned);
      writer.record(experiment, cell.name, id, "target_acc_unaligned", run.target_unaligned);
      writer.record(experiment, cell.name, id, "target_acc_aligned", run.target_aligned);
      writer.record(experiment, cell.name, id, "transferability_pct", run.percent);
    }
    const TransferRun m = cell.mean();
    writer.record(experiment, cell.name, "mean", "source_acc_unaligned", m.source_unaligned);
    writer.record(experiment, cell.name, "mean", "source_acc_aligned", m.source_aligned);
    writer.record(experiment, cell.name, "mean", "target_acc_unaligned", m.target_unaligned);
    writer.record(experiment, cell.name, "mean", "target_acc_aligned", m.target_aligned);
    writer.record(experiment, cell.name, "mean", "transferability_pct", m.percent);
    writer.record(experiment, cell.name, "aggregate", "transferability_pct", cell.aggregate_percent());
  }
}

}  // namespace behave
