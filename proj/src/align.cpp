// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#include "behave/align.hpp"

#include <array>
#include <bit>
#include <chrono>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "behave/adam.hpp"
#include "behave/error.hpp"
#include "behave/losses.hpp"
#include "behave/random.hpp"

namespace behave {

std::string_view loss_name(LossKind kind) noexcept {
  switch (kind) {
    case LossKind::Cosine: return "cosine";
    case LossKind::Mse: return "mse";
    case LossKind::Preference: return "preference";
  }
  return "cosine";
}

std::optional<LossKind> parse_loss(std::string_view name) noexcept {
  if (name == "cosine") return LossKind::Cosine;
  if (name == "mse") return LossKind::Mse;
  if (name == "preference") return LossKind::Preference;
  return std::nullopt;
}

void TrainConfig::validate() const {
  if (epochs < 1) throw Error(ErrorCode::InvalidConfig, "epochs must be >= 1");
  if (batch_size < 1) throw Error(ErrorCode::InvalidConfig, "batch size must be >= 1");
  if (!(learning_rate >= 0.0)) throw Error(ErrorCode::InvalidConfig, "learning rate must be >= 0");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw Error(ErrorCode::InvalidConfig, "dropout must be in [0, 1)");
  if (!(margin >= 0.0)) throw Error(ErrorCode::InvalidConfig, "margin must be >= 0");
  for (auto h : hidden)
    if (h == 0) throw Error(ErrorCode::InvalidConfig, "hidden widths must be positive");
}

AlignmentData make_alignment_data(const EmbeddingTable& video, const EmbeddingTable& text,
                                  const std::vector<WindowSample>& manifest) {
  PairedDataset v = join(video, manifest);
  PairedDataset t = join(text, manifest);
  AlignmentData data;
  data.video_dim = v.dim;
  data.text_dim = t.dim;
  data.video = std::move(v.x);
  data.text = std::move(t.x);
  return data;
}

MlpProjector make_projector(std::size_t in, std::size_t out, const TrainConfig& config) {
  std::vector<std::size_t> dims{in};
  dims.insert(dims.end(), config.hidden.begin(), config.hidden.end());
  dims.push_back(out);
  Mlp net(dims, config.dropout);
  net.init_uniform(combine_seed(config.seed, 0x1417));
  return MlpProjector(std::move(net));
}

namespace {

Rng dropout_stream(std::uint64_t seed, int epoch, std::size_t position) {
  return Rng(combine_seed(combine_seed(seed, static_cast<std::uint64_t>(epoch) + 1), position));
}

}  // namespace

double batch_gradient(const MlpProjector& projector, const AlignmentData& data,
                      std::span<const std::size_t> order, std::span<const std::size_t> partners,
                      const TrainConfig& config, int epoch, std::size_t first_position,
                      bool train_mode, std::span<float> grad, Exec exec) {
  const std::size_t n = order.size();
  if (config.loss == LossKind::Preference && partners.size() != n)
    throw Error(ErrorCode::InvalidConfig, "preference loss needs one partner per sample");
  const std::size_t out_dim = projector.output_dim();

  const auto per_sample = [&](std::size_t b, std::span<float> g) -> double {
    const std::size_t i = order[b];
    Rng rng = dropout_stream(config.seed, epoch, first_position + b);
    Rng* drop = train_mode ? &rng : nullptr;
    MlpProjector::Cache cache;
    const auto z = projector.forward(data.video_row(i), &cache, drop);
    const auto c = data.text_row(i);
    std::vector<float> gz(out_dim);
    double loss = 0.0;
    switch (config.loss) {
      case LossKind::Cosine:
        loss = cosine_loss<float>(z, c, gz);
        break;
      case LossKind::Mse:
        loss = mse_loss<float>(z, c, gz);
        break;
      case LossKind::Preference: {
        Rng rng_j = rng.split(1);
        MlpProjector::Cache cache_j;
        const auto zj = projector.forward(data.video_row(partners[b]), &cache_j, train_mode ? &rng_j : nullptr);
        std::vector<float> gzj(out_dim);
        loss = preference_loss<float>(z, zj, c, config.margin, gz, gzj);
        if (loss > 0.0) {
          const float inv = 1.0f / static_cast<float>(n);
          for (auto& v : gzj) v *= inv;
          projector.backward(cache_j, gzj, g);
        }
        break;
      }
    }
    const float inv = 1.0f / static_cast<float>(n);
    for (auto& v : gz) v *= inv;
    projector.backward(cache, gz, g);
    return loss;
  };
  const double sum = accumulate_chunked<float>(n, grad, per_sample, exec);
  return sum / static_cast<double>(n);
}

TrainReport train_alignment(const AlignmentData& data, const TrainConfig& config,
                            const EpochCallback& on_epoch) {
  config.validate();
  if (data.size() == 0) throw Error(ErrorCode::EmptyDataset, "no training pairs");
  return train_alignment(data, make_projector(data.video_dim, data.text_dim, config), config, on_epoch);
}

TrainReport train_alignment(const AlignmentData& data, MlpProjector projector, const TrainConfig& config,
                            const EpochCallback& on_epoch) {
  config.validate();
  const std::size_t n = data.size();
  if (n == 0) throw Error(ErrorCode::EmptyDataset, "no training pairs");
  if (data.text.size() != n * data.text_dim)
    throw Error(ErrorCode::DimMismatch, "video and text tables have different row counts");
  if (projector.input_dim() != data.video_dim)
    throw Error(ErrorCode::DimMismatch, "projector expects input dim " + std::to_string(projector.input_dim()) +
                                            ", video dim is " + std::to_string(data.video_dim));
  if (projector.output_dim() != data.text_dim)
    throw Error(ErrorCode::DimMismatch, "projector output dim " + std::to_string(projector.output_dim()) +
                                            " does not match text dim " + std::to_string(data.text_dim));
  for (float v : data.video)
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "video table");
  for (float v : data.text)
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "text table");
  if (config.loss != LossKind::Mse) {
    for (std::size_t i = 0; i < n; ++i) {
      bool nonzero = false;
      for (float v : data.text_row(i)) nonzero = nonzero || v != 0.0f;
      if (!nonzero) throw Error(ErrorCode::ZeroVector, "caption row " + std::to_string(i) + " is zero");
    }
  }

  const auto start = std::chrono::steady_clock::now();
  TrainReport report;
  report.seed = config.seed;
  auto& params = projector.net().params();
  Adam adam(params.size(), {config.learning_rate, config.beta1, config.beta2, config.adam_eps});
  std::vector<float> grad(params.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng shuffle_rng(combine_seed(config.seed, 0x5f1e));
  Rng partner_rng(combine_seed(config.seed, 0x9a27));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(std::span<std::size_t>(order), shuffle_rng);
    double total = 0.0;
    for (std::size_t begin = 0; begin < n; begin += config.batch_size) {
      const std::size_t end = std::min(n, begin + config.batch_size);
      const std::span<const std::size_t> batch(order.data() + begin, end - begin);
      std::vector<std::size_t> partners;
      if (config.loss == LossKind::Preference) {
        partners.resize(batch.size());
        for (std::size_t b = 0; b < batch.size(); ++b) {
          if (batch.size() == 1) {
            partners[b] = batch[b];
            continue;
          }
          std::size_t k = partner_rng.below(batch.size() - 1);
          if (k >= b) ++k;
          partners[b] = batch[k];
        }
      }
      const double mean = batch_gradient(projector, data, batch, partners, config, epoch, begin, true,
                                         grad, config.exec);
      total += mean * static_cast<double>(batch.size());
      adam.step(params, grad);
    }
    const double epoch_loss = total / static_cast<double>(n);
    if (!std::isfinite(epoch_loss)) throw Error(ErrorCode::NonFiniteValue, "training loss diverged");
    report.epoch_loss.push_back(epoch_loss);
    if (on_epoch) on_epoch(epoch, epoch_loss);
  }
  report.projector = std::move(projector);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<float> project_rows(const MlpProjector& projector, std::span<const float> rows, Exec exec) {
  const std::size_t in = projector.input_dim();
  const std::size_t out = projector.output_dim();
  if (in == 0 || rows.size() % in != 0)
    throw Error(ErrorCode::DimMismatch, "rows do not match projector input dim " + std::to_string(in));
  const std::size_t n = rows.size() / in;
  std::vector<float> result(n * out);
  const auto one = [&](std::size_t i) {
    const auto z = projector.forward(rows.subspan(i * in, in));
    std::copy(z.begin(), z.end(), result.begin() + static_cast<std::ptrdiff_t>(i * out));
  };
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) one(i);
  } else {
    const long count = static_cast<long>(n);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < count; ++i) one(static_cast<std::size_t>(i));
  }
  return result;
}

EmbeddingTable project(const MlpProjector& projector, const EmbeddingTable& table, Exec exec) {
  if (table.dim != projector.input_dim())
    throw Error(ErrorCode::DimMismatch, "table dim " + std::to_string(table.dim) + ", projector expects " +
                                            std::to_string(projector.input_dim()));
  EmbeddingTable out;
  out.dim = projector.output_dim();
  out.ids = table.ids;
  out.values = project_rows(projector, table.values, exec);
  return out;
}

namespace {

constexpr std::array<char, 4> kCheckpointMagic = {'B', 'H', 'V', 'C'};
constexpr std::uint32_t kCheckpointVersion = 1;

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

bool read_exact(std::istream& in, void* dst, std::size_t n) {
  in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  return static_cast<std::size_t>(in.gcount()) == n;
}

}  // namespace

void write_checkpoint(std::ostream& out, const MlpProjector& projector, const CheckpointInfo& info) {
  const Mlp& net = projector.net();
  nlohmann::ordered_json header;
  header["dims"] = net.dims();
  header["activation"] = "relu";
  header["output"] = "l2_normalized";
  header["dropout"] = net.dropout();
  header["seed"] = info.seed;
  header["loss"] = std::string(loss_name(info.loss));
  const std::string text = header.dump();

  std::string buf(kCheckpointMagic.begin(), kCheckpointMagic.end());
  put_u32(buf, kCheckpointVersion);
  put_u32(buf, static_cast<std::uint32_t>(text.size()));
  buf += text;
  for (float v : net.params()) put_u32(buf, std::bit_cast<std::uint32_t>(v));
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorCode::IoError, "failed to write checkpoint");
}

MlpProjector read_checkpoint(std::istream& in, CheckpointInfo* info) {
  std::array<unsigned char, 12> head{};
  if (!read_exact(in, head.data(), 4) ||
      !std::equal(kCheckpointMagic.begin(), kCheckpointMagic.end(), head.begin(),
                  [](char a, unsigned char b) { return a == static_cast<char>(b); }))
    throw Error(ErrorCode::BadMagic, "not a projector checkpoint");
  if (!read_exact(in, head.data() + 4, 8)) throw Error(ErrorCode::TruncatedFile, "checkpoint header ends early");
  const std::uint32_t version = get_u32(head.data() + 4);
  if (version != kCheckpointVersion)
    throw Error(ErrorCode::VersionMismatch, "checkpoint version " + std::to_string(version));
  std::string text(get_u32(head.data() + 8), '\0');
  if (!read_exact(in, text.data(), text.size()))
    throw Error(ErrorCode::TruncatedFile, "checkpoint header ends early");

  std::vector<std::size_t> dims;
  double dropout = 0.0;
  try {
    const auto header = nlohmann::json::parse(text);
    dims = header.at("dims").get<std::vector<std::size_t>>();
    dropout = header.at("dropout").get<double>();
    if (header.at("activation").get<std::string>() != "relu")
      throw Error(ErrorCode::InvalidConfig, "unsupported activation");
    if (info) {
      info->seed = header.at("seed").get<std::uint64_t>();
      info->loss = parse_loss(header.at("loss").get<std::string>()).value_or(LossKind::Cosine);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedRow, std::string("checkpoint header: ") + e.what());
  }
  Mlp net(dims, dropout);
  auto& params = net.params();
  std::vector<unsigned char> raw(params.size() * 4);
  if (!read_exact(in, raw.data(), raw.size())) throw Error(ErrorCode::TruncatedFile, "checkpoint weights end early");
  if (in.peek() != std::char_traits<char>::eof())
    throw Error(ErrorCode::TrailingBytes, "data continues after the last layer");
  for (std::size_t k = 0; k < params.size(); ++k) {
    params[k] = std::bit_cast<float>(get_u32(raw.data() + 4 * k));
    if (!std::isfinite(params[k])) throw Error(ErrorCode::NonFiniteValue, "checkpoint weight");
  }
  return MlpProjector(std::move(net));
}

void save_checkpoint(const std::filesystem::path& path, const MlpProjector& projector,
                     const CheckpointInfo& info) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  write_checkpoint(out, projector, info);
}

MlpProjector load_checkpoint(const std::filesystem::path& path, CheckpointInfo* info) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_checkpoint(in, info);
}

}  // namespace behave
