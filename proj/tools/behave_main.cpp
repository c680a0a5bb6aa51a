// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Every subcommand writes a line-oriented report to
// stdout (or --report) and exits nonzero with the error name on failure.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "behave/align.hpp"
#include "behave/catalog.hpp"
#include "behave/dataset.hpp"
#include "behave/embeddings.hpp"
#include "behave/error.hpp"
#include "behave/eval.hpp"
#include "behave/preprocess.hpp"
#include "behave/synth.hpp"

namespace fs = std::filesystem;
using namespace behave;

namespace {

std::ifstream open_in(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + p.string());
  return in;
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + p.string() + " for writing");
  return out;
}

std::vector<WindowSample> load_manifest(const fs::path& p) {
  auto in = open_in(p);
  return read_manifest(in);
}

/// Report goes to --report when given, stdout otherwise.
class ReportSink {
 public:
  explicit ReportSink(const std::string& path) {
    if (!path.empty()) file_ = open_out(path);
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::string join_list(const std::vector<std::string>& items, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string join_sizes(const std::vector<std::size_t>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(items[i]);
  }
  return out;
}

Category require_category(const std::string& name) {
  auto c = parse_category(name);
  if (!c || *c == Category::None) throw Error(ErrorCode::InvalidConfig, "unknown behaviour category '" + name + "'");
  return *c;
}

std::vector<WindowSample> filter_games(const std::vector<WindowSample>& samples, const std::vector<std::string>& games) {
  std::vector<WindowSample> out;
  for (const auto& s : samples)
    if (std::find(games.begin(), games.end(), s.game_id) != games.end()) out.push_back(s);
  return out;
}

PairedDataset game_subset(const EmbeddingTable& table, const std::vector<WindowSample>& manifest,
                          const std::string& game) {
  auto samples = filter_games(manifest, {game});
  if (samples.empty()) throw Error(ErrorCode::UnknownGame, "no windows for game '" + game + "'");
  return join(table, samples);
}

// ---- options ----------------------------------------------------------------

struct Common {
  std::uint64_t seed = 0;
  std::string report;
};

void add_seed(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Random seed")->envname("BEHAVE_SEED")->capture_default_str();
}

void add_report(CLI::App* cmd, Common& c) {
  cmd->add_option("--report", c.report, "Write the report here instead of stdout");
}

void echo_header(ReportWriter& w, std::string_view command) {
  w.config("command", command);
}

// ---- preprocess ---------------------------------------------------------------

struct PreprocessOpts {
  Common common;
  std::vector<std::string> logs;
  std::string profiles;
  std::string out_manifest;
  int window = 16;
  int stride = 8;
  std::int64_t max_gap_ms = kDefaultMaxGapMs;
};

void run_preprocess(const PreprocessOpts& o) {
  const auto& catalog = default_catalog();
  auto pin = open_in(o.profiles);
  const auto profiles = parse_profiles(pin);
  std::vector<TimestepRecord> records;
  for (const auto& path : o.logs) {
    auto in = open_in(path);
    auto part = parse_log(in, catalog);
    records.insert(records.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  PipelineConfig cfg{o.window, o.stride, o.max_gap_ms};
  const auto samples = run_pipeline_all(records, profiles, catalog, cfg);
  auto out = open_out(o.out_manifest);
  write_manifest(out, samples);

  ReportSink sink(o.common.report);
  ReportWriter w(sink.stream());
  echo_header(w, "preprocess");
  w.config("logs", join_list(o.logs));
  w.config("window", std::to_string(o.window));
  w.config("stride", std::to_string(o.stride));
  w.config("max_gap_ms", std::to_string(o.max_gap_ms));
  for (const auto& f : category_frequencies(samples)) {
    w.record("preprocess", f.game_id, "all", "windows", static_cast<double>(f.windows));
    w.record("preprocess", f.game_id, "all", "panning_pct", 100.0 * f.panning);
    w.record("preprocess", f.game_id, "all", "navigation_pct", 100.0 * f.navigation);
    w.record("preprocess", f.game_id, "all", "weapon_pct", 100.0 * f.weapon);
  }
}

// ---- embed-text ----------------------------------------------------------------

struct EmbedTextOpts {
  Common common;
  std::string manifest;
  std::size_t dim = 512;
  std::string out;
};

void run_embed_text(const EmbedTextOpts& o) {
  const auto samples = load_manifest(o.manifest);
  TextEmbedder embedder(default_catalog(), {o.dim, o.common.seed});
  const auto table = embed_captions(samples, embedder);
  save_table(o.out, table);
  ReportSink sink(o.common.report);
  ReportWriter w(sink.stream());
  echo_header(w, "embed-text");
  w.config("seed", std::to_string(o.common.seed));
  w.config("dim", std::to_string(o.dim));
  w.record("embed-text", "all", "all", "rows", static_cast<double>(table.rows()));
}

// ---- train ------------------------------------------------------------------------

struct TrainOpts {
  Common common;
  std::string video_table;
  std::string text_table;
  std::string manifest;
  std::string loss = "cosine";
  std::string out_checkpoint;
  std::string loss_log;
  TrainConfig config;
  std::vector<std::string> games;
};

void run_train(TrainOpts o) {
  auto loss = parse_loss(o.loss);
  if (!loss) throw Error(ErrorCode::InvalidConfig, "unknown loss '" + o.loss + "'");
  o.config.loss = *loss;
  o.config.seed = o.common.seed;
  const auto video = load_table(o.video_table);
  const auto text = load_table(o.text_table);
  std::vector<WindowSample> manifest;
  if (!o.manifest.empty()) {
    manifest = load_manifest(o.manifest);
  } else {
    if (video.ids.empty()) throw Error(ErrorCode::InvalidConfig, "video table has no ids; pass --manifest");
    for (const auto& id : video.ids) {
      WindowSample w;
      w.sample_id = id;
      w.game_id = id.substr(0, id.find('/'));
      manifest.push_back(std::move(w));
    }
  }
  if (!o.games.empty()) manifest = filter_games(manifest, o.games);
  const auto data = make_alignment_data(video, text, manifest);

  ReportSink sink(o.common.report);
  ReportWriter w(sink.stream());
  echo_header(w, "train");
  w.config("seed", std::to_string(o.config.seed));
  w.config("loss", loss_name(o.config.loss));
  w.config("epochs", std::to_string(o.config.epochs));
  w.config("batch", std::to_string(o.config.batch_size));
  w.config("lr", o.config.learning_rate);
  w.config("dropout", o.config.dropout);
  w.config("margin", o.config.margin);
  w.config("hidden", join_sizes(o.config.hidden));
  w.config("pairs", std::to_string(data.size()));
  if (!o.games.empty()) w.config("games", join_list(o.games));

  const auto report = train_alignment(data, o.config, [&](int epoch, double l) {
    w.record("train", "all", std::to_string(epoch), "loss", l);
  });
  save_checkpoint(o.out_checkpoint, report.projector, {report.seed, o.config.loss});
  const std::string log_path = o.loss_log.empty() ? o.out_checkpoint + ".loss.tsv" : o.loss_log;
  auto log = open_out(log_path);
  log << "epoch\tloss\n";
  for (std::size_t e = 0; e < report.epoch_loss.size(); ++e)
    log << e << '\t' << format_value(report.epoch_loss[e]) << '\n';
  std::cerr << "train: " << report.wall_seconds << " s wall\n";
}

// ---- project ------------------------------------------------------------------

struct ProjectOpts {
  Common common;
  std::string checkpoint;
  std::string table;
  std::string out;
};

void run_project(const ProjectOpts& o) {
  const auto projector = load_checkpoint(o.checkpoint);
  const auto table = load_table(o.table);
  const auto projected = project(projector, table);
  save_table(o.out, projected);
  ReportSink sink(o.common.report);
  ReportWriter w(sink.stream());
  echo_header(w, "project");
  w.config("checkpoint", o.checkpoint);
  w.record("project", "all", "all", "rows", static_cast<double>(projected.rows()));
  w.record("project", "all", "all", "dim", static_cast<double>(projected.dim));
}

// ---- silhouette ---------------------------------------------------------------

struct SilhouetteOpts {
  Common common;
  std::string table;
  std::string manifest;
  std::string points;
  std::vector<std::string> games;
  std::size_t subsample_max = 5000;
};

// CSV rows `label,v1,v2,...`; a header line starting with "label" is skipped.
void read_points_csv(const fs::path& p, std::vector<float>& values, std::size_t& dim, std::vector<int>& labels) {
  auto in = open_in(p);
  std::string line;
  std::size_t line_no = 0;
  dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.rfind("label", 0) == 0) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 2) throw Error(ErrorCode::MalformedRow, "points line " + std::to_string(line_no));
    if (dim == 0) dim = cells.size() - 1;
    if (cells.size() - 1 != dim) throw Error(ErrorCode::DimMismatch, "points line " + std::to_string(line_no));
    try {
      labels.push_back(std::stoi(cells[0]));
      for (std::size_t k = 1; k < cells.size(); ++k) values.push_back(std::stof(cells[k]));
    } catch (const std::exception&) {
      throw Error(ErrorCode::MalformedRow, "points line " + std::to_string(line_no));
    }
  }
}

void run_silhouette(const SilhouetteOpts& o) {
  ReportSink sink(o.common.report);
  ReportWriter w(sink.stream());
  echo_header(w, "silhouette");
  w.config("seed", std::to_string(o.common.seed));
  w.config("subsample_max", std::to_string(o.subsample_max));
  SilhouetteOptions opts{o.subsample_max, o.common.seed};
  const auto emit = [&](const std::string& kind, const SilhouetteReport& r) {
    w.record("silhouette", kind, "all", "score", r.score);
    w.record("silhouette", kind, "all", "n_points", static_cast<double>(r.n_points));
    w.record("silhouette", kind, "all", "subsampled", r.subsampled ? 1.0 : 0.0);
  };

  if (!o.points.empty()) {
    std::vector<float> values;
    std::vector<int> labels;
    std::size_t dim = 0;
    read_points_csv(o.points, values, dim, labels);
    w.config("points", o.points);
    emit("label", silhouette(values, dim, labels, opts));
    return;
  }
  if (o.table.empty() || o.manifest.empty())
    throw Error(ErrorCode::InvalidConfig, "pass --points or both --table and --manifest");
  auto manifest = load_manifest(o.manifest);
  if (!o.games.empty()) manifest = filter_games(manifest, o.games);
  const auto data = join(load_table(o.table), manifest);
  w.config("table", o.table);
  if (!o.games.empty()) w.config("games", join_list(o.games));
  for (Category c : kBehaviourCategories) {
    std::vector<int> labels;
    for (const auto& s : data.samples) labels.push_back(s.categories.get(c) ? 1 : 0);
    emit(std::string(category_name(c)), silhouette(data.x, data.dim, labels, opts));
  }
  std::map<std::string, int> game_ids;
  std::vector<int> labels;
  for (const auto& s : data.samples) {
    auto [it, fresh] = game_ids.try_emplace(s.game_id, static_cast<int>(game_ids.size()));
    labels.push_back(it->second);
  }
  if (game_ids.size() >= 2) emit("game", silhouette(data.x, data.dim, labels, opts));
}

// ---- classify -------------------------------------------------------------------

struct ClassifyOpts {
  Common common;
  std::string table;
  std::string manifest;
  std::string category = "navigation";
  std::vector<std::string> train_games;
  std::vector<std::string> eval_games;
  ClassifierConfig config;
};

void run_classify(ClassifyOpts o) {
  const Category cat = require_category(o.category);
  o.config.seed = o.common.seed;
  const auto table = load_table(o.table);
  const auto manifest = load_manifest(o.manifest);
  const auto train = join(table, o.train_games.empty() ? manifest : filter_games(manifest, o.train_games));
  std::vector<std::uint8_t> y;
  for (const auto& s : train.samples) y.push_back(s.categories.get(cat));
  const auto model = train_classifier(train.x, train.dim, y, o.config);

  ReportSink sink(o.common.report);
  ReportWriter w(sink.stream());
  echo_header(w, "classify");
  w.config("seed", std::to_string(o.config.seed));
  w.config("category", o.category);
  if (!o.train_games.empty()) w.config("train_games", join_list(o.train_games));
  w.record("classify", o.category, "all", "train_accuracy", accuracy(model, train.x, y));
  if (!o.eval_games.empty()) {
    w.config("eval_games", join_list(o.eval_games));
    const auto ev = join(table, filter_games(manifest, o.eval_games));
    std::vector<std::uint8_t> ye;
    for (const auto& s : ev.samples) ye.push_back(s.categories.get(cat));
    w.record("classify", o.category, "all", "eval_accuracy", accuracy(model, ev.x, ye));
  }
}

// ---- transfer / idm -------------------------------------------------------------

struct TransferOpts {
  Common common;
  std::string table;
  std::string manifest;
  std::string checkpoint;
  std::string source_game;
  std::vector<std::string> target_games;
  TransferConfig config;
  double min_freq = 0.30;
};

void run_transfer(TransferOpts o, bool idm) {
  o.config.seed = o.common.seed;
  const auto table = load_table(o.table);
  const auto manifest = load_manifest(o.manifest);
  const auto source = game_subset(table, manifest, o.source_game);
  std::vector<PairedDataset> targets;
  for (const auto& g : o.target_games) targets.push_back(game_subset(table, manifest, g));
  std::optional<MlpProjector> projector;
  if (!o.checkpoint.empty()) projector = load_checkpoint(o.checkpoint);

  const MlpProjector* p = projector ? &*projector : nullptr;
  const auto report = idm ? idm_marginal(source, targets, p, default_catalog(), o.config, o.min_freq)
                          : run_transfer_experiment(source, targets, p, o.config);
  ReportSink sink(o.common.report);
  ReportWriter w(sink.stream());
  echo_header(w, idm ? "idm" : "transfer");
  w.config("seed", std::to_string(o.config.seed));
  w.config("runs", std::to_string(o.config.runs));
  w.config("source", o.source_game);
  w.config("targets", join_list(o.target_games));
  w.config("projector", o.checkpoint.empty() ? "none" : o.checkpoint);
  if (idm) w.config("min_freq", o.min_freq);
  write_transfer_report(w, idm ? "idm" : "transfer", report);
}

// ---- synth ------------------------------------------------------------------------

struct SynthOpts {
  Common common;
  std::string out_dir;
  SynthConfig config;
  std::string rates;  // "" or "csgo"
};

void run_synth(SynthOpts o) {
  o.config.seed = o.common.seed;
  if (!o.rates.empty()) {
    if (o.rates != "csgo") throw Error(ErrorCode::InvalidConfig, "unknown rate profile '" + o.rates + "'");
    o.config.games = resolve_styles(o.config);
    for (auto& g : o.config.games) g.action_rates = csgo_like_action_rates();
  }
  const auto& catalog = default_catalog();
  const fs::path dir(o.out_dir);
  fs::create_directories(dir / "logs");
  const auto games = generate_logs(o.config, catalog);
  std::vector<GameProfile> profiles;
  std::vector<WindowSample> samples;
  for (const auto& g : games) {
    auto out = open_out(dir / "logs" / (g.profile.game_id + ".csv"));
    serialize_log(out, g.records, catalog);
    profiles.push_back(g.profile);
    auto part = run_pipeline(g.records, g.profile, catalog);
    samples.insert(samples.end(), part.begin(), part.end());
  }
  {
    auto out = open_out(dir / "profiles.json");
    write_profiles(out, profiles);
  }
  {
    auto out = open_out(dir / "manifest.tsv");
    write_manifest(out, samples);
  }
  save_table(dir / "video.bhve", generate_foundation_embeddings(samples, o.config, catalog));

  ReportSink sink(o.common.report);
  ReportWriter w(sink.stream());
  echo_header(w, "synth");
  w.config("seed", std::to_string(o.config.seed));
  w.config("frames", std::to_string(o.config.frames_per_game));
  w.config("dim", std::to_string(o.config.embedding_dim));
  w.config("sigma_game", o.config.sigma_game);
  w.config("sigma_noise", o.config.sigma_noise);
  w.config("sigma_scene", o.config.sigma_scene);
  for (const auto& f : category_frequencies(samples)) {
    w.record("synth", f.game_id, "all", "windows", static_cast<double>(f.windows));
    w.record("synth", f.game_id, "all", "panning_pct", 100.0 * f.panning);
    w.record("synth", f.game_id, "all", "navigation_pct", 100.0 * f.navigation);
    w.record("synth", f.game_id, "all", "weapon_pct", 100.0 * f.weapon);
  }
}

// ---- export-2d ----------------------------------------------------------------------

struct ExportOpts {
  Common common;
  std::string table;
  std::string manifest;
  std::string label = "game";
  std::string out;
};

void run_export(const ExportOpts& o) {
  auto table = load_table(o.table);
  std::vector<std::string> ids = table.ids;
  std::vector<std::string> labels(table.rows(), "");
  if (!o.manifest.empty()) {
    const auto manifest = load_manifest(o.manifest);
    const auto data = join(table, manifest);
    table.values = data.x;
    ids.clear();
    labels.clear();
    std::optional<Category> cat;
    if (o.label != "game" && o.label != "caption") cat = require_category(o.label);
    for (const auto& s : data.samples) {
      ids.push_back(s.sample_id);
      if (cat)
        labels.push_back(s.categories.get(*cat) ? "1" : "0");
      else
        labels.push_back(o.label == "game" ? s.game_id : s.caption);
    }
  }
  if (ids.empty())
    for (std::size_t i = 0; i < table.rows(); ++i) ids.push_back(std::to_string(i));
  const auto xy = pca_2d(table.values, table.dim);
  auto out = open_out(o.out);
  out << "id,x,y,label\n";
  for (std::size_t i = 0; i < xy.size(); ++i) {
    std::string label = labels[i];
    if (label.find(',') != std::string::npos) label = "\"" + label + "\"";
    out << ids[i] << ',' << format_value(xy[i][0]) << ',' << format_value(xy[i][1]) << ',' << label << '\n';
  }
  ReportSink sink(o.common.report);
  ReportWriter w(sink.stream());
  echo_header(w, "export-2d");
  w.config("label", o.label);
  w.record("export-2d", "all", "all", "rows", static_cast<double>(xy.size()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"behave: behaviour-aligned embedding toolkit"};
  app.set_config("--config", "", "TOML or INI config file; command-line flags take precedence");
  app.require_subcommand(1);

  PreprocessOpts pre;
  auto* c_pre = app.add_subcommand("preprocess", "Turn gameplay logs into a window manifest");
  c_pre->add_option("--logs", pre.logs, "Log CSV files")->required()->check(CLI::ExistingFile);
  c_pre->add_option("--profiles", pre.profiles, "Game profiles JSON")->required()->check(CLI::ExistingFile);
  c_pre->add_option("--out-manifest", pre.out_manifest, "Output manifest TSV")->required();
  c_pre->add_option("--window", pre.window, "Window size in frames")->capture_default_str();
  c_pre->add_option("--stride", pre.stride, "Window stride in frames")->capture_default_str();
  c_pre->add_option("--max-gap-ms", pre.max_gap_ms, "Timestamp gap that splits a segment")->capture_default_str();
  add_report(c_pre, pre.common);

  EmbedTextOpts emb;
  auto* c_emb = app.add_subcommand("embed-text", "Embed manifest captions with the seeded text encoder");
  c_emb->add_option("--manifest", emb.manifest, "Window manifest")->required()->check(CLI::ExistingFile);
  c_emb->add_option("--dim", emb.dim, "Embedding dimension")->capture_default_str();
  c_emb->add_option("--out", emb.out, "Output BHVE table")->required();
  add_seed(c_emb, emb.common);
  add_report(c_emb, emb.common);

  TrainOpts tr;
  auto* c_tr = app.add_subcommand("train", "Train the alignment projector");
  c_tr->add_option("--video-table", tr.video_table, "Foundation video embeddings")->required()->check(CLI::ExistingFile);
  c_tr->add_option("--text-table", tr.text_table, "Caption embeddings")->required()->check(CLI::ExistingFile);
  c_tr->add_option("--manifest", tr.manifest, "Window manifest (supplies ids and order)")->check(CLI::ExistingFile);
  c_tr->add_option("--games", tr.games, "Restrict training to these games");
  c_tr->add_option("--loss", tr.loss, "cosine, mse, or preference")->capture_default_str();
  c_tr->add_option("--epochs", tr.config.epochs)->capture_default_str();
  c_tr->add_option("--lr", tr.config.learning_rate)->capture_default_str();
  c_tr->add_option("--batch", tr.config.batch_size)->capture_default_str();
  c_tr->add_option("--dropout", tr.config.dropout)->capture_default_str();
  c_tr->add_option("--margin", tr.config.margin, "Preference loss margin")->capture_default_str();
  c_tr->add_option("--hidden", tr.config.hidden, "Hidden layer widths")->capture_default_str()->delimiter(',');
  c_tr->add_option("--out-checkpoint", tr.out_checkpoint, "Output checkpoint")->required();
  c_tr->add_option("--loss-log", tr.loss_log, "Per-epoch loss TSV (default: <checkpoint>.loss.tsv)");
  add_seed(c_tr, tr.common);
  add_report(c_tr, tr.common);

  ProjectOpts pj;
  auto* c_pj = app.add_subcommand("project", "Apply a trained projector to a table");
  c_pj->add_option("--checkpoint", pj.checkpoint)->required()->check(CLI::ExistingFile);
  c_pj->add_option("--table", pj.table)->required()->check(CLI::ExistingFile);
  c_pj->add_option("--out", pj.out)->required();
  add_report(c_pj, pj.common);

  SilhouetteOpts sil;
  auto* c_sil = app.add_subcommand("silhouette", "Silhouette scores per behaviour category and game");
  c_sil->add_option("--table", sil.table)->check(CLI::ExistingFile);
  c_sil->add_option("--manifest", sil.manifest)->check(CLI::ExistingFile);
  c_sil->add_option("--points", sil.points, "CSV of label,v1,v2,...")->check(CLI::ExistingFile);
  c_sil->add_option("--games", sil.games, "Restrict to these games");
  c_sil->add_option("--subsample-max", sil.subsample_max)->capture_default_str();
  add_seed(c_sil, sil.common);
  add_report(c_sil, sil.common);

  ClassifyOpts cl;
  auto* c_cl = app.add_subcommand("classify", "Train and score a behaviour classifier");
  c_cl->add_option("--table", cl.table)->required()->check(CLI::ExistingFile);
  c_cl->add_option("--manifest", cl.manifest)->required()->check(CLI::ExistingFile);
  c_cl->add_option("--category", cl.category)->capture_default_str();
  c_cl->add_option("--train-games", cl.train_games);
  c_cl->add_option("--eval-games", cl.eval_games);
  c_cl->add_option("--epochs", cl.config.epochs)->capture_default_str();
  c_cl->add_option("--lr", cl.config.learning_rate)->capture_default_str();
  c_cl->add_option("--dropout", cl.config.dropout)->capture_default_str();
  c_cl->add_flag("--balance", cl.config.balance_classes, "Balance classes by subsampling");
  add_seed(c_cl, cl.common);
  add_report(c_cl, cl.common);

  TransferOpts tf;
  TransferOpts idm;
  auto* c_tf = app.add_subcommand("transfer", "Cross-game transferability per behaviour category");
  auto* c_idm = app.add_subcommand("idm", "Per-action inverse dynamics transferability");
  for (auto [cmd, o] : {std::pair{c_tf, &tf}, std::pair{c_idm, &idm}}) {
    cmd->add_option("--table", o->table, "Foundation embeddings")->required()->check(CLI::ExistingFile);
    cmd->add_option("--manifest", o->manifest)->required()->check(CLI::ExistingFile);
    cmd->add_option("--checkpoint", o->checkpoint, "Projector for the aligned arm")->check(CLI::ExistingFile);
    cmd->add_option("--source-game", o->source_game)->required();
    cmd->add_option("--target-games", o->target_games)->required();
    cmd->add_option("--runs", o->config.runs)->capture_default_str();
    cmd->add_option("--train-fraction", o->config.train_fraction)->capture_default_str();
    cmd->add_option("--epochs", o->config.classifier.epochs)->capture_default_str();
    cmd->add_flag("--balance", o->config.classifier.balance_classes);
    add_seed(cmd, o->common);
    add_report(cmd, o->common);
  }
  c_idm->add_option("--min-freq", idm.min_freq)->capture_default_str();

  SynthOpts sy;
  auto* c_sy = app.add_subcommand("synth", "Generate a synthetic multi-game dataset");
  c_sy->add_option("--out-dir", sy.out_dir)->required();
  c_sy->add_option("--games", sy.config.n_games)->capture_default_str();
  c_sy->add_option("--frames", sy.config.frames_per_game, "Frames per game")->capture_default_str();
  c_sy->add_option("--dim", sy.config.embedding_dim)->capture_default_str();
  c_sy->add_option("--style-dim", sy.config.style_dim)->capture_default_str();
  c_sy->add_option("--sigma-game", sy.config.sigma_game)->capture_default_str();
  c_sy->add_option("--sigma-noise", sy.config.sigma_noise)->capture_default_str();
  c_sy->add_option("--sigma-scene", sy.config.sigma_scene)->capture_default_str();
  c_sy->add_option("--rates", sy.rates, "Per-action rate profile: csgo");
  add_seed(c_sy, sy.common);
  add_report(c_sy, sy.common);

  ExportOpts ex;
  auto* c_ex = app.add_subcommand("export-2d", "PCA projection to 2-D for plotting");
  c_ex->add_option("--table", ex.table)->required()->check(CLI::ExistingFile);
  c_ex->add_option("--manifest", ex.manifest)->check(CLI::ExistingFile);
  c_ex->add_option("--label", ex.label, "game, caption, or a behaviour category")->capture_default_str();
  c_ex->add_option("--out", ex.out)->required();
  add_report(c_ex, ex.common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_pre->parsed()) run_preprocess(pre);
    else if (c_emb->parsed()) run_embed_text(emb);
    else if (c_tr->parsed()) run_train(tr);
    else if (c_pj->parsed()) run_project(pj);
    else if (c_sil->parsed()) run_silhouette(sil);
    else if (c_cl->parsed()) run_classify(cl);
    else if (c_tf->parsed()) run_transfer(tf, false);
    else if (c_idm->parsed()) run_transfer(idm, true);
    else if (c_sy->parsed()) run_synth(sy);
    else if (c_ex->parsed()) run_export(ex);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "IoError: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
