// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#include "behave/embeddings.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <set>
#include <unordered_map>

#include "behave/error.hpp"
#include "behave/random.hpp"

namespace behave {

namespace {

constexpr std::array<char, 4> kMagic = {'B', 'H', 'V', 'E'};

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

bool read_exact(std::istream& in, unsigned char* dst, std::size_t n) {
  in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
  return static_cast<std::size_t>(in.gcount()) == n;
}

}  // namespace

void EmbeddingTable::validate() const {
  if (dim == 0) throw Error(ErrorCode::DimMismatch, "embedding dim must be positive");
  if (values.size() % dim != 0)
    throw Error(ErrorCode::DimMismatch, "value count is not a multiple of dim");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i]))
      throw Error(ErrorCode::NonFiniteValue, "row " + std::to_string(i / dim) + " has a non-finite value");
  if (ids.empty()) return;
  if (ids.size() != rows())
    throw Error(ErrorCode::DimMismatch, std::to_string(ids.size()) + " ids for " +
                                            std::to_string(rows()) + " rows");
  std::set<std::string_view> seen;
  for (const auto& id : ids)
    if (!seen.insert(id).second) throw Error(ErrorCode::DuplicateId, "duplicate id '" + id + "'");
}

void write_table(std::ostream& out, const EmbeddingTable& table) {
  table.validate();
  const std::size_t rows = table.rows();
  if (rows > UINT32_MAX || table.dim > UINT32_MAX)
    throw Error(ErrorCode::DimMismatch, "table too large for the format");
  std::string buf(kMagic.begin(), kMagic.end());
  buf.reserve(16 + table.values.size() * 4);
  put_u32(buf, kTableVersion);
  put_u32(buf, static_cast<std::uint32_t>(rows));
  put_u32(buf, static_cast<std::uint32_t>(table.dim));
  for (float v : table.values) put_u32(buf, std::bit_cast<std::uint32_t>(v));
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorCode::IoError, "failed to write embedding table");
}

EmbeddingTable read_table(std::istream& in) {
  std::array<unsigned char, 16> header{};
  in.read(reinterpret_cast<char*>(header.data()), 4);
  if (in.gcount() < 4 || !std::equal(kMagic.begin(), kMagic.end(), header.begin(),
                                     [](char a, unsigned char b) { return a == static_cast<char>(b); }))
    throw Error(ErrorCode::BadMagic, "not a BHVE file");
  if (!read_exact(in, header.data() + 4, 12))
    throw Error(ErrorCode::TruncatedFile, "header ends early");
  const std::uint32_t version = get_u32(header.data() + 4);
  if (version != kTableVersion)
    throw Error(ErrorCode::VersionMismatch, "version " + std::to_string(version) + ", expected " +
                                                std::to_string(kTableVersion));
  const std::uint32_t count = get_u32(header.data() + 8);
  EmbeddingTable table;
  table.dim = get_u32(header.data() + 12);
  if (table.dim == 0) throw Error(ErrorCode::DimMismatch, "dim is zero");

  const std::size_t n = static_cast<std::size_t>(count) * table.dim;
  std::vector<unsigned char> raw(n * 4);
  if (!read_exact(in, raw.data(), raw.size()))
    throw Error(ErrorCode::TruncatedFile, "expected " + std::to_string(count) + " rows of dim " +
                                              std::to_string(table.dim));
  if (in.peek() != std::char_traits<char>::eof())
    throw Error(ErrorCode::TrailingBytes, "data continues after the last row");
  table.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const float v = std::bit_cast<float>(get_u32(raw.data() + 4 * i));
    if (!std::isfinite(v))
      throw Error(ErrorCode::NonFiniteValue, "row " + std::to_string(i / table.dim) + " has a non-finite value");
    table.values[i] = v;
  }
  return table;
}

void write_ids(std::ostream& out, const std::vector<std::string>& ids) {
  for (const auto& id : ids) out << id << '\n';
}

std::vector<std::string> read_ids(std::istream& in) {
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) ids.push_back(line);
  }
  return ids;
}

void attach_ids(EmbeddingTable& table, std::vector<std::string> ids) {
  if (ids.size() != table.rows())
    throw Error(ErrorCode::DimMismatch, std::to_string(ids.size()) + " ids for " +
                                            std::to_string(table.rows()) + " rows");
  table.ids = std::move(ids);
  table.validate();
}

std::filesystem::path ids_path(const std::filesystem::path& table_path) {
  auto p = table_path;
  p += ".ids";
  return p;
}

void save_table(const std::filesystem::path& path, const EmbeddingTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  write_table(out, table);
  if (!table.ids.empty() || table.rows() == 0) {
    std::ofstream ids(ids_path(path), std::ios::binary);
    if (!ids) throw Error(ErrorCode::IoError, "cannot open " + ids_path(path).string());
    write_ids(ids, table.ids);
  }
}

EmbeddingTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  EmbeddingTable table = read_table(in);
  std::ifstream ids(ids_path(path), std::ios::binary);
  if (ids) attach_ids(table, read_ids(ids));
  return table;
}

std::vector<float> l2_normalize(std::span<const float> v) {
  std::vector<float> out(v.begin(), v.end());
  l2_normalize_inplace(out);
  return out;
}

void l2_normalize_inplace(std::span<float> v) {
  double sq = 0.0;
  for (float x : v) sq += static_cast<double>(x) * x;
  const double norm = std::sqrt(sq);
  if (norm <= kNormEpsilon) {
    std::fill(v.begin(), v.end(), 0.0f);
    return;
  }
  for (float& x : v) x = static_cast<float>(x / norm);
}

namespace {

void normalize(std::vector<double>& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double norm = std::sqrt(sq);
  if (norm <= kNormEpsilon) return;
  for (double& x : v) x /= norm;
}

}  // namespace

TextEmbedder::TextEmbedder(const ActionCatalog& catalog, TextEmbedderConfig config)
    : config_(config) {
  if (config_.dim < 2) throw Error(ErrorCode::InvalidConfig, "text embedding dim must be >= 2");
  std::vector<std::string> vocab;
  for (const auto& e : catalog.entries()) vocab.push_back(e.phrase);
  vocab.emplace_back(kIdleCaption);
  for (const auto& phrase : vocab) {
    std::vector<double> v(config_.dim, 0.0);
    std::size_t start = 0;
    while (start < phrase.size()) {
      std::size_t end = phrase.find(' ', start);
      if (end == std::string::npos) end = phrase.size();
      if (end > start) {
        const auto w = word_vector(std::string_view(phrase).substr(start, end - start));
        for (std::size_t d = 0; d < v.size(); ++d) v[d] += w[d];
      }
      start = end + 1;
    }
    normalize(v);
    phrases_.emplace(phrase, std::move(v));
  }
}

std::vector<double> TextEmbedder::word_vector(std::string_view word) const {
  Rng rng(hash_bytes(word, config_.seed));
  std::vector<double> v(config_.dim);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  normalize(v);
  return v;
}

std::vector<std::string> split_caption(std::string_view caption) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = caption.find(", ", start);
    if (pos == std::string_view::npos) {
      parts.emplace_back(caption.substr(start));
      return parts;
    }
    parts.emplace_back(caption.substr(start, pos - start));
    start = pos + 2;
  }
}

std::vector<float> TextEmbedder::embed(std::string_view caption) const {
  std::vector<double> sum(config_.dim, 0.0);
  for (const auto& phrase : split_caption(caption)) {
    auto it = phrases_.find(phrase);
    if (it == phrases_.end()) throw Error(ErrorCode::UnknownPhrase, "'" + phrase + "'");
    for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += it->second[d];
  }
  normalize(sum);
  return std::vector<float>(sum.begin(), sum.end());
}

EmbeddingTable embed_captions(const std::vector<WindowSample>& samples, const TextEmbedder& embedder) {
  EmbeddingTable table;
  table.dim = embedder.config().dim;
  table.values.reserve(samples.size() * table.dim);
  std::unordered_map<std::string, std::vector<float>> cache;
  for (const auto& s : samples) {
    auto it = cache.find(s.caption);
    if (it == cache.end()) it = cache.emplace(s.caption, embedder.embed(s.caption)).first;
    table.values.insert(table.values.end(), it->second.begin(), it->second.end());
    table.ids.push_back(s.sample_id);
  }
  table.validate();
  return table;
}

PairedDataset join(const EmbeddingTable& table, const std::vector<WindowSample>& manifest) {
  PairedDataset out;
  out.dim = table.dim;
  out.samples = manifest;
  out.x.reserve(manifest.size() * table.dim);

  if (table.ids.empty()) {
    if (table.rows() != manifest.size())
      throw Error(ErrorCode::DimMismatch, "table has " + std::to_string(table.rows()) +
                                              " rows but the manifest has " +
                                              std::to_string(manifest.size()) + " windows");
    out.x = table.values;
    return out;
  }

  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < table.ids.size(); ++i) index.emplace(table.ids[i], i);
  std::vector<char> used(table.ids.size(), 0);
  std::string missing;
  std::size_t n_missing = 0;
  for (const auto& s : manifest) {
    auto it = index.find(s.sample_id);
    if (it == index.end()) {
      if (n_missing++ > 0) missing += ", ";
      missing += s.sample_id;
      continue;
    }
    used[it->second] = 1;
    const auto r = table.row(it->second);
    out.x.insert(out.x.end(), r.begin(), r.end());
  }
  if (n_missing > 0)
    throw Error(ErrorCode::MissingEmbedding, std::to_string(n_missing) + " ids absent: " + missing);
  for (std::size_t i = 0; i < used.size(); ++i)
    if (!used[i]) out.unused_ids.push_back(table.ids[i]);
  return out;
}

}  // namespace behave
