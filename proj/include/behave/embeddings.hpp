// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "behave/catalog.hpp"
#include "behave/preprocess.hpp"

namespace behave {

/// Id-keyed row-major matrix of float32 embeddings.
struct EmbeddingTable {
  std::size_t dim = 0;
  std::vector<std::string> ids;
  std::vector<float> values;

  std::size_t rows() const noexcept { return dim == 0 ? 0 : values.size() / dim; }
  std::span<const float> row(std::size_t i) const { return {values.data() + i * dim, dim}; }
  std::span<float> row(std::size_t i) { return {values.data() + i * dim, dim}; }

  /// Checks shape, finiteness, and (when ids are present) id count and uniqueness.
  void validate() const;
  friend bool operator==(const EmbeddingTable&, const EmbeddingTable&) = default;
};

inline constexpr std::uint32_t kTableVersion = 1;
inline constexpr double kNormEpsilon = 1e-12;

/// BHVE binary: "BHVE", u32 version, u32 count, u32 dim, count*dim f32, all
/// little-endian. Ids are not part of the binary.
void write_table(std::ostream& out, const EmbeddingTable& table);
EmbeddingTable read_table(std::istream& in);

void write_ids(std::ostream& out, const std::vector<std::string>& ids);
std::vector<std::string> read_ids(std::istream& in);

/// Sets ids after checking count and uniqueness.
void attach_ids(EmbeddingTable& table, std::vector<std::string> ids);

/// `<path>.ids` next to a BHVE file.
std::filesystem::path ids_path(const std::filesystem::path& table_path);

/// Writes the BHVE file and its sibling ids file (when the table has ids).
void save_table(const std::filesystem::path& path, const EmbeddingTable& table);
/// Reads a BHVE file, plus its ids file when one exists.
EmbeddingTable load_table(const std::filesystem::path& path);

std::vector<float> l2_normalize(std::span<const float> v);
void l2_normalize_inplace(std::span<float> v);

struct TextEmbedderConfig {
  std::size_t dim = 512;
  std::uint64_t seed = 0;
};

/// Desk-scale deterministic text encoder. Each word gets a seeded uniform
/// vector, a phrase is the normalized sum of its words, a caption the
/// normalized sum of its phrases. Only catalog phrases and "Idle" are accepted.
class TextEmbedder {
 public:
  TextEmbedder(const ActionCatalog& catalog, TextEmbedderConfig config = {});

  const TextEmbedderConfig& config() const noexcept { return config_; }
  std::vector<float> embed(std::string_view caption) const;

 private:
  std::vector<double> word_vector(std::string_view word) const;

  TextEmbedderConfig config_;
  std::map<std::string, std::vector<double>, std::less<>> phrases_;
};

/// Splits a caption on ", ".
std::vector<std::string> split_caption(std::string_view caption);

/// One row per sample, in sample order, ids = sample ids.
EmbeddingTable embed_captions(const std::vector<WindowSample>& samples, const TextEmbedder& embedder);

/// Embedding rows matched to manifest windows.
struct PairedDataset {
  std::size_t dim = 0;
  std::vector<float> x;  // rows in sample order
  std::vector<WindowSample> samples;
  std::vector<std::string> unused_ids;  // table ids absent from the manifest

  std::size_t size() const noexcept { return samples.size(); }
  std::span<const float> row(std::size_t i) const { return {x.data() + i * dim, dim}; }
};

/// Pairs every manifest window with its table row, in manifest order. A table
/// without ids is matched positionally and must have one row per window.
PairedDataset join(const EmbeddingTable& table, const std::vector<WindowSample>& manifest);

}  // namespace behave
