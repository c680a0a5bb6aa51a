// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "behave/embeddings.hpp"
#include "behave/error.hpp"
#include "behave/random.hpp"

namespace behave {
namespace {

ErrorCode read_error(const std::string& bytes) {
  std::istringstream in(bytes);
  try {
    read_table(in);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "read_table accepted bad input";
  return ErrorCode::IoError;
}

std::string bytes_of(const EmbeddingTable& t) {
  std::ostringstream out;
  write_table(out, t);
  return out.str();
}

EmbeddingTable small_table() {
  EmbeddingTable t;
  t.dim = 4;
  t.values = {1.0f, -2.5f, 0.125f, 3.0e-8f, 0.0f, -0.0f, 1e30f, -7.0f, 0.1f, 0.2f, 0.3f, 0.4f};
  return t;
}

std::uint32_t u32_at(const std::string& s, std::size_t off) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(s[off])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(s[off + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(s[off + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(s[off + 3])) << 24;
}

TEST(Bhve, ByteLayout) {
  const std::string b = bytes_of(small_table());
  ASSERT_EQ(b.size(), 16u + 12u * 4u);
  EXPECT_EQ(b.substr(0, 4), "BHVE");
  EXPECT_EQ(u32_at(b, 4), kTableVersion);
  EXPECT_EQ(u32_at(b, 8), 3u);
  EXPECT_EQ(u32_at(b, 12), 4u);
  const std::uint32_t expect = std::bit_cast<std::uint32_t>(-2.5f);
  EXPECT_EQ(u32_at(b, 16 + 4), expect);
}

TEST(Bhve, RoundTripsBitExact) {
  const auto t = small_table();
  std::istringstream in(bytes_of(t));
  const auto back = read_table(in);
  EXPECT_EQ(back.dim, 4u);
  ASSERT_EQ(back.values.size(), t.values.size());
  EXPECT_EQ(std::memcmp(back.values.data(), t.values.data(), t.values.size() * 4), 0);
  EXPECT_EQ(bytes_of(back), bytes_of(t));
}

TEST(Bhve, EmptyTable) {
  EmbeddingTable t;
  t.dim = 512;
  const std::string b = bytes_of(t);
  EXPECT_EQ(b.size(), 16u);
  std::istringstream in(b);
  const auto back = read_table(in);
  EXPECT_EQ(back.dim, 512u);
  EXPECT_EQ(back.rows(), 0u);
}

TEST(Bhve, RandomRoundTrips) {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    EmbeddingTable t;
    t.dim = 1 + rng.below(40);
    const std::size_t rows = rng.below(30);
    for (std::size_t i = 0; i < rows * t.dim; ++i) {
      // Random finite bit patterns, including denormals and signed zeros.
      float f;
      do {
        f = std::bit_cast<float>(static_cast<std::uint32_t>(rng()));
      } while (!std::isfinite(f));
      t.values.push_back(f);
    }
    const std::string b = bytes_of(t);
    std::istringstream in(b);
    ASSERT_EQ(bytes_of(read_table(in)), b) << "trial " << trial;
  }
}

TEST(Bhve, Errors) {
  const std::string good = bytes_of(small_table());
  EXPECT_EQ(read_error("BHVX" + good.substr(4)), ErrorCode::BadMagic);
  std::string v = good;
  v[4] = 9;
  EXPECT_EQ(read_error(v), ErrorCode::VersionMismatch);
  EXPECT_EQ(read_error(good.substr(0, good.size() - 6)), ErrorCode::TruncatedFile);
  EXPECT_EQ(read_error(good.substr(0, 10)), ErrorCode::TruncatedFile);
  EXPECT_EQ(read_error(good + "x"), ErrorCode::TrailingBytes);
  std::string nan = good;
  const float q = std::numeric_limits<float>::quiet_NaN();
  std::memcpy(nan.data() + 20, &q, 4);
  EXPECT_EQ(read_error(nan), ErrorCode::NonFiniteValue);
  std::string zero_dim = good;
  zero_dim[12] = 0;
  EXPECT_EQ(read_error(zero_dim), ErrorCode::DimMismatch);
}

TEST(Bhve, IdsSidecarRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "behave_test_ids";
  std::filesystem::create_directories(dir);
  auto t = small_table();
  attach_ids(t, {"g/s/0", "g/s/8", "g/s/16"});
  save_table(dir / "t.bhve", t);
  EXPECT_TRUE(std::filesystem::exists(ids_path(dir / "t.bhve")));
  EXPECT_EQ(load_table(dir / "t.bhve"), t);
  EXPECT_THROW(attach_ids(t, {"a", "a", "b"}), Error);
  EXPECT_THROW(attach_ids(t, {"a"}), Error);
  std::filesystem::remove_all(dir);
}

TEST(L2Normalize, Examples) {
  const std::vector<float> v{3.0f, 4.0f};
  const auto n = l2_normalize(v);
  EXPECT_FLOAT_EQ(n[0], 0.6f);
  EXPECT_FLOAT_EQ(n[1], 0.8f);
  EXPECT_EQ(l2_normalize(n), n);
  const std::vector<float> z{0.0f, 0.0f, 0.0f};
  EXPECT_EQ(l2_normalize(z), z);
}

TEST(TextEmbedder, DeterministicUnitVectors) {
  const TextEmbedder e(default_catalog());
  const auto a = e.embed("Move Forward");
  EXPECT_EQ(a, e.embed("Move Forward"));
  EXPECT_EQ(a.size(), 512u);
  double norm = 0;
  for (float x : a) norm += double(x) * x;
  EXPECT_NEAR(norm, 1.0, 1e-5);
  EXPECT_EQ(TextEmbedder(default_catalog()).embed("Pan Left, Fire Gun"), e.embed("Pan Left, Fire Gun"));
  EXPECT_NE(TextEmbedder(default_catalog(), {512, 1}).embed("Move Forward"), a);
  EXPECT_EQ(e.embed("Idle").size(), 512u);
}

TEST(TextEmbedder, UnknownPhrase) {
  const TextEmbedder e(default_catalog(), {16, 0});
  try {
    e.embed("Flibbertigibbet");
    ADD_FAILURE();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::UnknownPhrase);
  }
  EXPECT_THROW(e.embed("Move Forward, Dance"), Error);
}

float dot(const std::vector<float>& a, const std::vector<float>& b) {
  float s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

TEST(TextEmbedder, SharedPhrasesAreCloser) {
  const TextEmbedder e(default_catalog(), {256, 3});
  const auto fire = e.embed("Fire Gun");
  EXPECT_GT(dot(fire, e.embed("Fire Gun, Jump")), dot(fire, e.embed("Move Forward, Jump")));
  EXPECT_EQ(split_caption("Pan Left, Fire Gun"), (std::vector<std::string>{"Pan Left", "Fire Gun"}));
}

WindowSample sample(std::string id, std::string caption = "Idle") {
  WindowSample s;
  s.sample_id = std::move(id);
  s.caption = std::move(caption);
  return s;
}

TEST(Join, MatchesByIdInManifestOrder) {
  EmbeddingTable t;
  t.dim = 2;
  t.values = {1, 1, 2, 2, 3, 3};
  attach_ids(t, {"a", "b", "c"});
  const std::vector<WindowSample> manifest = {sample("c"), sample("a")};
  const auto p = join(t, manifest);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p.row(0)[0], 3.0f);
  EXPECT_EQ(p.row(1)[0], 1.0f);
  EXPECT_EQ(p.unused_ids, (std::vector<std::string>{"b"}));

  const std::vector<WindowSample> exact = {sample("a"), sample("b"), sample("c")};
  EXPECT_EQ(join(t, exact).x, t.values);
}

TEST(Join, MissingIdsAreListed) {
  EmbeddingTable t;
  t.dim = 1;
  t.values = {1, 2};
  attach_ids(t, {"a", "b"});
  try {
    join(t, {sample("x"), sample("y")});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingEmbedding);
    const std::string what = e.what();
    EXPECT_NE(what.find('x'), std::string::npos);
    EXPECT_NE(what.find('y'), std::string::npos);
  }
}

TEST(EmbedCaptions, RowsFollowSamples) {
  const TextEmbedder e(default_catalog(), {8, 0});
  const std::vector<WindowSample> s = {sample("a", "Jump"), sample("b", "Idle"), sample("c", "Jump")};
  const auto t = embed_captions(s, e);
  EXPECT_EQ(t.ids, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(t.rows(), 3u);
  EXPECT_TRUE(std::equal(t.row(0).begin(), t.row(0).end(), t.row(2).begin()));
}

}  // namespace
}  // namespace behave
