/*
 * Copyright 2026 The WrinkleForge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "wrinkleforge/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "wrinkleforge/error.hpp"
#include "wrinkleforge/rng.hpp"
#include "wrinkleforge/texture.hpp"

namespace wrinkleforge {

Image DatasetSample::network_input(int channels) const {
  const Image masked = apply_mask(rgb, face);
  if (channels == 3) return masked;
  if (channels == 4) {
    if (texture.empty()) throw Error(ErrorCode::DatasetMissing, id + ": texture channel not loaded");
    return concat_channels(masked, texture);
  }
  throw Error(ErrorCode::ShapeMismatch, "network input must have 3 or 4 channels");
}

std::vector<std::string> dataset_ids(const std::filesystem::path& root) {
  std::error_code ec;
  if (!std::filesystem::is_directory(root / layout::kImages, ec))
    throw Error(ErrorCode::DatasetMissing, (root / layout::kImages).string() + " not found");
  return list_png_ids(root / layout::kImages);
}

namespace {

std::filesystem::path require(const std::filesystem::path& p) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(p, ec)) throw Error(ErrorCode::DatasetMissing, p.string() + " not found");
  return p;
}

}  // namespace

std::vector<DatasetSample> load_samples(const std::filesystem::path& root, const std::vector<std::string>& ids,
                                        const LoadOptions& options) {
  std::vector<DatasetSample> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    const std::string file = id + ".png";
    DatasetSample s;
    s.id = id;
    s.rgb = load_png(require(root / layout::kImages / file));
    if (s.rgb.channels() == 4) {
      Image rgb(s.rgb.height(), s.rgb.width(), 3);
      for (int y = 0; y < rgb.height(); ++y)
        for (int x = 0; x < rgb.width(); ++x)
          for (int c = 0; c < 3; ++c) rgb(y, x, c) = s.rgb(y, x, c);
      s.rgb = std::move(rgb);
    }
    if (s.rgb.channels() != 3) throw Error(ErrorCode::WrongChannelCount, id + ": expected an RGB image");
    s.face = load_mask(require(root / layout::kFaceMasks / file));
    if (options.texture) s.texture = load_png(require(root / layout::kWeakLabels / file));
    if (options.truth) s.truth = load_mask(require(root / options.truth_dir / file));

    if (!s.face.same_shape(BinaryMask(s.rgb.height(), s.rgb.width())))
      throw Error(ErrorCode::ShapeMismatch, id + ": face mask size differs from image");
    if (options.image_size > 0) {
      const int n = options.image_size;
      s.rgb = resize_bilinear(s.rgb, n, n);
      s.face = resize_nearest(s.face, n, n);
      if (!s.texture.empty()) s.texture = resize_bilinear(s.texture, n, n);
      if (s.truth.pixel_count() > 0) s.truth = resize_nearest(s.truth, n, n);
    }
    if (!s.texture.empty() && (s.texture.height() != s.rgb.height() || s.texture.width() != s.rgb.width()))
      throw Error(ErrorCode::ShapeMismatch, id + ": weak label size differs from image");
    if (s.truth.pixel_count() > 0 && !s.truth.same_shape(s.face))
      throw Error(ErrorCode::ShapeMismatch, id + ": truth size differs from image");
    out.push_back(std::move(s));
  }
  return out;
}

void to_json(nlohmann::json& j, const SplitManifest& m) {
  j = {{"seed", m.seed}, {"train", m.train}, {"val", m.val}, {"test", m.test}};
}

void from_json(const nlohmann::json& j, SplitManifest& m) {
  m.seed = j.at("seed").get<std::uint64_t>();
  m.train = j.at("train").get<std::vector<std::string>>();
  m.val = j.at("val").get<std::vector<std::string>>();
  m.test = j.at("test").get<std::vector<std::string>>();
}

SplitManifest make_split(std::vector<std::string> ids, const TrainConfig& config) {
  if (ids.size() < 10)
    throw Error(ErrorCode::TooFewSamples, "need at least 10 ids to split, got " + std::to_string(ids.size()));
  std::sort(ids.begin(), ids.end());
  Rng rng(stream_key({config.seed, hash_string("split")}));
  for (std::size_t i = ids.size() - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)));
    std::swap(ids[i], ids[j]);
  }
  const double n = static_cast<double>(ids.size());
  const auto n_train = static_cast<std::size_t>(std::floor(config.split.train * n + 1e-9));
  const auto n_val = static_cast<std::size_t>(std::floor(config.split.val * n + 1e-9));
  SplitManifest m;
  m.seed = config.seed;
  m.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  m.val.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train),
               ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  m.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), ids.end());
  return m;
}

SplitManifest load_or_create_split(const std::filesystem::path& root, const std::vector<std::string>& ids,
                                   const TrainConfig& config) {
  const auto dir = root / layout::kSplits;
  const auto path = dir / ("split_seed" + std::to_string(config.seed) + ".json");
  const SplitManifest fresh = make_split(ids, config);
  std::error_code ec;
  if (std::filesystem::is_regular_file(path, ec)) {
    try {
      std::ifstream in(path);
      const SplitManifest stored = nlohmann::json::parse(in).get<SplitManifest>();
      std::vector<std::string> all = stored.train;
      all.insert(all.end(), stored.val.begin(), stored.val.end());
      all.insert(all.end(), stored.test.begin(), stored.test.end());
      std::sort(all.begin(), all.end());
      std::vector<std::string> sorted_ids = ids;
      std::sort(sorted_ids.begin(), sorted_ids.end());
      if (all == sorted_ids && stored.seed == config.seed && stored.train.size() == fresh.train.size() &&
          stored.val.size() == fresh.val.size())
        return stored;
    } catch (const nlohmann::json::exception&) {
      // unreadable manifest: regenerate below
    }
  }
  std::filesystem::create_directories(dir, ec);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out << nlohmann::json(fresh).dump(2) << '\n';
  return fresh;
}

std::vector<std::string> subsample_ids(const std::vector<std::string>& ids, double fraction, std::uint64_t seed) {
  if (ids.empty()) return {};
  const auto wanted = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(fraction * static_cast<double>(ids.size()))), 1, ids.size());
  std::vector<std::string> sorted = ids;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<std::uint64_t, std::string>> keyed;
  keyed.reserve(sorted.size());
  for (const auto& id : sorted) keyed.emplace_back(stream_key({seed, hash_string("labels"), hash_string(id)}), id);
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < wanted; ++i) out.push_back(keyed[i].second);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace wrinkleforge
