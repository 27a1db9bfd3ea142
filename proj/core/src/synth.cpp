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

#include "wrinkleforge/synth.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <thread>

#include "wrinkleforge/error.hpp"
#include "wrinkleforge/fusion.hpp"
#include "wrinkleforge/rng.hpp"
#include "wrinkleforge/texture.hpp"

namespace wrinkleforge {

void SynthSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidSpec, "synth spec: " + what); };
  if (count < 0) fail("count must be non-negative");
  if (size < 16) fail("size must be at least 16");
  if (min_wrinkles < 0 || max_wrinkles < min_wrinkles) fail("wrinkle count range is empty");
  if (min_width <= 0.0 || max_width < min_width) fail("wrinkle width range is empty");
  if (wrinkle_darkness < 0.0 || wrinkle_darkness > 1.0) fail("wrinkle_darkness must lie in [0, 1]");
  if (distractor_darkness < 0.0 || distractor_darkness > 1.0) fail("distractor_darkness must lie in [0, 1]");
  if (skin_noise < 0.0) fail("skin_noise must be non-negative");
  if (distractors < 0) fail("distractors must be non-negative");
  if (face.radius_x <= 0.0 || face.radius_y <= 0.0 || face.jitter < 0.0) fail("face ellipse is empty");
  const auto& a = annotators;
  if (a.dilate_p < 0.0 || a.dilate_p > 1.0 || a.drop_p < 0.0 || a.drop_p > 1.0) fail("probabilities outside [0, 1]");
  if (a.offset_px < 0) fail("offset_px must be non-negative");
  if (a.min_jaccard < 0.0 || a.max_jaccard > 1.0 || a.max_jaccard < a.min_jaccard) fail("jaccard band is empty");
  if (a.max_attempts < 1) fail("max_attempts must be positive");
}

void to_json(nlohmann::json& j, const SynthSpec& s) {
  j = {{"count", s.count},
       {"size", s.size},
       {"wrinkle_count_range", {s.min_wrinkles, s.max_wrinkles}},
       {"wrinkle_width_range", {s.min_width, s.max_width}},
       {"wrinkle_darkness", s.wrinkle_darkness},
       {"skin_noise", s.skin_noise},
       {"distractors", s.distractors},
       {"distractor_darkness", s.distractor_darkness},
       {"face_shape",
        {{"center_x", s.face.center_x},
         {"center_y", s.face.center_y},
         {"radius_x", s.face.radius_x},
         {"radius_y", s.face.radius_y},
         {"jitter", s.face.jitter}}},
       {"annotator_jitter",
        {{"dilate_p", s.annotators.dilate_p},
         {"drop_p", s.annotators.drop_p},
         {"offset_px", s.annotators.offset_px},
         {"jaccard_band", {s.annotators.min_jaccard, s.annotators.max_jaccard}},
         {"max_attempts", s.annotators.max_attempts}}},
       {"seed", s.seed}};
}

void from_json(const nlohmann::json& j, SynthSpec& s) {
  try {
    SynthSpec d;
    auto pair_or = [&](const char* key, auto& lo, auto& hi) {
      if (!j.contains(key)) return;
      const auto& v = j.at(key);
      if (!v.is_array() || v.size() != 2) throw Error(ErrorCode::InvalidSpec, std::string(key) + " must be a pair");
      v.at(0).get_to(lo);
      v.at(1).get_to(hi);
    };
    d.count = j.value("count", d.count);
    d.size = j.value("size", d.size);
    pair_or("wrinkle_count_range", d.min_wrinkles, d.max_wrinkles);
    pair_or("wrinkle_width_range", d.min_width, d.max_width);
    d.wrinkle_darkness = j.value("wrinkle_darkness", d.wrinkle_darkness);
    d.skin_noise = j.value("skin_noise", d.skin_noise);
    d.distractors = j.value("distractors", d.distractors);
    d.distractor_darkness = j.value("distractor_darkness", d.distractor_darkness);
    if (j.contains("face_shape")) {
      const auto& f = j.at("face_shape");
      d.face.center_x = f.value("center_x", d.face.center_x);
      d.face.center_y = f.value("center_y", d.face.center_y);
      d.face.radius_x = f.value("radius_x", d.face.radius_x);
      d.face.radius_y = f.value("radius_y", d.face.radius_y);
      d.face.jitter = f.value("jitter", d.face.jitter);
    }
    if (j.contains("annotator_jitter")) {
      const auto& a = j.at("annotator_jitter");
      d.annotators.dilate_p = a.value("dilate_p", d.annotators.dilate_p);
      d.annotators.drop_p = a.value("drop_p", d.annotators.drop_p);
      d.annotators.offset_px = a.value("offset_px", d.annotators.offset_px);
      d.annotators.max_attempts = a.value("max_attempts", d.annotators.max_attempts);
      if (a.contains("jaccard_band")) {
        a.at("jaccard_band").at(0).get_to(d.annotators.min_jaccard);
        a.at("jaccard_band").at(1).get_to(d.annotators.max_jaccard);
      }
    }
    d.seed = j.value("seed", d.seed);
    s = d;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, std::string("synth spec: ") + e.what());
  }
}

std::string synth_id(int index) {
  std::string s = std::to_string(index);
  if (s.size() < 5) s.insert(0, 5 - s.size(), '0');
  return s;
}

namespace {

struct Ellipse {
  double cx, cy, rx, ry;
  double value(double x, double y) const {
    const double dx = (x - cx) / rx;
    const double dy = (y - cy) / ry;
    return dx * dx + dy * dy;
  }
  bool contains(double x, double y, double shrink = 1.0) const { return value(x, y) <= shrink * shrink; }
};

using PixelList = std::vector<std::size_t>;

// Pixels within width / 2 of a quadratic Bezier curve, sampled densely.
PixelList stroke_pixels(const double p[3][2], double width, int size) {
  const double len = std::hypot(p[1][0] - p[0][0], p[1][1] - p[0][1]) + std::hypot(p[2][0] - p[1][0], p[2][1] - p[1][1]);
  const int steps = std::max(2, static_cast<int>(std::ceil(len * 4.0)));
  const double r = width / 2.0;
  const int reach = static_cast<int>(std::ceil(r)) + 1;
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(size) * size, 0);
  for (int s = 0; s <= steps; ++s) {
    const double t = static_cast<double>(s) / steps;
    const double a = (1 - t) * (1 - t);
    const double b = 2 * (1 - t) * t;
    const double c = t * t;
    const double x = a * p[0][0] + b * p[1][0] + c * p[2][0];
    const double y = a * p[0][1] + b * p[1][1] + c * p[2][1];
    const int x0 = static_cast<int>(std::lround(x));
    const int y0 = static_cast<int>(std::lround(y));
    for (int yy = y0 - reach; yy <= y0 + reach; ++yy) {
      for (int xx = x0 - reach; xx <= x0 + reach; ++xx) {
        if (xx < 0 || yy < 0 || xx >= size || yy >= size) continue;
        if (std::hypot(xx - x, yy - y) <= r) hit[static_cast<std::size_t>(yy) * size + xx] = 1;
      }
    }
  }
  PixelList out;
  for (std::size_t i = 0; i < hit.size(); ++i)
    if (hit[i]) out.push_back(i);
  return out;
}

struct Curve {
  double points[3][2];
  double width;
};

Curve random_curve(const Ellipse& face, int size, const SynthSpec& spec, Rng& rng) {
  Curve c{};
  double x0 = face.cx;
  double y0 = face.cy;
  for (int tries = 0; tries < 64; ++tries) {
    x0 = rng.uniform(face.cx - face.rx, face.cx + face.rx);
    y0 = rng.uniform(face.cy - face.ry, face.cy + face.ry);
    if (face.contains(x0, y0, 0.8)) break;
  }
  const double theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
  const double length = rng.uniform(0.15, 0.35) * size;
  const double x2 = x0 + length * std::cos(theta);
  const double y2 = y0 + length * std::sin(theta);
  const double bend = rng.uniform(-0.2, 0.2) * length;
  c.points[0][0] = x0;
  c.points[0][1] = y0;
  c.points[1][0] = (x0 + x2) / 2 - bend * std::sin(theta);
  c.points[1][1] = (y0 + y2) / 2 + bend * std::cos(theta);
  c.points[2][0] = x2;
  c.points[2][1] = y2;
  c.width = rng.uniform(spec.min_width, spec.max_width);
  return c;
}

BinaryMask dilate_cross(const BinaryMask& m) {
  BinaryMask out = m;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m(y, x)) continue;
      if (y > 0) out(y - 1, x) = 1;
      if (y + 1 < m.height()) out(y + 1, x) = 1;
      if (x > 0) out(y, x - 1) = 1;
      if (x + 1 < m.width()) out(y, x + 1) = 1;
    }
  }
  return out;
}

BinaryMask shifted(const BinaryMask& m, int dx, int dy) {
  BinaryMask out(m.height(), m.width());
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      const int sx = x - dx;
      const int sy = y - dy;
      if (sx >= 0 && sy >= 0 && sx < m.width() && sy < m.height()) out(y, x) = m(sy, sx);
    }
  }
  return out;
}

BinaryMask intersect(BinaryMask a, const BinaryMask& b) {
  auto va = a.values();
  auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) va[i] &= vb[i];
  return a;
}

BinaryMask annotate(const std::vector<PixelList>& curves, const BinaryMask& face, const AnnotatorJitter& jitter,
                    Rng& rng) {
  BinaryMask m(face.height(), face.width());
  for (const auto& curve : curves) {
    if (rng.bernoulli(jitter.drop_p)) continue;
    for (auto i : curve) m.values()[i] = 1;
  }
  if (rng.bernoulli(jitter.dilate_p)) m = dilate_cross(m);
  const int dx = static_cast<int>(rng.uniform_int(-jitter.offset_px, jitter.offset_px));
  const int dy = static_cast<int>(rng.uniform_int(-jitter.offset_px, jitter.offset_px));
  return intersect(shifted(m, dx, dy), face);
}

void darken_ellipse(Image& img, const Ellipse& e, const double factor[3]) {
  const int y_lo = std::max(0, static_cast<int>(std::floor(e.cy - e.ry)));
  const int y_hi = std::min(img.height() - 1, static_cast<int>(std::ceil(e.cy + e.ry)));
  const int x_lo = std::max(0, static_cast<int>(std::floor(e.cx - e.rx)));
  const int x_hi = std::min(img.width() - 1, static_cast<int>(std::ceil(e.cx + e.rx)));
  for (int y = y_lo; y <= y_hi; ++y)
    for (int x = x_lo; x <= x_hi; ++x)
      if (e.contains(x, y))
        for (int c = 0; c < 3; ++c) img(y, x, c) *= factor[c];
}

}  // namespace

SynthSample generate_sample(const SynthSpec& spec, int index) {
  spec.validate();
  Rng rng(stream_key({spec.seed, hash_string("synth"), static_cast<std::uint64_t>(index)}));
  const int n = spec.size;
  const double s = n;

  auto jitter = [&](double v) { return v + rng.uniform(-spec.face.jitter, spec.face.jitter); };
  const Ellipse face_shape{jitter(spec.face.center_x) * s, jitter(spec.face.center_y) * s,
                           jitter(spec.face.radius_x) * s, jitter(spec.face.radius_y) * s};

  SynthSample out;
  out.face = BinaryMask(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) out.face(y, x) = face_shape.contains(x, y) ? 1 : 0;

  // skin tone, background and smooth shading
  const double tone_r = rng.uniform(0.65, 0.9);
  const double tone[3] = {tone_r, tone_r * rng.uniform(0.72, 0.82), tone_r * rng.uniform(0.58, 0.72)};
  const double bg_level = rng.uniform(0.15, 0.85);
  double bg[3];
  for (double& c : bg) c = std::clamp(bg_level + rng.uniform(-0.1, 0.1), 0.0, 1.0);
  const double gx = rng.uniform(-0.1, 0.1);
  const double gy = rng.uniform(-0.1, 0.1);
  const double wave = rng.uniform(0.0, 0.08);
  const double fu = rng.uniform(0.3, 1.0);
  const double fv = rng.uniform(0.3, 1.0);
  const double phase = rng.uniform(0.0, 2 * std::numbers::pi);

  out.image = Image(n, n, 3);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const double shade =
          1.0 + gx * (x / s - 0.5) + gy * (y / s - 0.5) + wave * std::cos(2 * std::numbers::pi * (fu * x + fv * y) / s + phase);
      const double common = rng.normal() * spec.skin_noise;
      for (int c = 0; c < 3; ++c) {
        const double base = out.face(y, x) ? tone[c] * shade : bg[c] * (1.0 + 0.5 * gy * (y / s - 0.5));
        out.image(y, x, c) = base + common + 0.3 * spec.skin_noise * rng.normal();
      }
    }
  }

  // pores
  const int pores = n * n / 60;
  for (int p = 0; p < pores; ++p) {
    const int x = static_cast<int>(rng.uniform_int(0, n - 1));
    const int y = static_cast<int>(rng.uniform_int(0, n - 1));
    const double f = rng.uniform(0.85, 0.95);
    if (out.face(y, x))
      for (int c = 0; c < 3; ++c) out.image(y, x, c) *= f;
  }

  // eyes, brows and mouth
  const double fx = face_shape.cx;
  const double fy = face_shape.cy;
  const double rx = face_shape.rx;
  const double ry = face_shape.ry;
  std::vector<Ellipse> features;
  const double eye_dx = rx * rng.uniform(0.38, 0.48);
  const double eye_y = fy - ry * rng.uniform(0.15, 0.25);
  const double eye_dark[3] = {0.45, 0.45, 0.5};
  const double brow_dark[3] = {0.55, 0.55, 0.55};
  const double lip[3] = {0.85, 0.55, 0.6};
  for (double sign : {-1.0, 1.0}) {
    const Ellipse eye{fx + sign * eye_dx, eye_y, rx * 0.17, ry * 0.07};
    const Ellipse brow{fx + sign * eye_dx, eye_y - ry * 0.17, rx * 0.22, ry * 0.04};
    darken_ellipse(out.image, eye, eye_dark);
    darken_ellipse(out.image, brow, brow_dark);
    features.push_back({eye.cx, eye.cy, eye.rx + 2, eye.ry + 2});
    features.push_back({brow.cx, brow.cy, brow.rx + 2, brow.ry + 2});
  }
  const Ellipse mouth{fx, fy + ry * rng.uniform(0.45, 0.55), rx * 0.3, ry * 0.08};
  darken_ellipse(out.image, mouth, lip);
  features.push_back({mouth.cx, mouth.cy, mouth.rx + 2, mouth.ry + 2});

  auto allowed = [&](std::size_t i) {
    const int y = static_cast<int>(i / static_cast<std::size_t>(n));
    const int x = static_cast<int>(i % static_cast<std::size_t>(n));
    if (!face_shape.contains(x, y, 0.92)) return false;
    return std::none_of(features.begin(), features.end(), [&](const Ellipse& e) { return e.contains(x, y); });
  };

  // faint lines that are not annotated
  const int n_distractors = spec.distractors > 0 ? static_cast<int>(rng.uniform_int(0, spec.distractors)) : 0;
  for (int d = 0; d < n_distractors; ++d) {
    const Curve c = random_curve(face_shape, n, spec, rng);
    for (auto i : stroke_pixels(c.points, spec.min_width, n)) {
      if (!allowed(i)) continue;
      for (int ch = 0; ch < 3; ++ch) out.image.values()[i * 3 + ch] *= 1.0 - spec.distractor_darkness;
    }
  }

  // wrinkles
  out.wrinkles = static_cast<int>(rng.uniform_int(spec.min_wrinkles, spec.max_wrinkles));
  std::vector<PixelList> curves;
  out.truth = BinaryMask(n, n);
  for (int w = 0; w < out.wrinkles; ++w) {
    const Curve c = random_curve(face_shape, n, spec, rng);
    PixelList pixels;
    for (auto i : stroke_pixels(c.points, c.width, n))
      if (allowed(i)) pixels.push_back(i);
    const double dark = std::clamp(spec.wrinkle_darkness * rng.uniform(0.8, 1.2), 0.0, 1.0);
    for (auto i : pixels) {
      if (out.truth.values()[i]) continue;
      out.truth.values()[i] = 1;
      for (int ch = 0; ch < 3; ++ch) out.image.values()[i * 3 + ch] *= 1.0 - dark;
    }
    curves.push_back(std::move(pixels));
  }
  for (double& v : out.image.values()) v = std::clamp(v, 0.0, 1.0);

  // annotators
  const auto& aj = spec.annotators;
  const bool check = out.truth.count() > 0;
  double best_distance = 0.0;
  for (int attempt = 0; attempt < aj.max_attempts; ++attempt) {
    std::vector<BinaryMask> masks;
    for (int a = 0; a < 3; ++a) masks.push_back(annotate(curves, out.face, aj, rng));
    double lo = 1.0;
    double hi = 0.0;
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        const double j = jaccard(masks[a], masks[b]);
        lo = std::min(lo, j);
        hi = std::max(hi, j);
      }
    }
    const double distance = std::max({0.0, aj.min_jaccard - lo, hi - aj.max_jaccard});
    if (attempt == 0 || distance < best_distance) {
      best_distance = distance;
      out.annotations = std::move(masks);
      out.min_pair_jaccard = lo;
      out.max_pair_jaccard = hi;
    }
    if (!check || distance == 0.0) break;
  }
  return out;
}

nlohmann::json generate(const SynthSpec& spec, const std::filesystem::path& out_dir, unsigned jobs) {
  spec.validate();
  const char* annotators[3] = {"a", "b", "c"};
  std::error_code ec;
  for (const auto* dir : {"images", "face_masks", "truth"}) std::filesystem::create_directories(out_dir / dir, ec);
  for (const auto* a : annotators) std::filesystem::create_directories(out_dir / "annotations" / a, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create corpus directories under " + out_dir.string());

  std::vector<nlohmann::json> entries(static_cast<std::size_t>(spec.count));
  std::vector<std::optional<std::string>> errors(static_cast<std::size_t>(spec.count));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < spec.count; i = next++) {
      try {
        const SynthSample s = generate_sample(spec, i);
        const std::string file = synth_id(i) + ".png";
        save_png(s.image, out_dir / "images" / file);
        save_mask(s.face, out_dir / "face_masks" / file);
        save_mask(s.truth, out_dir / "truth" / file);
        for (int a = 0; a < 3; ++a) save_mask(s.annotations[static_cast<std::size_t>(a)], out_dir / "annotations" / annotators[a] / file);
        entries[static_cast<std::size_t>(i)] = {{"id", synth_id(i)},
                                                {"wrinkles", s.wrinkles},
                                                {"truth_pixels", s.truth.count()},
                                                {"face_pixels", s.face.count()},
                                                {"annotator_jaccard", {s.min_pair_jaccard, s.max_pair_jaccard}}};
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(i)] = e.what();
      }
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::clamp<unsigned>(jobs, 1u, static_cast<unsigned>(std::max(1, spec.count)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors)
    if (e) throw Error(ErrorCode::IoFailure, *e);

  nlohmann::json manifest = {{"spec", nlohmann::json(spec)}, {"samples", entries}};
  if (entries.empty()) manifest["samples"] = nlohmann::json::array();
  std::ofstream out(out_dir / "manifest.json", std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write manifest in " + out_dir.string());
  out << manifest.dump(2) << '\n';
  return manifest;
}

nlohmann::json to_json(const CorpusReport& r) {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& x : r.violations)
    v.push_back({{"id", x.id}, {"file", x.file}, {"kind", x.kind}, {"detail", x.detail}});
  return {{"images", r.images}, {"violations", v}};
}

namespace {

std::optional<BinaryMask> check_mask(const std::filesystem::path& root, const std::filesystem::path& rel,
                                     const std::string& id, const Image& img, CorpusReport& report) {
  const auto path = root / rel;
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    report.violations.push_back({id, rel.generic_string(), "missing", "file not found"});
    return std::nullopt;
  }
  try {
    BinaryMask m = load_mask(path);
    if (m.height() != img.height() || m.width() != img.width()) {
      report.violations.push_back({id, rel.generic_string(), "dimension_mismatch",
                                   std::to_string(m.width()) + "x" + std::to_string(m.height()) + " vs image " +
                                       std::to_string(img.width()) + "x" + std::to_string(img.height())});
      return std::nullopt;
    }
    return m;
  } catch (const Error& e) {
    report.violations.push_back(
        {id, rel.generic_string(), e.code() == ErrorCode::NotBinary ? "not_binary" : "unreadable", e.what()});
    return std::nullopt;
  }
}

}  // namespace

CorpusReport validate_corpus(const std::filesystem::path& root) {
  CorpusReport report;
  std::error_code ec;
  if (!std::filesystem::is_directory(root / "images", ec)) {
    report.violations.push_back({"", "images", "missing", "images directory not found"});
    return report;
  }
  const auto ids = list_png_ids(root / "images");
  report.images = ids.size();

  std::vector<std::string> annotators;
  if (std::filesystem::is_directory(root / "annotations", ec)) annotators = list_annotators(root / "annotations");
  const bool has_weak = std::filesystem::is_directory(root / "weak_labels", ec);

  for (const auto& id : ids) {
    const std::string file = id + ".png";
    Image img;
    try {
      img = load_png(root / "images" / file);
    } catch (const Error& e) {
      report.violations.push_back({id, "images/" + file, "unreadable", e.what()});
      continue;
    }
    const auto face = check_mask(root, std::filesystem::path("face_masks") / file, id, img, report);
    const auto truth = check_mask(root, std::filesystem::path("truth") / file, id, img, report);
    if (face && truth) {
      std::size_t outside = 0;
      for (std::size_t i = 0; i < truth->pixel_count(); ++i) outside += truth->values()[i] && !face->values()[i];
      if (outside)
        report.violations.push_back(
            {id, "truth/" + file, "truth_outside_face", std::to_string(outside) + " wrinkle pixels outside the face"});
    }
    for (const auto& a : annotators) check_mask(root, std::filesystem::path("annotations") / a / file, id, img, report);
    if (has_weak) {
      const auto rel = std::filesystem::path("weak_labels") / file;
      if (!std::filesystem::is_regular_file(root / rel, ec)) {
        report.violations.push_back({id, rel.generic_string(), "missing", "file not found"});
      } else {
        try {
          const Image w = load_png(root / rel);
          if (w.height() != img.height() || w.width() != img.width())
            report.violations.push_back({id, rel.generic_string(), "dimension_mismatch", "weak label size differs"});
        } catch (const Error& e) {
          report.violations.push_back({id, rel.generic_string(), "unreadable", e.what()});
        }
      }
    }
  }
  for (const auto* dir : {"face_masks", "truth"}) {
    if (!std::filesystem::is_directory(root / dir, ec)) continue;
    for (const auto& id : list_png_ids(root / dir))
      if (!std::binary_search(ids.begin(), ids.end(), id))
        report.violations.push_back({id, "images/" + id + ".png", "missing", std::string("orphan file in ") + dir});
  }
  return report;
}

}  // namespace wrinkleforge
