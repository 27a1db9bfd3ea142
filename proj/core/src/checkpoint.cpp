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

#include "wrinkleforge/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <nlohmann/json.hpp>

#include "init.hpp"
#include "wrinkleforge/error.hpp"
#include "wrinkleforge/rng.hpp"

namespace wrinkleforge {

namespace {

constexpr char kMagic[5] = {'W', 'R', 'N', 'K', '1'};

static_assert(sizeof(float) == 4);

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

void put_floats(std::vector<std::uint8_t>& out, const std::vector<float>& values) {
  for (float f : values) {
    const auto bits = std::bit_cast<std::uint32_t>(f);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
}

nlohmann::json describe(const std::vector<NamedArray>& arrays) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& a : arrays) list.push_back({{"name", a.name}, {"shape", a.shape}});
  return list;
}

std::size_t elements(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d < 0) throw Error(ErrorCode::CorruptCheckpoint, "negative dimension");
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

}  // namespace

const NamedArray* Checkpoint::find_parameter(const std::string& name) const noexcept {
  for (const auto& p : parameters)
    if (p.name == name) return &p;
  return nullptr;
}

std::size_t Checkpoint::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& p : parameters) n += p.values.size();
  return n;
}

void check_inventory(const Checkpoint& ckpt) {
  const auto inv = layer_inventory(ckpt.spec);
  if (inv.size() != ckpt.parameters.size())
    throw Error(ErrorCode::IncompatibleCheckpoint, "parameter count differs from the spec inventory");
  for (std::size_t i = 0; i < inv.size(); ++i) {
    const auto& p = ckpt.parameters[i];
    if (p.name != inv[i].name || p.shape != inv[i].shape || p.values.size() != inv[i].element_count())
      throw Error(ErrorCode::IncompatibleCheckpoint, "parameter '" + p.name + "' does not match '" +
                                                         inv[i].name + "' of the spec inventory");
  }
}

std::vector<std::uint8_t> serialize_checkpoint(const Checkpoint& ckpt) {
  nlohmann::json header = {{"format", "WRNK1"},
                           {"spec", ckpt.spec},
                           {"epoch", ckpt.epoch},
                           {"optimizer_step", ckpt.optimizer_step},
                           {"config_hash", ckpt.config_hash},
                           {"parameters", describe(ckpt.parameters)},
                           {"optimizer_state", describe(ckpt.optimizer_state)}};
  const std::string text = header.dump();
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_u64(out, text.size());
  out.insert(out.end(), text.begin(), text.end());
  for (const auto& a : ckpt.parameters) put_floats(out, a.values);
  for (const auto& a : ckpt.optimizer_state) put_floats(out, a.values);
  return out;
}

Checkpoint deserialize_checkpoint(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < sizeof(kMagic) + 8 || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw Error(ErrorCode::CorruptCheckpoint, "missing WRNK1 magic");
  const std::uint64_t header_len = get_u64(bytes.data() + sizeof(kMagic));
  std::size_t offset = sizeof(kMagic) + 8;
  if (header_len > bytes.size() - offset) throw Error(ErrorCode::CorruptCheckpoint, "truncated header");

  Checkpoint ckpt;
  std::vector<std::pair<std::vector<NamedArray>*, nlohmann::json>> sections;
  try {
    const auto header = nlohmann::json::parse(bytes.begin() + static_cast<std::ptrdiff_t>(offset),
                                              bytes.begin() + static_cast<std::ptrdiff_t>(offset + header_len));
    ckpt.spec = header.at("spec").get<UNetSpec>();
    ckpt.epoch = header.at("epoch").get<std::int64_t>();
    ckpt.optimizer_step = header.at("optimizer_step").get<std::uint64_t>();
    ckpt.config_hash = header.at("config_hash").get<std::string>();
    sections.emplace_back(&ckpt.parameters, header.at("parameters"));
    sections.emplace_back(&ckpt.optimizer_state, header.at("optimizer_state"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptCheckpoint, std::string("bad header: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptCheckpoint, e.what());
  }
  offset += header_len;

  for (auto& [target, list] : sections) {
    for (const auto& entry : list) {
      NamedArray arr;
      try {
        arr.name = entry.at("name").get<std::string>();
        arr.shape = entry.at("shape").get<std::vector<int>>();
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::CorruptCheckpoint, std::string("bad array entry: ") + e.what());
      }
      const std::size_t n = elements(arr.shape);
      if (n > (bytes.size() - offset) / 4) throw Error(ErrorCode::CorruptCheckpoint, "truncated array data");
      arr.values.resize(n);
      for (std::size_t i = 0; i < n; ++i, offset += 4) {
        std::uint32_t bits = 0;
        for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(bytes[offset + static_cast<std::size_t>(b)]) << (8 * b);
        arr.values[i] = std::bit_cast<float>(bits);
      }
      target->push_back(std::move(arr));
    }
  }
  if (offset != bytes.size()) throw Error(ErrorCode::CorruptCheckpoint, "trailing bytes after array data");
  try {
    check_inventory(ckpt);
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptCheckpoint, e.what());
  }
  return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  const auto bytes = serialize_checkpoint(ckpt);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path, const std::optional<std::string>& expected_hash,
                           bool force) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  Checkpoint ckpt = deserialize_checkpoint(bytes);
  if (expected_hash && *expected_hash != ckpt.config_hash && !force)
    throw Error(ErrorCode::HashMismatch, path.string() + " was written by config " + ckpt.config_hash +
                                             ", expected " + *expected_hash);
  return ckpt;
}

Checkpoint expand_input_channels(const Checkpoint& ckpt, int new_in) {
  check_inventory(ckpt);
  const int old_in = ckpt.spec.in_channels;
  if (new_in <= old_in)
    throw Error(ErrorCode::ShrinkNotSupported, "cannot go from " + std::to_string(old_in) + " to " +
                                                   std::to_string(new_in) + " input channels");
  Checkpoint out = ckpt;
  out.spec.in_channels = new_in;
  out.optimizer_state.clear();
  out.optimizer_step = 0;

  NamedArray& first = out.parameters.front();  // enc0.conv1.weight, {out, in, k, k}
  const int cout = first.shape[0];
  const std::size_t kk = static_cast<std::size_t>(first.shape[2]) * static_cast<std::size_t>(first.shape[3]);
  std::vector<float> grown(static_cast<std::size_t>(cout) * static_cast<std::size_t>(new_in) * kk, 0.0f);
  for (int o = 0; o < cout; ++o)
    for (int i = 0; i < old_in; ++i)
      std::copy_n(first.values.begin() + static_cast<std::ptrdiff_t>((static_cast<std::size_t>(o) * old_in + i) * kk), kk,
                  grown.begin() + static_cast<std::ptrdiff_t>((static_cast<std::size_t>(o) * new_in + i) * kk));
  first.values = std::move(grown);
  first.shape[1] = new_in;
  check_inventory(out);
  return out;
}

Checkpoint replace_head(const Checkpoint& ckpt, int new_out, std::uint64_t seed) {
  check_inventory(ckpt);
  if (new_out < 1) throw Error(ErrorCode::InvalidSpec, "head needs at least one output channel");
  Checkpoint out = ckpt;
  out.spec.out_channels = new_out;
  out.spec.head = new_out == 1 ? HeadKind::Regression : HeadKind::Segmentation;
  out.optimizer_state.clear();
  out.optimizer_step = 0;

  const auto inv = layer_inventory(out.spec);
  const std::size_t weight = inv.size() - 2;
  for (std::size_t i : {weight, weight + 1}) {
    const auto key = stream_key({seed, hash_string("replace_head"), static_cast<std::uint64_t>(new_out),
                                 hash_string(inv[i].name)});
    out.parameters[i] = NamedArray{inv[i].name, inv[i].shape, detail::he_normal(inv[i], key)};
  }
  check_inventory(out);
  return out;
}

}  // namespace wrinkleforge
