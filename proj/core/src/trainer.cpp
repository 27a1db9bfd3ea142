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

#include "wrinkleforge/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

#include "wrinkleforge/augment.hpp"
#include "wrinkleforge/error.hpp"
#include "wrinkleforge/losses.hpp"
#include "wrinkleforge/optim.hpp"
#include "wrinkleforge/rng.hpp"

namespace wrinkleforge {

nlohmann::json to_json(const JournalEntry& e) {
  nlohmann::json j = {{"epoch", e.epoch}, {"lr", e.lr}, {"train_loss", e.train_loss}, {"val_metric", e.val_metric}};
  j["wall_ms"] = e.wall_ms ? nlohmann::json(*e.wall_ms) : nlohmann::json(nullptr);
  return j;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Prepared {
  std::vector<TrainingSample> samples;
  std::vector<std::string> ids;
};

Prepared prepare(const TrainConfig& config, const std::vector<std::string>& ids) {
  LoadOptions opts;
  const bool segmentation = config.stage == Stage::Finetune;
  opts.texture = !segmentation || config.input == InputMode::RgbTexture;
  opts.truth = segmentation;
  opts.truth_dir = config.truth_dir;
  opts.image_size = config.image_size;
  Prepared out;
  out.ids = ids;
  for (auto& s : load_samples(config.dataset_root, ids, opts)) {
    TrainingSample t;
    t.input = s.network_input(config.input_channels());
    if (segmentation)
      t.target = std::move(s.truth);
    else
      t.target = std::move(s.texture);
    out.samples.push_back(std::move(t));
  }
  return out;
}

Tensor4 stack_inputs(const std::vector<const TrainingSample*>& batch) {
  std::vector<Image> inputs;
  inputs.reserve(batch.size());
  for (const auto* s : batch) inputs.push_back(s->input);
  return stack_images<float>(inputs);
}

std::vector<float> regression_targets(const std::vector<const TrainingSample*>& batch) {
  std::vector<float> out;
  for (const auto* s : batch) {
    const auto& img = std::get<Image>(s->target);
    for (double v : img.values()) out.push_back(static_cast<float>(v));
  }
  return out;
}

// Rows are pixels in (n, y, x) order, columns the two classes.
std::vector<float> onehot_targets(const std::vector<const TrainingSample*>& batch) {
  std::vector<float> out;
  for (const auto* s : batch) {
    for (auto v : std::get<BinaryMask>(s->target).values()) {
      out.push_back(v ? 0.0f : 1.0f);
      out.push_back(v ? 1.0f : 0.0f);
    }
  }
  return out;
}

std::vector<float> logits_to_rows(const Tensor4& t) {
  std::vector<float> rows(t.size());
  const std::size_t plane = t.plane();
  const auto c = static_cast<std::size_t>(t.c());
  for (int n = 0; n < t.n(); ++n) {
    const float* src = t.sample(n);
    float* dst = rows.data() + static_cast<std::size_t>(n) * t.sample_size();
    for (std::size_t p = 0; p < plane; ++p)
      for (std::size_t k = 0; k < c; ++k) dst[p * c + k] = src[k * plane + p];
  }
  return rows;
}

Tensor4 rows_to_tensor(const std::vector<float>& rows, int n, int c, int h, int w) {
  Tensor4 t(n, c, h, w);
  const std::size_t plane = t.plane();
  const auto cc = static_cast<std::size_t>(c);
  for (int i = 0; i < n; ++i) {
    const float* src = rows.data() + static_cast<std::size_t>(i) * t.sample_size();
    float* dst = t.sample(i);
    for (std::size_t p = 0; p < plane; ++p)
      for (std::size_t k = 0; k < cc; ++k) dst[k * plane + p] = src[p * cc + k];
  }
  return t;
}

std::vector<BinaryMask> masks_from_logits(const Tensor4& logits) {
  const auto probs = softmax_rows<float>(logits_to_rows(logits), 2);
  std::vector<BinaryMask> out;
  const std::size_t plane = logits.plane();
  for (int n = 0; n < logits.n(); ++n) {
    std::vector<std::uint8_t> data(plane);
    const float* p = probs.data() + static_cast<std::size_t>(n) * plane * 2;
    for (std::size_t i = 0; i < plane; ++i) data[i] = p[2 * i + 1] > p[2 * i] ? 1 : 0;
    out.emplace_back(logits.h(), logits.w(), std::move(data));
  }
  return out;
}

std::vector<std::vector<const TrainingSample*>> batches_of(const std::vector<TrainingSample>& samples, int batch_size) {
  std::vector<std::vector<const TrainingSample*>> out;
  for (std::size_t i = 0; i < samples.size(); i += static_cast<std::size_t>(batch_size)) {
    std::vector<const TrainingSample*> b;
    for (std::size_t j = i; j < std::min(samples.size(), i + static_cast<std::size_t>(batch_size)); ++j)
      b.push_back(&samples[j]);
    out.push_back(std::move(b));
  }
  return out;
}

double validation_mse(Model& model, const Prepared& val, int batch_size) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& batch : batches_of(val.samples, batch_size)) {
    const auto out = model.forward(stack_inputs(batch));
    const auto target = regression_targets(batch);
    const auto pred = out.values();
    for (std::size_t i = 0; i < target.size(); ++i) {
      const double d = static_cast<double>(pred[i]) - target[i];
      sum += d * d;
    }
    count += target.size();
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

double validation_jsi(Model& model, const Prepared& val, int batch_size) {
  ConfusionCounts total;
  for (const auto& batch : batches_of(val.samples, batch_size)) {
    const auto masks = masks_from_logits(model.forward(stack_inputs(batch)));
    for (std::size_t i = 0; i < masks.size(); ++i) total += confusion(masks[i], std::get<BinaryMask>(batch[i]->target));
  }
  return metrics_from_counts(total).jsi;
}

std::vector<NamedArray> optimizer_arrays(const AdamWState& state, const Model& model) {
  std::vector<NamedArray> out;
  if (state.m.empty()) return out;
  const auto& params = model.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto n = static_cast<int>(state.m[i].size());
    out.push_back({"adamw.m/" + params[i].name, {n}, state.m[i]});
    out.push_back({"adamw.v/" + params[i].name, {n}, state.v[i]});
  }
  return out;
}

void write_outputs(const TrainConfig& config, const TrainResult& result, const std::vector<double>& epoch_ms) {
  if (config.out_dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + config.out_dir.string());
  {
    std::ofstream out(config.out_dir / "journal.jsonl", std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write journal in " + config.out_dir.string());
    for (const auto& e : result.journal) out << to_json(e).dump() << '\n';
  }
  {
    std::ofstream out(config.out_dir / "timing.jsonl", std::ios::trunc);
    for (std::size_t i = 0; i < epoch_ms.size(); ++i)
      out << nlohmann::json{{"epoch", i + 1}, {"wall_ms", epoch_ms[i]}}.dump() << '\n';
  }
  {
    std::ofstream out(config.out_dir / "config.json", std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write config in " + config.out_dir.string());
    out << nlohmann::json(config).dump(2) << '\n';
  }
  save_checkpoint(result.checkpoint, config.out_dir / "checkpoint.wrnk");
}

// The head bias starts at the logit of the mean training target (regression)
// or of the wrinkle pixel fraction (segmentation).
void set_output_prior(Model& model, const Prepared& train_set) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& s : train_set.samples) {
    if (const auto* img = std::get_if<Image>(&s.target)) {
      for (double v : img->values()) sum += v;
      count += img->values().size();
    } else {
      const auto& mask = std::get<BinaryMask>(s.target);
      sum += static_cast<double>(mask.count());
      count += mask.pixel_count();
    }
  }
  if (count == 0) return;
  const double mean = std::clamp(sum / static_cast<double>(count), 1e-4, 1.0 - 1e-4);
  const auto logit = static_cast<float>(std::log(mean / (1.0 - mean)));
  auto bias = model.parameter("head.bias").tensor.values();
  if (bias.size() == 1) {
    bias[0] = logit;
  } else if (bias.size() == 2) {
    bias[0] = 0.0f;
    bias[1] = logit;
  }
}

// Shrinks a segmentation head whose initial logits on the first training
// batch have an RMS above 1.
void calibrate_head(Model& model, const Prepared& train_set, int batch_size) {
  if (model.spec().head != HeadKind::Segmentation || train_set.samples.empty()) return;
  auto bias = model.parameter("head.bias").tensor.values();
  std::fill(bias.begin(), bias.end(), 0.0f);
  const auto batch = batches_of(train_set.samples, batch_size).front();
  const Tensor4 out = model.forward(stack_inputs(batch));
  double sum = 0.0;
  for (float v : out.values()) sum += static_cast<double>(v) * v;
  const double rms = std::sqrt(sum / static_cast<double>(out.size()));
  if (rms <= 1.0) return;
  for (auto& w : model.parameter("head.weight").tensor.values()) w = static_cast<float>(w / rms);
}

TrainResult train(const TrainConfig& config, Model model) {
  config.validate();
  const bool segmentation = config.stage == Stage::Finetune;
  const auto all_ids = dataset_ids(config.dataset_root);

  TrainResult result;
  result.split = load_or_create_split(config.dataset_root, all_ids, config);
  result.train_ids =
      segmentation ? subsample_ids(result.split.train, config.label_fraction, config.seed) : result.split.train;
  if (result.train_ids.empty() || result.split.val.empty())
    throw Error(ErrorCode::DatasetMissing, "split leaves no training or validation images");

  const Prepared train_set = prepare(config, result.train_ids);
  const Prepared val_set = prepare(config, result.split.val);
  if (segmentation) model.balance_activations(stack_inputs(batches_of(train_set.samples, config.batch_size).front()));
  calibrate_head(model, train_set, config.batch_size);
  set_output_prior(model, train_set);
  const std::string hash = config_hash(config);

  auto evaluate_val = [&] {
    return segmentation ? validation_jsi(model, val_set, config.batch_size)
                        : validation_mse(model, val_set, config.batch_size);
  };
  auto better = [&](double candidate, double best) { return segmentation ? candidate > best : candidate < best; };

  AdamWState state;
  state.config = config.optimizer;

  auto snapshot = [&](int epoch) {
    Checkpoint c = model.to_checkpoint();
    c.epoch = epoch;
    c.optimizer_step = state.step;
    c.optimizer_state = optimizer_arrays(state, model);
    c.config_hash = hash;
    return c;
  };

  result.initial_val_metric = evaluate_val();
  result.best_val_metric = result.initial_val_metric;
  result.best_epoch = 0;
  result.checkpoint = snapshot(0);

  std::vector<double> epoch_ms;
  const auto n_train = train_set.samples.size();
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto started = Clock::now();
    const double lr = sgdr_lr(config.schedule, epoch - 1);

    std::vector<std::size_t> order(n_train);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng(stream_key({config.seed, hash_string("shuffle"), static_cast<std::uint64_t>(epoch)}));
    for (std::size_t i = n_train - 1; i > 0; --i)
      std::swap(order[i], order[static_cast<std::size_t>(shuffle_rng.uniform_int(0, static_cast<std::int64_t>(i)))]);

    std::vector<TrainingSample> augmented;
    augmented.reserve(n_train);
    for (std::size_t i = 0; i < n_train; ++i) {
      Rng rng(stream_key(
          {config.seed, hash_string("augment"), static_cast<std::uint64_t>(epoch), static_cast<std::uint64_t>(i)}));
      augmented.push_back(augment(train_set.samples[order[i]], config.augment, rng));
    }

    double loss_sum = 0.0;
    for (const auto& batch : batches_of(augmented, config.batch_size)) {
      model.zero_grad();
      const Tensor4 x = stack_inputs(batch);
      const Tensor4 out = model.forward(x);
      Tensor4 grad;
      if (segmentation) {
        const auto target = onehot_targets(batch);
        const auto probs = softmax_rows<float>(logits_to_rows(out), 2);
        const auto loss = soft_dice<float>(probs, target, 2);
        const auto dz = softmax_rows_backward<float>(probs, loss.grad, 2);
        grad = rows_to_tensor(dz, out.n(), out.c(), out.h(), out.w());
        loss_sum += loss.value * static_cast<double>(batch.size());
      } else {
        const auto target = regression_targets(batch);
        const auto loss = mse<float>(out.values(), target);
        grad = Tensor4(out.n(), out.c(), out.h(), out.w());
        std::copy(loss.grad.begin(), loss.grad.end(), grad.values().begin());
        loss_sum += loss.value * static_cast<double>(batch.size());
      }
      model.backward(grad);

      std::vector<std::span<float>> params;
      std::vector<std::span<const float>> grads;
      for (auto& p : model.parameters()) {
        params.push_back(p.tensor.values());
        grads.push_back(p.tensor.grad());
      }
      adamw_step(params, grads, state, lr);
    }

    const double val = evaluate_val();
    JournalEntry entry;
    entry.epoch = epoch;
    entry.lr = lr;
    entry.train_loss = loss_sum / static_cast<double>(n_train);
    entry.val_metric = val;
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - started).count();
    epoch_ms.push_back(ms);
    if (config.record_wall_time) entry.wall_ms = ms;
    result.journal.push_back(entry);

    if (better(val, result.best_val_metric)) {
      result.best_val_metric = val;
      result.best_epoch = epoch;
      result.checkpoint = snapshot(epoch);
    }
  }

  write_outputs(config, result, epoch_ms);
  return result;
}

TrainConfig with_stage(TrainConfig config, Stage stage) {
  config.stage = stage;
  return config;
}

}  // namespace

TrainResult pretrain(const TrainConfig& config) {
  const TrainConfig c = with_stage(config, Stage::Pretrain);
  c.validate();
  return train(c, Model(c.model_spec()));
}

Checkpoint adapt_for_finetune(const Checkpoint& init, const TrainConfig& config) {
  const UNetSpec target = config.model_spec();
  check_inventory(init);
  if (init.spec.base_width != target.base_width || init.spec.depth != target.depth)
    throw Error(ErrorCode::IncompatibleCheckpoint, "initial checkpoint width/depth differ from the configuration");
  if (init.spec.in_channels > target.in_channels)
    throw Error(ErrorCode::IncompatibleCheckpoint, "initial checkpoint has more input channels than the configuration");
  Checkpoint c = init;
  if (c.spec.in_channels < target.in_channels) c = expand_input_channels(c, target.in_channels);
  c = replace_head(c, target.out_channels, config.seed);
  c.spec.seed = config.seed;
  c.optimizer_state.clear();
  c.optimizer_step = 0;
  c.epoch = 0;
  c.config_hash.clear();
  return c;
}

TrainResult finetune(const TrainConfig& config, const std::optional<Checkpoint>& init) {
  const TrainConfig c = with_stage(config, Stage::Finetune);
  c.validate();
  if (init) return train(c, Model(adapt_for_finetune(*init, c)));
  return train(c, Model(c.model_spec()));
}

std::vector<BinaryMask> predict_inputs(Model& model, const std::vector<Image>& inputs) {
  if (model.spec().out_channels != 2)
    throw Error(ErrorCode::ShapeMismatch, "prediction needs a two-class segmentation model");
  std::vector<BinaryMask> out;
  for (const auto& img : inputs) {
    const std::vector<Image> one{img};
    auto masks = masks_from_logits(model.forward(stack_images<float>(one)));
    out.push_back(std::move(masks.front()));
  }
  return out;
}

BinaryMask predict(const Checkpoint& ckpt, const Image& img, const BinaryMask& face, const TextureMap& texture) {
  Model model(ckpt);
  Image input = apply_mask(img, face);
  if (ckpt.spec.in_channels == 4) {
    if (texture.height() != img.height() || texture.width() != img.width())
      throw Error(ErrorCode::ShapeMismatch, "texture map size differs from the image");
    input = concat_channels(input, texture.normalized());
  }
  return predict_inputs(model, {input}).front();
}

EvalResult evaluate_checkpoint(const Checkpoint& ckpt, const TrainConfig& config, const std::vector<std::string>& ids) {
  TrainConfig c = with_stage(config, Stage::Finetune);
  c.input = ckpt.spec.in_channels == 4 ? InputMode::RgbTexture : InputMode::Rgb;
  const Prepared set = prepare(c, ids);
  Model model(ckpt);
  std::vector<Image> inputs;
  for (const auto& s : set.samples) inputs.push_back(s.input);
  const auto preds = predict_inputs(model, inputs);
  std::vector<std::pair<BinaryMask, BinaryMask>> pairs;
  for (std::size_t i = 0; i < preds.size(); ++i) pairs.emplace_back(preds[i], std::get<BinaryMask>(set.samples[i].target));
  return evaluate_dataset(pairs);
}

}  // namespace wrinkleforge
