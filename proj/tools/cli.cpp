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

#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wrinkleforge/checkpoint.hpp"
#include "wrinkleforge/config.hpp"
#include "wrinkleforge/error.hpp"
#include "wrinkleforge/experiment.hpp"
#include "wrinkleforge/fusion.hpp"
#include "wrinkleforge/metrics.hpp"
#include "wrinkleforge/synth.hpp"
#include "wrinkleforge/texture.hpp"
#include "wrinkleforge/trainer.hpp"

namespace wrinkleforge::cli {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"synth",    "gen-weak-labels", "fuse",       "agreement", "pretrain",
                                                 "finetune", "experiment",      "evaluate",   "validate"};
  return names;
}

namespace {

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidKernelSpec:
    case ErrorCode::InvalidThreshold:
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidSpec:
      return kUsage;
    case ErrorCode::IoFailure:
    case ErrorCode::NoForwardPass:
    case ErrorCode::NonFiniteInput:
      return kRuntimeFailure;
    default:
      return kDataError;
  }
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void refuse_existing_file(const fs::path& path, bool force) {
  std::error_code ec;
  if (!force && fs::exists(path, ec))
    throw Error(ErrorCode::OutputExists, path.string() + " exists; pass --force to overwrite");
}

void refuse_nonempty_dir(const fs::path& dir, bool force) {
  std::error_code ec;
  if (!force && fs::is_directory(dir, ec) && !fs::is_empty(dir, ec))
    throw Error(ErrorCode::OutputExists, dir.string() + " is not empty; pass --force to overwrite");
}

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("WRINKLEFORGE_SEED");
  if (v == nullptr || *v == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const auto seed = std::stoull(v, &used);
    if (used != std::string(v).size()) throw std::invalid_argument(v);
    return seed;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidConfig, std::string("WRINKLEFORGE_SEED is not an integer: ") + v);
  }
}

// --seed beats WRINKLEFORGE_SEED, which beats the config file.
std::optional<std::uint64_t> resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return flag;
  return env_seed();
}

unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

void summarize(const json& j, std::ostream& out, const std::string& prefix = "") {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix + it.key();
    if (it->is_object()) {
      if (prefix.empty()) summarize(*it, out, key + ".");
    } else if (it->is_array()) {
      out << key << ": " << it->size() << " entries\n";
    } else {
      out << key << ": " << it->dump() << '\n';
    }
  }
}

struct Options {
  // shared
  bool force = false;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 0;
  std::string report;
  std::string out;
  std::string config;
  std::string dataset;
  // synth
  std::string spec;
  std::optional<int> count;
  std::optional<int> size;
  // gen-weak-labels
  std::string images;
  std::string masks;
  double sigma = 5.0;
  int ksize = 21;
  // fuse / agreement
  std::string annotations;
  int threshold = 2;
  // finetune
  std::string init;
  // evaluate
  std::string pred;
  std::string truth;
  // validate
  std::string corpus;
};

CommandResult finish(const json& result, const std::optional<fs::path>& report, std::ostream& out) {
  summarize(result, out);
  CommandResult r;
  r.report_path = report;
  if (report) out << "report: " << report->string() << '\n';
  return r;
}

CommandResult run_synth(const Options& o, std::ostream& out) {
  SynthSpec spec;
  if (!o.spec.empty()) spec = read_json(o.spec).get<SynthSpec>();
  if (const auto seed = resolve_seed(o.seed)) spec.seed = *seed;
  if (o.count) spec.count = *o.count;
  if (o.size) spec.size = *o.size;
  refuse_nonempty_dir(o.out, o.force);
  const json manifest = generate(spec, o.out, o.jobs ? o.jobs : default_jobs());
  json result = {{"images", manifest.at("samples").size()}, {"seed", spec.seed}, {"size", spec.size}, {"out", o.out}};
  return finish(result, fs::path(o.out) / "manifest.json", out);
}

CommandResult run_gen_weak_labels(const Options& o, std::ostream& out) {
  const GaussianKernel kernel = make_gaussian(o.ksize, o.sigma);
  refuse_nonempty_dir(o.out, o.force);
  std::error_code ec;
  if (!fs::is_directory(o.images, ec)) throw Error(ErrorCode::DatasetMissing, o.images + " not found");
  const BatchReport report = batch_weak_labels(o.images, o.masks, o.out, kernel, o.jobs ? o.jobs : default_jobs());
  json failed = json::array();
  for (const auto& f : report.failed) failed.push_back({{"id", f.id}, {"reason", f.reason}});
  json result = {{"processed", report.processed}, {"failed", failed}, {"sigma", o.sigma}, {"ksize", o.ksize},
                 {"border", "reflect101"}, {"grayscale", "bt601"}};
  std::optional<fs::path> path;
  if (!o.report.empty()) {
    path = o.report;
    write_json(*path, result);
  }
  CommandResult r = finish(result, path, out);
  if (!report.failed.empty()) r.exit_code = kDataError;
  return r;
}

CommandResult run_fuse(const Options& o, std::ostream& out) {
  refuse_nonempty_dir(o.out, o.force);
  const auto ids = list_annotated_images(o.annotations);
  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + o.out);
  std::size_t pixels = 0;
  for (const auto& id : ids) {
    const BinaryMask fused = majority_vote(load_annotation_set(o.annotations, id), o.threshold);
    pixels += fused.count();
    save_mask(fused, fs::path(o.out) / (id + ".png"));
  }
  json result = {{"images", ids.size()},
                 {"threshold", o.threshold},
                 {"annotators", list_annotators(o.annotations).size()},
                 {"wrinkle_pixels", pixels}};
  return finish(result, std::nullopt, out);
}

CommandResult run_agreement(const Options& o, std::ostream& out) {
  refuse_existing_file(o.report, o.force);
  const auto ids = list_annotated_images(o.annotations);
  if (ids.empty()) throw Error(ErrorCode::EmptyDataset, "no image is labelled by every annotator");
  std::vector<AnnotationSet> sets;
  json per_image = json::array();
  for (const auto& id : ids) {
    sets.push_back(load_annotation_set(o.annotations, id));
    json entry = {{"id", id}};
    try {
      entry["report"] = to_json(agreement(sets.back()));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateInput) throw;
      entry["report"] = nullptr;
      entry["reason"] = e.what();
    }
    per_image.push_back(std::move(entry));
  }
  const AgreementReport pooled = agreement(pool_annotation_sets(sets));
  json report = to_json(pooled);
  report["images"] = ids.size();
  report["per_image"] = per_image;
  write_json(o.report, report);
  json summary = {{"images", ids.size()},
                  {"mean_jaccard", pooled.mean_jaccard},
                  {"mean_pearson", pooled.mean_pearson}};
  return finish(summary, fs::path(o.report), out);
}

TrainConfig load_train_config(const Options& o, Stage stage) {
  TrainConfig c = stage == Stage::Pretrain ? pretrain_preset() : finetune_preset();
  if (!o.config.empty()) {
    try {
      c = read_json(o.config).get<TrainConfig>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::InvalidConfig, o.config + ": " + e.what());
    }
  }
  c.stage = stage;
  if (const auto seed = resolve_seed(o.seed)) c.seed = *seed;
  if (!o.dataset.empty()) c.dataset_root = o.dataset;
  if (!o.out.empty()) c.out_dir = o.out;
  if (c.out_dir.empty()) throw Error(ErrorCode::InvalidConfig, "no output directory: set out_dir or pass --out");
  c.validate();
  return c;
}

json train_summary(const TrainResult& r, const TrainConfig& c) {
  return {{"epochs", r.journal.size()},
          {"best_epoch", r.best_epoch},
          {"initial_val_metric", r.initial_val_metric},
          {"best_val_metric", r.best_val_metric},
          {"train_images", r.train_ids.size()},
          {"config_hash", config_hash(c)},
          {"checkpoint", (c.out_dir / "checkpoint.wrnk").string()}};
}

CommandResult run_pretrain(const Options& o, std::ostream& out) {
  const TrainConfig c = load_train_config(o, Stage::Pretrain);
  refuse_existing_file(c.out_dir / "checkpoint.wrnk", o.force);
  const TrainResult r = pretrain(c);
  const json summary = train_summary(r, c);
  write_json(c.out_dir / "summary.json", summary);
  return finish(summary, c.out_dir / "summary.json", out);
}

CommandResult run_finetune(const Options& o, std::ostream& out) {
  const TrainConfig c = load_train_config(o, Stage::Finetune);
  refuse_existing_file(c.out_dir / "checkpoint.wrnk", o.force);
  std::optional<Checkpoint> init;
  if (!o.init.empty()) {
    std::optional<std::string> expected;
    if (!c.init_checkpoint_hash.empty()) expected = c.init_checkpoint_hash;
    init = load_checkpoint(o.init, expected, o.force);
  }
  const TrainResult r = finetune(c, init);
  json summary = train_summary(r, c);
  summary["initialized_from"] = o.init.empty() ? json(nullptr) : json(o.init);
  write_json(c.out_dir / "summary.json", summary);
  return finish(summary, c.out_dir / "summary.json", out);
}

CommandResult run_experiment_cmd(const Options& o, std::ostream& out) {
  ExperimentConfig c = experiment_from_json(read_json(o.config));
  if (const auto seed = resolve_seed(o.seed)) c.set_seed(*seed);
  if (!o.dataset.empty()) c.set_dataset_root(o.dataset);
  refuse_existing_file(fs::path(o.out) / "report.json", o.force);
  const ExperimentReport report = run_experiment(c, o.out);
  json summary = {{"seed", report.seed}, {"labeled_images", report.labeled_images}, {"test_images", report.test_images}};
  for (const auto& row : report.rows) summary["jsi"][row.pretraining + "/" + row.input] = row.test.jsi;
  return finish(summary, fs::path(o.out) / "report.json", out);
}

CommandResult run_evaluate(const Options& o, std::ostream& out) {
  refuse_existing_file(o.report, o.force);
  std::error_code ec;
  if (!fs::is_directory(o.pred, ec)) throw Error(ErrorCode::DatasetMissing, o.pred + " not found");
  const auto ids = list_png_ids(o.pred);
  std::vector<std::pair<BinaryMask, BinaryMask>> pairs;
  json per_image = json::array();
  for (const auto& id : ids) {
    const fs::path truth = fs::path(o.truth) / (id + ".png");
    if (!fs::is_regular_file(truth, ec)) throw Error(ErrorCode::DatasetMissing, "no ground truth for " + id);
    pairs.emplace_back(load_mask(fs::path(o.pred) / (id + ".png")), load_mask(truth));
    json entry = to_json(evaluate(pairs.back().first, pairs.back().second));
    entry["id"] = id;
    per_image.push_back(std::move(entry));
  }
  const EvalResult total = evaluate_dataset(pairs);
  json report = {{"aggregate", to_json(total)}, {"averaging", "micro"}, {"per_image", per_image}};
  write_json(o.report, report);
  json summary = {{"images", ids.size()}, {"jsi", total.jsi}, {"f1", total.f1}, {"accuracy", total.accuracy}};
  return finish(summary, fs::path(o.report), out);
}

CommandResult run_validate(const Options& o, std::ostream& out) {
  const CorpusReport report = validate_corpus(o.corpus);
  const json j = to_json(report);
  std::optional<fs::path> path;
  if (!o.report.empty()) {
    refuse_existing_file(o.report, o.force);
    path = o.report;
    write_json(*path, j);
  }
  for (const auto& v : report.violations) out << v.kind << ' ' << v.file << ": " << v.detail << '\n';
  CommandResult r = finish({{"images", report.images}, {"violations", report.violations.size()}}, path, out);
  if (!report.violations.empty()) r.exit_code = kDataError;
  return r;
}

}  // namespace

std::optional<std::string> suggest(const std::string& name) {
  std::optional<std::string> best;
  std::size_t best_d = 0;
  for (const auto& s : subcommands()) {
    const auto d = edit_distance(name, s);
    if (!best || d < best_d) {
      best = s;
      best_d = d;
    }
  }
  if (best && best_d <= std::max<std::size_t>(2, name.size() / 2)) return best;
  return std::nullopt;
}

CommandResult dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (!args.empty() && !args.front().empty() && args.front()[0] != '-' &&
      std::find(subcommands().begin(), subcommands().end(), args.front()) == subcommands().end()) {
    err << "error: unknown command '" << args.front() << "'";
    if (const auto s = suggest(args.front())) err << "; did you mean '" << *s << "'?";
    err << "\nrun 'wrinkleforge --help' for the list of commands\n";
    return {kUsage, std::nullopt};
  }

  CLI::App app{"Weak-label texture maps, label fusion and two-stage wrinkle segmentation", "wrinkleforge"};
  app.require_subcommand(1);
  Options o;
  std::function<CommandResult(std::ostream&)> action;

  auto seed_flag = [&](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed, "Seed for every random draw (overrides WRINKLEFORGE_SEED and the config)");
  };
  auto force_flag = [&](CLI::App* cmd) { cmd->add_flag("--force", o.force, "Overwrite existing outputs"); };

  auto* synth = app.add_subcommand("synth", "Generate a synthetic wrinkle corpus");
  synth->add_option("--spec", o.spec, "SynthSpec JSON file (defaults apply when omitted)")->check(CLI::ExistingFile);
  synth->add_option("--out", o.out, "Output corpus directory")->required();
  synth->add_option("--count", o.count, "Override the number of images");
  synth->add_option("--size", o.size, "Override the image side in pixels");
  synth->add_option("--jobs", o.jobs, "Worker threads (default: logical cores)");
  seed_flag(synth);
  force_flag(synth);
  synth->callback([&] { action = [&](std::ostream& os) { return run_synth(o, os); }; });

  auto* weak = app.add_subcommand("gen-weak-labels", "Write masked texture maps for every image");
  weak->add_option("--images", o.images, "Directory of <id>.png RGB images")->required();
  weak->add_option("--masks", o.masks, "Directory of <id>.png face masks")->required();
  weak->add_option("--out", o.out, "Output directory for weak labels")->required();
  weak->add_option("--sigma", o.sigma, "Gaussian standard deviation in pixels")->capture_default_str();
  weak->add_option("--ksize", o.ksize, "Odd Gaussian kernel size")->capture_default_str();
  weak->add_option("--jobs", o.jobs, "Worker threads (default: logical cores)");
  weak->add_option("--report", o.report, "Optional JSON report path");
  force_flag(weak);
  weak->callback([&] { action = [&](std::ostream& os) { return run_gen_weak_labels(o, os); }; });

  auto* fuse = app.add_subcommand("fuse", "Majority-vote annotator masks into ground truth");
  fuse->add_option("--annotations", o.annotations, "Directory of <annotator>/<id>.png masks")->required();
  fuse->add_option("--out", o.out, "Output directory for fused masks")->required();
  fuse->add_option("--threshold", o.threshold, "Minimum number of agreeing annotators")->capture_default_str();
  force_flag(fuse);
  fuse->callback([&] { action = [&](std::ostream& os) { return run_fuse(o, os); }; });

  auto* agree = app.add_subcommand("agreement", "Pairwise Jaccard and Pearson agreement between annotators");
  agree->add_option("--annotations", o.annotations, "Directory of <annotator>/<id>.png masks")->required();
  agree->add_option("--report", o.report, "Output JSON report")->required();
  force_flag(agree);
  agree->callback([&] { action = [&](std::ostream& os) { return run_agreement(o, os); }; });

  auto* pre = app.add_subcommand("pretrain", "Stage 1: regress masked texture maps from RGB");
  pre->add_option("--config", o.config, "TrainConfig JSON file")->check(CLI::ExistingFile);
  pre->add_option("--dataset", o.dataset, "Override dataset_root");
  pre->add_option("--out", o.out, "Override out_dir");
  seed_flag(pre);
  force_flag(pre);
  pre->callback([&] { action = [&](std::ostream& os) { return run_pretrain(o, os); }; });

  auto* fine = app.add_subcommand("finetune", "Stage 2: wrinkle segmentation with soft Dice");
  fine->add_option("--config", o.config, "TrainConfig JSON file")->check(CLI::ExistingFile);
  fine->add_option("--init", o.init, "Pretrained checkpoint to start from")->check(CLI::ExistingFile);
  fine->add_option("--dataset", o.dataset, "Override dataset_root");
  fine->add_option("--out", o.out, "Override out_dir");
  seed_flag(fine);
  force_flag(fine);
  fine->callback([&] { action = [&](std::ostream& os) { return run_finetune(o, os); }; });

  auto* exp = app.add_subcommand("experiment", "Pretraining x input-mode comparison on the test split");
  exp->add_option("--config", o.config, "JSON with \"pretrain\" and \"finetune\" TrainConfigs")
      ->required()
      ->check(CLI::ExistingFile);
  exp->add_option("--out", o.out, "Output directory")->required();
  exp->add_option("--dataset", o.dataset, "Override dataset_root of both stages");
  seed_flag(exp);
  force_flag(exp);
  exp->callback([&] { action = [&](std::ostream& os) { return run_experiment_cmd(o, os); }; });

  auto* eval = app.add_subcommand("evaluate", "JSI, precision, recall, F1 and accuracy of predicted masks");
  eval->add_option("--pred", o.pred, "Directory of predicted <id>.png masks")->required();
  eval->add_option("--truth", o.truth, "Directory of ground-truth <id>.png masks")->required();
  eval->add_option("--report", o.report, "Output JSON report")->required();
  force_flag(eval);
  eval->callback([&] { action = [&](std::ostream& os) { return run_evaluate(o, os); }; });

  auto* val = app.add_subcommand("validate", "Check a corpus directory for layout and mask violations");
  val->add_option("--corpus", o.corpus, "Corpus root directory")->required();
  val->add_option("--report", o.report, "Optional JSON report path");
  force_flag(val);
  val->callback([&] { action = [&](std::ostream& os) { return run_validate(o, os); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return {kOk, std::nullopt};
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return {kOk, std::nullopt};
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return {kUsage, std::nullopt};
  }

  try {
    return action(out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return {exit_code_for(e.code()), std::nullopt};
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return {kRuntimeFailure, std::nullopt};
  }
}

}  // namespace wrinkleforge::cli
