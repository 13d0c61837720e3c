// Copyright 2026 The ensemblefuse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ensemblefuse/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "ensemblefuse/ensemble.hpp"
#include "ensemblefuse/errors.hpp"
#include "ensemblefuse/losses.hpp"
#include "ensemblefuse/metrics.hpp"
#include "ensemblefuse/model_io.hpp"
#include "ensemblefuse/synthlab.hpp"
#include "json.hpp"

namespace ensemblefuse::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::uint64_t kDefaultSeed = 42;
constexpr const char* kSeedEnv = "ENSEMBLEFUSE_SEED";

std::uint64_t parse_seed(const std::string& text, const std::string& origin) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError(origin + ": invalid seed \"" + text + "\"");
  }
  return v;
}

// --seed, then the config file, then $ENSEMBLEFUSE_SEED, then 42.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag,
                           const std::optional<std::uint64_t>& config = std::nullopt) {
  if (flag) return *flag;
  if (config) return *config;
  if (const char* env = std::getenv(kSeedEnv); env && *env) return parse_seed(env, kSeedEnv);
  return kDefaultSeed;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw RuntimeError("write failed: " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw RuntimeError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw ValidationError(what + ": \"" + item + "\" is not a number");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError(what + " is empty");
  return out;
}

json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& section) {
  if (!j.is_object()) throw ValidationError(section + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError(section + ": unknown key \"" + key + "\"");
  }
}

template <typename T>
void maybe_get(const json& j, const char* key, T& dst, const std::string& section) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(section + "." + key + ": " + e.what());
  }
}

synth::SplitFractions fractions_from(const std::vector<double>& v) {
  if (v.size() != 3) throw ValidationError("split needs three fractions: train,test,val");
  synth::SplitFractions f{v[0], v[1], v[2]};
  f.validate();
  return f;
}

// Shared JSON config for synth and train:
//   {"seed": n, "split": [train,test,val], "synth": {...}, "loss": {...}, "train": {...}}
struct RunConfig {
  std::optional<std::uint64_t> seed;
  synth::SplitFractions split;
  synth::SynthConfig synth;
  LossConfig loss;
  synth::ToyTrainConfig train;
};

RunConfig load_run_config(const std::optional<fs::path>& path) {
  RunConfig cfg;
  if (!path) return cfg;
  const json j = load_json(*path);
  check_keys(j, {"seed", "split", "synth", "loss", "train"}, "config");
  if (j.contains("seed")) {
    std::uint64_t s = 0;
    maybe_get(j, "seed", s, "config");
    cfg.seed = s;
  }
  if (j.contains("split")) {
    std::vector<double> f;
    maybe_get(j, "split", f, "config");
    cfg.split = fractions_from(f);
  }
  if (j.contains("synth")) {
    const auto& s = j["synth"];
    check_keys(s, {"n_samples", "class_names", "prevalences", "n_features", "model_noise",
                   "model_correlation", "latent_noise"},
               "synth");
    maybe_get(s, "n_samples", cfg.synth.n_samples, "synth");
    maybe_get(s, "class_names", cfg.synth.class_names, "synth");
    maybe_get(s, "prevalences", cfg.synth.prevalences, "synth");
    maybe_get(s, "n_features", cfg.synth.n_features, "synth");
    maybe_get(s, "model_noise", cfg.synth.model_noise, "synth");
    maybe_get(s, "model_correlation", cfg.synth.model_correlation, "synth");
    maybe_get(s, "latent_noise", cfg.synth.latent_noise, "synth");
  }
  if (j.contains("loss")) {
    const auto& l = j["loss"];
    check_keys(l, {"gamma_pos", "gamma_neg", "margin", "use_class_weights", "prob_clamp_epsilon"},
               "loss");
    maybe_get(l, "gamma_pos", cfg.loss.gamma_pos, "loss");
    maybe_get(l, "gamma_neg", cfg.loss.gamma_neg, "loss");
    maybe_get(l, "margin", cfg.loss.margin, "loss");
    maybe_get(l, "use_class_weights", cfg.loss.use_class_weights, "loss");
    maybe_get(l, "prob_clamp_epsilon", cfg.loss.prob_clamp_epsilon, "loss");
  }
  if (j.contains("train")) {
    const auto& t = j["train"];
    check_keys(t, {"learning_rate", "weight_decay", "beta1", "beta2", "batch_size", "max_epochs",
                   "patience", "optimizer"},
               "train");
    maybe_get(t, "learning_rate", cfg.train.learning_rate, "train");
    maybe_get(t, "weight_decay", cfg.train.weight_decay, "train");
    maybe_get(t, "beta1", cfg.train.beta1, "train");
    maybe_get(t, "beta2", cfg.train.beta2, "train");
    maybe_get(t, "batch_size", cfg.train.batch_size, "train");
    maybe_get(t, "max_epochs", cfg.train.max_epochs, "train");
    maybe_get(t, "patience", cfg.train.patience, "train");
    std::string opt = "adamw";
    maybe_get(t, "optimizer", opt, "train");
    if (opt == "adamw") {
      cfg.train.optimizer = synth::Optimizer::kAdamW;
    } else if (opt == "gd") {
      cfg.train.optimizer = synth::Optimizer::kGradientDescent;
    } else {
      throw ValidationError("train.optimizer must be \"adamw\" or \"gd\"");
    }
  }
  return cfg;
}

std::string split_to_json(const synth::SplitIndices& s) {
  ordered_json doc;
  doc["train"] = s.train;
  doc["test"] = s.test;
  doc["val"] = s.val;
  return doc.dump() + "\n";
}

synth::SplitIndices split_from_json(const fs::path& path, std::size_t n) {
  const json j = load_json(path);
  check_keys(j, {"train", "test", "val"}, path.string());
  synth::SplitIndices s;
  maybe_get(j, "train", s.train, path.string());
  maybe_get(j, "test", s.test, path.string());
  maybe_get(j, "val", s.val, path.string());
  for (const auto* part : {&s.train, &s.test, &s.val}) {
    for (std::size_t i : *part) {
      if (i >= n) throw ValidationError(path.string() + ": index " + std::to_string(i) + " out of range");
    }
  }
  return s;
}

std::vector<PredictionMatrix> read_all(const std::vector<std::string>& paths) {
  std::vector<PredictionMatrix> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(io::read_predictions(p));
  return out;
}

std::vector<std::string> feature_names(std::size_t d) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < d; ++j) names.push_back("f" + std::to_string(j));
  return names;
}

// --- subcommands -----------------------------------------------------------

struct EvaluateArgs {
  std::string pred, labels, out;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  const auto preds = io::read_predictions(a.pred);
  const auto labels = io::read_labels(a.labels);
  io::check_aligned(std::span(&preds, 1), labels);
  const AucReport report = evaluate(preds, labels);
  for (const auto& name : report.undefined_classes()) {
    err << "note: AUC undefined for class \"" << name
        << "\" (no positives or no negatives); excluded from the mean\n";
  }
  if (!a.out.empty()) write_text(a.out, to_json(report));
  out << format_table(report, fs::path(a.pred).stem().string());
  return kExitOk;
}

struct OptimizeArgs {
  std::vector<std::string> preds;
  std::string labels, out;
  std::optional<std::uint64_t> seed;
  std::size_t pop = 0;
  double F = 0.5, CR = 0.9;
  std::size_t max_gen = 200, stall_gen = 30;
};

int cmd_optimize(const OptimizeArgs& a, std::ostream& out, std::ostream& err) {
  if (a.preds.size() < 2) {
    throw ValidationError("optimize needs at least 2 --pred files, got " + std::to_string(a.preds.size()));
  }
  const auto preds = read_all(a.preds);
  const auto labels = io::read_labels(a.labels);
  DEConfig cfg;
  cfg.population_size = a.pop;
  cfg.F = a.F;
  cfg.CR = a.CR;
  cfg.max_generations = a.max_gen;
  cfg.stall_generations = a.stall_gen;
  cfg.seed = resolve_seed(a.seed);
  const DEResult result = de_optimize(preds, labels, cfg);

  double best_single = 0.0;
  for (std::size_t k = 0; k < preds.size(); ++k) {
    const double m = mean_auc(preds[k], labels);
    best_single = std::max(best_single, m);
    err << "model " << k + 1 << " (" << a.preds[k] << "): mean AUC " << io::format_double(m) << "\n";
  }
  const bool seeded_ok = result.objective >= best_single - 1e-12;
  err << "seeding check: ensemble mean AUC " << io::format_double(result.objective)
      << (seeded_ok ? " >= " : " < ") << "best single model " << io::format_double(best_single)
      << (seeded_ok ? " [ok]" : " [VIOLATED]") << "\n";
  if (!seeded_ok) throw RuntimeError("seeded-population guarantee violated");

  write_text(a.out, to_json(result));
  out << "weights:";
  for (double w : result.weights.values()) out << ' ' << io::format_double(w);
  out << "\nmean AUC: " << io::format_double(result.objective) << " after "
      << result.generations_run << " generations\n";
  return kExitOk;
}

struct FuseArgs {
  std::vector<std::string> preds;
  std::string weights, weights_file, out;
};

int cmd_fuse(const FuseArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<double> raw;
  if (!a.weights_file.empty()) {
    const json j = load_json(a.weights_file);
    if (!j.contains("weights")) throw ValidationError(a.weights_file + ": missing \"weights\"");
    maybe_get(j, "weights", raw, a.weights_file);
  } else {
    raw = parse_number_list(a.weights, "--weights");
  }
  if (raw.size() != a.preds.size()) {
    throw ValidationError("got " + std::to_string(raw.size()) + " weights for " +
                          std::to_string(a.preds.size()) + " --pred files");
  }
  EnsembleWeights weights;
  try {
    weights = EnsembleWeights(raw);
  } catch (const ValidationError&) {
    weights = project_to_simplex(raw);
    err << "warning: weights are not on the simplex; projected to";
    for (double w : weights.values()) err << ' ' << io::format_double(w);
    err << "\n";
  }
  const auto preds = read_all(a.preds);
  io::write_predictions(fuse(preds, weights), fs::path(a.out));
  out << "fused " << preds.size() << " models into " << a.out << "\n";
  return kExitOk;
}

struct LossArgs {
  std::string pred, labels, prevalence_from, out;
  double gamma_pos = 1.0, gamma_neg = 4.0, margin = 0.05, epsilon = 1e-7;
  bool weighted = false;
};

int cmd_loss(const LossArgs& a, std::ostream& out, std::ostream&) {
  LossConfig cfg;
  cfg.gamma_pos = a.gamma_pos;
  cfg.gamma_neg = a.gamma_neg;
  cfg.margin = a.margin;
  cfg.use_class_weights = a.weighted;
  cfg.prob_clamp_epsilon = a.epsilon;
  cfg.validate();
  const auto preds = io::read_predictions(a.pred);
  const auto labels = io::read_labels(a.labels);
  io::check_aligned(std::span(&preds, 1), labels);
  ClassPrevalence prevalence;
  if (!a.prevalence_from.empty()) {
    const auto ref = io::read_labels(a.prevalence_from);
    if (!(ref.classes() == labels.classes())) {
      throw ValidationError("--prevalence-from classes differ from --labels classes");
    }
    prevalence = compute_prevalence(ref);
  } else {
    prevalence = compute_prevalence(labels);
  }
  const double value = combined_loss(preds, labels, prevalence, cfg);

  ordered_json doc;
  doc["loss"] = value;
  ordered_json c;
  c["gamma_pos"] = cfg.gamma_pos;
  c["gamma_neg"] = cfg.gamma_neg;
  c["margin"] = cfg.margin;
  c["use_class_weights"] = cfg.use_class_weights;
  c["prob_clamp_epsilon"] = cfg.prob_clamp_epsilon;
  doc["config"] = std::move(c);
  const std::string text = doc.dump(2) + "\n";
  if (!a.out.empty()) write_text(a.out, text);
  out << text;
  return kExitOk;
}

struct RocArgs {
  std::string pred, labels, class_name, out;
};

int cmd_roc(const RocArgs& a, std::ostream& out, std::ostream&) {
  const auto preds = io::read_predictions(a.pred);
  const auto labels = io::read_labels(a.labels);
  io::check_aligned(std::span(&preds, 1), labels);
  const auto idx = preds.classes().index_of(a.class_name);
  if (!idx) {
    std::string names;
    for (const auto& n : preds.classes().names()) names += (names.empty() ? "" : ", ") + n;
    throw ValidationError("unknown class \"" + a.class_name + "\"; available: " + names);
  }
  const auto scores = preds.values().column(*idx);
  const auto y = labels.values().column(*idx);
  RocCurve curve;
  try {
    curve = roc_curve(scores, y);
  } catch (const ValidationError& e) {
    throw ValidationError("class \"" + a.class_name + "\": " + e.what());
  }
  write_roc_csv(curve, a.out);
  out << a.class_name << ": " << curve.points.size() << " ROC points, AUC "
      << io::format_double(trapezoid_area(curve)) << "\n";
  return kExitOk;
}

struct SynthArgs {
  std::string config, out, split;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_samples;
};

int cmd_synth(const SynthArgs& a, std::ostream& out, std::ostream& err) {
  RunConfig rc = load_run_config(a.config.empty() ? std::nullopt : std::optional<fs::path>(a.config));
  if (!a.split.empty()) rc.split = fractions_from(parse_number_list(a.split, "--split"));
  if (a.n_samples) rc.synth.n_samples = *a.n_samples;
  rc.synth.seed = resolve_seed(a.seed, rc.seed);
  rc.synth.validate();

  const fs::path dir(a.out);
  ensure_dir(dir);
  const auto data = synth::generate(rc.synth);
  for (const auto& w : data.warnings) err << "warning: " << w << "\n";
  const auto models = synth::simulate_models(data.latents, data.labels.classes(), rc.synth);
  const auto parts = synth::split(rc.synth.n_samples, rc.split, rc.synth.seed);

  io::write_numeric_csv({feature_names(rc.synth.n_features), data.features}, dir / "features.csv");
  io::write_labels(data.labels, dir / "labels.csv");
  for (std::size_t k = 0; k < models.size(); ++k) {
    io::write_predictions(models[k], dir / ("model_" + std::to_string(k) + ".csv"));
  }
  write_text(dir / "split.json", split_to_json(parts));
  for (const auto& [name, idx] : {std::pair{"val", &parts.val}, std::pair{"test", &parts.test}}) {
    ensure_dir(dir / name);
    io::write_labels(data.labels.select_rows(*idx), dir / name / "labels.csv");
    for (std::size_t k = 0; k < models.size(); ++k) {
      io::write_predictions(models[k].select_rows(*idx),
                            dir / name / ("model_" + std::to_string(k) + ".csv"));
    }
  }

  out << "synthesised " << rc.synth.n_samples << " samples x " << data.labels.n_classes()
      << " classes, " << models.size() << " simulated models (seed " << rc.synth.seed << ")\n";
  for (std::size_t c = 0; c < data.labels.n_classes(); ++c) {
    std::size_t pos = 0;
    for (std::size_t r = 0; r < data.labels.n_samples(); ++r) pos += data.labels(r, c);
    out << "  " << data.labels.classes()[c] << ": " << pos << " positives\n";
  }
  return kExitOk;
}

struct TrainArgs {
  std::string config, data, out, split;
  std::optional<std::uint64_t> seed;
  bool bce = false;
};

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  RunConfig rc = load_run_config(a.config.empty() ? std::nullopt : std::optional<fs::path>(a.config));
  if (!a.split.empty()) rc.split = fractions_from(parse_number_list(a.split, "--split"));
  const std::uint64_t seed = resolve_seed(a.seed, rc.seed);
  rc.train.seed = seed;
  rc.train.split = rc.split;
  rc.synth.seed = seed;
  if (a.bce) rc.loss = LossConfig::bce();
  rc.loss.validate();
  rc.train.validate();

  Matrix<double> features;
  LabelMatrix labels;
  synth::SplitIndices parts;
  if (!a.data.empty()) {
    const fs::path dir(a.data);
    auto table = io::read_numeric_csv(dir / "features.csv");
    features = std::move(table.values);
    labels = io::read_labels(dir / "labels.csv");
    if (features.rows() != labels.n_samples()) {
      throw ValidationError("features.csv and labels.csv differ in sample count");
    }
    parts = split_from_json(dir / "split.json", labels.n_samples());
  } else {
    auto data = synth::generate(rc.synth);
    for (const auto& w : data.warnings) err << "warning: " << w << "\n";
    features = std::move(data.features);
    labels = std::move(data.labels);
    parts = synth::split(labels.n_samples(), rc.split, seed);
  }

  const auto result = synth::train_toy(features, labels, rc.loss, rc.train, parts);

  const fs::path dir(a.out);
  ensure_dir(dir);
  write_text(dir / "model.json", synth::to_json(result.model, labels.classes()));
  write_text(dir / "history.json", synth::history_to_json(result));
  for (const auto& [name, idx] : {std::pair{"val", &parts.val}, std::pair{"test", &parts.test}}) {
    ensure_dir(dir / name);
    io::write_predictions(result.model.predict(features.select_rows(*idx), labels.classes()),
                          dir / name / "linear.csv");
  }
  const auto test_report = evaluate(result.model.predict(features.select_rows(parts.test), labels.classes()),
                                    labels.select_rows(parts.test));
  write_text(dir / "report.json", to_json(test_report));

  out << "trained " << result.history.size() << " epochs (best " << result.best_epoch
      << (result.stopped_early ? ", stopped early" : "") << ")\n";
  out << format_table(test_report, "linear/test");
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted-average ensembling of multi-label classifiers"};
  app.name("ensemblefuse");
  app.require_subcommand(1);

  EvaluateArgs ev;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Per-class and mean AUC of one prediction file");
  evaluate_cmd->add_option("--pred", ev.pred, "Prediction CSV")->required();
  evaluate_cmd->add_option("--labels", ev.labels, "Label CSV")->required();
  evaluate_cmd->add_option("--out", ev.out, "AUC report JSON");

  OptimizeArgs op;
  std::uint64_t op_seed = 0;
  auto* optimize_cmd = app.add_subcommand("optimize", "Differential-evolution search for ensemble weights");
  optimize_cmd->add_option("--pred", op.preds, "Prediction CSVs, one per model")->required();
  optimize_cmd->add_option("--labels", op.labels, "Label CSV")->required();
  auto* op_seed_opt = optimize_cmd->add_option("--seed", op_seed, "RNG seed (default $ENSEMBLEFUSE_SEED or 42)");
  optimize_cmd->add_option("--pop", op.pop, "Population size (default max(10K,16))");
  optimize_cmd->add_option("--F", op.F, "Mutation factor");
  optimize_cmd->add_option("--CR", op.CR, "Crossover rate");
  optimize_cmd->add_option("--max-gen", op.max_gen, "Maximum generations");
  optimize_cmd->add_option("--stall-gen", op.stall_gen, "Stop after this many generations without improvement");
  optimize_cmd->add_option("--out", op.out, "Result JSON")->required();

  FuseArgs fu;
  auto* fuse_cmd = app.add_subcommand("fuse", "Weighted average of prediction files");
  fuse_cmd->add_option("--pred", fu.preds, "Prediction CSVs")->required();
  auto* w_opt = fuse_cmd->add_option("--weights", fu.weights, "Comma-separated weights");
  auto* wf_opt = fuse_cmd->add_option("--weights-file", fu.weights_file, "JSON with a \"weights\" array (optimize output)");
  w_opt->excludes(wf_opt);
  fuse_cmd->add_option("--out", fu.out, "Fused prediction CSV")->required();

  LossArgs lo;
  auto* loss_cmd = app.add_subcommand("loss", "Combined weighted asymmetric loss of one prediction file");
  loss_cmd->add_option("--pred", lo.pred, "Prediction CSV")->required();
  loss_cmd->add_option("--labels", lo.labels, "Label CSV")->required();
  loss_cmd->add_option("--gamma-pos", lo.gamma_pos, "Focusing exponent for positives");
  loss_cmd->add_option("--gamma-neg", lo.gamma_neg, "Focusing exponent for negatives");
  loss_cmd->add_option("--margin", lo.margin, "Probability margin for negatives");
  loss_cmd->add_option("--epsilon", lo.epsilon, "Probability clamp");
  loss_cmd->add_flag("--weighted", lo.weighted, "Apply prevalence-based class weights");
  loss_cmd->add_option("--prevalence-from", lo.prevalence_from, "Label CSV to compute class prevalence from (default --labels)");
  loss_cmd->add_option("--out", lo.out, "Also write the JSON here");

  RocArgs ro;
  auto* roc_cmd = app.add_subcommand("roc", "ROC curve of one class");
  roc_cmd->add_option("--pred", ro.pred, "Prediction CSV")->required();
  roc_cmd->add_option("--labels", ro.labels, "Label CSV")->required();
  roc_cmd->add_option("--class", ro.class_name, "Class name")->required();
  roc_cmd->add_option("--out", ro.out, "ROC CSV (threshold,fpr,tpr)")->required();

  SynthArgs sy;
  std::uint64_t sy_seed = 0;
  std::size_t sy_n = 0;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic long-tail dataset and simulated models");
  synth_cmd->add_option("--config", sy.config, "Run config JSON");
  synth_cmd->add_option("--out", sy.out, "Output directory")->required();
  auto* sy_seed_opt = synth_cmd->add_option("--seed", sy_seed, "RNG seed");
  auto* sy_n_opt = synth_cmd->add_option("--n-samples", sy_n, "Number of samples");
  synth_cmd->add_option("--split", sy.split, "train,test,val fractions (default 0.7,0.2,0.1)");

  TrainArgs tr;
  std::uint64_t tr_seed = 0;
  auto* train_cmd = app.add_subcommand("train", "Train the linear-sigmoid toy model");
  train_cmd->add_option("--config", tr.config, "Run config JSON");
  train_cmd->add_option("--data", tr.data, "Directory written by synth (default: generate from config)");
  train_cmd->add_option("--out", tr.out, "Output directory")->required();
  auto* tr_seed_opt = train_cmd->add_option("--seed", tr_seed, "RNG seed");
  train_cmd->add_option("--split", tr.split, "train,test,val fractions (default 0.7,0.2,0.1)");
  train_cmd->add_flag("--bce", tr.bce, "Train with plain binary cross-entropy instead");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (*evaluate_cmd) return cmd_evaluate(ev, out, err);
    if (*optimize_cmd) {
      if (*op_seed_opt) op.seed = op_seed;
      return cmd_optimize(op, out, err);
    }
    if (*fuse_cmd) {
      if (!*w_opt && !*wf_opt) throw ValidationError("fuse needs --weights or --weights-file");
      return cmd_fuse(fu, out, err);
    }
    if (*loss_cmd) return cmd_loss(lo, out, err);
    if (*roc_cmd) return cmd_roc(ro, out, err);
    if (*synth_cmd) {
      if (*sy_seed_opt) sy.seed = sy_seed;
      if (*sy_n_opt) sy.n_samples = sy_n;
      return cmd_synth(sy, out, err);
    }
    if (*train_cmd) {
      if (*tr_seed_opt) tr.seed = tr_seed;
      return cmd_train(tr, out, err);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitValidation;
}

}  // namespace ensemblefuse::cli
