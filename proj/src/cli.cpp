// Copyright 2026 The pyratext authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License. You may
// obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ptx/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "ptx/ctc.h"
#include "ptx/eval.h"
#include "ptx/pipeline.h"
#include "ptx/utf8.h"

namespace fs = std::filesystem;

namespace ptx {

namespace {

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

std::vector<uint64_t> parse_seeds(const std::string& s) {
  std::vector<uint64_t> out;
  std::istringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoull(tok));
  }
  if (out.empty()) throw CLI::ValidationError("--seeds", "needs at least one seed");
  return out;
}

SplitRatios parse_ratios(const std::string& s) {
  std::istringstream ss(s);
  std::string tok;
  std::vector<double> vals;
  while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
  if (vals.size() != 3) throw CLI::ValidationError("--split", "expects train,val,test");
  return SplitRatios{vals[0], vals[1], vals[2]};
}

// Mutable string mirrors for fields CLI11 cannot bind directly.
struct ConfigStrings {
  std::string mode, kind, seeds, split;
};

void seed_strings(const RunConfig& cfg, ConfigStrings& s) {
  s.mode = to_string(cfg.mode);
  s.kind = to_string(cfg.kind);
  std::ostringstream seeds;
  for (size_t i = 0; i < cfg.seeds.size(); ++i) seeds << (i ? "," : "") << cfg.seeds[i];
  s.seeds = seeds.str();
  std::ostringstream split;
  split << cfg.ratios.train << "," << cfg.ratios.validation << "," << cfg.ratios.test;
  s.split = split.str();
}

void resolve_strings(const ConfigStrings& s, RunConfig& cfg) {
  cfg.mode = feature_mode_from_string(s.mode);
  cfg.kind = model_kind_from_string(s.kind);
  cfg.seeds = parse_seeds(s.seeds);
  cfg.ratios = parse_ratios(s.split);
}

// key=value config file; CLI flags parsed afterwards override these values.
void apply_config_file(const std::string& path, RunConfig& cfg, ConfigStrings& s) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open config file");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    if (key == "xheight") cfg.xheight = std::stoi(val);
    else if (key == "max_levels") cfg.max_levels = std::stoi(val);
    else if (key == "min_height") cfg.min_height = std::stoi(val);
    else if (key == "level_limit") cfg.level_limit = std::stoi(val);
    else if (key == "mode") s.mode = val;
    else if (key == "kind") s.kind = val;
    else if (key == "hidden_units") cfg.hidden_units = std::stoi(val);
    else if (key == "seeds") s.seeds = val;
    else if (key == "learning_rate") cfg.train.learning_rate = std::stod(val);
    else if (key == "momentum") cfg.train.momentum = std::stod(val);
    else if (key == "max_epochs") cfg.train.max_epochs = std::stoi(val);
    else if (key == "patience") cfg.train.patience = std::stoi(val);
    else if (key == "split") s.split = val;
    else if (key == "split_seed") cfg.split_seed = std::stoull(val);
    else throw std::runtime_error(path + ":" + std::to_string(line_no) + ": unknown key " + key);
  }
}

void write_resolved_config(const RunConfig& cfg, const std::string& subcommand,
                           const std::map<std::string, std::string>& extras,
                           const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  const std::string path = (fs::path(out_dir) / "config.resolved.txt").string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "subcommand=" << subcommand << "\n";
  for (const auto& [k, v] : extras) out << k << "=" << v << "\n";
  out << "xheight=" << cfg.xheight << "\n"
      << "max_levels=" << cfg.max_levels << "\n"
      << "min_height=" << cfg.min_height << "\n"
      << "level_limit=" << cfg.level_limit << "\n"
      << "mode=" << to_string(cfg.mode) << "\n"
      << "kind=" << to_string(cfg.kind) << "\n"
      << "hidden_units=" << cfg.hidden_units << "\n";
  out << "seeds=";
  for (size_t i = 0; i < cfg.seeds.size(); ++i) out << (i ? "," : "") << cfg.seeds[i];
  out << "\n";
  char num[40];
  std::snprintf(num, sizeof(num), "%.17g", cfg.train.learning_rate);
  out << "learning_rate=" << num << "\n";
  std::snprintf(num, sizeof(num), "%.17g", cfg.train.momentum);
  out << "momentum=" << num << "\n";
  out << "max_epochs=" << cfg.train.max_epochs << "\n"
      << "patience=" << cfg.train.patience << "\n"
      << "split=" << cfg.ratios.train << "," << cfg.ratios.validation << ","
      << cfg.ratios.test << "\n"
      << "split_seed=" << cfg.split_seed << "\n";
}

std::string model_file_name(const CorpusFeatures& features, uint64_t seed) {
  std::ostringstream name;
  if (features.level < 0) {
    name << "model.whole.seed" << seed << ".ptxm";
  } else {
    name << "model.L" << features.level << ".seed" << seed << ".ptxm";
  }
  return name.str();
}

void write_train_log(const TrainLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "epoch,train_loss,val_label_error,val_seq_accuracy\n";
  char buf[128];
  for (const EpochStats& e : log.epochs) {
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f\n", e.epoch, e.train_loss,
                  e.val_label_error, e.val_seq_accuracy);
    out << buf;
  }
  out << "best_epoch," << log.best_epoch << "\n";
}

// ---- subcommand bodies ----

int run_pyramid(const RunConfig& cfg, const std::string& in_path, const std::string& out_dir) {
  const RasterImage img = load_image(in_path);
  const GaussianPyramid pyr = build_pyramid(img, cfg.max_levels, cfg.min_height);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  const std::string stem = stem_of(in_path);
  for (int k = 0; k < pyr.level_count(); ++k) {
    const char* ext = pyr.levels[k].channels == 1 ? ".pgm" : ".ppm";
    const std::string path =
        (fs::path(out_dir) / (stem + ".L" + std::to_string(k) + ext)).string();
    save_image(pyr.levels[k], path);
    std::cout << path << "\n";
  }
  write_resolved_config(cfg, "pyramid", {{"in", in_path}, {"out_dir", out_dir}}, out_dir);
  return 0;
}

int run_featurize(const RunConfig& cfg, const std::string& in_path,
                  const std::string& out_dir) {
  const RasterImage img = load_image(in_path);
  GaussianPyramid pyr = build_pyramid(img, cfg.max_levels, cfg.min_height);
  if (cfg.level_limit > 0 && pyr.level_count() > cfg.level_limit) {
    pyr.levels.resize(cfg.level_limit);
  }
  const FilterBank bank = default_bank();
  const std::vector<FeatureSequence> seqs = featurize_pyramid(pyr, bank, cfg.xheight, cfg.mode);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  const std::string stem = stem_of(in_path);
  for (size_t i = 0; i < seqs.size(); ++i) {
    const std::string tag =
        cfg.mode == FeatureMode::whole ? "whole" : "L" + std::to_string(i);
    const std::string path = (fs::path(out_dir) / (stem + "." + tag + ".fseq")).string();
    save_feature_sequence(seqs[i], path);
    std::cout << path << " T=" << seqs[i].frame_count << " D=" << seqs[i].frame_dim << "\n";
  }
  write_resolved_config(cfg, "featurize", {{"in", in_path}, {"out_dir", out_dir}}, out_dir);
  return 0;
}

int run_train(const RunConfig& cfg, const std::string& manifest, const std::string& out_dir) {
  const Corpus corpus = split_corpus(parse_manifest(manifest), cfg.ratios, cfg.split_seed);
  const std::vector<CorpusFeatures> per_level = featurize_corpus(corpus, cfg);
  std::error_code ec;
  fs::create_directories(out_dir, ec);

  for (const CorpusFeatures& features : per_level) {
    for (uint64_t seed : cfg.seeds) {
      TrainedModel trained = train_one(corpus, features, cfg, seed);
      const std::string name = model_file_name(features, seed);
      save_model(trained.model, (fs::path(out_dir) / name).string());
      const std::string log_name = "train." + name.substr(6, name.size() - 11) + ".log";
      write_train_log(trained.log, (fs::path(out_dir) / log_name).string());
      std::cout << name << " epochs=" << trained.log.epochs.size()
                << " best_val_error=" << trained.log.best_val_error << "\n";
    }
  }
  write_resolved_config(cfg, "train", {{"manifest", manifest}, {"out_dir", out_dir}}, out_dir);
  return 0;
}

int run_eval(const RunConfig& cfg, const std::string& manifest, const std::string& models_dir,
             std::string out_csv) {
  const Corpus corpus = split_corpus(parse_manifest(manifest), cfg.ratios, cfg.split_seed);

  std::vector<std::string> model_paths;
  for (const auto& entry : fs::directory_iterator(models_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ptxm") {
      model_paths.push_back(entry.path().string());
    }
  }
  std::sort(model_paths.begin(), model_paths.end());
  if (model_paths.empty()) throw std::runtime_error(models_dir + ": no .ptxm model files");

  if (out_csv.empty()) out_csv = (fs::path(models_dir) / "report.csv").string();

  // Feature cache shared by models with identical featurization settings.
  std::map<std::string, std::vector<CorpusFeatures>> cache;
  struct Group {
    std::vector<double> acc, seq_acc;
    std::vector<SeqPair> pairs;
  };
  std::map<int, Group> groups;  // keyed by level, -1 = whole

  for (const std::string& path : model_paths) {
    const SequenceModel model = load_model(path);
    const FeatureConfig& fc = model.feature_config;

    RunConfig fcfg = cfg;
    fcfg.xheight = fc.xheight;
    fcfg.max_levels = fc.max_levels;
    fcfg.min_height = fc.min_height;
    fcfg.mode = fc.mode;
    if (fc.mode == FeatureMode::whole) {
      fcfg.level_limit = model.cell_channels / kBankPlaneCount;
    }
    std::ostringstream key;
    key << to_string(fc.mode) << "/" << fcfg.xheight << "/" << fcfg.max_levels << "/"
        << fcfg.min_height << "/" << fcfg.level_limit;
    auto it = cache.find(key.str());
    if (it == cache.end()) it = cache.emplace(key.str(), featurize_corpus(corpus, fcfg)).first;

    const int level = fc.mode == FeatureMode::whole ? -1 : fc.level;
    const CorpusFeatures* features = nullptr;
    for (const CorpusFeatures& f : it->second) {
      if (f.level == level) features = &f;
    }
    if (features == nullptr) {
      throw std::runtime_error(path + ": corpus pyramids have no level " +
                               std::to_string(level));
    }

    std::vector<SeqPair> pairs;
    size_t exact = 0;
    for (size_t i : corpus.test_idx) {
      std::vector<int> ref = model.alphabet.encode(corpus.samples[i].transcription);
      std::vector<int> hyp = ctc_greedy_decode(forward(model, features->seqs[i]));
      if (ref == hyp) ++exact;
      pairs.emplace_back(std::move(ref), std::move(hyp));
    }
    const double cer = character_error_rate(pairs);
    Group& g = groups[level];
    g.acc.push_back(100.0 * (1.0 - cer));
    g.seq_acc.push_back(corpus.test_idx.empty()
                            ? 0.0
                            : 100.0 * static_cast<double>(exact) / corpus.test_idx.size());
    g.pairs.insert(g.pairs.end(), pairs.begin(), pairs.end());
    std::cout << fs::path(path).filename().string() << " accuracy=" << g.acc.back() << "\n";
  }

  std::vector<LevelResult> results;
  for (const auto& [level, g] : groups) {
    const PRF prf = precision_recall_f(g.pairs);
    LevelResult r;
    r.level = level;
    r.accuracy_runs = g.acc;
    r.seq_accuracy_runs = g.seq_acc;
    r.precision = prf.precision;
    r.recall = prf.recall;
    results.push_back(std::move(r));
  }
  report_levels(results, out_csv);
  std::cout << out_csv << "\n";
  write_resolved_config(cfg, "eval",
                        {{"manifest", manifest},
                         {"models_dir", models_dir},
                         {"out_csv", out_csv}},
                        fs::path(out_csv).parent_path().string());
  return 0;
}

int run_recognize(const std::string& model_path, const std::string& in_path) {
  const SequenceModel model = load_model(model_path);
  const RasterImage img = load_image(in_path);
  const FeatureSequence seq = featurize_for_model(model, img);
  const std::vector<int> decoded = ctc_greedy_decode(forward(model, seq));
  std::cout << encode_utf8(model.alphabet.decode(decoded)) << "\n";
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"pyramid text-line recognition toolkit", "pyratext"};
  app.require_subcommand(1);

  RunConfig cfg;
  ConfigStrings strings;
  seed_strings(cfg, strings);

  // The config file must be applied before CLI11 parses flag overrides.
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      try {
        apply_config_file(args[i + 1], cfg, strings);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
    }
  }

  std::string in_path, out_dir, manifest, models_dir, model_path, out_csv, config_path;
  SynthConfig synth;

  auto add_feature_flags = [&](CLI::App* cmd) {
    cmd->add_option("--xheight", cfg.xheight, "frame height for featurization");
    cmd->add_option("--levels", cfg.max_levels, "max pyramid levels")
        ->check(CLI::Range(1, kMaxPyramidLevels));
    cmd->add_option("--min-height", cfg.min_height, "pyramid height floor");
    cmd->add_option("--level-limit", cfg.level_limit, "cap on featurized levels");
    cmd->add_option("--mode", strings.mode, "per_level | whole");
    cmd->add_option("--config", config_path, "key=value config file");
  };
  auto add_split_flags = [&](CLI::App* cmd) {
    cmd->add_option("--split", strings.split, "train,val,test ratios");
    cmd->add_option("--split-seed", cfg.split_seed, "corpus shuffle seed");
  };

  CLI::App* pyramid_cmd = app.add_subcommand("pyramid", "write pyramid level images");
  pyramid_cmd->add_option("--in", in_path, "input image")->required();
  pyramid_cmd->add_option("--out-dir", out_dir, "output directory")->required();
  pyramid_cmd->add_option("--levels", cfg.max_levels, "max pyramid levels")
      ->check(CLI::Range(1, kMaxPyramidLevels));
  pyramid_cmd->add_option("--min-height", cfg.min_height, "pyramid height floor");
  pyramid_cmd->add_option("--config", config_path, "key=value config file");

  CLI::App* feat_cmd = app.add_subcommand("featurize", "write FSEQ1 feature files");
  feat_cmd->add_option("--in", in_path, "input image")->required();
  feat_cmd->add_option("--out-dir", out_dir, "output directory")->required();
  add_feature_flags(feat_cmd);

  CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus");
  synth_cmd->add_option("--out-dir", out_dir, "output directory")->required();
  synth_cmd->add_option("--glyphs", synth.glyph_count, "distinct glyphs")
      ->check(CLI::Range(2, 40));
  synth_cmd->add_option("--lines", synth.line_count, "number of lines");
  synth_cmd->add_option("--min-len", synth.min_len, "min glyphs per line");
  synth_cmd->add_option("--max-len", synth.max_len, "max glyphs per line");
  synth_cmd->add_option("--noise", synth.noise_level, "Gaussian noise stddev");
  synth_cmd->add_option("--seed", synth.seed, "generator seed");

  CLI::App* train_cmd = app.add_subcommand("train", "train models per level and seed");
  train_cmd->add_option("--manifest", manifest, "corpus manifest")->required();
  train_cmd->add_option("--out-dir", out_dir, "output directory")->required();
  add_feature_flags(train_cmd);
  add_split_flags(train_cmd);
  train_cmd->add_option("--kind", strings.kind, "blstm_1d | mdlstm_2d");
  train_cmd->add_option("--hidden", cfg.hidden_units, "hidden units per direction");
  train_cmd->add_option("--seeds", strings.seeds, "comma-separated seeds");
  train_cmd->add_option("--lr", cfg.train.learning_rate, "learning rate");
  train_cmd->add_option("--momentum", cfg.train.momentum, "momentum");
  train_cmd->add_option("--epochs", cfg.train.max_epochs, "max epochs");
  train_cmd->add_option("--patience", cfg.train.patience, "early-stop patience");

  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate models, write the level report");
  eval_cmd->add_option("--manifest", manifest, "corpus manifest")->required();
  eval_cmd->add_option("--models-dir", models_dir, "directory of .ptxm files")->required();
  eval_cmd->add_option("--out", out_csv, "report CSV path");
  eval_cmd->add_option("--config", config_path, "key=value config file");
  add_split_flags(eval_cmd);

  CLI::App* rec_cmd = app.add_subcommand("recognize", "transcribe one image");
  rec_cmd->add_option("--model", model_path, "PTXM1 model file")->required();
  rec_cmd->add_option("--in", in_path, "input image")->required();

  std::vector<const char*> argv;
  argv.push_back("pyratext");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    resolve_strings(strings, cfg);
    if (app.got_subcommand(pyramid_cmd)) return run_pyramid(cfg, in_path, out_dir);
    if (app.got_subcommand(feat_cmd)) return run_featurize(cfg, in_path, out_dir);
    if (app.got_subcommand(synth_cmd)) {
      const std::string manifest_path = synth_generate(synth, out_dir);
      std::cout << manifest_path << "\n";
      return 0;
    }
    if (app.got_subcommand(train_cmd)) return run_train(cfg, manifest, out_dir);
    if (app.got_subcommand(eval_cmd)) return run_eval(cfg, manifest, models_dir, out_csv);
    if (app.got_subcommand(rec_cmd)) return run_recognize(model_path, in_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace ptx
