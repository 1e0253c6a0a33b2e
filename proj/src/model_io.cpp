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

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ptx/seqmodel.h"

namespace ptx {

std::string to_string(ModelKind kind) {
  return kind == ModelKind::blstm_1d ? "blstm_1d" : "mdlstm_2d";
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "blstm_1d") return ModelKind::blstm_1d;
  if (s == "mdlstm_2d") return ModelKind::mdlstm_2d;
  throw std::invalid_argument("unknown model kind '" + s + "'");
}

std::string to_string(FeatureMode mode) {
  return mode == FeatureMode::per_level ? "per_level" : "whole";
}

FeatureMode feature_mode_from_string(const std::string& s) {
  if (s == "per_level") return FeatureMode::per_level;
  if (s == "whole") return FeatureMode::whole;
  throw std::invalid_argument("unknown feature mode '" + s + "'");
}

namespace {

constexpr char kModelMagic[] = "PTXM1";

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void put_f64le(std::ostream& out, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64le(std::istream& in, const std::string& path) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (in.gcount() != 8) throw std::runtime_error(path + ": truncated model file");
  uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= uint64_t(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void save_model(const SequenceModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << kModelMagic << "\n";
  out << "kind " << to_string(model.kind) << "\n";
  out << "input_dim " << model.input_dim << "\n";
  out << "hidden_units " << model.hidden_units << "\n";
  out << "cell_channels " << model.cell_channels << "\n";
  out << "alphabet";
  for (uint32_t cp : model.alphabet.symbols()) out << " " << cp;
  out << "\n";
  out << "seed " << model.rng_seed << "\n";
  out << "learning_rate " << fmt_double(model.train_config.learning_rate) << "\n";
  out << "momentum " << fmt_double(model.train_config.momentum) << "\n";
  out << "max_epochs " << model.train_config.max_epochs << "\n";
  out << "patience " << model.train_config.patience << "\n";
  out << "shuffle_seed " << model.train_config.shuffle_seed << "\n";
  out << "xheight " << model.feature_config.xheight << "\n";
  out << "feature_mode " << to_string(model.feature_config.mode) << "\n";
  out << "level " << model.feature_config.level << "\n";
  out << "max_levels " << model.feature_config.max_levels << "\n";
  out << "min_height " << model.feature_config.min_height << "\n";
  out << "end_header\n";
  for (double v : model.params) put_f64le(out, v);
  if (!out) throw std::runtime_error(path + ": write failed");
}

SequenceModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::string line;
  if (!std::getline(in, line) || line != kModelMagic) {
    throw std::runtime_error(path + ": not a PTXM1 file");
  }

  std::map<std::string, std::string> kv;
  while (std::getline(in, line)) {
    if (line == "end_header") break;
    const auto sp = line.find(' ');
    const std::string key = line.substr(0, sp);
    kv[key] = sp == std::string::npos ? "" : line.substr(sp + 1);
  }
  if (line != "end_header") throw std::runtime_error(path + ": missing end_header");

  auto need = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw std::runtime_error(path + ": missing header field " + key);
    return it->second;
  };

  SequenceModel model;
  model.kind = model_kind_from_string(need("kind"));
  model.input_dim = std::stoi(need("input_dim"));
  model.hidden_units = std::stoi(need("hidden_units"));
  model.cell_channels = std::stoi(need("cell_channels"));

  std::vector<uint32_t> symbols;
  {
    std::istringstream ss(need("alphabet"));
    uint32_t cp;
    while (ss >> cp) symbols.push_back(cp);
  }
  model.alphabet = Alphabet(std::move(symbols));

  model.rng_seed = std::stoull(need("seed"));
  model.train_config.learning_rate = std::stod(need("learning_rate"));
  model.train_config.momentum = std::stod(need("momentum"));
  model.train_config.max_epochs = std::stoi(need("max_epochs"));
  model.train_config.patience = std::stoi(need("patience"));
  model.train_config.shuffle_seed = std::stoull(need("shuffle_seed"));
  model.feature_config.xheight = std::stoi(need("xheight"));
  model.feature_config.mode = feature_mode_from_string(need("feature_mode"));
  model.feature_config.level = std::stoi(need("level"));
  model.feature_config.max_levels = std::stoi(need("max_levels"));
  model.feature_config.min_height = std::stoi(need("min_height"));

  const size_t n = param_count(model.kind, model.input_dim, model.hidden_units,
                               model.output_dim(), model.cell_channels);
  model.params.resize(n);
  for (double& v : model.params) v = get_f64le(in, path);
  return model;
}

}  // namespace ptx
