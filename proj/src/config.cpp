// Copyright 2026 The tzsl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tzsl/config.hpp"

#include <fstream>
#include <sstream>

#include "tzsl/csvio.hpp"

namespace tzsl {
namespace {

int to_int(const std::string& v, const std::string& where) {
  return static_cast<int>(parse_long(v, where));
}

std::uint64_t to_u64(const std::string& v, const std::string& where) {
  const long parsed = parse_long(v, where);
  if (parsed < 0) throw validation_error(where + ": seed must be >= 0");
  return static_cast<std::uint64_t>(parsed);
}

bool to_bool(const std::string& v, const std::string& where) {
  if (v == "on") return true;
  if (v == "off") return false;
  throw validation_error(where + ": expected on/off, got '" + v + "'");
}

}  // namespace

void RunConfig::validate() const {
  if (omega1 < 0.0 || omega1 > 1.0) {
    throw validation_error("config: omega1 must lie in [0,1], got " + std::to_string(omega1));
  }
  if (lr < 0.0 || omega3 < 0.0 || aug_sigma < 0.0 || ramp_wmax < 0.0 || adj_tau < 0.0) {
    throw validation_error("config: rates and weights must be >= 0");
  }
  if (d_v < 1 || hidden_visual < 1 || hidden_agae < 1) {
    throw validation_error("config: layer widths must be >= 1");
  }
  if (epochs_visual < 0 || epochs_semantic < 0) {
    throw validation_error("config: epoch counts must be >= 0");
  }
  if (ramp_epochs < 1) throw validation_error("config: ramp_epochs must be >= 1");
  if (batch_seen < 1 || batch_unseen < 1 || aug_per_sample < 1) {
    throw validation_error("config: batch sizes and aug_per_sample must be >= 1");
  }
}

void RunConfig::set(const std::string& key, const std::string& value,
                    const std::string& where) {
  if (key == "data") data = value;
  else if (key == "out") out = value;
  else if (key == "seed") seed = to_u64(value, where);
  else if (key == "d_v") d_v = to_int(value, where);
  else if (key == "hidden_visual") hidden_visual = to_int(value, where);
  else if (key == "hidden_agae") hidden_agae = to_int(value, where);
  else if (key == "epochs_visual") epochs_visual = to_int(value, where);
  else if (key == "epochs_semantic") epochs_semantic = to_int(value, where);
  else if (key == "lr") lr = parse_double(value, where);
  else if (key == "omega1") omega1 = parse_double(value, where);
  else if (key == "ramp_wmax") ramp_wmax = parse_double(value, where);
  else if (key == "ramp_epochs") ramp_epochs = to_int(value, where);
  else if (key == "omega3") omega3 = parse_double(value, where);
  else if (key == "aug_sigma") aug_sigma = parse_double(value, where);
  else if (key == "aug_per_sample") aug_per_sample = to_int(value, where);
  else if (key == "batch_seen") batch_seen = to_int(value, where);
  else if (key == "batch_unseen") batch_unseen = to_int(value, where);
  else if (key == "adj_tau") adj_tau = parse_double(value, where);
  else if (key == "uvc") uvc = to_bool(value, where);
  else if (key == "usa") usa = to_bool(value, where);
  else if (key == "embed") embed = embed_kind_from_string(value);
  else throw validation_error(where + ": unknown key '" + key + "'");
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("config file not found: " + path.string());
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const std::string where = path.filename().string() + ":" + std::to_string(lineno);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw validation_error(where + ": expected key=value, got '" + line + "'");
    }
    cfg.set(line.substr(0, eq), line.substr(eq + 1), where);
  }
  cfg.validate();
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "data=" << cfg.data << '\n'
      << "out=" << cfg.out << '\n'
      << "seed=" << cfg.seed << '\n'
      << "d_v=" << cfg.d_v << '\n'
      << "hidden_visual=" << cfg.hidden_visual << '\n'
      << "hidden_agae=" << cfg.hidden_agae << '\n'
      << "epochs_visual=" << cfg.epochs_visual << '\n'
      << "epochs_semantic=" << cfg.epochs_semantic << '\n'
      << "lr=" << format_double(cfg.lr) << '\n'
      << "omega1=" << format_double(cfg.omega1) << '\n'
      << "ramp_wmax=" << format_double(cfg.ramp_wmax) << '\n'
      << "ramp_epochs=" << cfg.ramp_epochs << '\n'
      << "omega3=" << format_double(cfg.omega3) << '\n'
      << "aug_sigma=" << format_double(cfg.aug_sigma) << '\n'
      << "aug_per_sample=" << cfg.aug_per_sample << '\n'
      << "batch_seen=" << cfg.batch_seen << '\n'
      << "batch_unseen=" << cfg.batch_unseen << '\n'
      << "adj_tau=" << format_double(cfg.adj_tau) << '\n'
      << "uvc=" << (cfg.uvc ? "on" : "off") << '\n'
      << "usa=" << (cfg.usa ? "on" : "off") << '\n'
      << "embed=" << to_string(cfg.embed) << '\n';
  return out.str();
}

}  // namespace tzsl
