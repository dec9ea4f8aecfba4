// Copyright 2026 The namepop Authors
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

#include "namepop/model_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "namepop/counts.hpp"
#include "namepop/error.hpp"
#include "namepop/rng.hpp"
#include "namepop/version.hpp"

namespace namepop {

namespace {

using nlohmann::json;

constexpr const char* kFormatId = "namepop-model";

std::string hex64(uint64_t value) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json smoothing_to_json(const SmoothingConfig& config) {
  return json{{"alpha", config.alpha},
              {"katz_cutoff", config.katz_cutoff},
              {"gt_fallback", std::string(to_string(config.gt_fallback))},
              {"unseen_semantics", std::string(to_string(config.unseen_semantics))},
              {"growth_factor", config.growth_factor},
              {"e_override", config.e_override},
              {"lnre_classes", config.lnre.classes}};
}

SmoothingConfig smoothing_from_json(const json& j) {
  SmoothingConfig config;
  config.alpha = j.at("alpha").get<double>();
  config.katz_cutoff = j.at("katz_cutoff").get<uint64_t>();
  config.gt_fallback = gt_fallback_from_string(j.at("gt_fallback").get<std::string>());
  config.unseen_semantics =
      unseen_semantics_from_string(j.at("unseen_semantics").get<std::string>());
  config.growth_factor = j.at("growth_factor").get<double>();
  config.e_override = j.at("e_override").get<double>();
  config.lnre.classes = j.at("lnre_classes").get<int>();
  return config;
}

Distribution distribution_from_string(const std::string& text) {
  for (Distribution dist :
       {Distribution::kFull, Distribution::kFirst, Distribution::kMiddle, Distribution::kLast,
        Distribution::kFirstMiddle, Distribution::kMiddleLast}) {
    if (text == to_string(dist)) return dist;
  }
  throw InputError("unknown distribution name: '" + text + "'");
}

}  // namespace

void save_model(const std::string& path, const NameModel& model, const ModelIoOptions& options) {
  const CountTable& table = model.table();
  json j;
  j["format"] = kFormatId;
  j["format_version"] = kModelFormatVersion;
  j["tool_version"] = kVersion;
  j["model"] = std::string(model_id(model.kind()));
  j["mode"] = std::string(to_string(model.mode()));
  j["smoothing"] = smoothing_to_json(model.smoothing());
  j["resolved_alpha"] = model.resolved_alpha();

  if (model.bundle()) {
    json unseen = json::object();
    json lnre = json::object();
    for (const auto& [dist, e] : model.bundle()->unseen_types_map()) {
      unseen[std::string(to_string(dist))] = e;
      if (const LnreModel* fit = model.bundle()->lnre(dist)) {
        lnre[std::string(to_string(dist))] =
            json{{"shape", fit->params().shape},
                 {"lo", fit->params().lo},
                 {"hi", fit->params().hi},
                 {"cost", fit->cost()},
                 {"goodness_of_fit", fit->goodness_of_fit()},
                 {"converged", fit->converged()},
                 {"fitted_tokens", fit->fitted_tokens()},
                 {"fitted_types", fit->fitted_types()},
                 {"spectrum_fingerprint", hex64(fit->spectrum_fingerprint())}};
      }
    }
    j["unseen_types"] = unseen;
    if (!lnre.empty()) j["lnre"] = lnre;
  }

  const CountMap& full = table.map_for(Distribution::kFull);
  json counts;
  counts["total"] = table.total();
  if (full.size() <= options.embed_threshold) {
    std::ostringstream body;
    write_full_counts_tsv(body, table);
    counts["embedded_tsv"] = body.str();
  } else {
    std::filesystem::path sidecar_path = std::filesystem::path(path);
    sidecar_path += ".counts.tsv";
    std::ofstream sidecar(sidecar_path, std::ios::binary);
    if (!sidecar) throw InputError("cannot write '" + sidecar_path.string() + "'");
    write_full_counts_tsv(sidecar, table);
    sidecar.close();
    counts["sidecar"] = sidecar_path.filename().string();
    counts["fingerprint"] = hex64(fnv1a64(read_file(sidecar_path.string())));
  }
  j["counts"] = counts;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw InputError("failed writing '" + path + "'");
}

NameModel load_model(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& error) {
    throw InputError("model file '" + path + "' is not valid JSON: " + error.what());
  }
  try {
    if (j.at("format").get<std::string>() != kFormatId) {
      throw InputError("'" + path + "' is not a model file");
    }
    int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw InputError("model format version " + std::to_string(version) +
                       " is not supported (expected " + std::to_string(kModelFormatVersion) +
                       ")");
    }
    ModelKind kind = model_from_id(j.at("model").get<std::string>());
    NameMode mode = name_mode_from_string(j.at("mode").get<std::string>());
    SmoothingConfig config = smoothing_from_json(j.at("smoothing"));

    const json& counts = j.at("counts");
    std::string counts_tsv;
    if (counts.contains("embedded_tsv")) {
      counts_tsv = counts.at("embedded_tsv").get<std::string>();
    } else {
      std::filesystem::path sidecar_path =
          std::filesystem::path(path).parent_path() / counts.at("sidecar").get<std::string>();
      counts_tsv = read_file(sidecar_path.string());
      std::string expected = counts.at("fingerprint").get<std::string>();
      std::string actual = hex64(fnv1a64(counts_tsv));
      if (expected != actual) {
        throw InputError("sidecar '" + sidecar_path.string() + "' content hash " + actual +
                         " does not match the model file's " + expected);
      }
    }
    std::istringstream body(counts_tsv);
    auto table = std::make_shared<CountTable>(
        CountTable::from_full_counts(read_full_counts_tsv(body, mode), mode));
    if (table->total() != counts.at("total").get<uint64_t>()) {
      throw InputError("count table total does not match the model file");
    }

    std::shared_ptr<const SmoothingBundle> bundle;
    if (j.contains("unseen_types")) {
      std::map<Distribution, double> unseen;
      for (const auto& [key, value] : j.at("unseen_types").items()) {
        unseen[distribution_from_string(key)] = value.get<double>();
      }
      bundle = SmoothingBundle::from_unseen_types(*table, config, unseen);
    }
    return NameModel::fit(kind, std::move(table), config, std::move(bundle));
  } catch (const json::exception& error) {
    throw InputError("model file '" + path + "' is malformed: " + error.what());
  }
}

}  // namespace namepop
