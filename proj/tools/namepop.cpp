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

// namepop: name-frequency estimation and record-linkage pipeline.
//
// Subcommand flow: synth -> ingest -> split -> fit -> growth / estimate /
// evaluate / link / sweep. Every command reads and writes plain artifacts in
// one output directory and appends a JSON line describing the run (inputs,
// outputs, byte sizes, content hashes, seeds, timings) to manifest.jsonl
// there. Artifact content is a pure function of inputs and flags, so reruns
// with identical seeds produce byte-identical files; the manifest is the
// append-only log of how each file came to be.
//
// Exit codes: 0 success, 2 malformed input or flags, 3 numeric or fitting
// failure, 1 anything unexpected.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "namepop/counts.hpp"
#include "namepop/csv.hpp"
#include "namepop/error.hpp"
#include "namepop/estimators.hpp"
#include "namepop/evaluation.hpp"
#include "namepop/linkage.hpp"
#include "namepop/lnre.hpp"
#include "namepop/model_io.hpp"
#include "namepop/records.hpp"
#include "namepop/rng.hpp"
#include "namepop/svg.hpp"
#include "namepop/synth.hpp"
#include "namepop/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace namepop;

namespace {

std::string slurp_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

// One run's manifest entry. Inputs are stamped before processing, outputs
// after writing; both carry size and FNV-1a content hash so idempotence is
// checkable from the log alone.
class RunLog {
 public:
  RunLog(std::string command, std::string out_dir, std::vector<std::string> argv)
      : command_(std::move(command)),
        out_dir_(std::move(out_dir)),
        argv_(std::move(argv)),
        start_(std::chrono::steady_clock::now()) {
    fs::create_directories(out_dir_);
  }

  const std::string& out_dir() const { return out_dir_; }
  std::string path(std::string_view name) const { return out_dir_ + "/" + std::string(name); }

  void stamp_input(const std::string& path) { stamp(inputs_, path); }
  void stamp_output(const std::string& path) { stamp(outputs_, path); }
  json& config() { return config_; }

  void commit() {
    auto elapsed = std::chrono::steady_clock::now() - start_;
    json entry;
    entry["command"] = command_;
    entry["argv"] = argv_;
    entry["tool_version"] = std::string(kVersion);
    entry["config"] = config_;
    entry["inputs"] = inputs_;
    entry["outputs"] = outputs_;
    entry["elapsed_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    std::ofstream out(path("manifest.jsonl"), std::ios::binary | std::ios::app);
    if (!out) throw InputError("cannot append to '" + path("manifest.jsonl") + "'");
    out << entry.dump() << '\n';
  }

 private:
  void stamp(json& list, const std::string& path) {
    std::string content = slurp_file(path);
    json entry;
    entry["path"] = path;
    entry["bytes"] = content.size();
    entry["fnv1a64"] = fnv1a64(content);
    list.push_back(entry);
  }

  std::string command_;
  std::string out_dir_;
  std::vector<std::string> argv_;
  json config_ = json::object();
  json inputs_ = json::array();
  json outputs_ = json::array();
  std::chrono::steady_clock::time_point start_;
};

// Writes through a callback, then registers the file in the manifest.
template <typename WriteFn>
void emit(RunLog& log, const std::string& path, WriteFn write_fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_fn(out);
  out.flush();
  if (!out) throw InputError("write failed for '" + path + "'");
  out.close();
  log.stamp_output(path);
}

PersonSet load_persons(RunLog& log, const std::string& path, NameMode mode) {
  log.stamp_input(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_persons_tsv(in, mode);
}

std::vector<NormalizedRecord> load_records(RunLog& log, const std::string& path, NameMode mode) {
  log.stamp_input(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_records_tsv(in, mode);
}

void write_raw_records_tsv(std::ostream& out, std::span<const RawRecord> records) {
  out << "record_id\tperson_id\tfirst\tmiddle\tlast\n";
  for (const RawRecord& record : records) {
    out << record.record_id << '\t' << record.person_id << '\t' << record.first << '\t'
        << record.middle << '\t' << record.last << '\n';
  }
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> items;
  size_t start = 0;
  while (start <= text.size()) {
    size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string item(text.substr(start, comma - start));
    if (!item.empty()) items.push_back(std::move(item));
    start = comma + 1;
  }
  return items;
}

Distribution distribution_from_string(std::string_view text) {
  if (text == "full") return Distribution::kFull;
  if (text == "first") return Distribution::kFirst;
  if (text == "middle") return Distribution::kMiddle;
  if (text == "last") return Distribution::kLast;
  throw InputError("unknown distribution: '" + std::string(text) +
                   "' (expected full, first, middle, or last)");
}

// ---- Flag bags ----
// One shared bag; each subcommand binds only the flags it documents, and only
// one subcommand parses per process.

struct Options {
  std::string out_dir = ".";
  std::string input;
  std::string output;
  std::string format = "tsv";
  std::string mode = "triple";
  std::string rules_path;
  std::string config_path;
  std::string models = "I,II,III,IV,V,VI,VII,VIII,IX";
  std::vector<std::string> model_paths;
  std::string model_path;
  std::string distribution = "full";
  std::string targets;
  std::string grid = "0:1:0.05";
  std::string strategy = "poisson";
  std::string e_semantics = "unseen";
  std::string gt_fallback = "keep";
  bool no_header = false;
  bool lenient = false;
  uint64_t seed = 1;
  double fraction = 0.5;
  double alpha = 1.0;
  uint64_t katz_cutoff = 3;
  double growth_factor = 2.0;
  double e_override = 0.0;
  int lnre_classes = 15;
  uint64_t embed_threshold = 10000;
  double threshold = 0.5;
  uint64_t population = 0;
  std::optional<uint64_t> synth_population;
  std::optional<double> coupling;
  std::optional<double> duplication_p;
  std::optional<uint64_t> synth_seed;
};

std::string resolve_input(const Options& opt, const RunLog& log, std::string_view fallback) {
  return opt.input.empty() ? log.path(fallback) : opt.input;
}

// ---- Commands ----

void cmd_synth(const Options& opt, RunLog& log) {
  SynthConfig config;
  if (!opt.config_path.empty()) {
    log.stamp_input(opt.config_path);
    config = SynthConfig::load(opt.config_path);
  }
  if (opt.synth_population) config.population = *opt.synth_population;
  if (opt.synth_seed) config.seed = *opt.synth_seed;
  if (opt.coupling) config.coupling = *opt.coupling;
  if (opt.duplication_p) config.duplication_p = *opt.duplication_p;
  config.mode = name_mode_from_string(opt.mode);
  config.validate();

  PersonSet persons = generate_population(config);
  RecordSet records = generate_records(persons, config);

  emit(log, log.path("persons.tsv"), [&](std::ostream& out) { write_persons_tsv(out, persons); });
  emit(log, log.path("records.tsv"),
       [&](std::ostream& out) { write_raw_records_tsv(out, records.records); });

  log.config() = {{"population", config.population},
                  {"mode", std::string(to_string(config.mode))},
                  {"first_types", config.first.types},
                  {"first_exponent", config.first.exponent},
                  {"middle_types", config.middle.types},
                  {"middle_exponent", config.middle.exponent},
                  {"last_types", config.last.types},
                  {"last_exponent", config.last.exponent},
                  {"coupling", config.coupling},
                  {"duplication_p", config.duplication_p},
                  {"seed", config.seed}};
  std::cout << "synth: " << persons.size() << " persons, " << records.records.size()
            << " records -> " << log.path("persons.tsv") << ", " << log.path("records.tsv")
            << "\n";
}

void cmd_ingest(const Options& opt, RunLog& log) {
  FormatConfig format;
  if (opt.format == "tsv") {
    format.delimiter = '\t';
  } else if (opt.format == "csv") {
    format.delimiter = ',';
  } else {
    throw InputError("unknown format: '" + opt.format + "' (expected tsv or csv)");
  }
  format.has_header = !opt.no_header;
  format.strict = !opt.lenient;
  format.mode = name_mode_from_string(opt.mode);

  NormalizationRules rules;
  rules.mode = format.mode;
  if (!opt.rules_path.empty()) {
    log.stamp_input(opt.rules_path);
    rules = NormalizationRules::load(opt.rules_path, format.mode);
  }

  if (opt.input.empty()) throw InputError("ingest requires --input");
  log.stamp_input(opt.input);
  RecordSet raw = parse_records_file(opt.input, format);
  std::vector<NormalizedRecord> normalized = normalize_records(raw, rules);
  PersonSet persons = dedupe_persons(normalized, format.mode);

  emit(log, log.path("normalized.tsv"),
       [&](std::ostream& out) { write_records_tsv(out, normalized); });
  emit(log, log.path("persons.tsv"), [&](std::ostream& out) { write_persons_tsv(out, persons); });

  log.config() = {{"format", opt.format},
                  {"mode", opt.mode},
                  {"has_header", format.has_header},
                  {"strict", format.strict},
                  {"suffix_rules", rules.rules.size()},
                  {"rows_total", raw.stats.rows_total},
                  {"rows_kept", raw.stats.rows_kept},
                  {"rows_skipped", raw.stats.rows_skipped},
                  {"persons", persons.size()},
                  {"name_conflicts", persons.name_conflicts}};
  for (const std::string& issue : raw.stats.issues) std::cerr << "ingest: " << issue << "\n";
  std::cout << "ingest: " << raw.stats.rows_kept << "/" << raw.stats.rows_total << " rows, "
            << persons.size() << " persons (" << persons.name_conflicts
            << " name conflicts) -> " << log.path("persons.tsv") << "\n";
}

void cmd_split(const Options& opt, RunLog& log) {
  NameMode mode = name_mode_from_string(opt.mode);
  PersonSet persons = load_persons(log, resolve_input(opt, log, "persons.tsv"), mode);
  auto [train, test] = split_train_test(persons, opt.fraction, opt.seed);

  emit(log, log.path("train.tsv"), [&, &train = train](std::ostream& out) {
    write_persons_tsv(out, train);
  });
  emit(log, log.path("test.tsv"), [&, &test = test](std::ostream& out) {
    write_persons_tsv(out, test);
  });

  log.config() = {{"fraction", opt.fraction}, {"seed", opt.seed}, {"mode", opt.mode}};
  std::cout << "split: " << train.size() << " train / " << test.size() << " test\n";
}

SmoothingConfig smoothing_from_flags(const Options& opt) {
  SmoothingConfig config;
  config.alpha = opt.alpha;
  config.katz_cutoff = opt.katz_cutoff;
  config.gt_fallback = gt_fallback_from_string(opt.gt_fallback);
  config.unseen_semantics = unseen_semantics_from_string(opt.e_semantics);
  config.growth_factor = opt.growth_factor;
  config.e_override = opt.e_override;
  config.lnre.classes = opt.lnre_classes;
  return config;
}

void cmd_fit(const Options& opt, RunLog& log) {
  NameMode mode = name_mode_from_string(opt.mode);
  PersonSet train = load_persons(log, resolve_input(opt, log, "train.tsv"), mode);
  auto table = std::make_shared<const CountTable>(CountTable::build(train));
  SmoothingConfig config = smoothing_from_flags(opt);

  std::vector<ModelKind> kinds;
  for (const std::string& id : split_list(opt.models)) kinds.push_back(model_from_id(id));
  if (kinds.empty()) throw InputError("fit requires at least one model id");

  // VII and VIII share one set of population fits; if those fits are
  // impossible the two models fail while the rest still run.
  std::shared_ptr<const SmoothingBundle> bundle;
  std::string bundle_error;
  bool needs_bundle = false;
  for (ModelKind kind : kinds) {
    needs_bundle |= kind == ModelKind::kGoodTuringChain || kind == ModelKind::kKatzChain;
  }
  if (needs_bundle) {
    try {
      bundle = SmoothingBundle::build(*table, config);
    } catch (const ComputeError& error) {
      bundle_error = error.what();
    }
  }

  ModelIoOptions io_options;
  io_options.embed_threshold = opt.embed_threshold;
  size_t fitted = 0;
  json failures = json::array();
  for (ModelKind kind : kinds) {
    std::string id(model_id(kind));
    bool smoothed_chain =
        kind == ModelKind::kGoodTuringChain || kind == ModelKind::kKatzChain;
    try {
      if (smoothed_chain && !bundle_error.empty()) {
        throw ComputeError("population fit unavailable: " + bundle_error);
      }
      NameModel model = NameModel::fit(kind, table, config, smoothed_chain ? bundle : nullptr);
      std::string path = log.path("model_" + id + ".json");
      save_model(path, model, io_options);
      log.stamp_output(path);
      std::string sidecar = path + ".counts.tsv";
      if (fs::exists(sidecar)) log.stamp_output(sidecar);
      std::cout << "fit " << id << " -> " << path << "\n";
      ++fitted;
    } catch (const ComputeError& error) {
      std::cerr << "fit failed for model " << id << ": " << error.what() << "\n";
      failures.push_back({{"model", id}, {"error", error.what()}});
    }
  }
  if (fitted == 0) throw ComputeError("no requested model could be fitted");

  log.config() = {{"models", opt.models},
                  {"mode", opt.mode},
                  {"alpha", opt.alpha},
                  {"katz_cutoff", opt.katz_cutoff},
                  {"gt_fallback", opt.gt_fallback},
                  {"e_semantics", opt.e_semantics},
                  {"growth_factor", opt.growth_factor},
                  {"e_override", opt.e_override},
                  {"lnre_classes", opt.lnre_classes},
                  {"embed_threshold", opt.embed_threshold},
                  {"train_persons", train.size()},
                  {"failures", failures}};
}

void cmd_growth(const Options& opt, RunLog& log) {
  NameMode mode = name_mode_from_string(opt.mode);
  PersonSet persons = load_persons(log, resolve_input(opt, log, "train.tsv"), mode);
  CountTable table = CountTable::build(persons);
  Distribution dist = distribution_from_string(opt.distribution);
  FrequencySpectrum observed = spectrum(table, dist);

  emit(log, log.path("spectrum_" + opt.distribution + ".csv"),
       [&](std::ostream& out) { write_spectrum_csv(out, observed); });

  LnreFitConfig fit_config;
  fit_config.classes = opt.lnre_classes;
  LnreModel model = fit_lnre(observed, fit_config);

  std::vector<uint64_t> targets;
  for (const std::string& item : split_list(opt.targets)) targets.push_back(parse_u64(item));
  if (targets.empty()) targets.push_back(2 * observed.tokens());

  std::vector<GrowthPrediction> rows;
  for (uint64_t target : targets) {
    rows.push_back(predict_growth(model, observed.types(), target));
  }
  emit(log, log.path("growth.csv"), [&](std::ostream& out) { write_growth_csv(out, rows); });

  LineChart chart("vocabulary growth: " + opt.distribution, "tokens", "types");
  std::vector<std::pair<double, double>> v_points, v1_points;
  for (const GrowthPrediction& row : rows) {
    v_points.emplace_back(static_cast<double>(row.target_tokens), row.expected_types);
    v1_points.emplace_back(static_cast<double>(row.target_tokens), row.expected_hapaxes);
  }
  chart.add_series("expected_V", std::move(v_points));
  chart.add_series("expected_V1", std::move(v1_points));
  emit(log, log.path("growth.svg"), [&](std::ostream& out) { chart.render(out); });

  const FzmParams& params = model.params();
  log.config() = {{"distribution", opt.distribution},
                  {"mode", opt.mode},
                  {"lnre_classes", opt.lnre_classes},
                  {"tokens", observed.tokens()},
                  {"types", observed.types()},
                  {"shape", params.shape},
                  {"lo", params.lo},
                  {"hi", params.hi},
                  {"cost", model.cost()},
                  {"goodness_of_fit", model.goodness_of_fit()},
                  {"converged", model.converged()}};
  std::cout << "growth: " << opt.distribution << " N=" << observed.tokens()
            << " V=" << observed.types() << " shape=" << format_double(params.shape)
            << " S=" << format_double(model.population_types())
            << " goodness=" << format_double(model.goodness_of_fit()) << "\n";
}

void cmd_estimate(const Options& opt, RunLog& log) {
  if (opt.model_path.empty()) throw InputError("estimate requires --model");
  if (opt.input.empty()) throw InputError("estimate requires --input");
  log.stamp_input(opt.model_path);
  NameModel model = load_model(opt.model_path);
  NameMode mode = model.mode();

  NormalizationRules rules;
  rules.mode = mode;
  if (!opt.rules_path.empty()) {
    log.stamp_input(opt.rules_path);
    rules = NormalizationRules::load(opt.rules_path, mode);
  }

  uint64_t population = opt.population > 0 ? opt.population : model.table().total();
  size_t expected_fields = mode == NameMode::kTriple ? 3 : 2;

  log.stamp_input(opt.input);
  std::ifstream in(opt.input, std::ios::binary);
  if (!in) throw InputError("cannot open '" + opt.input + "'");

  std::vector<NameKey> names;
  std::string line;
  uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_delimited(line, '\t');
    if (fields.size() != expected_fields) {
      throw InputError("names line " + std::to_string(line_no) + ": expected " +
                       std::to_string(expected_fields) + " tab-separated fields");
    }
    bool apply_rules = !rules.rules.empty();
    NameKey key;
    key.first = normalize_component(fields[0], rules.rules, false);
    if (mode == NameMode::kTriple) {
      key.middle = normalize_component(fields[1], rules.rules, apply_rules);
      key.last = normalize_component(fields[2], rules.rules, apply_rules);
    } else {
      key.last = normalize_component(fields[1], rules.rules, apply_rules);
    }
    names.push_back(std::move(key));
  }

  emit(log, log.path("estimates.csv"), [&](std::ostream& out) {
    out << "first,middle,last,probability,expected_bearers\n";
    for (const NameKey& name : names) {
      out << csv_escape(name.first, ',') << ',' << csv_escape(name.middle, ',') << ','
          << csv_escape(name.last, ',') << ',' << format_double(model.probability(name)) << ','
          << format_double(model.estimate_count(name, population)) << '\n';
    }
  });

  log.config() = {{"model", opt.model_path},
                  {"model_kind", std::string(model_id(model.kind()))},
                  {"population", population},
                  {"names", names.size()}};
  std::cout << "estimate: " << names.size() << " names under model "
            << model_id(model.kind()) << " -> " << log.path("estimates.csv") << "\n";
}

void cmd_evaluate(const Options& opt, RunLog& log) {
  if (opt.model_paths.empty()) throw InputError("evaluate requires at least one --model");
  std::vector<NameModel> models;
  for (const std::string& path : opt.model_paths) {
    log.stamp_input(path);
    models.push_back(load_model(path));
    if (models.back().mode() != models.front().mode()) {
      throw InputError("models mix triple and double mode");
    }
  }

  PersonSet test = load_persons(log, resolve_input(opt, log, "test.tsv"), models.front().mode());
  std::vector<EvalReport> reports = compare_models(models, test);

  emit(log, log.path("eval.csv"), [&](std::ostream& out) { write_eval_csv(out, reports); });
  std::cout << render_eval_table(reports);

  json ids = json::array();
  for (const NameModel& model : models) ids.push_back(std::string(model_id(model.kind())));
  log.config() = {{"models", ids}, {"test_persons", test.size()}};
}

LinkageConfig linkage_from_flags(const Options& opt, size_t record_count) {
  LinkageConfig config;
  config.threshold = opt.threshold;
  config.strategy = uniqueness_strategy_from_string(opt.strategy);
  config.population_size = opt.population > 0 ? opt.population : record_count;
  return config;
}

void cmd_link(const Options& opt, RunLog& log) {
  if (opt.model_path.empty()) throw InputError("link requires --model");
  log.stamp_input(opt.model_path);
  NameModel model = load_model(opt.model_path);
  std::vector<NormalizedRecord> records =
      load_records(log, resolve_input(opt, log, "normalized.tsv"), model.mode());

  LinkageConfig config = linkage_from_flags(opt, records.size());
  LinkageResult result = link(records, model, config);

  emit(log, log.path("linkage.csv"),
       [&](std::ostream& out) { write_sweep_csv(out, std::span(&result, 1)); });

  log.config() = {{"model", opt.model_path},
                  {"threshold", config.threshold},
                  {"strategy", opt.strategy},
                  {"population", config.population_size},
                  {"records", records.size()}};
  std::cout << "link: t=" << format_double(result.threshold) << " linked=" << result.linked_pairs
            << " correct=" << result.correct_pairs
            << " precision=" << format_double(result.precision)
            << " recall=" << format_double(result.recall) << "\n";
}

void cmd_sweep(const Options& opt, RunLog& log) {
  if (opt.model_path.empty()) throw InputError("sweep requires --model");
  log.stamp_input(opt.model_path);
  NameModel model = load_model(opt.model_path);
  std::vector<NormalizedRecord> records =
      load_records(log, resolve_input(opt, log, "normalized.tsv"), model.mode());

  std::vector<double> grid = parse_grid(opt.grid);
  UniquenessStrategy strategy = uniqueness_strategy_from_string(opt.strategy);
  uint64_t population = opt.population > 0 ? opt.population : records.size();
  std::vector<LinkageResult> results = sweep(records, model, grid, strategy, population);

  emit(log, log.path("sweep.csv"), [&](std::ostream& out) { write_sweep_csv(out, results); });

  LineChart chart("linkage threshold sweep", "t", "rate");
  std::vector<std::pair<double, double>> precision_points, recall_points;
  for (const LinkageResult& result : results) {
    precision_points.emplace_back(result.threshold, result.precision);
    recall_points.emplace_back(result.threshold, result.recall);
  }
  chart.add_series("precision", std::move(precision_points));
  chart.add_series("recall", std::move(recall_points));
  emit(log, log.path("sweep.svg"), [&](std::ostream& out) { chart.render(out); });

  log.config() = {{"model", opt.model_path},
                  {"grid", opt.grid},
                  {"strategy", opt.strategy},
                  {"population", population},
                  {"records", records.size()}};
  std::cout << "sweep: " << results.size() << " thresholds -> " << log.path("sweep.csv") << ", "
            << log.path("sweep.svg") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  std::vector<std::string> argv_copy(argv, argv + argc);

  CLI::App app{"name frequency estimation and record linkage toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  auto add_out_dir = [&](CLI::App* sub) {
    sub->add_option("--out-dir", opt.out_dir, "artifact directory")
        ->envname("NAMEPOP_OUT_DIR");
  };
  auto add_mode = [&](CLI::App* sub) {
    sub->add_option("--mode", opt.mode, "name shape: triple or double");
  };

  CLI::App* synth = app.add_subcommand("synth", "generate a seeded synthetic population");
  add_out_dir(synth);
  add_mode(synth);
  synth->add_option("--config", opt.config_path, "key = value config file");
  synth->add_option("--population", opt.synth_population, "number of persons");
  synth->add_option("--seed", opt.synth_seed, "generator seed");
  synth->add_option("--coupling", opt.coupling, "component dependency strength in [0,1]");
  synth->add_option("--duplication-p", opt.duplication_p,
                    "geometric records-per-person parameter in (0,1]");

  CLI::App* ingest = app.add_subcommand("ingest", "parse, normalize, and deduplicate records");
  add_out_dir(ingest);
  add_mode(ingest);
  ingest->add_option("--input", opt.input, "raw record file")->required();
  ingest->add_option("--format", opt.format, "tsv or csv");
  ingest->add_flag("--no-header", opt.no_header, "columns by position instead of header names");
  ingest->add_flag("--lenient", opt.lenient, "skip malformed rows instead of aborting");
  ingest->add_option("--rules", opt.rules_path, "suffix rewrite rule file");

  CLI::App* split = app.add_subcommand("split", "split persons into train and test halves");
  add_out_dir(split);
  add_mode(split);
  split->add_option("--input", opt.input, "person table (default <out-dir>/persons.tsv)");
  split->add_option("--fraction", opt.fraction, "training fraction in [0,1]");
  split->add_option("--seed", opt.seed, "split seed");

  CLI::App* fit = app.add_subcommand("fit", "fit estimation models on a training set");
  add_out_dir(fit);
  add_mode(fit);
  fit->add_option("--input", opt.input, "training persons (default <out-dir>/train.tsv)");
  fit->add_option("--models", opt.models, "comma-separated model ids I..IX");
  fit->add_option("--alpha", opt.alpha, "additive smoothing constant");
  fit->add_option("--katz-cutoff", opt.katz_cutoff, "counts above this keep their MLE");
  fit->add_option("--gt-fallback", opt.gt_fallback,
                  "empty spectrum class handling: keep, interpolate, or strict");
  fit->add_option("--e-semantics", opt.e_semantics,
                  "unseen-type total: unseen or hapax");
  fit->add_option("--growth-factor", opt.growth_factor,
                  "population fits are evaluated at this multiple of N");
  fit->add_option("--e-override", opt.e_override, "fixed unseen-type total (skips fitting)");
  fit->add_option("--lnre-classes", opt.lnre_classes, "spectrum classes entering the fit cost");
  fit->add_option("--embed-threshold", opt.embed_threshold,
                  "largest vocabulary embedded in the model file");

  CLI::App* growth = app.add_subcommand("growth", "fit a population model and extrapolate");
  add_out_dir(growth);
  add_mode(growth);
  growth->add_option("--input", opt.input, "person table (default <out-dir>/train.tsv)");
  growth->add_option("--distribution", opt.distribution, "full, first, middle, or last");
  growth->add_option("--targets", opt.targets,
                     "comma-separated token totals (default: twice the observed N)");
  growth->add_option("--lnre-classes", opt.lnre_classes, "spectrum classes entering the fit cost");

  CLI::App* estimate = app.add_subcommand("estimate", "score names under a fitted model");
  add_out_dir(estimate);
  estimate->add_option("--model", opt.model_path, "model file")->required();
  estimate->add_option("--input", opt.input, "tab-separated name components, one name per line")
      ->required();
  estimate->add_option("--population", opt.population,
                       "population the counts scale to (default: training total)");
  estimate->add_option("--rules", opt.rules_path, "suffix rewrite rule file");

  CLI::App* evaluate = app.add_subcommand("evaluate", "bucketed error report on a test set");
  add_out_dir(evaluate);
  evaluate->add_option("--input", opt.input, "test persons (default <out-dir>/test.tsv)");
  evaluate->add_option("--model", opt.model_paths, "model file (repeatable)")->required();

  CLI::App* link = app.add_subcommand("link", "link same-name records at one threshold");
  add_out_dir(link);
  link->add_option("--input", opt.input, "normalized records (default <out-dir>/normalized.tsv)");
  link->add_option("--model", opt.model_path, "model file")->required();
  link->add_option("--threshold", opt.threshold, "uniqueness threshold in [0,1]");
  link->add_option("--strategy", opt.strategy, "uniqueness scoring: poisson or count");
  link->add_option("--population", opt.population,
                   "population the records cover (default: record count)");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "linkage threshold sweep with curves");
  add_out_dir(sweep_cmd);
  sweep_cmd->add_option("--input", opt.input,
                        "normalized records (default <out-dir>/normalized.tsv)");
  sweep_cmd->add_option("--model", opt.model_path, "model file")->required();
  sweep_cmd->add_option("--grid", opt.grid, "threshold grid lo:hi:step");
  sweep_cmd->add_option("--strategy", opt.strategy, "uniqueness scoring: poisson or count");
  sweep_cmd->add_option("--population", opt.population,
                        "population the records cover (default: record count)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    int code = app.exit(error);
    return code == 0 ? 0 : 2;
  } catch (const InputError& error) {
    std::cerr << "input error: " << error.what() << "\n";
    return 2;
  } catch (const ComputeError& error) {
    std::cerr << "compute error: " << error.what() << "\n";
    return 3;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }

  try {
    auto run = [&](const char* name, auto&& body) {
      RunLog log(name, opt.out_dir, argv_copy);
      body(opt, log);
      log.commit();
    };
    if (synth->parsed()) run("synth", cmd_synth);
    if (ingest->parsed()) run("ingest", cmd_ingest);
    if (split->parsed()) run("split", cmd_split);
    if (fit->parsed()) run("fit", cmd_fit);
    if (growth->parsed()) run("growth", cmd_growth);
    if (estimate->parsed()) run("estimate", cmd_estimate);
    if (evaluate->parsed()) run("evaluate", cmd_evaluate);
    if (link->parsed()) run("link", cmd_link);
    if (sweep_cmd->parsed()) run("sweep", cmd_sweep);
  } catch (const InputError& error) {
    std::cerr << "input error: " << error.what() << "\n";
    return 2;
  } catch (const ComputeError& error) {
    std::cerr << "compute error: " << error.what() << "\n";
    return 3;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
