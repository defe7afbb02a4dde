// xtree: fit, predict, risk, synth and blocks commands over the xtree library.
//
// Every command writes its outputs plus run_config.json into --out-dir.
// Exit codes: 0 success, 1 internal error, 2 user or input error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xtree/dataset.hpp"
#include "xtree/ensemble.hpp"
#include "xtree/error.hpp"
#include "xtree/io.hpp"
#include "xtree/risk.hpp"
#include "xtree/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace xtree;

namespace {

constexpr const char* kToolVersion = "1.0.0";

struct FitFlags {
  std::string preset = "case-study";
  std::uint64_t seed = 1;
  std::size_t members = 50;
  double resample_ratio = 1.0;
  double t_crit = 0.05;
  std::size_t min_partition = 30;
  std::size_t max_iters = 40;
  std::size_t threads = 0;
  CLI::Option* t_crit_opt = nullptr;
  CLI::Option* min_partition_opt = nullptr;
};

void add_fit_flags(CLI::App* cmd, FitFlags& f) {
  cmd->add_option("--preset", f.preset, "case-study (t_crit 0.05, min 30) or benchmark (t_crit 0.0001, min 20)")
      ->check(CLI::IsMember({"case-study", "benchmark"}))
      ->capture_default_str();
  cmd->add_option("--seed", f.seed, "master seed")->capture_default_str();
  cmd->add_option("--members", f.members, "ensemble size K")->capture_default_str();
  cmd->add_option("--resample-ratio", f.resample_ratio, "bootstrap size as a fraction of N")->capture_default_str();
  f.t_crit_opt = cmd->add_option("--t-crit", f.t_crit, "minimum relative impurity drop (overrides preset)");
  f.min_partition_opt =
      cmd->add_option("--min-partition", f.min_partition, "minimum partition size (overrides preset)");
  cmd->add_option("--max-iters", f.max_iters, "maximum split iterations per tree")->capture_default_str();
  cmd->add_option("--threads", f.threads, "worker threads, 0 = all cores; does not change results")
      ->capture_default_str();
}

EnsembleConfig resolve(const FitFlags& f) {
  EnsembleConfig c;
  c.k_members = f.members;
  c.resample_ratio = f.resample_ratio;
  c.seed = f.seed;
  c.threads = f.threads;
  c.tree.max_grow_iterations = f.max_iters;
  const bool bench = f.preset == "benchmark";
  c.tree.t_crit = f.t_crit_opt->count() ? f.t_crit : (bench ? 1e-4 : 0.05);
  c.tree.min_partition_size = f.min_partition_opt->count() ? f.min_partition : (bench ? 20 : 30);
  c.validate();
  return c;
}

json config_json(const FitFlags& f, const EnsembleConfig& c) {
  json j = to_json(c);
  j["preset"] = f.preset;
  return j;
}

std::vector<double> checked_quantiles(const std::vector<double>& qs) {
  for (double q : qs) {
    if (!(q > 0.0 && q < 1.0)) throw Error(Errc::InvalidConfig, "quantile " + format_double(q) + " not in (0, 1)");
  }
  return qs;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::FileNotFound, "cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

// The output directory is deliberately left out so that runs into different
// directories produce identical manifests.
void write_manifest(const fs::path& dir, const std::string& command, json inputs, json config,
                    std::vector<std::string> outputs) {
  write_json(dir / "run_config.json", {{"tool", "xtree"},
                                       {"version", kToolVersion},
                                       {"command", command},
                                       {"inputs", std::move(inputs)},
                                       {"config", std::move(config)},
                                       {"outputs", std::move(outputs)}});
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::FileNotFound, "cannot create " + dir.string() + ": " + ec.message());
}

std::string quantile_column(double q) { return "q" + format_double(q); }

// --- fit ---------------------------------------------------------------------

struct FitArgs {
  std::string train;
  std::string out_dir = ".";
  std::string key = "block_start";
  std::string target = "peak";
  std::vector<std::string> covariates;
  FitFlags fit;
};

void run_fit(const FitArgs& a) {
  const EnsembleConfig config = resolve(a.fit);
  TrainingSchema schema{a.key, a.target, a.covariates};
  const Dataset data = load_training_csv(a.train, schema);
  const EnsembleModel model = fit_ensemble(data, config);
  prepare_dir(a.out_dir);
  save_model(model, fs::path(a.out_dir) / "model.json");

  json cfg = config_json(a.fit, config);
  cfg["key_column"] = a.key;
  cfg["target_column"] = a.target;
  cfg["covariates"] = model.schema;
  cfg["rows"] = data.rows();
  write_manifest(a.out_dir, "fit", {{"train", a.train}}, std::move(cfg), {"model.json"});
}

// --- predict -----------------------------------------------------------------

struct PredictArgs {
  std::string model;
  std::string covariates;
  std::string out_dir = ".";
  std::vector<double> quantiles;
};

void run_predict(const PredictArgs& a) {
  const auto qs = checked_quantiles(a.quantiles);
  const EnsembleModel model = load_model(a.model);
  const Dataset xs = load_covariates_csv(a.covariates, model.schema);
  const std::string key_name = read_csv(a.covariates).header.front();

  prepare_dir(a.out_dir);
  auto out = open_out(fs::path(a.out_dir) / "params.csv");
  out << key_name << ",mu,sigma,xi";
  for (double q : qs) out << ',' << quantile_column(q);
  out << '\n';
  for (std::size_t r = 0; r < xs.rows(); ++r) {
    const GevParams p = model.predict(xs.row(r));
    out << xs.row_keys[r] << ',' << format_double(p.mu) << ',' << format_double(p.sigma) << ','
        << format_double(p.xi);
    for (double q : qs) out << ',' << format_double(inverse_cdf(q, p));
    out << '\n';
  }
  out.close();
  write_manifest(a.out_dir, "predict", {{"model", a.model}, {"covariates", a.covariates}},
                 {{"quantiles", qs}, {"rows", xs.rows()}}, {"params.csv"});
}

// --- risk --------------------------------------------------------------------

struct RiskArgs {
  std::string model;
  std::string covariates;
  std::string out_dir = ".";
  double lolp = nerc_daily_lolp();
  std::string utc_offset = "+00:00";
  std::size_t intervals_per_day = 24;
};

void run_risk(const RiskArgs& a) {
  const RiskPolicy policy(a.lolp);
  ReportOptions options;
  options.utc_offset = parse_utc_offset(a.utc_offset);
  options.intervals_per_day = a.intervals_per_day;

  const EnsembleModel model = load_model(a.model);
  const Dataset xs = load_covariates_csv(a.covariates, model.schema);
  std::vector<Instant> instants;
  instants.reserve(xs.rows());
  for (const auto& key : xs.row_keys) instants.push_back(parse_instant(key));
  const RiskReport report = annual_report(model, xs, instants, policy, options);

  prepare_dir(a.out_dir);
  auto out = open_out(fs::path(a.out_dir) / "risk.csv");
  out << "instant,mu,sigma,xi,var,cvar,capacity\n";
  for (const RiskRecord& r : report.records) {
    out << format_instant(r.instant) << ',' << format_double(r.params.mu) << ',' << format_double(r.params.sigma)
        << ',' << format_double(r.params.xi) << ',' << format_double(r.var) << ',' << format_double(r.cvar) << ','
        << format_double(r.capacity) << '\n';
  }
  out.close();

  json daily = json::array();
  for (const DailyEue& d : report.daily) daily.push_back({{"day", format_instant(d.day_start)}, {"eue", d.eue}});
  write_json(fs::path(a.out_dir) / "risk_summary.json", {{"daily_eue", std::move(daily)},
                                                          {"annual_eue", report.annual_eue},
                                                          {"annual_capacity_sum", report.annual_capacity_sum},
                                                          {"lolp", policy.daily_lolp()},
                                                          {"alpha", policy.confidence()}});
  write_manifest(a.out_dir, "risk", {{"model", a.model}, {"covariates", a.covariates}},
                 {{"lolp", policy.daily_lolp()},
                  {"alpha", policy.confidence()},
                  {"utc_offset", a.utc_offset},
                  {"intervals_per_day", a.intervals_per_day}},
                 {"risk.csv", "risk_summary.json"});
}

// --- synth -------------------------------------------------------------------

struct SynthArgs {
  std::size_t n = 1000;
  std::string out_dir = ".";
  std::vector<double> quantiles = synth::default_quantiles();
  std::size_t grid = 200;
  std::size_t n_effective = 1000;
  FitFlags fit;
};

void run_synth(const SynthArgs& a) {
  const auto qs = checked_quantiles(a.quantiles);
  const EnsembleConfig config = resolve(a.fit);
  synth::SyntheticSpec spec;
  spec.n = a.n;
  spec.seed = config.seed;
  const Dataset data = synth::generate(spec);
  const EnsembleModel model = fit_ensemble(data, config);
  const synth::ScoreTable table = synth::evaluate(model, spec, qs, a.grid);

  prepare_dir(a.out_dir);
  {
    auto out = open_out(fs::path(a.out_dir) / "synth_eval.csv");
    synth::write_eval_csv(out, table);
  }
  json scores = synth::scores_json(table);
  scores["n_effective"] = a.n_effective;
  scores["crb_containment"] = synth::crb_containment(table, a.n_effective);
  write_json(fs::path(a.out_dir) / "synth_scores.json", scores);

  json cfg = config_json(a.fit, config);
  cfg["n"] = a.n;
  cfg["x_range"] = {spec.x_min, spec.x_max};
  cfg["quantiles"] = qs;
  cfg["grid"] = a.grid;
  cfg["n_effective"] = a.n_effective;
  write_manifest(a.out_dir, "synth", json::object(), std::move(cfg), {"synth_eval.csv", "synth_scores.json"});
}

// --- blocks ------------------------------------------------------------------

struct BlocksArgs {
  std::string observations;
  std::string out_dir = ".";
  std::string block = "daily";
  std::string origin = "00:00";
  std::string mode = "max";
  std::size_t min_count = 12;
};

std::chrono::seconds parse_block_length(const std::string& text) {
  if (text == "daily") return std::chrono::hours(24);
  if (text == "hourly") return std::chrono::hours(1);
  std::size_t used = 0;
  long hours = 0;
  try {
    hours = std::stol(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used + 1 != text.size() || text.back() != 'h' || hours <= 0) {
    throw Error(Errc::InvalidConfig, "block must be daily, hourly or <N>h, got '" + text + "'");
  }
  return std::chrono::hours(hours);
}

void run_blocks(const BlocksArgs& a) {
  BlockSpec spec;
  spec.block_length = parse_block_length(a.block);
  // An HH:MM origin is a UTC time of day; reuse the offset parser.
  spec.origin = parse_utc_offset("+" + a.origin);
  spec.mode = a.mode == "min" ? ExtremumMode::Min : ExtremumMode::Max;
  spec.min_count = a.min_count;

  const TimeSeries series = load_observations_csv(a.observations);
  const BlockExtrema ex = extract_block_extrema(series, spec);
  for (const DroppedBlock& d : ex.dropped) {
    std::cerr << "dropped block " << format_instant(d.block_start) << ": " << d.count << " observations < "
              << spec.min_count << '\n';
  }

  prepare_dir(a.out_dir);
  auto out = open_out(fs::path(a.out_dir) / "extrema.csv");
  out << "block_start,value\n";
  for (std::size_t i = 0; i < ex.values.size(); ++i) {
    out << format_instant(ex.block_starts[i]) << ',' << format_double(ex.values[i]) << '\n';
  }
  out.close();

  json dropped = json::array();
  for (const DroppedBlock& d : ex.dropped) {
    dropped.push_back({{"block_start", format_instant(d.block_start)}, {"count", d.count}});
  }
  write_manifest(a.out_dir, "blocks", {{"observations", a.observations}},
                 {{"block", a.block},
                  {"origin", a.origin},
                  {"mode", a.mode},
                  {"min_count", a.min_count},
                  {"dropped", std::move(dropped)}},
                 {"extrema.csv"});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional GEV regression trees for peak-demand risk"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "fit a bagged GEV tree ensemble to a training CSV");
  fit_cmd->add_option("train", fit.train, "training CSV (block_start,<covariates>,peak)")->required();
  fit_cmd->add_option("-o,--out-dir", fit.out_dir, "output directory")->capture_default_str();
  fit_cmd->add_option("--key", fit.key, "key column")->capture_default_str();
  fit_cmd->add_option("--target", fit.target, "target column")->capture_default_str();
  fit_cmd->add_option("--covariates", fit.covariates, "covariate columns (default: all others)")->delimiter(',');
  add_fit_flags(fit_cmd, fit.fit);

  PredictArgs predict;
  auto* predict_cmd = app.add_subcommand("predict", "per-row GEV parameters and quantiles");
  predict_cmd->add_option("model", predict.model, "model.json")->required();
  predict_cmd->add_option("covariates", predict.covariates, "covariate CSV, first column is the row key")->required();
  predict_cmd->add_option("-o,--out-dir", predict.out_dir, "output directory")->capture_default_str();
  predict_cmd->add_option("--quantiles", predict.quantiles, "comma-separated probabilities")->delimiter(',');

  RiskArgs risk;
  auto* risk_cmd = app.add_subcommand("risk", "capacity requirement and expected unserved energy");
  risk_cmd->add_option("model", risk.model, "model.json")->required();
  risk_cmd->add_option("covariates", risk.covariates, "covariate CSV keyed by ISO-8601 instants")->required();
  risk_cmd->add_option("-o,--out-dir", risk.out_dir, "output directory")->capture_default_str();
  risk_cmd->add_option("--lolp", risk.lolp, "daily loss-of-load probability eta (default 0.1/365)");
  risk_cmd->add_option("--utc-offset", risk.utc_offset, "fixed local offset for day boundaries")
      ->capture_default_str();
  risk_cmd->add_option("--intervals-per-day", risk.intervals_per_day, "rows per complete day")
      ->capture_default_str();

  SynthArgs synth;
  synth.fit.preset = "benchmark";
  auto* synth_cmd = app.add_subcommand("synth", "synthetic benchmark: generate, fit, evaluate");
  synth_cmd->add_option("--n", synth.n, "training sample size")->capture_default_str();
  synth_cmd->add_option("-o,--out-dir", synth.out_dir, "output directory")->capture_default_str();
  synth_cmd->add_option("--quantiles", synth.quantiles, "comma-separated probabilities")->delimiter(',');
  synth_cmd->add_option("--grid", synth.grid, "evaluation grid points")->capture_default_str();
  synth_cmd->add_option("--n-effective", synth.n_effective, "sample size behind the CRB band")
      ->capture_default_str();
  add_fit_flags(synth_cmd, synth.fit);

  BlocksArgs blocks;
  auto* blocks_cmd = app.add_subcommand("blocks", "block maxima or minima of an observation series");
  blocks_cmd->add_option("observations", blocks.observations, "CSV with header timestamp,value")->required();
  blocks_cmd->add_option("-o,--out-dir", blocks.out_dir, "output directory")->capture_default_str();
  blocks_cmd->add_option("--block", blocks.block, "daily, hourly or <N>h")->capture_default_str();
  blocks_cmd->add_option("--origin", blocks.origin, "UTC time of day of block boundaries, HH:MM")
      ->capture_default_str();
  blocks_cmd->add_option("--mode", blocks.mode, "max or min")
      ->check(CLI::IsMember({"max", "min"}))
      ->capture_default_str();
  blocks_cmd->add_option("--min-count", blocks.min_count, "drop blocks with fewer observations")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (fit_cmd->parsed()) run_fit(fit);
    if (predict_cmd->parsed()) run_predict(predict);
    if (risk_cmd->parsed()) run_risk(risk);
    if (synth_cmd->parsed()) run_synth(synth);
    if (blocks_cmd->parsed()) run_blocks(blocks);
  } catch (const Error& e) {
    std::cerr << "xtree: " << e.what() << '\n';
    return is_user_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "xtree: internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
