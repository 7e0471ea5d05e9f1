// Copyright 2026 The driftwatch authors
// SPDX-License-Identifier: Apache-2.0
//
// driftwatch CLI: baseline building, live monitoring, offline replay,
// stream simulation, threshold calibration and experiment regeneration.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "driftwatch/baseline.hpp"
#include "driftwatch/errors.hpp"
#include "driftwatch/io.hpp"
#include "driftwatch/monitor.hpp"
#include "driftwatch/replay.hpp"
#include "driftwatch/service.hpp"
#include "driftwatch/simgen.hpp"

namespace dw = driftwatch;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitBug = 3;

void print_error(const std::string& code, const std::string& message) {
  nlohmann::json j = {{"error", code}, {"message", message}};
  std::cerr << j.dump() << '\n';
}

std::string resolve_config_path(std::string from_flag) {
  if (!from_flag.empty()) return from_flag;
  if (const char* env = std::getenv("DRIFTWATCH_CONFIG")) return env;
  return "";
}

// CSV observation input: header "ts,<feature>,<feature>,..."; one row per
// observation.
std::vector<dw::Observation> read_csv_observations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dw::IoError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw dw::IoError("empty csv: " + path);
  std::vector<std::string> columns;
  {
    std::istringstream hdr(line);
    std::string col;
    while (std::getline(hdr, col, ',')) columns.push_back(col);
  }
  if (columns.size() < 2 || columns[0] != "ts") {
    throw dw::IoError("csv header must start with 'ts': " + path);
  }
  std::vector<dw::Observation> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    dw::Observation o;
    std::size_t i = 0;
    while (std::getline(row, cell, ',')) {
      if (i == 0) {
        o.ts = std::stoll(cell);
      } else if (i < columns.size()) {
        o.values[columns[i]] = std::stod(cell);
      }
      ++i;
    }
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<dw::Observation> read_observations(const std::string& path) {
  if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
    return read_csv_observations(path);
  }
  auto result = dw::read_ndjson_file(path);
  if (result.first_error) {
    std::cerr << "warning: dropped " << result.dropped
              << " malformed lines (first at line " << result.first_error->line
              << ": " << result.first_error->message << ")\n";
  }
  return std::move(result.observations);
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dw::IoError("cannot open: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw dw::BadConfig(std::string("json parse error in ") + path + ": " +
                        e.what());
  }
  return j;
}

// Per-feature drift-free scores from a replay with alerting disabled.
std::map<std::string, std::vector<double>> collect_scores(
    const std::vector<dw::Observation>& observations, dw::MonitorConfig config,
    const dw::BaselineSet& baseline) {
  dw::AlertPolicy quiet;  // default threshold is +inf: no breaches
  auto result = dw::replay(observations, config, quiet, baseline);
  std::map<std::string, std::vector<double>> scores;
  for (const auto& r : result.reports) scores[r.feature].push_back(r.score);
  return scores;
}

int cmd_baseline_build(const std::string& input, const std::string& config_path,
                       const std::string& out, const std::string& export_json) {
  auto observations = read_observations(input);
  dw::BaselineBuildConfig cfg;
  if (!config_path.empty()) {
    const auto j = load_json(config_path);
    const auto& b = j.contains("baseline_build") ? j["baseline_build"] : j;
    if (b.contains("bucket_minutes")) cfg.bucket_minutes = b["bucket_minutes"];
    if (b.contains("sample_cap")) cfg.sample_cap = b["sample_cap"];
    if (b.contains("seed")) cfg.seed = b["seed"];
    if (b.contains("seasonal")) cfg.seasonal = b["seasonal"];
  }
  auto baseline = dw::BaselineSet::build(observations, cfg);
  baseline.save(out);
  if (!export_json.empty()) {
    std::ofstream je(export_json, std::ios::trunc);
    if (!je) throw dw::IoError("cannot open for writing: " + export_json);
    je << baseline.to_json() << '\n';
  }
  std::cout << "baseline written to " << out << " ("
            << baseline.feature_names().size() << " features)\n";
  return kExitOk;
}

int cmd_replay(const std::string& input, const std::string& baseline_path,
               const std::string& config_path, const std::string& report_path,
               const std::string& alerts_path) {
  auto observations = read_observations(input);
  auto baseline = dw::BaselineSet::load(baseline_path);
  auto cfg = dw::load_service_config(config_path);
  auto result = dw::replay(observations, cfg.monitor, cfg.policy, baseline);

  dw::ReportCsvWriter writer(report_path);
  for (const auto& r : result.reports) writer.write(r);
  writer.flush();

  if (!alerts_path.empty()) {
    std::ofstream out(alerts_path, std::ios::trunc);
    if (!out) throw dw::IoError("cannot open for writing: " + alerts_path);
    for (const auto& a : result.alerts) out << dw::alert_to_json(a).dump() << '\n';
  }
  std::cout << result.reports.size() << " reports, " << result.alerts.size()
            << " alerts\n";
  return kExitOk;
}

int cmd_calibrate(const std::string& input, const std::string& baseline_path,
                  const std::string& config_path, double quantile, double safety) {
  auto observations = read_observations(input);
  auto baseline = dw::BaselineSet::load(baseline_path);
  auto cfg = dw::load_service_config(config_path);
  auto scores = collect_scores(observations, cfg.monitor, baseline);
  auto thresholds = dw::calibrate(scores, quantile, safety);
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [feature, t] : thresholds) j[feature] = t;
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_monitor_run(const std::string& config_path, const std::string& baseline_path,
                    const std::string& listen, const std::string& report_path) {
  auto cfg = dw::load_service_config(config_path);
  if (!listen.empty()) cfg.listen = listen;
  if (!baseline_path.empty()) cfg.baseline_path = baseline_path;
  if (cfg.baseline_path.empty()) {
    throw dw::BadConfig("no baseline file given (--baseline or config)");
  }
  if (cfg.sinks.empty()) {
    throw dw::BadConfig("config needs at least one alert sink");
  }
  auto baseline = dw::BaselineSet::load(cfg.baseline_path);
  dw::MonitorService service(cfg, std::move(baseline), report_path);
  std::cout << "listening on " << service.config().listen << '\n';
  if (!service.run()) {
    throw dw::IoError("cannot bind " + service.config().listen);
  }
  return kExitOk;
}

int cmd_report_figure4(const std::string& out_path) {
  // Stationary and shifted streams against a 10k same-distribution baseline,
  // scored with window sizes 10 / 100 / 1000 every 50 observations.
  dw::simgen::StationaryParams base_params;
  base_params.count = 10000;
  base_params.seed = 201;
  auto baseline = dw::BaselineSet::build(dw::simgen::gen_stationary(base_params),
                                         dw::BaselineBuildConfig{});

  dw::simgen::StationaryParams stat;
  stat.count = 4000;
  stat.seed = 101;
  const auto stationary = dw::simgen::gen_stationary(stat);
  dw::simgen::ShiftParams shift;
  shift.seed = 101;
  const auto shifted = dw::simgen::gen_shift(shift);

  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw dw::IoError("cannot open for writing: " + out_path);
  out << "scenario,n,t,score\n";
  for (const char* scenario : {"stationary", "shift"}) {
    const auto& stream =
        std::string(scenario) == "stationary" ? stationary : shifted;
    for (std::size_t n : {10u, 100u, 1000u}) {
      dw::MonitorConfig cfg;
      cfg.features = {"value"};
      cfg.default_window_n = n;
      cfg.cadence = dw::EvalCadence::observations(50);
      cfg.evaluate_partial = true;
      auto result = dw::replay(stream, cfg, dw::AlertPolicy{}, baseline);
      std::size_t tick = 0;
      for (const auto& r : result.reports) {
        ++tick;
        char score[40];
        std::snprintf(score, sizeof(score), "%.9g", r.score);
        out << scenario << ',' << n << ',' << tick * 50 << ',' << score << '\n';
      }
    }
  }
  std::cout << "figure4 data written to " << out_path << '\n';
  return kExitOk;
}

int cmd_report_figure5(const std::string& out_path) {
  // One seasonal live day scored against a 30-day baseline, once globally
  // and once against time-of-day buckets.
  dw::simgen::SeasonalParams train;
  train.days = 30;
  train.seed = 301;
  dw::BaselineBuildConfig bcfg;
  bcfg.seasonal = true;
  auto baseline = dw::BaselineSet::build(dw::simgen::gen_seasonal(train), bcfg);

  dw::simgen::SeasonalParams live;
  live.days = 1;
  live.seed = 302;
  const auto stream = dw::simgen::gen_seasonal(live);

  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw dw::IoError("cannot open for writing: " + out_path);
  out << "mode,t,score\n";
  for (const bool seasonal : {false, true}) {
    dw::MonitorConfig cfg;
    cfg.features = {live.feature};
    cfg.default_window_n = 1000;
    cfg.cadence = dw::EvalCadence::observations(100);
    cfg.seasonal_baseline = seasonal;
    auto result = dw::replay(stream, cfg, dw::AlertPolicy{}, baseline);
    std::size_t tick = 0;
    for (const auto& r : result.reports) {
      ++tick;
      char score[40];
      std::snprintf(score, sizeof(score), "%.9g", r.score);
      out << (seasonal ? "seasonal" : "global") << ',' << tick * 100 << ','
          << score << '\n';
    }
  }
  std::cout << "figure5 data written to " << out_path << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"driftwatch: streaming feature-drift monitoring"};
  app.require_subcommand(1);

  // baseline build / export
  auto* baseline_cmd = app.add_subcommand("baseline", "baseline file operations");
  baseline_cmd->require_subcommand(1);
  std::string bb_input, bb_config, bb_out, bb_export;
  auto* bb = baseline_cmd->add_subcommand("build", "build a baseline from observations");
  bb->add_option("--input", bb_input, "observations (.ndjson or .csv)")->required();
  bb->add_option("--config", bb_config, "build config json");
  bb->add_option("--out", bb_out, "output .dwb path")->required();
  bb->add_option("--export-json", bb_export, "also write the JSON export");
  std::string be_in, be_out;
  auto* be = baseline_cmd->add_subcommand("export", "export a .dwb file as JSON");
  be->add_option("--in", be_in, "input .dwb path")->required();
  be->add_option("--out", be_out, "output .json path")->required();

  // monitor run
  auto* monitor_cmd = app.add_subcommand("monitor", "run the monitoring service");
  monitor_cmd->require_subcommand(1);
  std::string mr_config, mr_baseline, mr_listen, mr_report;
  auto* mr = monitor_cmd->add_subcommand("run", "start the HTTP ingestion service");
  mr->add_option("--config", mr_config, "service config json (or DRIFTWATCH_CONFIG)");
  mr->add_option("--baseline", mr_baseline, "baseline .dwb file");
  mr->add_option("--listen", mr_listen, "listen address host:port");
  mr->add_option("--report", mr_report, "report CSV output path");

  // replay
  std::string rp_input, rp_baseline, rp_config, rp_report, rp_alerts;
  auto* rp = app.add_subcommand("replay", "offline event-time run over a recorded stream");
  rp->add_option("--input", rp_input, "observations (.ndjson or .csv)")->required();
  rp->add_option("--baseline", rp_baseline, "baseline .dwb file")->required();
  rp->add_option("--config", rp_config, "service config json (or DRIFTWATCH_CONFIG)");
  rp->add_option("--report", rp_report, "report CSV output path")->required();
  rp->add_option("--alerts", rp_alerts, "alert JSONL output path");

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a synthetic stream");
  sim->require_subcommand(1);
  uint64_t sim_seed = 0, sim_count = 0;
  std::string sim_out;
  double st_mu = 100.0, st_sigma2 = 10.0;
  auto* sim_st = sim->add_subcommand("stationary", "i.i.d. Gaussian stream");
  sim_st->add_option("--mu", st_mu);
  sim_st->add_option("--sigma2", st_sigma2);
  sim_st->add_option("--count", sim_count)->default_val(10000);
  sim_st->add_option("--seed", sim_seed);
  sim_st->add_option("--out", sim_out)->required();
  double sh_mu1 = 100.0, sh_mu2 = 90.0, sh_sigma2 = 10.0;
  uint64_t sh_tshift = 2000;
  auto* sim_sh = sim->add_subcommand("shift", "Gaussian stream with a mean shift");
  sim_sh->add_option("--mu1", sh_mu1);
  sim_sh->add_option("--mu2", sh_mu2);
  sim_sh->add_option("--sigma2", sh_sigma2);
  sim_sh->add_option("--t-shift", sh_tshift);
  sim_sh->add_option("--count", sim_count)->default_val(4000);
  sim_sh->add_option("--seed", sim_seed);
  sim_sh->add_option("--out", sim_out)->required();
  double se_base = 1000.0, se_amplitude = 300.0, se_noise = 50.0;
  uint32_t se_days = 1;
  auto* sim_se = sim->add_subcommand("seasonal", "day-curve stream");
  sim_se->add_option("--base", se_base);
  sim_se->add_option("--amplitude", se_amplitude);
  sim_se->add_option("--noise-sigma", se_noise);
  sim_se->add_option("--days", se_days);
  sim_se->add_option("--seed", sim_seed);
  sim_se->add_option("--out", sim_out)->required();
  uint32_t sl_window_hours = 168;
  uint64_t sl_freeze_at = 0;
  auto* sim_sl = sim->add_subcommand("stale", "sliding-count feature over a freezing table");
  sim_sl->add_option("--window-hours", sl_window_hours);
  sim_sl->add_option("--freeze-at", sl_freeze_at)->required();
  sim_sl->add_option("--count", sim_count)->required();
  sim_sl->add_option("--seed", sim_seed);
  sim_sl->add_option("--out", sim_out)->required();

  // calibrate
  std::string cal_input, cal_baseline, cal_config;
  double cal_quantile = 0.999, cal_safety = 1.1;
  auto* cal = app.add_subcommand("calibrate", "derive per-feature thresholds from a drift-free stream");
  cal->add_option("--input", cal_input, "observations (.ndjson or .csv)")->required();
  cal->add_option("--baseline", cal_baseline, "baseline .dwb file")->required();
  cal->add_option("--config", cal_config, "service config json (or DRIFTWATCH_CONFIG)");
  cal->add_option("--quantile", cal_quantile);
  cal->add_option("--safety", cal_safety);

  // report
  auto* report = app.add_subcommand("report", "regenerate experiment data");
  report->require_subcommand(1);
  std::string f4_out, f5_out;
  auto* f4 = report->add_subcommand("figure4", "window-size trade-off data");
  f4->add_option("--out", f4_out)->required();
  auto* f5 = report->add_subcommand("figure5", "seasonality correction data");
  f5->add_option("--out", f5_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (bb->parsed()) return cmd_baseline_build(bb_input, bb_config, bb_out, bb_export);
    if (be->parsed()) {
      auto b = dw::BaselineSet::load(be_in);
      std::ofstream out(be_out, std::ios::trunc);
      if (!out) throw dw::IoError("cannot open for writing: " + be_out);
      out << b.to_json() << '\n';
      return kExitOk;
    }
    if (mr->parsed()) {
      return cmd_monitor_run(resolve_config_path(mr_config), mr_baseline,
                             mr_listen, mr_report);
    }
    if (rp->parsed()) {
      return cmd_replay(rp_input, rp_baseline, resolve_config_path(rp_config),
                        rp_report, rp_alerts);
    }
    if (sim_st->parsed()) {
      dw::simgen::StationaryParams p;
      p.mu = st_mu;
      p.sigma2 = st_sigma2;
      p.count = sim_count;
      p.seed = sim_seed;
      dw::write_ndjson_file(sim_out, dw::simgen::gen_stationary(p));
      return kExitOk;
    }
    if (sim_sh->parsed()) {
      dw::simgen::ShiftParams p;
      p.mu1 = sh_mu1;
      p.mu2 = sh_mu2;
      p.sigma2 = sh_sigma2;
      p.t_shift = sh_tshift;
      p.count = sim_count;
      p.seed = sim_seed;
      dw::write_ndjson_file(sim_out, dw::simgen::gen_shift(p));
      return kExitOk;
    }
    if (sim_se->parsed()) {
      dw::simgen::SeasonalParams p;
      p.base = se_base;
      p.amplitude = se_amplitude;
      p.noise_sigma = se_noise;
      p.days = se_days;
      p.seed = sim_seed;
      dw::write_ndjson_file(sim_out, dw::simgen::gen_seasonal(p));
      return kExitOk;
    }
    if (sim_sl->parsed()) {
      dw::simgen::StaleParams p;
      p.window_hours = sl_window_hours;
      p.freeze_at = sl_freeze_at;
      p.count = sim_count;
      p.seed = sim_seed;
      dw::write_ndjson_file(sim_out, dw::simgen::gen_stale(p));
      return kExitOk;
    }
    if (cal->parsed()) {
      return cmd_calibrate(cal_input, cal_baseline, resolve_config_path(cal_config),
                           cal_quantile, cal_safety);
    }
    if (f4->parsed()) return cmd_report_figure4(f4_out);
    if (f5->parsed()) return cmd_report_figure5(f5_out);
  } catch (const dw::BadConfig& e) {
    print_error(e.code(), e.what());
    return kExitUsage;
  } catch (const dw::Error& e) {
    print_error(e.code(), e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return kExitBug;
  }
  print_error("usage", "no subcommand given");
  return kExitUsage;
}
