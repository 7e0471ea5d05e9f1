// Copyright 2026 The driftwatch authors
// SPDX-License-Identifier: Apache-2.0

#include "driftwatch/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "driftwatch/errors.hpp"

namespace driftwatch {

namespace {

std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

}  // namespace

std::optional<Observation> parse_observation_line(const std::string& line,
                                                  std::string* error) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    if (error) *error = "not a JSON object";
    return std::nullopt;
  }
  if (!j.contains("ts") || !j["ts"].is_number_integer() ||
      j["ts"].get<int64_t>() < 0) {
    if (error) *error = "missing or invalid ts";
    return std::nullopt;
  }
  if (!j.contains("features") || !j["features"].is_object() ||
      j["features"].empty()) {
    if (error) *error = "missing or empty features object";
    return std::nullopt;
  }
  Observation o;
  o.ts = j["ts"].get<int64_t>();
  for (const auto& [name, v] : j["features"].items()) {
    if (!v.is_number()) {
      if (error) *error = "non-numeric reading for feature " + name;
      return std::nullopt;
    }
    o.values[name] = v.get<double>();
  }
  return o;
}

NdjsonResult read_ndjson(std::istream& in) {
  NdjsonResult result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::string err;
    if (auto o = parse_observation_line(line, &err)) {
      result.observations.push_back(std::move(*o));
    } else {
      ++result.dropped;
      if (!result.first_error) result.first_error = LineError{lineno, err};
    }
  }
  return result;
}

NdjsonResult read_ndjson_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  return read_ndjson(in);
}

std::string observation_to_json_line(const Observation& o) {
  nlohmann::json j;
  j["ts"] = o.ts;
  j["features"] = o.values;
  return j.dump();
}

void write_ndjson_file(const std::string& path,
                       const std::vector<Observation>& observations) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const auto& o : observations) out << observation_to_json_line(o) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

const char* kReportCsvHeader =
    "eval_ts,feature,metric,baseline_kind,score,threshold,breach,window_fill,"
    "partial";

std::string report_csv_row(const DriftReport& r) {
  std::ostringstream row;
  row << r.eval_ts << ',' << r.feature << ',' << to_string(r.metric) << ','
      << to_string(r.baseline_kind) << ',' << fmt_real(r.score) << ','
      << fmt_real(r.threshold) << ',' << (r.breach ? "true" : "false") << ','
      << r.window_fill << ',' << (r.partial ? "true" : "false");
  return row.str();
}

struct ReportCsvWriter::Impl {
  std::ofstream out;
};

ReportCsvWriter::ReportCsvWriter(const std::string& path) : impl_(new Impl) {
  impl_->out.open(path, std::ios::trunc);
  if (!impl_->out) {
    delete impl_;
    throw IoError("cannot open for writing: " + path);
  }
  impl_->out << kReportCsvHeader << '\n';
}

ReportCsvWriter::~ReportCsvWriter() { delete impl_; }

void ReportCsvWriter::write(const DriftReport& r) {
  if (r.skipped || !r.error.empty()) return;
  impl_->out << report_csv_row(r) << '\n';
}

void ReportCsvWriter::flush() { impl_->out.flush(); }

nlohmann::json alert_to_json(const Alert& a) {
  return nlohmann::json{
      {"feature", a.feature},
      {"alert_ts", a.alert_ts},
      {"score", a.score},
      {"threshold", a.threshold},
      {"consecutive_breaches", a.consecutive_breaches},
      {"suspected_causes",
       {Alert::kSuspectedCauses[0], Alert::kSuspectedCauses[1]}}};
}

MonitorConfig monitor_config_from_json(const nlohmann::json& j) {
  MonitorConfig cfg;
  if (!j.contains("features") || !j["features"].is_array() ||
      j["features"].empty()) {
    throw BadConfig("monitor.features must be a non-empty array");
  }
  cfg.features = j["features"].get<std::vector<std::string>>();

  if (j.contains("window_n")) {
    const auto& w = j["window_n"];
    if (w.is_number_unsigned() || w.is_number_integer()) {
      cfg.default_window_n = w.get<std::size_t>();
    } else if (w.is_object()) {
      for (const auto& [k, v] : w.items()) {
        if (k == "default") {
          cfg.default_window_n = v.get<std::size_t>();
        } else {
          cfg.window_n[k] = v.get<std::size_t>();
        }
      }
    } else {
      throw BadConfig("monitor.window_n must be a number or an object");
    }
  }
  if (cfg.default_window_n < 1) throw BadConfig("window_n must be >= 1");

  if (j.contains("eval_every")) {
    const auto& e = j["eval_every"];
    if (e.contains("observations")) {
      const auto k = e["observations"].get<uint64_t>();
      if (k < 1) throw BadConfig("eval_every.observations must be >= 1");
      cfg.cadence = EvalCadence::observations(k);
    } else if (e.contains("seconds")) {
      const auto t = e["seconds"].get<double>();
      if (!(t > 0)) throw BadConfig("eval_every.seconds must be > 0");
      cfg.cadence = EvalCadence::seconds(t);
    } else {
      throw BadConfig("eval_every needs 'observations' or 'seconds'");
    }
  }
  if (j.contains("metric")) {
    cfg.metric = metric_from_string(j["metric"].get<std::string>());
  }
  if (j.contains("baseline_mode")) {
    const auto mode = j["baseline_mode"].get<std::string>();
    if (mode == "seasonal") {
      cfg.seasonal_baseline = true;
    } else if (mode != "global") {
      throw BadConfig("baseline_mode must be 'global' or 'seasonal'");
    }
  }
  if (j.contains("evaluate_partial")) {
    cfg.evaluate_partial = j["evaluate_partial"].get<bool>();
  }
  if (j.contains("min_partial_fill")) {
    cfg.min_partial_fill = j["min_partial_fill"].get<std::size_t>();
  }
  return cfg;
}

AlertPolicy alert_policy_from_json(const nlohmann::json& j, bool* is_auto) {
  AlertPolicy p;
  if (is_auto) *is_auto = false;
  if (j.contains("threshold")) {
    const auto& t = j["threshold"];
    if (t.is_string() && t.get<std::string>() == "auto") {
      if (is_auto) *is_auto = true;
    } else if (t.is_number()) {
      p.default_threshold = t.get<double>();
    } else if (t.is_object()) {
      for (const auto& [k, v] : t.items()) p.threshold[k] = v.get<double>();
    } else {
      throw BadConfig("policy.threshold must be a number, object or 'auto'");
    }
  }
  if (j.contains("consecutive_breaches_m")) {
    p.consecutive_breaches_m = j["consecutive_breaches_m"].get<uint32_t>();
    if (p.consecutive_breaches_m < 1) {
      throw BadConfig("consecutive_breaches_m must be >= 1");
    }
  }
  if (j.contains("cooldown_evals")) {
    p.cooldown_evals = j["cooldown_evals"].get<uint32_t>();
  }
  return p;
}

ServiceConfig service_config_from_json(const nlohmann::json& j) {
  ServiceConfig cfg;
  if (j.contains("listen")) cfg.listen = j["listen"].get<std::string>();
  if (!j.contains("monitor")) throw BadConfig("config needs a 'monitor' section");
  cfg.monitor = monitor_config_from_json(j["monitor"]);
  if (j.contains("policy")) {
    cfg.policy = alert_policy_from_json(j["policy"], &cfg.policy_auto);
  }
  if (j.contains("baseline")) cfg.baseline_path = j["baseline"].get<std::string>();
  if (j.contains("queue_capacity")) {
    cfg.queue_capacity = j["queue_capacity"].get<std::size_t>();
    if (cfg.queue_capacity < 1) throw BadConfig("queue_capacity must be >= 1");
  }
  if (j.contains("sinks")) {
    for (const auto& s : j["sinks"]) {
      SinkConfig sink;
      if (s.contains("log_file")) {
        sink.kind = SinkConfig::Kind::kLogFile;
        sink.log_file = s["log_file"].get<std::string>();
      } else if (s.contains("webhook")) {
        sink.kind = SinkConfig::Kind::kWebhook;
        const auto& w = s["webhook"];
        sink.webhook_url = w.at("url").get<std::string>();
        if (w.contains("retry")) sink.webhook_retry = w["retry"].get<int>();
        if (w.contains("backoff_ms")) {
          sink.webhook_backoff_ms = w["backoff_ms"].get<int>();
        }
      } else {
        throw BadConfig("each sink needs 'log_file' or 'webhook'");
      }
      cfg.sinks.push_back(std::move(sink));
    }
  }
  return cfg;
}

ServiceConfig load_service_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw BadConfig(std::string("config parse error: ") + e.what());
  }
  return service_config_from_json(j);
}

}  // namespace driftwatch
