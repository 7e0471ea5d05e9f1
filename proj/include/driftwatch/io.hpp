// Copyright 2026 The driftwatch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "driftwatch/distribution.hpp"
#include "driftwatch/monitor.hpp"

namespace driftwatch {

// --- NDJSON observation wire format ---------------------------------------
// One JSON object per line: {"ts": <unix ms integer>, "features": {...}}.

struct LineError {
  std::size_t line = 0;   // 1-based
  std::string message;
};

// Parses one NDJSON line. Returns nullopt and fills `error` on failure.
std::optional<Observation> parse_observation_line(const std::string& line,
                                                  std::string* error = nullptr);

struct NdjsonResult {
  std::vector<Observation> observations;
  std::size_t dropped = 0;
  std::optional<LineError> first_error;
};

NdjsonResult read_ndjson(std::istream& in);
NdjsonResult read_ndjson_file(const std::string& path);

std::string observation_to_json_line(const Observation& o);
void write_ndjson_file(const std::string& path,
                       const std::vector<Observation>& observations);

// --- Report CSV ------------------------------------------------------------
// Stable column order, 9 significant digits for reals; skipped and errored
// reports are not emitted.

extern const char* kReportCsvHeader;

std::string report_csv_row(const DriftReport& r);

class ReportCsvWriter {
 public:
  explicit ReportCsvWriter(const std::string& path);
  ~ReportCsvWriter();

  void write(const DriftReport& r);
  void flush();

 private:
  struct Impl;
  Impl* impl_;
};

// --- Alerts ----------------------------------------------------------------

nlohmann::json alert_to_json(const Alert& a);

// --- Service / monitor configuration ---------------------------------------

struct SinkConfig {
  enum class Kind { kLogFile, kWebhook } kind = Kind::kLogFile;
  std::string log_file;
  std::string webhook_url;
  int webhook_retry = 3;
  int webhook_backoff_ms = 500;
};

struct ServiceConfig {
  std::string listen = "127.0.0.1:8080";
  MonitorConfig monitor;
  AlertPolicy policy;
  bool policy_auto = false;  // thresholds to be supplied by calibration
  std::string baseline_path;
  std::vector<SinkConfig> sinks;
  std::size_t queue_capacity = 65536;
};

MonitorConfig monitor_config_from_json(const nlohmann::json& j);
AlertPolicy alert_policy_from_json(const nlohmann::json& j, bool* is_auto = nullptr);
ServiceConfig service_config_from_json(const nlohmann::json& j);
ServiceConfig load_service_config(const std::string& path);

}  // namespace driftwatch
