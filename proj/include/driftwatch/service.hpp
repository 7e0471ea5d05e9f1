// Copyright 2026 The driftwatch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "driftwatch/baseline.hpp"
#include "driftwatch/io.hpp"
#include "driftwatch/monitor.hpp"

namespace httplib {
class Server;
}

namespace driftwatch {

// Delivers alerts to the configured sinks (JSONL log file, webhook with
// bounded retries). Runs on its own thread; delivery failures are logged
// and never block monitoring.
class AlertDispatcher {
 public:
  explicit AlertDispatcher(std::vector<SinkConfig> sinks);
  ~AlertDispatcher();

  void dispatch(const Alert& a);
  void drain();

  uint64_t delivered() const { return delivered_.load(); }
  uint64_t undelivered() const { return undelivered_.load(); }

 private:
  void run();
  void deliver(const Alert& a);

  std::vector<SinkConfig> sinks_;
  std::deque<Alert> queue_;
  std::mutex mu_;
  std::condition_variable cv_;
  bool stopping_ = false;
  std::size_t in_flight_ = 0;
  std::atomic<uint64_t> delivered_{0};
  std::atomic<uint64_t> undelivered_{0};
  std::thread worker_;
};

// HTTP ingestion front of the monitoring engine.
//
//   POST /v1/observations   NDJSON batch -> 202 {"accepted":n,"dropped":m}
//   GET  /v1/status         engine snapshot
//   GET  /v1/healthz        200 "ok"
//
// Accepted observations flow through a bounded queue into a single
// ingestion thread, preserving per-connection order; a full queue yields
// 429 with Retry-After. Evaluation either rides the ingestion path
// (observation-count cadence) or a wall-clock timer (seconds cadence).
class MonitorService {
 public:
  MonitorService(ServiceConfig config, BaselineSet baseline,
                 std::string report_csv_path = "");
  ~MonitorService();

  // Binds and serves; returns false if the address cannot be bound.
  // Blocking; call stop() from another thread.
  bool run();

  // Starts run() on a background thread and waits until the socket accepts.
  bool start();
  void stop();

  // Blocks until every queued observation has been ingested and every
  // pending alert dispatched.
  void drain();

  int port() const { return port_; }
  const ServiceConfig& config() const { return config_; }

 private:
  void ingestion_loop();
  void timer_loop();
  std::string status_json();

  ServiceConfig config_;
  BaselineSet baseline_;
  Engine engine_;
  std::mutex engine_mu_;
  std::unique_ptr<ReportCsvWriter> report_writer_;
  std::unique_ptr<AlertDispatcher> dispatcher_;

  std::deque<Observation> queue_;
  std::mutex queue_mu_;
  std::condition_variable queue_cv_;
  std::condition_variable idle_cv_;
  bool stopping_ = false;
  bool ingesting_ = false;

  std::unique_ptr<httplib::Server> server_;
  std::thread ingest_thread_;
  std::thread timer_thread_;
  std::thread serve_thread_;
  std::string host_;
  std::atomic<int> port_{0};
};

}  // namespace driftwatch
