// Copyright 2026 The driftwatch authors
// SPDX-License-Identifier: Apache-2.0

#include "driftwatch/service.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "driftwatch/errors.hpp"

namespace driftwatch {

namespace {

int64_t wall_clock_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

// Splits "http://host:port/path" into client base and path.
bool split_url(const std::string& url, std::string* base, std::string* path) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) return false;
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    *base = url;
    *path = "/";
  } else {
    *base = url.substr(0, path_start);
    *path = url.substr(path_start);
  }
  return true;
}

}  // namespace

AlertDispatcher::AlertDispatcher(std::vector<SinkConfig> sinks)
    : sinks_(std::move(sinks)), worker_([this] { run(); }) {}

AlertDispatcher::~AlertDispatcher() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  worker_.join();
}

void AlertDispatcher::dispatch(const Alert& a) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    queue_.push_back(a);
  }
  cv_.notify_all();
}

void AlertDispatcher::drain() {
  std::unique_lock<std::mutex> lock(mu_);
  cv_.wait(lock, [this] { return queue_.empty() && in_flight_ == 0; });
}

void AlertDispatcher::run() {
  for (;;) {
    Alert a;
    {
      std::unique_lock<std::mutex> lock(mu_);
      cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (queue_.empty()) return;
      a = std::move(queue_.front());
      queue_.pop_front();
      ++in_flight_;
    }
    deliver(a);
    {
      std::lock_guard<std::mutex> lock(mu_);
      --in_flight_;
    }
    cv_.notify_all();
  }
}

void AlertDispatcher::deliver(const Alert& a) {
  const std::string body = alert_to_json(a).dump();
  bool any_failure = false;
  for (const auto& sink : sinks_) {
    if (sink.kind == SinkConfig::Kind::kLogFile) {
      std::ofstream out(sink.log_file, std::ios::app);
      if (out) {
        out << body << '\n';
      } else {
        any_failure = true;
        std::cerr << "driftwatch: cannot append alert to " << sink.log_file
                  << '\n';
      }
    } else {
      std::string base, path;
      if (!split_url(sink.webhook_url, &base, &path)) {
        any_failure = true;
        std::cerr << "driftwatch: bad webhook url " << sink.webhook_url << '\n';
        continue;
      }
      bool ok = false;
      for (int attempt = 0; attempt < sink.webhook_retry && !ok; ++attempt) {
        if (attempt > 0) {
          std::this_thread::sleep_for(
              std::chrono::milliseconds(sink.webhook_backoff_ms));
        }
        httplib::Client client(base);
        auto res = client.Post(path, body, "application/json");
        ok = res && res->status >= 200 && res->status < 300;
      }
      if (!ok) {
        any_failure = true;
        std::cerr << "driftwatch: webhook undelivered after "
                  << sink.webhook_retry << " attempts: " << sink.webhook_url
                  << '\n';
      }
    }
  }
  if (any_failure) {
    ++undelivered_;
  } else {
    ++delivered_;
  }
}

MonitorService::MonitorService(ServiceConfig config, BaselineSet baseline,
                               std::string report_csv_path)
    : config_(std::move(config)),
      baseline_(std::move(baseline)),
      engine_(
          [&] {
            MonitorConfig mc = config_.monitor;
            // Wall-clock cadence is driven by the timer thread, not ingest.
            if (mc.cadence.mode == EvalCadence::Mode::kSeconds) {
              mc.cadence = EvalCadence::external();
            }
            return mc;
          }(),
          config_.policy, &baseline_),
      server_(new httplib::Server) {
  if (!report_csv_path.empty()) {
    report_writer_ = std::make_unique<ReportCsvWriter>(report_csv_path);
    engine_.set_report_sink(
        [this](const DriftReport& r) { report_writer_->write(r); });
  }
  dispatcher_ = std::make_unique<AlertDispatcher>(config_.sinks);
  engine_.set_alert_sink(
      [this](const Alert& a) { dispatcher_->dispatch(a); });

  const auto colon = config_.listen.rfind(':');
  if (colon == std::string::npos) throw BadConfig("listen must be host:port");
  host_ = config_.listen.substr(0, colon);
  port_ = std::stoi(config_.listen.substr(colon + 1));

  server_->Post("/v1/observations", [this](const httplib::Request& req,
                                           httplib::Response& res) {
    std::vector<Observation> batch;
    std::size_t dropped = 0;
    std::optional<LineError> first_error;
    std::istringstream in(req.body);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::string err;
      if (auto o = parse_observation_line(line, &err)) {
        batch.push_back(std::move(*o));
      } else {
        ++dropped;
        if (!first_error) first_error = LineError{lineno, err};
      }
    }
    if (batch.empty() && lineno > 0 && dropped == lineno) {
      nlohmann::json err = {{"error", "unparseable body"}};
      if (first_error) {
        err["first_error"] = {{"line", first_error->line},
                              {"message", first_error->message}};
      }
      res.status = 400;
      res.set_content(err.dump(), "application/json");
      return;
    }
    {
      std::lock_guard<std::mutex> lock(queue_mu_);
      if (queue_.size() + batch.size() > config_.queue_capacity) {
        res.status = 429;
        res.set_header("Retry-After", "1");
        res.set_content("{\"error\":\"ingest queue full\"}", "application/json");
        return;
      }
      for (auto& o : batch) queue_.push_back(std::move(o));
    }
    queue_cv_.notify_all();
    nlohmann::json out = {{"accepted", batch.size()}, {"dropped", dropped}};
    if (first_error) {
      out["first_error"] = {{"line", first_error->line},
                            {"message", first_error->message}};
    }
    res.status = 202;
    res.set_content(out.dump(), "application/json");
  });

  server_->Get("/v1/status", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(status_json(), "application/json");
  });
  server_->Get("/v1/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("ok", "text/plain");
  });
}

MonitorService::~MonitorService() { stop(); }

std::string MonitorService::status_json() {
  Engine::Status st;
  {
    std::lock_guard<std::mutex> lock(engine_mu_);
    st = engine_.status();
  }
  std::size_t depth;
  {
    std::lock_guard<std::mutex> lock(queue_mu_);
    depth = queue_.size();
  }
  nlohmann::json features = nlohmann::json::object();
  for (const auto& [name, fs] : st.features) {
    nlohmann::json jf = {{"window_fill", fs.window_fill},
                         {"window_capacity", fs.window_capacity},
                         {"dropped_nonfinite", fs.dropped_nonfinite}};
    if (fs.last_score) jf["last_score"] = *fs.last_score;
    if (fs.last_eval_ts) jf["last_eval_ts"] = *fs.last_eval_ts;
    features[name] = std::move(jf);
  }
  nlohmann::json j = {{"features", std::move(features)},
                      {"observations_ingested", st.observations_ingested},
                      {"ignored_features", st.ignored_features},
                      {"evaluations", st.evaluations},
                      {"queue_depth", depth},
                      {"alerts_delivered", dispatcher_->delivered()},
                      {"alerts_undelivered", dispatcher_->undelivered()}};
  return j.dump();
}

void MonitorService::ingestion_loop() {
  for (;;) {
    Observation o;
    {
      std::unique_lock<std::mutex> lock(queue_mu_);
      queue_cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (queue_.empty()) {
        idle_cv_.notify_all();
        return;
      }
      o = std::move(queue_.front());
      queue_.pop_front();
      ingesting_ = true;
    }
    {
      std::lock_guard<std::mutex> lock(engine_mu_);
      engine_.ingest(o);
    }
    {
      std::lock_guard<std::mutex> lock(queue_mu_);
      ingesting_ = false;
      if (queue_.empty()) idle_cv_.notify_all();
    }
  }
}

void MonitorService::timer_loop() {
  const auto period = std::chrono::duration<double>(
      config_.monitor.cadence.every_seconds);
  std::unique_lock<std::mutex> lock(queue_mu_);
  while (!stopping_) {
    if (queue_cv_.wait_for(lock, period, [this] { return stopping_; })) return;
    lock.unlock();
    {
      std::lock_guard<std::mutex> elock(engine_mu_);
      engine_.evaluate(wall_clock_ms());
    }
    lock.lock();
  }
}

bool MonitorService::run() {
  ingest_thread_ = std::thread([this] { ingestion_loop(); });
  if (config_.monitor.cadence.mode == EvalCadence::Mode::kSeconds) {
    timer_thread_ = std::thread([this] { timer_loop(); });
  }
  bool ok;
  if (port_ == 0) {
    port_ = server_->bind_to_any_port(host_);
    ok = port_ > 0 && server_->listen_after_bind();
  } else {
    ok = server_->listen(host_, port_);
  }
  return ok;
}

bool MonitorService::start() {
  serve_thread_ = std::thread([this] { run(); });
  for (int i = 0; i < 500; ++i) {
    if (server_->is_running() && port_ > 0) return true;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  return false;
}

void MonitorService::stop() {
  if (server_ && server_->is_running()) server_->stop();
  {
    std::lock_guard<std::mutex> lock(queue_mu_);
    stopping_ = true;
  }
  queue_cv_.notify_all();
  if (serve_thread_.joinable()) serve_thread_.join();
  if (ingest_thread_.joinable()) ingest_thread_.join();
  if (timer_thread_.joinable()) timer_thread_.join();
  if (report_writer_) report_writer_->flush();
}

void MonitorService::drain() {
  {
    std::unique_lock<std::mutex> lock(queue_mu_);
    idle_cv_.wait(lock, [this] { return queue_.empty() && !ingesting_; });
  }
  dispatcher_->drain();
  if (report_writer_) report_writer_->flush();
}

}  // namespace driftwatch
