// Copyright 2026 The driftwatch authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "driftwatch/replay.hpp"
#include "driftwatch/service.hpp"
#include "driftwatch/simgen.hpp"

using namespace driftwatch;

namespace {

BaselineSet value_baseline(uint64_t seed = 600) {
  simgen::StationaryParams p;
  p.seed = seed;
  return BaselineSet::build(simgen::gen_stationary(p), BaselineBuildConfig{});
}

ServiceConfig test_config() {
  ServiceConfig cfg;
  cfg.listen = "127.0.0.1:0";  // ephemeral port
  cfg.monitor.features = {"value"};
  cfg.monitor.default_window_n = 100;
  cfg.monitor.cadence = EvalCadence::observations(50);
  return cfg;
}

std::string line(int64_t ts, double value) {
  std::ostringstream out;
  out << R"({"ts": )" << ts << R"(, "features": {"value": )" << value << "}}";
  return out.str();
}

}  // namespace

TEST_CASE("service accepts, drops and reports per line") {
  MonitorService service(test_config(), value_baseline());
  REQUIRE(service.start());
  httplib::Client client("127.0.0.1", service.port());

  SUBCASE("healthz") {
    auto res = client.Get("/v1/healthz");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->body == "ok");
  }

  SUBCASE("all-valid batch") {
    auto res = client.Post("/v1/observations",
                           line(1, 1.0) + "\n" + line(2, 2.0) + "\n" + line(3, 3.0) + "\n",
                           "application/x-ndjson");
    REQUIRE(res);
    CHECK(res->status == 202);
    auto j = nlohmann::json::parse(res->body);
    CHECK(j["accepted"] == 3);
    CHECK(j["dropped"] == 0);
  }

  SUBCASE("mixed batch reports the first error") {
    auto res = client.Post("/v1/observations",
                           line(1, 1.0) + "\n" + line(2, 2.0) + "\nnot json\n",
                           "application/x-ndjson");
    REQUIRE(res);
    CHECK(res->status == 202);
    auto j = nlohmann::json::parse(res->body);
    CHECK(j["accepted"] == 2);
    CHECK(j["dropped"] == 1);
    CHECK(j["first_error"]["line"] == 3);
  }

  SUBCASE("fully unparseable body is a 400") {
    auto res = client.Post("/v1/observations", "garbage\nmore garbage\n",
                           "application/x-ndjson");
    REQUIRE(res);
    CHECK(res->status == 400);
  }

  SUBCASE("status reflects ingestion") {
    auto before = nlohmann::json::parse(client.Get("/v1/status")->body);
    CHECK(before["features"]["value"]["window_fill"] == 0);

    std::ostringstream batch;
    for (int i = 0; i < 100; ++i) batch << line(i, 100.0) << "\n";
    REQUIRE(client.Post("/v1/observations", batch.str(), "application/x-ndjson")
                ->status == 202);
    service.drain();

    auto after = nlohmann::json::parse(client.Get("/v1/status")->body);
    CHECK(after["features"]["value"]["window_fill"] == 100);
    CHECK(after["observations_ingested"] == 100);
    CHECK(after["evaluations"] == 2);
    CHECK(after["features"]["value"].contains("last_score"));
    CHECK(after["features"]["value"]["last_score"].get<double>() >= 0.0);
  }

  service.stop();
}

TEST_CASE("a full queue yields 429 with Retry-After") {
  auto cfg = test_config();
  cfg.queue_capacity = 10;
  MonitorService service(cfg, value_baseline());
  REQUIRE(service.start());
  httplib::Client client("127.0.0.1", service.port());

  // Stall the worker by filling the queue faster than single-observation
  // ingestion can drain; capacity 10, batch of 11 must bounce.
  std::ostringstream batch;
  for (int i = 0; i < 11; ++i) batch << line(i, 100.0) << "\n";
  auto res = client.Post("/v1/observations", batch.str(), "application/x-ndjson");
  REQUIRE(res);
  CHECK(res->status == 429);
  CHECK(res->get_header_value("Retry-After") == "1");
  service.stop();
}

TEST_CASE("alerts reach the log sink as JSONL") {
  const std::string alert_path = "/tmp/driftwatch_test_alerts.jsonl";
  std::remove(alert_path.c_str());

  auto cfg = test_config();
  cfg.monitor.default_window_n = 50;
  cfg.policy.threshold["value"] = 5.0;
  cfg.policy.consecutive_breaches_m = 1;
  cfg.sinks.push_back({SinkConfig::Kind::kLogFile, alert_path, "", 0, 0});

  MonitorService service(cfg, value_baseline());
  REQUIRE(service.start());
  httplib::Client client("127.0.0.1", service.port());

  // 100 readings far from the baseline: first full-window tick breaches.
  std::ostringstream batch;
  for (int i = 0; i < 100; ++i) batch << line(i, 150.0) << "\n";
  REQUIRE(client.Post("/v1/observations", batch.str(), "application/x-ndjson")
              ->status == 202);
  service.drain();
  service.stop();

  std::ifstream in(alert_path);
  std::string first;
  REQUIRE(std::getline(in, first));
  auto j = nlohmann::json::parse(first);
  CHECK(j["feature"] == "value");
  CHECK(j["score"].get<double>() > 5.0);
  std::remove(alert_path.c_str());
}

TEST_CASE("webhook delivery retries and never blocks monitoring") {
  std::atomic<int> hits{0};
  std::atomic<int> fail_first{2};
  httplib::Server hook;
  hook.Post("/hook", [&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    if (fail_first.fetch_sub(1) > 0) {
      res.status = 500;
    } else {
      res.status = 200;
    }
  });
  const int hook_port = hook.bind_to_any_port("127.0.0.1");
  std::thread hook_thread([&] { hook.listen_after_bind(); });

  SinkConfig webhook;
  webhook.kind = SinkConfig::Kind::kWebhook;
  webhook.webhook_url =
      "http://127.0.0.1:" + std::to_string(hook_port) + "/hook";
  webhook.webhook_retry = 3;
  webhook.webhook_backoff_ms = 10;

  SUBCASE("500 twice then 200 delivers on the third attempt") {
    AlertDispatcher dispatcher({webhook});
    Alert a;
    a.feature = "value";
    dispatcher.dispatch(a);
    dispatcher.drain();
    CHECK(hits == 3);
    CHECK(dispatcher.delivered() == 1);
    CHECK(dispatcher.undelivered() == 0);
  }

  SUBCASE("a dead webhook is marked undelivered after 3 attempts") {
    webhook.webhook_url = "http://127.0.0.1:1/hook";  // nothing listens here
    AlertDispatcher dispatcher({webhook});
    Alert a;
    a.feature = "value";
    dispatcher.dispatch(a);
    dispatcher.drain();
    CHECK(dispatcher.delivered() == 0);
    CHECK(dispatcher.undelivered() == 1);
  }

  hook.stop();
  hook_thread.join();
}

TEST_CASE("http ingestion matches replay") {
  // Short version of the full acceptance check: same stream through the
  // HTTP path and the replay path, same report sequence.
  simgen::ShiftParams p;
  p.seed = 601;
  p.count = 1000;
  p.t_shift = 500;
  auto stream = simgen::gen_shift(p);
  auto baseline = value_baseline();

  auto cfg = test_config();
  cfg.policy.threshold["value"] = 5.0;

  const std::string csv_path = "/tmp/driftwatch_test_http.csv";
  MonitorService service(cfg, baseline, csv_path);
  REQUIRE(service.start());
  httplib::Client client("127.0.0.1", service.port());
  std::ostringstream batch;
  for (const auto& o : stream) batch << observation_to_json_line(o) << "\n";
  REQUIRE(client.Post("/v1/observations", batch.str(), "application/x-ndjson")
              ->status == 202);
  service.drain();
  service.stop();

  auto result = replay(stream, cfg.monitor, cfg.policy, baseline);
  std::ifstream in(csv_path);
  std::string header;
  std::getline(in, header);
  CHECK(header == kReportCsvHeader);
  std::size_t i = 0;
  std::string row;
  while (std::getline(in, row)) {
    REQUIRE(i < result.reports.size());
    CHECK(row == report_csv_row(result.reports[i]));
    ++i;
  }
  CHECK(i == result.reports.size());
  std::remove(csv_path.c_str());
}
