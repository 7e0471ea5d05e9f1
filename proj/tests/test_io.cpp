// Copyright 2026 The driftwatch authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sstream>

#include "driftwatch/errors.hpp"
#include "driftwatch/io.hpp"

using namespace driftwatch;

TEST_CASE("observation lines parse and round-trip") {
  auto o = parse_observation_line(
      R"({"ts": 1700000000000, "features": {"amount": 12.5, "items": 3}})");
  REQUIRE(o);
  CHECK(o->ts == 1700000000000);
  CHECK(o->values.at("amount") == 12.5);
  CHECK(o->values.at("items") == 3.0);

  auto back = parse_observation_line(observation_to_json_line(*o));
  REQUIRE(back);
  CHECK(back->ts == o->ts);
  CHECK(back->values == o->values);
}

TEST_CASE("malformed observation lines are rejected with a reason") {
  std::string err;
  CHECK_FALSE(parse_observation_line("not json", &err));
  CHECK_FALSE(parse_observation_line(R"({"features": {"a": 1}})", &err));
  CHECK(err == "missing or invalid ts");
  CHECK_FALSE(parse_observation_line(R"({"ts": -5, "features": {"a": 1}})", &err));
  CHECK_FALSE(parse_observation_line(R"({"ts": 1, "features": {}})", &err));
  CHECK_FALSE(parse_observation_line(R"({"ts": 1})", &err));
  CHECK_FALSE(parse_observation_line(R"({"ts": 1, "features": {"a": "x"}})", &err));
  CHECK(err == "non-numeric reading for feature a");
}

TEST_CASE("ndjson reader counts drops and keeps the first error") {
  std::istringstream in(
      "{\"ts\": 1, \"features\": {\"a\": 1}}\n"
      "garbage\n"
      "\n"
      "{\"ts\": 2, \"features\": {\"a\": 2}}\n"
      "{\"ts\": \"x\", \"features\": {\"a\": 3}}\n");
  auto result = read_ndjson(in);
  CHECK(result.observations.size() == 2);
  CHECK(result.dropped == 2);
  REQUIRE(result.first_error);
  CHECK(result.first_error->line == 2);
}

TEST_CASE("report csv rows are stable") {
  DriftReport r;
  r.feature = "amount";
  r.eval_ts = 1700000000000;
  r.score = 0.123456789123;
  r.metric = MetricKind::kWasserstein;
  r.baseline_kind = BaselineKind::kSeasonal;
  r.window_fill = 1000;
  r.partial = false;
  r.threshold = 5.0;
  r.breach = false;
  CHECK(std::string(kReportCsvHeader) ==
        "eval_ts,feature,metric,baseline_kind,score,threshold,breach,"
        "window_fill,partial");
  CHECK(report_csv_row(r) ==
        "1700000000000,amount,wasserstein,seasonal,0.123456789,5,false,1000,"
        "false");
}

TEST_CASE("alert json carries the advisory cause taxonomy") {
  Alert a;
  a.feature = "amount";
  a.alert_ts = 99;
  a.score = 7.5;
  a.threshold = 5.0;
  a.consecutive_breaches = 3;
  auto j = alert_to_json(a);
  CHECK(j["feature"] == "amount");
  CHECK(j["alert_ts"] == 99);
  CHECK(j["score"] == 7.5);
  CHECK(j["threshold"] == 5.0);
  CHECK(j["consecutive_breaches"] == 3);
  CHECK(j["suspected_causes"] ==
        nlohmann::json({"upstream data fault", "natural distribution shift"}));
}

TEST_CASE("service config parses the full document") {
  auto j = nlohmann::json::parse(R"({
    "listen": "127.0.0.1:9090",
    "monitor": {
      "features": ["amount", "items"],
      "window_n": {"default": 1000, "items": 100},
      "eval_every": {"observations": 50},
      "metric": "wasserstein_binned",
      "baseline_mode": "seasonal",
      "evaluate_partial": true,
      "min_partial_fill": 20
    },
    "policy": {
      "threshold": {"amount": 5.0, "items": 1.5},
      "consecutive_breaches_m": 2,
      "cooldown_evals": 4
    },
    "baseline": "/tmp/b.dwb",
    "sinks": [
      {"log_file": "/tmp/alerts.jsonl"},
      {"webhook": {"url": "http://localhost:1234/hook", "retry": 5, "backoff_ms": 10}}
    ],
    "queue_capacity": 128
  })");
  auto cfg = service_config_from_json(j);
  CHECK(cfg.listen == "127.0.0.1:9090");
  CHECK(cfg.monitor.features == std::vector<std::string>{"amount", "items"});
  CHECK(cfg.monitor.window_for("amount") == 1000);
  CHECK(cfg.monitor.window_for("items") == 100);
  CHECK(cfg.monitor.cadence.mode == EvalCadence::Mode::kObservations);
  CHECK(cfg.monitor.cadence.every_observations == 50);
  CHECK(cfg.monitor.metric == MetricKind::kWassersteinBinned);
  CHECK(cfg.monitor.seasonal_baseline);
  CHECK(cfg.monitor.evaluate_partial);
  CHECK(cfg.monitor.min_partial_fill == 20);
  CHECK(cfg.policy.threshold_for("amount") == 5.0);
  CHECK(cfg.policy.consecutive_breaches_m == 2);
  CHECK(cfg.policy.cooldown_evals == 4);
  CHECK(cfg.baseline_path == "/tmp/b.dwb");
  REQUIRE(cfg.sinks.size() == 2);
  CHECK(cfg.sinks[0].kind == SinkConfig::Kind::kLogFile);
  CHECK(cfg.sinks[1].kind == SinkConfig::Kind::kWebhook);
  CHECK(cfg.sinks[1].webhook_retry == 5);
  CHECK(cfg.queue_capacity == 128);
}

TEST_CASE("config validation errors") {
  CHECK_THROWS_AS(service_config_from_json(nlohmann::json::object()), BadConfig);
  auto j = nlohmann::json::parse(R"({"monitor": {"features": []}})");
  CHECK_THROWS_AS(service_config_from_json(j), BadConfig);
  j = nlohmann::json::parse(
      R"({"monitor": {"features": ["a"], "eval_every": {"observations": 0}}})");
  CHECK_THROWS_AS(service_config_from_json(j), BadConfig);
  j = nlohmann::json::parse(
      R"({"monitor": {"features": ["a"], "metric": "psi"}})");
  CHECK_THROWS_AS(service_config_from_json(j), BadConfig);
  j = nlohmann::json::parse(
      R"({"monitor": {"features": ["a"]}, "sinks": [{"smoke_signal": true}]})");
  CHECK_THROWS_AS(service_config_from_json(j), BadConfig);
}

TEST_CASE("auto threshold marks the policy for calibration") {
  auto j = nlohmann::json::parse(
      R"({"monitor": {"features": ["a"]}, "policy": {"threshold": "auto"}})");
  auto cfg = service_config_from_json(j);
  CHECK(cfg.policy_auto);
}
