// Copyright 2026 The driftwatch authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "driftwatch/errors.hpp"
#include "driftwatch/monitor.hpp"
#include "driftwatch/replay.hpp"
#include "driftwatch/simgen.hpp"

using namespace driftwatch;

namespace {

BaselineSet tiny_baseline(std::vector<std::string> features,
                          std::vector<double> values) {
  std::vector<Observation> obs;
  for (double v : values) {
    Observation o;
    o.ts = static_cast<int64_t>(obs.size()) * 1000;
    for (const auto& f : features) o.values[f] = v;
    obs.push_back(std::move(o));
  }
  return BaselineSet::build(obs, BaselineBuildConfig{});
}

Observation obs_at(int64_t ts, std::map<std::string, double> values) {
  Observation o;
  o.ts = ts;
  o.values = std::move(values);
  return o;
}

DriftReport report(const std::string& feature, bool breach, int64_t ts = 0) {
  DriftReport r;
  r.feature = feature;
  r.eval_ts = ts;
  r.breach = breach;
  r.score = breach ? 2.0 : 0.0;
  r.threshold = 1.0;
  return r;
}

}  // namespace

TEST_CASE("ingest routes configured features and counts strangers") {
  auto baseline = tiny_baseline({"a", "b", "c"}, {1, 2, 3});
  MonitorConfig cfg;
  cfg.features = {"a", "b", "c"};
  cfg.default_window_n = 4;
  cfg.cadence = EvalCadence::external();
  Engine engine(cfg, AlertPolicy{}, &baseline);

  engine.ingest(obs_at(0, {{"a", 1.0}, {"b", 2.0}}));
  auto st = engine.status();
  CHECK(st.features.at("a").window_fill == 1);
  CHECK(st.features.at("b").window_fill == 1);
  CHECK(st.features.at("c").window_fill == 0);
  CHECK(st.ignored_features == 0);

  engine.ingest(obs_at(1, {{"mystery", 9.0}}));
  CHECK(engine.status().ignored_features == 1);
}

TEST_CASE("count cadence fires every k observations") {
  auto baseline = tiny_baseline({"a"}, {1, 2, 3});
  MonitorConfig cfg;
  cfg.features = {"a"};
  cfg.default_window_n = 10;
  cfg.cadence = EvalCadence::observations(100);
  cfg.evaluate_partial = true;
  cfg.min_partial_fill = 1;
  Engine engine(cfg, AlertPolicy{}, &baseline);
  for (int i = 0; i < 1000; ++i) engine.ingest(obs_at(i, {{"a", 2.0}}));
  CHECK(engine.status().evaluations == 10);
}

TEST_CASE("event-time seconds cadence follows timestamps") {
  auto baseline = tiny_baseline({"a"}, {1, 2, 3});
  MonitorConfig cfg;
  cfg.features = {"a"};
  cfg.default_window_n = 5;
  cfg.cadence = EvalCadence::seconds(60);
  cfg.evaluate_partial = true;
  cfg.min_partial_fill = 1;
  Engine engine(cfg, AlertPolicy{}, &baseline);
  // One observation per 10 s of event time over 10 minutes.
  for (int i = 0; i < 60; ++i) engine.ingest(obs_at(i * 10000, {{"a", 2.0}}));
  CHECK(engine.status().evaluations == 9);
}

TEST_CASE("a window equal to its baseline scores zero") {
  auto baseline = tiny_baseline({"a"}, {1, 2, 3});
  MonitorConfig cfg;
  cfg.features = {"a"};
  cfg.default_window_n = 3;
  cfg.cadence = EvalCadence::external();
  AlertPolicy policy;
  policy.threshold["a"] = 0.5;
  Engine engine(cfg, policy, &baseline);
  for (double v : {3.0, 1.0, 2.0}) engine.ingest(obs_at(0, {{"a", v}}));
  auto reports = engine.evaluate(1000);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].score == 0.0);
  CHECK_FALSE(reports[0].breach);
  CHECK_FALSE(reports[0].skipped);
  CHECK(reports[0].window_fill == 3);
}

TEST_CASE("fill policy skips under-filled windows") {
  auto baseline = tiny_baseline({"a"}, {1, 2, 3});
  MonitorConfig cfg;
  cfg.features = {"a"};
  cfg.default_window_n = 5;
  cfg.cadence = EvalCadence::external();

  SUBCASE("default: skip until full") {
    Engine engine(cfg, AlertPolicy{}, &baseline);
    engine.ingest(obs_at(0, {{"a", 1.0}}));
    auto reports = engine.evaluate(0);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].skipped);
  }

  SUBCASE("partial mode honors min_partial_fill") {
    cfg.evaluate_partial = true;
    cfg.min_partial_fill = 2;
    Engine engine(cfg, AlertPolicy{}, &baseline);
    engine.ingest(obs_at(0, {{"a", 1.0}}));
    CHECK(engine.evaluate(0)[0].skipped);
    engine.ingest(obs_at(1, {{"a", 2.0}}));
    auto reports = engine.evaluate(1);
    CHECK_FALSE(reports[0].skipped);
    CHECK(reports[0].partial);
    CHECK(reports[0].window_fill == 2);
  }
}

TEST_CASE("evaluate does not mutate windows or baseline") {
  auto baseline = tiny_baseline({"a"}, {1, 2, 3});
  MonitorConfig cfg;
  cfg.features = {"a"};
  cfg.default_window_n = 2;
  cfg.cadence = EvalCadence::external();
  Engine engine(cfg, AlertPolicy{}, &baseline);
  engine.ingest(obs_at(0, {{"a", 5.0}}));
  engine.ingest(obs_at(1, {{"a", 6.0}}));
  auto first = engine.evaluate(10);
  auto second = engine.evaluate(10);
  REQUIRE(first.size() == second.size());
  CHECK(first[0].score == second[0].score);
  CHECK(first[0].window_fill == second[0].window_fill);
}

TEST_CASE("breach flag matches score vs threshold") {
  auto baseline = tiny_baseline({"a"}, {0, 0, 0});
  MonitorConfig cfg;
  cfg.features = {"a"};
  cfg.default_window_n = 1;
  cfg.cadence = EvalCadence::external();
  cfg.evaluate_partial = true;
  cfg.min_partial_fill = 1;
  AlertPolicy policy;
  policy.threshold["a"] = 2.0;
  Engine engine(cfg, policy, &baseline);
  for (double v : {1.0, 2.5, 2.0, 7.0}) {
    engine.ingest(obs_at(0, {{"a", v}}));
    auto r = engine.evaluate(0)[0];
    CHECK(r.breach == (r.score > 2.0));
  }
}

TEST_CASE("policy fires after m consecutive breaches") {
  AlertPolicy policy;
  policy.consecutive_breaches_m = 3;
  PolicyState state(policy);
  int64_t ts = 0;
  std::vector<bool> pattern = {true, true, false, true, true, true};
  std::vector<bool> fired;
  for (bool breach : pattern) {
    fired.push_back(state.apply(report("f", breach, ts++)).has_value());
  }
  CHECK(fired == std::vector<bool>{false, false, false, false, false, true});
}

TEST_CASE("policy with m=1 fires immediately") {
  AlertPolicy policy;
  policy.consecutive_breaches_m = 1;
  PolicyState state(policy);
  auto alert = state.apply(report("f", true, 42));
  REQUIRE(alert);
  CHECK(alert->feature == "f");
  CHECK(alert->first_breach_ts == 42);
  CHECK(alert->alert_ts == 42);
  CHECK(alert->consecutive_breaches == 1);
}

TEST_CASE("cooldown suppresses follow-up alerts") {
  AlertPolicy policy;
  policy.consecutive_breaches_m = 1;
  policy.cooldown_evals = 10;
  PolicyState state(policy);
  CHECK(state.apply(report("f", true, 0)).has_value());
  for (int i = 1; i <= 5; ++i) {
    CHECK_FALSE(state.apply(report("f", true, i)).has_value());
  }
}

TEST_CASE("a sustained excursion produces exactly one alert") {
  AlertPolicy policy;
  policy.consecutive_breaches_m = 3;
  policy.cooldown_evals = 5;
  PolicyState state(policy);
  int alerts = 0;
  for (int i = 0; i < 100; ++i) {
    alerts += state.apply(report("f", true, i)).has_value();
  }
  CHECK(alerts == 1);
  // After the excursion clears and the cooldown drains, it can re-arm.
  for (int i = 0; i < 6; ++i) state.apply(report("f", false, 100 + i));
  for (int i = 0; i < 2; ++i) {
    CHECK_FALSE(state.apply(report("f", true, 110 + i)).has_value());
  }
  CHECK(state.apply(report("f", true, 112)).has_value());
}

TEST_CASE("skipped reports do not feed the streak") {
  AlertPolicy policy;
  policy.consecutive_breaches_m = 2;
  PolicyState state(policy);
  CHECK_FALSE(state.apply(report("f", true, 0)).has_value());
  DriftReport skipped = report("f", false, 1);
  skipped.skipped = true;
  CHECK_FALSE(state.apply(skipped).has_value());
  CHECK(state.apply(report("f", true, 2)).has_value());
}

TEST_CASE("replay is deterministic") {
  simgen::ShiftParams p;
  p.seed = 5;
  auto stream = simgen::gen_shift(p);
  simgen::StationaryParams bp;
  bp.seed = 6;
  auto baseline = BaselineSet::build(simgen::gen_stationary(bp), BaselineBuildConfig{});

  MonitorConfig cfg;
  cfg.features = {"value"};
  cfg.default_window_n = 100;
  cfg.cadence = EvalCadence::observations(50);
  AlertPolicy policy;
  policy.threshold["value"] = 5.0;

  auto a = replay(stream, cfg, policy, baseline);
  auto b = replay(stream, cfg, policy, baseline);
  REQUIRE(a.reports.size() == b.reports.size());
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    CHECK(a.reports[i].score == b.reports[i].score);
    CHECK(a.reports[i].eval_ts == b.reports[i].eval_ts);
  }
  REQUIRE(a.alerts.size() == b.alerts.size());
  CHECK(a.alerts.size() == 1);
  CHECK(a.alerts[0].alert_ts == b.alerts[0].alert_ts);
}

TEST_CASE("calibrate applies the quantile rule") {
  std::map<std::string, std::vector<double>> scores;
  scores["f"] = std::vector<double>(200, 0.2);
  auto thresholds = calibrate(scores, 0.999, 1.1);
  CHECK(thresholds.at("f") == doctest::Approx(0.22).epsilon(1e-12));

  std::map<std::string, std::vector<double>> empty;
  empty["f"] = {};
  CHECK_THROWS_AS(calibrate(empty), InsufficientScores);
  std::map<std::string, std::vector<double>> few;
  few["f"] = std::vector<double>(99, 0.2);
  CHECK_THROWS_AS(calibrate(few), InsufficientScores);
}

TEST_CASE("per-feature failure yields an error report, not an exception") {
  // Feature b is configured for monitoring but absent from the baseline.
  auto baseline = tiny_baseline({"a"}, {1, 2, 3});
  MonitorConfig cfg;
  cfg.features = {"a", "b"};
  cfg.default_window_n = 1;
  cfg.cadence = EvalCadence::external();
  cfg.evaluate_partial = true;
  cfg.min_partial_fill = 1;
  Engine engine(cfg, AlertPolicy{}, &baseline);
  engine.ingest(obs_at(0, {{"a", 2.0}, {"b", 2.0}}));
  auto reports = engine.evaluate(0);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].error.empty());
  CHECK(reports[1].error == "UnknownFeature");
}
