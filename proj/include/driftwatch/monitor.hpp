// Copyright 2026 The driftwatch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "driftwatch/baseline.hpp"
#include "driftwatch/distribution.hpp"
#include "driftwatch/metrics.hpp"

namespace driftwatch {

enum class MetricKind { kWasserstein, kWassersteinBinned, kKl };

std::string to_string(MetricKind m);
MetricKind metric_from_string(const std::string& s);

// Evaluation cadence: every k observations, or every t seconds of event
// time. Live wall-clock ticking is the service layer's job (kExternal).
struct EvalCadence {
  enum class Mode { kObservations, kSeconds, kExternal };
  Mode mode = Mode::kObservations;
  uint64_t every_observations = 100;
  double every_seconds = 60.0;

  static EvalCadence observations(uint64_t k) {
    return {Mode::kObservations, k, 0.0};
  }
  static EvalCadence seconds(double t) { return {Mode::kSeconds, 0, t}; }
  static EvalCadence external() { return {Mode::kExternal, 0, 0.0}; }
};

struct MonitorConfig {
  std::vector<std::string> features;
  std::size_t default_window_n = 1000;
  std::map<std::string, std::size_t> window_n;  // per-feature override
  EvalCadence cadence;
  MetricKind metric = MetricKind::kWasserstein;
  bool seasonal_baseline = false;
  bool evaluate_partial = false;
  std::size_t min_partial_fill = 10;
  std::size_t histogram_bins = 256;

  std::size_t window_for(const std::string& feature) const {
    auto it = window_n.find(feature);
    return it == window_n.end() ? default_window_n : it->second;
  }
};

struct AlertPolicy {
  std::map<std::string, double> threshold;  // per feature, metric units
  double default_threshold = std::numeric_limits<double>::infinity();
  uint32_t consecutive_breaches_m = 3;
  uint32_t cooldown_evals = 10;

  double threshold_for(const std::string& feature) const {
    auto it = threshold.find(feature);
    return it == threshold.end() ? default_threshold : it->second;
  }
};

// One feature's result for one evaluation tick. Skipped ticks (fill policy
// not met) and per-feature errors are markers, not exceptions.
struct DriftReport {
  std::string feature;
  int64_t eval_ts = 0;
  double score = 0.0;
  MetricKind metric = MetricKind::kWasserstein;
  BaselineKind baseline_kind = BaselineKind::kGlobal;
  std::size_t window_fill = 0;
  bool partial = false;
  double threshold = 0.0;
  bool breach = false;
  bool skipped = false;
  std::string error;  // non-empty when the feature's evaluation failed
};

struct Alert {
  std::string feature;
  int64_t first_breach_ts = 0;
  int64_t alert_ts = 0;
  double score = 0.0;
  double threshold = 0.0;
  uint32_t consecutive_breaches = 0;
  // Advisory static text; diagnosis stays with the operator.
  static constexpr const char* kSuspectedCauses[2] = {
      "upstream data fault", "natural distribution shift"};
};

// Debounced alerting: a feature alerts after m consecutive breaching
// reports, then enters a cooldown measured in evaluations. Breaches during
// cooldown refresh it, so one sustained excursion produces one alert.
class PolicyState {
 public:
  explicit PolicyState(const AlertPolicy& policy) : policy_(policy) {}

  std::optional<Alert> apply(const DriftReport& r);

 private:
  struct FeatureState {
    uint32_t streak = 0;
    uint32_t cooldown_remaining = 0;
    int64_t first_breach_ts = 0;
  };
  AlertPolicy policy_;
  std::map<std::string, FeatureState> state_;
};

// The monitoring engine: per-feature sliding windows fed by ingest(), a
// drift score per feature per evaluation tick, and policy-filtered alerts.
class Engine {
 public:
  using ReportSink = std::function<void(const DriftReport&)>;
  using AlertSink = std::function<void(const Alert&)>;

  Engine(MonitorConfig config, AlertPolicy policy, const BaselineSet* baseline);

  // Pushes each configured feature reading into its window and advances the
  // cadence clock; may trigger an evaluation tick internally.
  void ingest(const Observation& o);

  // One evaluation tick at event time `now_ms`. Reports are returned and
  // also forwarded to the sinks. Never mutates windows or the baseline.
  std::vector<DriftReport> evaluate(int64_t now_ms);

  void set_report_sink(ReportSink sink) { report_sink_ = std::move(sink); }
  void set_alert_sink(AlertSink sink) { alert_sink_ = std::move(sink); }

  const MonitorConfig& config() const noexcept { return config_; }
  const AlertPolicy& policy() const noexcept { return policy_; }

  struct FeatureStatus {
    std::size_t window_fill = 0;
    std::size_t window_capacity = 0;
    uint64_t dropped_nonfinite = 0;
    std::optional<double> last_score;
    std::optional<int64_t> last_eval_ts;
  };
  struct Status {
    std::map<std::string, FeatureStatus> features;
    uint64_t observations_ingested = 0;
    uint64_t ignored_features = 0;
    uint64_t evaluations = 0;
  };
  Status status() const;

 private:
  const Histogram& baseline_histogram(const std::string& feature,
                                      const BaselineSet::LookupResult& ref);
  const std::vector<double>& edges_for(const std::string& feature);

  MonitorConfig config_;
  AlertPolicy policy_;
  const BaselineSet* baseline_;
  std::map<std::string, SlidingWindow> windows_;
  PolicyState policy_state_;
  ReportSink report_sink_;
  AlertSink alert_sink_;

  uint64_t observations_ = 0;
  uint64_t ignored_features_ = 0;
  uint64_t evaluations_ = 0;
  std::optional<int64_t> next_deadline_ms_;
  std::map<std::string, FeatureStatus> feature_status_;

  // Cached binning grid (from the global baseline span) and baseline
  // histograms, keyed by feature / baseline kind + bucket.
  std::map<std::string, std::vector<double>> edges_cache_;
  std::map<std::string, Histogram> baseline_hist_cache_;
};

// Automates the raise-until-quiet threshold search as a quantile rule over
// drift-free scores: threshold = safety * empirical q-quantile
// (nearest-rank). Requires >= 100 scores per feature.
std::map<std::string, double> calibrate(
    const std::map<std::string, std::vector<double>>& scores, double quantile = 0.999,
    double safety = 1.1);

}  // namespace driftwatch
