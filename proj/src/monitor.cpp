// Copyright 2026 The driftwatch authors
// SPDX-License-Identifier: Apache-2.0

#include "driftwatch/monitor.hpp"

#include <algorithm>
#include <cmath>

#include "driftwatch/errors.hpp"

namespace driftwatch {

std::string to_string(MetricKind m) {
  switch (m) {
    case MetricKind::kWasserstein: return "wasserstein";
    case MetricKind::kWassersteinBinned: return "wasserstein_binned";
    case MetricKind::kKl: return "kl";
  }
  return "unknown";
}

MetricKind metric_from_string(const std::string& s) {
  if (s == "wasserstein") return MetricKind::kWasserstein;
  if (s == "wasserstein_binned") return MetricKind::kWassersteinBinned;
  if (s == "kl") return MetricKind::kKl;
  throw BadConfig("unknown metric: " + s);
}

std::optional<Alert> PolicyState::apply(const DriftReport& r) {
  if (r.skipped || !r.error.empty()) return std::nullopt;
  FeatureState& st = state_[r.feature];
  if (st.cooldown_remaining > 0) {
    if (r.breach) {
      st.cooldown_remaining = policy_.cooldown_evals;  // excursion persists
    } else {
      --st.cooldown_remaining;
    }
    return std::nullopt;
  }
  if (!r.breach) {
    st.streak = 0;
    return std::nullopt;
  }
  if (st.streak == 0) st.first_breach_ts = r.eval_ts;
  ++st.streak;
  if (st.streak < policy_.consecutive_breaches_m) return std::nullopt;

  Alert a;
  a.feature = r.feature;
  a.first_breach_ts = st.first_breach_ts;
  a.alert_ts = r.eval_ts;
  a.score = r.score;
  a.threshold = r.threshold;
  a.consecutive_breaches = st.streak;
  st.streak = 0;
  st.cooldown_remaining = policy_.cooldown_evals;
  return a;
}

Engine::Engine(MonitorConfig config, AlertPolicy policy, const BaselineSet* baseline)
    : config_(std::move(config)),
      policy_(std::move(policy)),
      baseline_(baseline),
      policy_state_(policy_) {
  for (const auto& f : config_.features) {
    windows_.emplace(f, SlidingWindow(config_.window_for(f)));
    feature_status_[f].window_capacity = config_.window_for(f);
  }
}

void Engine::ingest(const Observation& o) {
  for (const auto& [name, value] : o.values) {
    auto it = windows_.find(name);
    if (it == windows_.end()) {
      ++ignored_features_;
      continue;
    }
    it->second.push(value);
  }
  ++observations_;

  switch (config_.cadence.mode) {
    case EvalCadence::Mode::kObservations:
      if (observations_ % config_.cadence.every_observations == 0) {
        evaluate(o.ts);
      }
      break;
    case EvalCadence::Mode::kSeconds: {
      const auto period_ms =
          static_cast<int64_t>(config_.cadence.every_seconds * 1000.0);
      if (!next_deadline_ms_) {
        next_deadline_ms_ = o.ts + period_ms;
      } else if (o.ts >= *next_deadline_ms_) {
        evaluate(o.ts);
        while (*next_deadline_ms_ <= o.ts) *next_deadline_ms_ += period_ms;
      }
      break;
    }
    case EvalCadence::Mode::kExternal:
      break;
  }
}

const std::vector<double>& Engine::edges_for(const std::string& feature) {
  auto it = edges_cache_.find(feature);
  if (it != edges_cache_.end()) return it->second;
  const EmpiricalSample& global = baseline_->feature(feature).global;
  auto edges = default_edges(global.min(), global.max(), config_.histogram_bins);
  return edges_cache_.emplace(feature, std::move(edges)).first->second;
}

const Histogram& Engine::baseline_histogram(const std::string& feature,
                                            const BaselineSet::LookupResult& ref) {
  std::string key = feature + "/" + to_string(ref.kind);
  if (ref.kind == BaselineKind::kSeasonal) key += std::to_string(ref.bucket);
  auto it = baseline_hist_cache_.find(key);
  if (it != baseline_hist_cache_.end()) return it->second;
  Histogram h = histogram(*ref.sample, edges_for(feature));
  return baseline_hist_cache_.emplace(std::move(key), std::move(h)).first->second;
}

std::vector<DriftReport> Engine::evaluate(int64_t now_ms) {
  std::vector<DriftReport> reports;
  reports.reserve(config_.features.size());
  ++evaluations_;

  for (const auto& feature : config_.features) {
    const SlidingWindow& w = windows_.at(feature);
    DriftReport r;
    r.feature = feature;
    r.eval_ts = now_ms;
    r.metric = config_.metric;
    r.window_fill = w.fill();
    r.partial = !w.full();
    r.threshold = policy_.threshold_for(feature);

    const bool fill_ok = config_.evaluate_partial
                             ? w.fill() >= config_.min_partial_fill
                             : w.full();
    if (w.empty() || !fill_ok) {
      r.skipped = true;
    } else {
      try {
        const EmpiricalSample live = w.snapshot();
        const auto ref =
            baseline_->lookup(feature, now_ms, config_.seasonal_baseline);
        r.baseline_kind = ref.kind;
        switch (config_.metric) {
          case MetricKind::kWasserstein:
            r.score = wasserstein(live, *ref.sample);
            break;
          case MetricKind::kWassersteinBinned:
            r.score = wasserstein_binned(histogram(live, edges_for(feature)),
                                         baseline_histogram(feature, ref));
            break;
          case MetricKind::kKl:
            r.score = kl_divergence(histogram(live, edges_for(feature)),
                                    baseline_histogram(feature, ref));
            break;
        }
        r.breach = r.score > r.threshold;
      } catch (const Error& e) {
        r.error = e.code();
      }
    }

    if (!r.skipped && r.error.empty()) {
      auto& fs = feature_status_[feature];
      fs.last_score = r.score;
      fs.last_eval_ts = now_ms;
    }
    if (report_sink_) report_sink_(r);
    if (auto alert = policy_state_.apply(r); alert && alert_sink_) {
      alert_sink_(*alert);
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

Engine::Status Engine::status() const {
  Status s;
  s.observations_ingested = observations_;
  s.ignored_features = ignored_features_;
  s.evaluations = evaluations_;
  for (const auto& [name, w] : windows_) {
    FeatureStatus fs = feature_status_.at(name);
    fs.window_fill = w.fill();
    fs.window_capacity = w.capacity();
    fs.dropped_nonfinite = w.dropped_nonfinite();
    s.features[name] = fs;
  }
  return s;
}

std::map<std::string, double> calibrate(
    const std::map<std::string, std::vector<double>>& scores, double quantile,
    double safety) {
  if (!(quantile > 0.0 && quantile < 1.0) || safety < 1.0) {
    throw BadConfig("calibrate: need 0 < quantile < 1 and safety >= 1");
  }
  std::map<std::string, double> thresholds;
  for (const auto& [feature, raw] : scores) {
    if (raw.size() < 100) {
      throw InsufficientScores("calibrate: feature " + feature + " has " +
                               std::to_string(raw.size()) +
                               " scores, need >= 100");
    }
    std::vector<double> sorted(raw);
    std::sort(sorted.begin(), sorted.end());
    // Nearest-rank empirical quantile.
    const auto rank = static_cast<std::size_t>(
        std::ceil(quantile * static_cast<double>(sorted.size())));
    thresholds[feature] = safety * sorted[std::min(rank, sorted.size()) - 1];
  }
  return thresholds;
}

}  // namespace driftwatch
