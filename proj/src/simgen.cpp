// Copyright 2026 The driftwatch authors
// SPDX-License-Identifier: Apache-2.0

#include "driftwatch/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "driftwatch/errors.hpp"
#include "driftwatch/rng.hpp"

namespace driftwatch {
namespace simgen {

namespace {

constexpr int64_t kDayMs = 86400000;

double gaussian_at(uint64_t seed, uint64_t index, double mu, double sigma) {
  SplitMix64 rng(sub_seed(seed, index));
  return mu + sigma * rng.next_gaussian();
}

// Raw half-sine day curve: 0 at night, peak 1 at 14:00 UTC.
double raw_shape(double minute_of_day) {
  constexpr double kStart = 360.0;  // 06:00
  constexpr double kEnd = 1320.0;   // 22:00
  if (minute_of_day < kStart || minute_of_day >= kEnd) return 0.0;
  return std::sin(M_PI * (minute_of_day - kStart) / (kEnd - kStart));
}

// Discrete daily mean of the raw curve over the emission grid, so the
// centered curve averages to zero over exactly the samples we emit. Falls
// back to the analytic mean when the interval does not divide the day.
double raw_shape_daily_mean_uncached(int64_t emission_interval_ms) {
  if (emission_interval_ms > 0 && kDayMs % emission_interval_ms == 0) {
    const int64_t n = kDayMs / emission_interval_ms;
    double sum = 0.0;
    for (int64_t i = 0; i < n; ++i) {
      sum += raw_shape(static_cast<double>(i * emission_interval_ms) / 60000.0);
    }
    return sum / static_cast<double>(n);
  }
  // (1/1440) * integral of the half-sine = (960 * 2/pi) / 1440
  return 4.0 / (3.0 * M_PI);
}

double raw_shape_daily_mean(int64_t emission_interval_ms) {
  static std::mutex mu;
  static std::map<int64_t, double> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(emission_interval_ms);
  if (it == cache.end()) {
    it = cache
             .emplace(emission_interval_ms,
                      raw_shape_daily_mean_uncached(emission_interval_ms))
             .first;
  }
  return it->second;
}

}  // namespace

std::vector<Observation> gen_stationary(const StationaryParams& p) {
  if (!(p.sigma2 > 0.0) || p.count < 1 || p.emission_interval_ms <= 0) {
    throw BadParams("gen_stationary: need sigma2 > 0, count >= 1, interval > 0");
  }
  const double sigma = std::sqrt(p.sigma2);
  std::vector<Observation> out;
  out.reserve(p.count);
  for (uint64_t i = 0; i < p.count; ++i) {
    Observation o;
    o.ts = p.start_ts + static_cast<int64_t>(i) * p.emission_interval_ms;
    o.values[p.feature] = gaussian_at(p.seed, i, p.mu, sigma);
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<Observation> gen_shift(const ShiftParams& p) {
  if (!(p.sigma2 > 0.0) || p.count < 1 || p.t_shift == 0 || p.t_shift >= p.count ||
      p.emission_interval_ms <= 0) {
    throw BadParams("gen_shift: need sigma2 > 0 and 0 < t_shift < count");
  }
  const double sigma = std::sqrt(p.sigma2);
  std::vector<Observation> out;
  out.reserve(p.count);
  for (uint64_t i = 0; i < p.count; ++i) {
    const double mu = i < p.t_shift ? p.mu1 : p.mu2;
    Observation o;
    o.ts = p.start_ts + static_cast<int64_t>(i) * p.emission_interval_ms;
    o.values[p.feature] = gaussian_at(p.seed, i, mu, sigma);
    out.push_back(std::move(o));
  }
  return out;
}

double seasonal_shape(int64_t ts_ms, int64_t emission_interval_ms) {
  const double mean = raw_shape_daily_mean(emission_interval_ms);
  int64_t in_day = ts_ms % kDayMs;
  if (in_day < 0) in_day += kDayMs;
  const double raw = raw_shape(static_cast<double>(in_day) / 60000.0);
  return (raw - mean) / (1.0 - mean);
}

std::vector<Observation> gen_seasonal(const SeasonalParams& p) {
  if (p.days < 1 || p.amplitude < 0.0 || p.noise_sigma < 0.0 ||
      p.emission_interval_ms <= 0) {
    throw BadParams("gen_seasonal: need days >= 1, amplitude >= 0, sigma >= 0");
  }
  const uint64_t count =
      static_cast<uint64_t>(p.days) * (kDayMs / p.emission_interval_ms);
  std::vector<Observation> out;
  out.reserve(count);
  for (uint64_t i = 0; i < count; ++i) {
    Observation o;
    o.ts = p.start_ts + static_cast<int64_t>(i) * p.emission_interval_ms;
    const double level =
        p.base + p.amplitude * seasonal_shape(o.ts, p.emission_interval_ms);
    o.values[p.feature] = level + gaussian_at(p.seed, i, 0.0, p.noise_sigma);
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<Observation> gen_stale(const StaleParams& p) {
  if (p.count < 1 || p.freeze_at >= p.count || p.window_hours < 1 ||
      p.emission_interval_ms <= 0 || p.events_per_hour <= 0.0) {
    throw BadParams("gen_stale: need count >= 1, freeze_at < count, window >= 1h");
  }
  constexpr int64_t kHourMs = 3600000;
  const int64_t freeze_ts =
      p.start_ts + static_cast<int64_t>(p.freeze_at) * p.emission_interval_ms;
  const int64_t last_ts =
      p.start_ts + static_cast<int64_t>(p.count - 1) * p.emission_interval_ms;
  const int64_t window_ms = static_cast<int64_t>(p.window_hours) * kHourMs;

  // Hourly event counts for the simulated upstream table, covering one
  // window before the stream starts so the feature opens at a stable level.
  // Hours at or after the freeze receive no events.
  const int64_t first_hour = (p.start_ts - window_ms) / kHourMs - 1;
  const int64_t last_hour = last_ts / kHourMs;
  std::vector<double> hour_events(static_cast<std::size_t>(last_hour - first_hour + 1), 0.0);
  const double rate_sigma = std::sqrt(p.events_per_hour);
  for (int64_t h = first_hour; h <= last_hour; ++h) {
    if (h * kHourMs >= freeze_ts) break;
    const double draw = gaussian_at(p.seed, static_cast<uint64_t>(h - first_hour),
                                    p.events_per_hour, rate_sigma);
    hour_events[static_cast<std::size_t>(h - first_hour)] =
        std::max(0.0, std::round(draw));
  }
  // Prefix sums for O(1) window queries.
  std::vector<double> prefix(hour_events.size() + 1, 0.0);
  for (std::size_t i = 0; i < hour_events.size(); ++i) {
    prefix[i + 1] = prefix[i] + hour_events[i];
  }
  auto cum_to = [&](int64_t hour) {
    const int64_t idx = std::clamp<int64_t>(hour - first_hour + 1, 0,
                                            static_cast<int64_t>(hour_events.size()));
    return prefix[static_cast<std::size_t>(idx)];
  };

  std::vector<Observation> out;
  out.reserve(p.count);
  for (uint64_t i = 0; i < p.count; ++i) {
    Observation o;
    o.ts = p.start_ts + static_cast<int64_t>(i) * p.emission_interval_ms;
    const int64_t upto = o.ts / kHourMs;                  // inclusive hour
    const int64_t from = (o.ts - window_ms) / kHourMs;    // exclusive hour
    o.values[p.feature] = cum_to(upto) - cum_to(from);
    o.values[p.constant_feature] = p.constant_value;
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace simgen
}  // namespace driftwatch
