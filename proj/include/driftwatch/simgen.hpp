// Copyright 2026 The driftwatch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "driftwatch/distribution.hpp"

namespace driftwatch {
namespace simgen {

// All generators are pure functions of their parameters: one reading per
// observation, strictly increasing timestamps, and a per-index sub-seeded
// draw so streams are reproducible and segment-stable.

struct StationaryParams {
  double mu = 100.0;
  double sigma2 = 10.0;
  uint64_t count = 10000;
  uint64_t seed = 0;
  int64_t start_ts = 0;
  int64_t emission_interval_ms = 5000;
  std::string feature = "value";
};

std::vector<Observation> gen_stationary(const StationaryParams& p);

struct ShiftParams {
  double mu1 = 100.0;
  double mu2 = 90.0;
  double sigma2 = 10.0;
  uint64_t t_shift = 2000;  // observation index of the first shifted reading
  uint64_t count = 4000;
  uint64_t seed = 0;
  int64_t start_ts = 0;
  int64_t emission_interval_ms = 5000;
  std::string feature = "value";
};

std::vector<Observation> gen_shift(const ShiftParams& p);

struct SeasonalParams {
  double base = 1000.0;
  double amplitude = 300.0;
  double noise_sigma = 50.0;
  uint32_t days = 1;
  uint64_t seed = 0;
  int64_t start_ts = 0;  // midnight-aligned by convention
  int64_t emission_interval_ms = 5000;
  std::string feature = "txn_count_1h";
};

// reading(ts) = base + amplitude * shape(time-of-day) + N(0, noise_sigma^2),
// where shape is a half-sine day curve over 06:00-22:00 UTC, zero at night,
// centered to mean 0 over the day and scaled to max 1.
std::vector<Observation> gen_seasonal(const SeasonalParams& p);

// Noiseless day-curve value at a timestamp (test and oracle hook).
double seasonal_shape(int64_t ts_ms, int64_t emission_interval_ms);

struct StaleParams {
  uint32_t window_hours = 168;
  uint64_t freeze_at = 0;  // observation index after which events stop
  uint64_t count = 0;
  uint64_t seed = 0;
  double events_per_hour = 20.0;
  int64_t start_ts = 0;
  int64_t emission_interval_ms = 300000;  // 5 minutes
  std::string feature = "visits_7d";
  std::string constant_feature = "static_level";  // non-windowed control
  double constant_value = 50.0;
};

// A "visits in the past week" sliding-count feature over a simulated event
// table, plus a constant non-windowed control feature. After freeze_at the
// table stops receiving events and the windowed count decays to zero within
// window_hours; the control feature never moves.
std::vector<Observation> gen_stale(const StaleParams& p);

}  // namespace simgen
}  // namespace driftwatch
