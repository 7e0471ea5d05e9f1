// Copyright 2026 The driftwatch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "driftwatch/baseline.hpp"
#include "driftwatch/monitor.hpp"

namespace driftwatch {

struct ReplayResult {
  std::vector<DriftReport> reports;  // evaluated reports only, in tick order
  std::vector<Alert> alerts;
  Engine::Status status;
};

// Offline, event-time-driven run of the engine over a recorded stream.
// Deterministic: identical inputs produce identical report and alert
// sequences.
ReplayResult replay(const std::vector<Observation>& observations,
                    const MonitorConfig& config, const AlertPolicy& policy,
                    const BaselineSet& baseline);

}  // namespace driftwatch
