// Copyright 2026 The driftwatch authors
// SPDX-License-Identifier: Apache-2.0

#include "driftwatch/replay.hpp"

namespace driftwatch {

ReplayResult replay(const std::vector<Observation>& observations,
                    const MonitorConfig& config, const AlertPolicy& policy,
                    const BaselineSet& baseline) {
  ReplayResult result;
  Engine engine(config, policy, &baseline);
  engine.set_report_sink([&](const DriftReport& r) {
    if (!r.skipped && r.error.empty()) result.reports.push_back(r);
  });
  engine.set_alert_sink([&](const Alert& a) { result.alerts.push_back(a); });
  for (const auto& o : observations) engine.ingest(o);
  result.status = engine.status();
  return result;
}

}  // namespace driftwatch
