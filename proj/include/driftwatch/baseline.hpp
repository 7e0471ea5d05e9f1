// Copyright 2026 The driftwatch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "driftwatch/distribution.hpp"

namespace driftwatch {

// Time-of-day bucket index. bucket < 1440 / bucket_minutes.
struct SeasonalKey {
  uint32_t bucket = 0;
  auto operator<=>(const SeasonalKey&) const = default;
};

// Maps a timestamp to its UTC time-of-day bucket. Throws BadBucketWidth
// unless bucket_minutes divides 1440.
SeasonalKey bucket_of(int64_t ts_ms, uint32_t bucket_minutes);

struct BaselineBuildConfig {
  uint32_t bucket_minutes = 60;
  uint32_t sample_cap = 10000;
  uint64_t seed = 0;
  bool seasonal = false;
};

enum class BaselineKind { kGlobal, kSeasonal, kFallbackGlobal };

std::string to_string(BaselineKind k);

struct FeatureBaseline {
  EmpiricalSample global;
  std::map<SeasonalKey, EmpiricalSample> seasonal;
  std::map<SeasonalKey, uint64_t> raw_bucket_counts;
  bool operator==(const FeatureBaseline&) const = default;
};

// Per-feature training references: one global sample per feature, plus
// optional per-time-of-day-bucket samples. Immutable after build/load.
class BaselineSet {
 public:
  struct Meta {
    uint32_t bucket_minutes = 60;
    uint32_t sample_cap = 10000;
    uint64_t seed = 0;
    int64_t build_ts = 0;
    bool seasonal = false;
    bool operator==(const Meta&) const = default;
  };

  struct LookupResult {
    const EmpiricalSample* sample;
    BaselineKind kind;
    uint32_t bucket;  // meaningful only for kSeasonal
  };

  // Seasonal buckets with fewer raw readings than this fall back to global.
  static constexpr uint64_t kSparsityFloor = 100;

  // Deterministic in (records, cfg). Throws EmptyTraining / BadBucketWidth.
  static BaselineSet build(const std::vector<Observation>& records,
                           const BaselineBuildConfig& cfg,
                           int64_t build_ts = 0);

  // Routes to the global sample or the time-of-day bucket for ts; a missing
  // or sparse bucket falls back to global. Throws UnknownFeature.
  LookupResult lookup(const std::string& feature, int64_t ts_ms,
                      bool seasonal_mode) const;

  bool has_feature(const std::string& feature) const;
  const FeatureBaseline& feature(const std::string& name) const;
  std::vector<std::string> feature_names() const;
  const Meta& meta() const noexcept { return meta_; }

  // Versioned single-file binary container (.dwb), little-endian, with a
  // trailing checksum. load(save(b)) == b bit-exactly.
  void save(const std::string& path) const;
  static BaselineSet load(const std::string& path);

  // Same tree as a single JSON document, for inspection.
  std::string to_json() const;

  bool operator==(const BaselineSet& o) const;

 private:
  Meta meta_;
  std::map<std::string, FeatureBaseline> features_;
};

}  // namespace driftwatch
