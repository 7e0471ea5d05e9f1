// Copyright 2026 The driftwatch authors
// SPDX-License-Identifier: Apache-2.0

#include "driftwatch/baseline.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "driftwatch/errors.hpp"
#include "driftwatch/rng.hpp"

namespace driftwatch {

namespace {

constexpr char kMagic[4] = {'D', 'W', 'B', 'F'};
constexpr uint32_t kFormatVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "the .dwb layout is pinned little-endian");

uint64_t fnv1a(const void* data, std::size_t len, uint64_t h = 0xCBF29CE484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

uint64_t feature_stream_seed(uint64_t build_seed, const std::string& feature) {
  return sub_seed(build_seed, fnv1a(feature.data(), feature.size()));
}

// Append-only byte sink that tracks the running checksum.
class Writer {
 public:
  void raw(const void* data, std::size_t len) {
    const auto* p = static_cast<const char*>(data);
    bytes_.insert(bytes_.end(), p, p + len);
  }
  template <typename T>
  void scalar(T v) {
    raw(&v, sizeof(T));
  }
  void str(const std::string& s) {
    scalar<uint32_t>(static_cast<uint32_t>(s.size()));
    raw(s.data(), s.size());
  }
  void doubles(const std::vector<double>& xs) {
    scalar<uint64_t>(xs.size());
    raw(xs.data(), xs.size() * sizeof(double));
  }
  const std::vector<char>& bytes() const { return bytes_; }

 private:
  std::vector<char> bytes_;
};

class Reader {
 public:
  Reader(const char* data, std::size_t len) : data_(data), len_(len) {}

  void raw(void* out, std::size_t len) {
    if (pos_ + len > len_) throw CorruptFile("truncated baseline file");
    std::memcpy(out, data_ + pos_, len);
    pos_ += len;
  }
  template <typename T>
  T scalar() {
    T v;
    raw(&v, sizeof(T));
    return v;
  }
  std::string str() {
    const auto n = scalar<uint32_t>();
    std::string s(n, '\0');
    raw(s.data(), n);
    return s;
  }
  std::vector<double> doubles() {
    const auto n = scalar<uint64_t>();
    std::vector<double> xs(n);
    raw(xs.data(), n * sizeof(double));
    return xs;
  }
  std::size_t pos() const { return pos_; }

 private:
  const char* data_;
  std::size_t len_;
  std::size_t pos_ = 0;
};

}  // namespace

SeasonalKey bucket_of(int64_t ts_ms, uint32_t bucket_minutes) {
  if (bucket_minutes == 0 || 1440 % bucket_minutes != 0) {
    throw BadBucketWidth("bucket_minutes must divide 1440");
  }
  constexpr int64_t kDayMs = 86400000;
  int64_t in_day = ts_ms % kDayMs;
  if (in_day < 0) in_day += kDayMs;
  const int64_t minute_of_day = in_day / 60000;
  return SeasonalKey{static_cast<uint32_t>(minute_of_day / bucket_minutes)};
}

std::string to_string(BaselineKind k) {
  switch (k) {
    case BaselineKind::kGlobal: return "global";
    case BaselineKind::kSeasonal: return "seasonal";
    case BaselineKind::kFallbackGlobal: return "fallback_global";
  }
  return "unknown";
}

BaselineSet BaselineSet::build(const std::vector<Observation>& records,
                               const BaselineBuildConfig& cfg, int64_t build_ts) {
  if (records.empty()) throw EmptyTraining("build_baseline: no observations");
  if (cfg.bucket_minutes == 0 || 1440 % cfg.bucket_minutes != 0) {
    throw BadBucketWidth("bucket_minutes must divide 1440");
  }

  struct Raw {
    std::vector<double> all;
    std::map<SeasonalKey, std::vector<double>> buckets;
  };
  std::map<std::string, Raw> raw;
  for (const auto& obs : records) {
    for (const auto& [name, value] : obs.values) {
      if (!std::isfinite(value)) continue;
      auto& r = raw[name];
      r.all.push_back(value);
      if (cfg.seasonal) {
        r.buckets[bucket_of(obs.ts, cfg.bucket_minutes)].push_back(value);
      }
    }
  }
  if (raw.empty()) throw EmptyTraining("build_baseline: no finite readings");

  BaselineSet b;
  b.meta_ = Meta{cfg.bucket_minutes, cfg.sample_cap, cfg.seed, build_ts,
                 cfg.seasonal};
  for (auto& [name, r] : raw) {
    FeatureBaseline fb;
    const uint64_t fseed = feature_stream_seed(cfg.seed, name);
    fb.global = subsample(EmpiricalSample::from_values(std::move(r.all)),
                          cfg.sample_cap, fseed);
    for (auto& [key, values] : r.buckets) {
      fb.raw_bucket_counts[key] = values.size();
      fb.seasonal[key] =
          subsample(EmpiricalSample::from_values(std::move(values)),
                    cfg.sample_cap, sub_seed(fseed, key.bucket + 1));
    }
    b.features_[name] = std::move(fb);
  }
  return b;
}

BaselineSet::LookupResult BaselineSet::lookup(const std::string& feature,
                                              int64_t ts_ms,
                                              bool seasonal_mode) const {
  auto it = features_.find(feature);
  if (it == features_.end()) throw UnknownFeature("no baseline for " + feature);
  const FeatureBaseline& fb = it->second;
  if (seasonal_mode) {
    const SeasonalKey key = bucket_of(ts_ms, meta_.bucket_minutes);
    auto sit = fb.seasonal.find(key);
    if (sit != fb.seasonal.end()) {
      auto cit = fb.raw_bucket_counts.find(key);
      const uint64_t raw_count = cit == fb.raw_bucket_counts.end() ? 0 : cit->second;
      if (raw_count >= kSparsityFloor) {
        return {&sit->second, BaselineKind::kSeasonal, key.bucket};
      }
    }
    return {&fb.global, BaselineKind::kFallbackGlobal, key.bucket};
  }
  return {&fb.global, BaselineKind::kGlobal, 0};
}

bool BaselineSet::has_feature(const std::string& feature) const {
  return features_.count(feature) > 0;
}

const FeatureBaseline& BaselineSet::feature(const std::string& name) const {
  auto it = features_.find(name);
  if (it == features_.end()) throw UnknownFeature("no baseline for " + name);
  return it->second;
}

std::vector<std::string> BaselineSet::feature_names() const {
  std::vector<std::string> names;
  names.reserve(features_.size());
  for (const auto& [name, _] : features_) names.push_back(name);
  return names;
}

void BaselineSet::save(const std::string& path) const {
  Writer w;
  w.raw(kMagic, sizeof(kMagic));
  w.scalar<uint32_t>(kFormatVersion);
  w.scalar<uint32_t>(meta_.bucket_minutes);
  w.scalar<uint32_t>(meta_.sample_cap);
  w.scalar<uint64_t>(meta_.seed);
  w.scalar<int64_t>(meta_.build_ts);
  w.scalar<uint8_t>(meta_.seasonal ? 1 : 0);
  w.scalar<uint32_t>(static_cast<uint32_t>(features_.size()));
  for (const auto& [name, fb] : features_) {
    w.str(name);
    w.doubles(fb.global.values());
    w.scalar<uint32_t>(static_cast<uint32_t>(fb.seasonal.size()));
    for (const auto& [key, sample] : fb.seasonal) {
      w.scalar<uint32_t>(key.bucket);
      auto cit = fb.raw_bucket_counts.find(key);
      w.scalar<uint64_t>(cit == fb.raw_bucket_counts.end() ? 0 : cit->second);
      w.doubles(sample.values());
    }
  }
  const uint64_t checksum = fnv1a(w.bytes().data(), w.bytes().size());

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  out.write(reinterpret_cast<const char*>(&checksum), sizeof(checksum));
  if (!out) throw IoError("write failed: " + path);
}

BaselineSet BaselineSet::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  if (bytes.size() < sizeof(kMagic) + sizeof(uint32_t) + sizeof(uint64_t)) {
    throw CorruptFile("baseline file too short: " + path);
  }
  const std::size_t body_len = bytes.size() - sizeof(uint64_t);
  uint64_t stored_checksum;
  std::memcpy(&stored_checksum, bytes.data() + body_len, sizeof(stored_checksum));
  if (fnv1a(bytes.data(), body_len) != stored_checksum) {
    throw CorruptFile("checksum mismatch: " + path);
  }

  Reader r(bytes.data(), body_len);
  char magic[4];
  r.raw(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw CorruptFile("bad magic: " + path);
  }
  const auto version = r.scalar<uint32_t>();
  if (version != kFormatVersion) {
    throw FormatVersionMismatch("unsupported baseline format version " +
                                std::to_string(version));
  }

  BaselineSet b;
  b.meta_.bucket_minutes = r.scalar<uint32_t>();
  b.meta_.sample_cap = r.scalar<uint32_t>();
  b.meta_.seed = r.scalar<uint64_t>();
  b.meta_.build_ts = r.scalar<int64_t>();
  b.meta_.seasonal = r.scalar<uint8_t>() != 0;
  const auto n_features = r.scalar<uint32_t>();
  for (uint32_t f = 0; f < n_features; ++f) {
    const std::string name = r.str();
    FeatureBaseline fb;
    fb.global = EmpiricalSample::from_sorted(r.doubles());
    const auto n_buckets = r.scalar<uint32_t>();
    for (uint32_t i = 0; i < n_buckets; ++i) {
      SeasonalKey key{r.scalar<uint32_t>()};
      fb.raw_bucket_counts[key] = r.scalar<uint64_t>();
      fb.seasonal[key] = EmpiricalSample::from_sorted(r.doubles());
    }
    b.features_[name] = std::move(fb);
  }
  return b;
}

std::string BaselineSet::to_json() const {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["meta"] = {{"bucket_minutes", meta_.bucket_minutes},
               {"sample_cap", meta_.sample_cap},
               {"seed", meta_.seed},
               {"build_ts", meta_.build_ts},
               {"seasonal", meta_.seasonal}};
  nlohmann::json feats = nlohmann::json::object();
  for (const auto& [name, fb] : features_) {
    nlohmann::json jf;
    jf["global"] = fb.global.values();
    nlohmann::json buckets = nlohmann::json::object();
    for (const auto& [key, sample] : fb.seasonal) {
      auto cit = fb.raw_bucket_counts.find(key);
      buckets[std::to_string(key.bucket)] = {
          {"raw_count", cit == fb.raw_bucket_counts.end() ? 0 : cit->second},
          {"values", sample.values()}};
    }
    jf["seasonal"] = std::move(buckets);
    feats[name] = std::move(jf);
  }
  j["features"] = std::move(feats);
  return j.dump(2);
}

bool BaselineSet::operator==(const BaselineSet& o) const {
  return meta_ == o.meta_ && features_ == o.features_;
}

}  // namespace driftwatch
