// Copyright 2026 The driftwatch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace driftwatch {

// One live request's feature readings, keyed by feature name.
struct Observation {
  int64_t ts = 0;  // event time, unix milliseconds
  std::map<std::string, double> values;
};

// A sorted finite sample standing in for an empirical distribution. Both
// operands of every distance computation (live window, training baseline)
// are EmpiricalSamples.
class EmpiricalSample {
 public:
  // Sorts and validates. Throws EmptyInput / NonFiniteInput.
  static EmpiricalSample from_values(std::vector<double> xs);

  // Caller guarantees xs is sorted non-decreasing, finite and non-empty.
  static EmpiricalSample from_sorted(std::vector<double> xs);

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t count() const noexcept { return values_.size(); }
  double min() const noexcept { return values_.front(); }
  double max() const noexcept { return values_.back(); }

  bool operator==(const EmpiricalSample& o) const = default;

 private:
  std::vector<double> values_;
};

// Deterministic uniform subsample of size k (identity when count <= k).
// Same (sample, k, seed) always yields the same result. Throws InvalidK.
EmpiricalSample subsample(const EmpiricalSample& s, std::size_t k, uint64_t seed);

// Fixed-capacity FIFO over the most recent finite readings of one feature.
// Single writer; snapshots copy.
class SlidingWindow {
 public:
  explicit SlidingWindow(std::size_t capacity);

  // Finite x: appended, evicting the oldest reading when full.
  // Non-finite x: dropped and counted, buffer untouched.
  void push(double x);

  // Sorted copy of the current contents. Throws EmptyWindow when empty.
  // `partial` reports whether the window has not filled yet.
  EmpiricalSample snapshot(bool* partial = nullptr) const;

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t fill() const noexcept { return buffer_.size(); }
  bool empty() const noexcept { return buffer_.empty(); }
  bool full() const noexcept { return buffer_.size() == capacity_; }
  uint64_t total_accepted() const noexcept { return total_accepted_; }
  uint64_t dropped_nonfinite() const noexcept { return dropped_nonfinite_; }

 private:
  std::size_t capacity_;
  std::vector<double> buffer_;  // ring, valid up to fill()
  std::size_t head_ = 0;        // next write position once full
  uint64_t total_accepted_ = 0;
  uint64_t dropped_nonfinite_ = 0;
};

}  // namespace driftwatch
