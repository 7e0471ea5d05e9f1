// Copyright 2026 The driftwatch authors
// SPDX-License-Identifier: Apache-2.0

#include "driftwatch/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "driftwatch/errors.hpp"
#include "driftwatch/rng.hpp"

namespace driftwatch {

EmpiricalSample EmpiricalSample::from_values(std::vector<double> xs) {
  if (xs.empty()) throw EmptyInput("sample_from_values: empty input");
  for (double x : xs) {
    if (!std::isfinite(x)) {
      throw NonFiniteInput("sample_from_values: non-finite reading");
    }
  }
  std::sort(xs.begin(), xs.end());
  return from_sorted(std::move(xs));
}

EmpiricalSample EmpiricalSample::from_sorted(std::vector<double> xs) {
  EmpiricalSample s;
  s.values_ = std::move(xs);
  return s;
}

EmpiricalSample subsample(const EmpiricalSample& s, std::size_t k, uint64_t seed) {
  if (k == 0) throw InvalidK("subsample: k must be >= 1");
  const std::size_t n = s.count();
  if (n <= k) return s;

  // Selection sampling (Knuth 3.4.2 S): walk the sorted values once, keeping
  // each with probability (needed / remaining). Output stays sorted.
  SplitMix64 rng(seed);
  std::vector<double> out;
  out.reserve(k);
  std::size_t needed = k;
  for (std::size_t i = 0; i < n && needed > 0; ++i) {
    const std::size_t remaining = n - i;
    if (rng.next_below(remaining) < needed) {
      out.push_back(s.values()[i]);
      --needed;
    }
  }
  return EmpiricalSample::from_sorted(std::move(out));
}

SlidingWindow::SlidingWindow(std::size_t capacity) : capacity_(capacity) {
  buffer_.reserve(capacity);
}

void SlidingWindow::push(double x) {
  if (!std::isfinite(x)) {
    ++dropped_nonfinite_;
    return;
  }
  if (buffer_.size() < capacity_) {
    buffer_.push_back(x);
  } else {
    buffer_[head_] = x;
    head_ = (head_ + 1) % capacity_;
  }
  ++total_accepted_;
}

EmpiricalSample SlidingWindow::snapshot(bool* partial) const {
  if (buffer_.empty()) throw EmptyWindow("snapshot of empty window");
  if (partial) *partial = buffer_.size() < capacity_;
  std::vector<double> copy(buffer_);
  std::sort(copy.begin(), copy.end());
  return EmpiricalSample::from_sorted(std::move(copy));
}

}  // namespace driftwatch
