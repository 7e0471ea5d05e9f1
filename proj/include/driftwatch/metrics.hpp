// Copyright 2026 The driftwatch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "driftwatch/distribution.hpp"

namespace driftwatch {

// Normalized histogram over shared bin edges. Values falling outside the
// edge span are clamped into the first/last bin; the clamped fraction is a
// drift signal in its own right.
struct Histogram {
  std::vector<double> edges;  // B+1 strictly increasing boundaries
  std::vector<double> mass;   // B non-negative entries summing to 1
  double clamped_fraction = 0.0;

  std::size_t bins() const noexcept { return mass.size(); }
};

// Exact order-1 Wasserstein distance between two empirical distributions:
// the area between the empirical CDFs. For equal counts this coincides with
// the mean absolute difference of order statistics. Throws EmptySample.
double wasserstein(const EmpiricalSample& a, const EmpiricalSample& b);

// Bin a sample onto the given edges. Throws EmptySample / BadEdges.
Histogram histogram(const EmpiricalSample& s, const std::vector<double>& edges);

// Order-1 Wasserstein between two binned distributions with each bin's mass
// at its midpoint. Linear in the bin count, independent of sample sizes.
// Throws EdgeMismatch.
double wasserstein_binned(const Histogram& p, const Histogram& q);

// KL(p || q) in nats over shared bins, with additive eps smoothing and
// renormalization so the result is always finite. Throws EdgeMismatch / BadEps.
double kl_divergence(const Histogram& p, const Histogram& q, double eps = 1e-9);

// Default binning grid: `bins` equal-width bins spanning [lo, hi] expanded by
// 10% on each side. A degenerate span (lo == hi) is widened to unit width.
std::vector<double> default_edges(double lo, double hi, std::size_t bins = 256);

}  // namespace driftwatch
