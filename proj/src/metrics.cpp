// Copyright 2026 The driftwatch authors
// SPDX-License-Identifier: Apache-2.0

#include "driftwatch/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "driftwatch/errors.hpp"

namespace driftwatch {

namespace {

// Area between the two empirical CDFs over the merged support.
double cdf_area(const std::vector<double>& a, const std::vector<double>& b) {
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double prev = std::min(a.front(), b.front());
  double area = 0.0;
  while (i < a.size() || j < b.size()) {
    const double ai = i < a.size() ? a[i] : std::numeric_limits<double>::infinity();
    const double bj = j < b.size() ? b[j] : std::numeric_limits<double>::infinity();
    const double cur = std::min(ai, bj);
    area += std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb) *
            (cur - prev);
    while (i < a.size() && a[i] == cur) ++i;
    while (j < b.size() && b[j] == cur) ++j;
    prev = cur;
  }
  return area;
}

}  // namespace

double wasserstein(const EmpiricalSample& a, const EmpiricalSample& b) {
  if (a.count() == 0 || b.count() == 0) {
    throw EmptySample("wasserstein: empty sample");
  }
  if (a.count() == b.count()) {
    // Equal counts: mean absolute difference of order statistics.
    double sum = 0.0;
    for (std::size_t i = 0; i < a.count(); ++i) {
      sum += std::abs(a.values()[i] - b.values()[i]);
    }
    return sum / static_cast<double>(a.count());
  }
  return cdf_area(a.values(), b.values());
}

Histogram histogram(const EmpiricalSample& s, const std::vector<double>& edges) {
  if (s.count() == 0) throw EmptySample("histogram: empty sample");
  if (edges.size() < 2) throw BadEdges("histogram: need at least 2 edges");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) {
      throw BadEdges("histogram: edges must be strictly increasing");
    }
  }
  const std::size_t bins = edges.size() - 1;
  Histogram h;
  h.edges = edges;
  h.mass.assign(bins, 0.0);
  std::size_t clamped = 0;
  for (double x : s.values()) {
    std::size_t bin;
    if (x < edges.front()) {
      bin = 0;
      ++clamped;
    } else if (x >= edges.back()) {
      bin = bins - 1;
      ++clamped;
    } else {
      bin = static_cast<std::size_t>(
                std::upper_bound(edges.begin(), edges.end(), x) - edges.begin()) -
            1;
    }
    h.mass[bin] += 1.0;
  }
  const double n = static_cast<double>(s.count());
  for (double& m : h.mass) m /= n;
  h.clamped_fraction = static_cast<double>(clamped) / n;
  return h;
}

double wasserstein_binned(const Histogram& p, const Histogram& q) {
  if (p.edges != q.edges) {
    throw EdgeMismatch("wasserstein_binned: histograms must share edges");
  }
  // Mass sits at bin midpoints; integrate |CDF difference| between midpoints.
  double dist = 0.0;
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < p.bins(); ++i) {
    cum += p.mass[i] - q.mass[i];
    const double mid_i = 0.5 * (p.edges[i] + p.edges[i + 1]);
    const double mid_next = 0.5 * (p.edges[i + 1] + p.edges[i + 2]);
    dist += std::abs(cum) * (mid_next - mid_i);
  }
  return dist;
}

double kl_divergence(const Histogram& p, const Histogram& q, double eps) {
  if (p.edges != q.edges) {
    throw EdgeMismatch("kl_divergence: histograms must share edges");
  }
  if (!(eps > 0.0)) throw BadEps("kl_divergence: eps must be > 0");
  const double norm = 1.0 + static_cast<double>(p.bins()) * eps;
  double kl = 0.0;
  for (std::size_t i = 0; i < p.bins(); ++i) {
    const double pi = (p.mass[i] + eps) / norm;
    const double qi = (q.mass[i] + eps) / norm;
    kl += pi * std::log(pi / qi);
  }
  return std::max(kl, 0.0);
}

std::vector<double> default_edges(double lo, double hi, std::size_t bins) {
  double span = hi - lo;
  if (span <= 0.0) {
    lo -= 0.5;
    hi += 0.5;
    span = hi - lo;
  }
  const double pad = 0.1 * span;
  const double a = lo - pad;
  const double b = hi + pad;
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    edges[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(bins);
  }
  return edges;
}

}  // namespace driftwatch
