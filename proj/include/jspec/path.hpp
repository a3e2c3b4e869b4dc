#pragma once

#include <algorithm>
#include <vector>

#include "jspec/algebra.hpp"

namespace jspec {

/// Default membership slack used when auditing discretized paths.
inline constexpr double kPathTolerance = 1e-8;

/// Discretized continuous path. `max_step` is the largest distance between
/// consecutive samples in the trace-form norm.
struct PathPolyline {
  std::vector<Element> samples;
  double max_step = 0.0;
  double tolerance = kPathTolerance;

  static PathPolyline from_samples(std::vector<Element> samples, double tolerance = kPathTolerance) {
    require(!samples.empty(), ErrorKind::Precondition, "path needs at least one sample");
    PathPolyline p;
    p.tolerance = tolerance;
    for (std::size_t i = 1; i < samples.size(); ++i)
      p.max_step = std::max(p.max_step, distance(samples[i - 1], samples[i]));
    p.samples = std::move(samples);
    return p;
  }

  const Element& front() const { return samples.front(); }
  const Element& back() const { return samples.back(); }
  std::size_t size() const noexcept { return samples.size(); }
};

/// Joins paths end to start; the first sample of each later leg is dropped
/// when it coincides with the previous leg's last sample.
inline PathPolyline concatenate(const std::vector<PathPolyline>& legs, double tolerance = kPathTolerance) {
  std::vector<Element> out;
  for (const auto& leg : legs) {
    for (std::size_t i = 0; i < leg.samples.size(); ++i) {
      if (i == 0 && !out.empty() && distance(out.back(), leg.samples[0]) == 0.0) continue;
      out.push_back(leg.samples[i]);
    }
  }
  return PathPolyline::from_samples(std::move(out), tolerance);
}

}  // namespace jspec
