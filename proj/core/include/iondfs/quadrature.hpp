#pragma once

#include "iondfs/errors.hpp"
#include "iondfs/linalg.hpp"

#include <cmath>
#include <cstddef>
#include <string>

namespace iondfs {

struct QuadratureOptions {
  double tolerance = 1e-8;          // accepted relative change under grid halving
  double failure_tolerance = 1e-6;  // above this after max_levels: QuadratureNotConverged
  int max_levels = 8;
};

/// Smallest even interval count giving a step no larger than `step`.
std::size_t even_intervals(double length, double step);

/// Composite-Simpson weight of node m out of n (even) intervals of width h.
inline double simpson_weight(std::size_t m, std::size_t n, double h) {
  if (m == 0 || m == n) return h / 3.0;
  return (m % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
}

template <typename Value>
struct Converged {
  Value value;
  double relative_change = 0.0;
  int levels = 0;
};

/// Repeatedly halves the grid until the entrywise change relative to
/// max(|value|, scale) drops below `opts.tolerance`.
///
/// `estimate(level)` returns a pair (value, scale) of equally sized vectors;
/// `scale` is an absolute magnitude for entries whose value cancels to zero.
template <typename Estimate>
auto integrate_to_tolerance(Estimate&& estimate, const QuadratureOptions& opts, const std::string& what) {
  auto [previous, scale] = estimate(0);
  using Value = decltype(previous);
  double change = 0.0;
  for (int level = 1; level <= opts.max_levels; ++level) {
    auto [current, current_scale] = estimate(level);
    change = 0.0;
    for (Eigen::Index e = 0; e < current.size(); ++e) {
      const double diff = std::abs(current(e) - previous(e));
      if (diff == 0.0) continue;
      const double ref = std::max(std::abs(current(e)), current_scale(e));
      change = std::max(change, diff / ref);
    }
    previous = std::move(current);
    if (change <= opts.tolerance) return Converged<Value>{previous, change, level};
  }
  if (change > opts.failure_tolerance) {
    throw Error(ErrorCode::QuadratureNotConverged,
                what + ": relative change " + std::to_string(change) + " after grid halving");
  }
  return Converged<Value>{previous, change, opts.max_levels};
}

}  // namespace iondfs
