#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hlskit/metric_space.hpp"

namespace hlskit {

/// A left- and right-total relation between two point sets. Half of its
/// metric distortion upper-bounds the Gromov-Hausdorff distance.
struct Correspondence {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  double distortion = 0;
};

double distortion_of(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                     const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

struct GhEstimate {
  double lower = 0;
  double upper = 0;
  std::string method;
  Correspondence witness;   // pairs are (x index, y index)
  double net_radius_x = 0;  // filled by the net estimator
  double net_radius_y = 0;
  double net_discrepancy = 0;
};

/// Exact Gromov-Hausdorff distance by enumeration of every total relation
/// on the pair grid. Refuses instances with |x|*|y| > cap.
double gh_exact(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                std::size_t cap = 16);

/// Upper bound from matched farthest-point nets of k members each: with net
/// radii r_x, r_y and best matching discrepancy delta, the bound is
/// 3 * max(r_x, r_y, delta). k is clamped to the space sizes. Matching is
/// exhaustive for k <= 8, greedy bottleneck insertion plus swap descent
/// above. Deterministic given the seed; (x,y) and (y,x) agree.
GhEstimate gromov_net_bound(const FiniteMetricSpace& x,
                            const FiniteMetricSpace& y, std::size_t k,
                            std::uint64_t seed = 0);

/// Upper bound of distortion/2 over correspondences found by seeded greedy
/// construction and local moves under an iteration budget.
GhEstimate gh_heuristic(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                        std::size_t budget, std::uint64_t seed = 0);

/// Cheap lower bounds: half the diameter gap and half the Hausdorff
/// distance between eccentricity sets.
double lower_bounds(const FiniteMetricSpace& x, const FiniteMetricSpace& y);

}  // namespace hlskit
