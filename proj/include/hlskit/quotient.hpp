#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hlskit/metric_space.hpp"

namespace hlskit {

/// Unordered point-id pairs generating an equivalence relation on one space
/// (or bridging two spaces, for gluing).
struct PointRelation {
  std::vector<std::pair<std::string, std::string>> pairs;
};

/// A quotient space plus the projection original point id -> class id.
/// Class ids reuse the id of the first member in input order. Distances
/// between distinct classes are strictly positive (zero collapse already
/// applied). `connected` is false when some class pairs are unreachable;
/// their distances are +infinity and the space is not a valid metric until
/// the caller deals with that.
struct QuotientResult {
  FiniteMetricSpace space;
  std::map<std::string, std::string> class_map;
  bool connected = true;
};

/// Quotient pseudometric d_R, computed exactly: equivalence closure of the
/// relation, class graph weighted by minimal member-pair distance, shortest
/// paths over classes, then collapse of classes at distance <= zero_tol
/// (default kRelTolerance * diameter).
QuotientResult quotient_metric(const FiniteMetricSpace& space,
                               const PointRelation& rel, double zero_tol = -1);

/// Gluing of two spaces along a bijection f between subsets A of x and B of
/// y: disjoint-union pseudometric (cross distances absent) quotiented by
/// a ~ f(a). Result point ids are namespaced "x:" / "y:". Connected iff A
/// is nonempty.
QuotientResult glue(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                    const std::vector<std::pair<std::string, std::string>>& f,
                    double zero_tol = -1);

/// Collapses a nonempty subset of points to one class.
QuotientResult collapse_subset(const FiniteMetricSpace& space,
                               const std::vector<std::string>& subset,
                               double zero_tol = -1);

/// Quotient by the orbit closure of a list of point-set bijections. The
/// generators need not preserve distances.
QuotientResult orbit_quotient(
    const FiniteMetricSpace& space,
    const std::vector<std::map<std::string, std::string>>& generators,
    double zero_tol = -1);

}  // namespace hlskit
