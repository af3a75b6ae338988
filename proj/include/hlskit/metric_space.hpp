#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hlskit/errors.hpp"

namespace hlskit {

/// Scale-relative default used for metric tolerances and zero collapse:
/// actual tolerances are kRelTolerance * diameter unless overridden.
inline constexpr double kRelTolerance = 1e-9;

/// A finite metric or pseudometric space: opaque point ids plus a full
/// symmetric distance table. The universal currency between modules.
struct FiniteMetricSpace {
  std::vector<std::string> points;
  std::vector<std::vector<double>> dist;  // square, indexed like points
  std::map<std::string, std::string> labels;  // optional point tags

  std::size_t size() const { return points.size(); }
  double d(std::size_t i, std::size_t j) const { return dist[i][j]; }
  std::optional<std::size_t> index_of(std::string_view id) const;
};

/// Throws StructuralError if the table is not square over the point list,
/// or contains negative or non-finite entries. Run before any axiom check.
void require_well_formed(const FiniteMetricSpace& space);

double diameter(const FiniteMetricSpace& space);

/// kRelTolerance * diameter(space).
double default_tolerance(const FiniteMetricSpace& space);

/// A positively weighted undirected graph; the discretization substrate.
struct WeightedGraphSpace {
  struct Edge {
    std::string u, v;
    double length = 0;
  };
  std::vector<std::string> vertices;
  std::vector<Edge> edges;
};

enum class MetricMode { Strict, Pseudo };

struct MetricViolation {
  enum class Kind { Diagonal, Asymmetry, StrictZero, Triangle };
  Kind kind;
  std::size_t i = 0, j = 0, k = 0;
  double amount = 0;  // by how much the axiom fails

  std::string describe(const FiniteMetricSpace& space) const;
};

struct ValidationReport {
  std::vector<MetricViolation> violations;  // capped at kMaxRecorded
  std::size_t total_count = 0;
  double tolerance = 0;

  static constexpr std::size_t kMaxRecorded = 100;
  bool ok() const { return total_count == 0; }
};

/// Checks the axioms of the requested mode within an additive tolerance
/// (default kRelTolerance * diameter). Triangle checking can be disabled
/// for set-distance tables that are not expected to satisfy it.
ValidationReport validate_metric(const FiniteMetricSpace& space, MetricMode mode,
                                 double tol = -1, bool check_triangle = true);

/// Shortest-path metric of a connected weighted graph. Throws
/// StructuralError naming two unreachable vertices if disconnected.
FiniteMetricSpace geodesic_metric(const WeightedGraphSpace& graph);

/// Shortest-path distances from one vertex, ordered like graph.vertices.
std::vector<double> single_source_distances(const WeightedGraphSpace& graph,
                                            const std::string& source);

/// A subset within `radius` of every point of the host space.
struct EpsNet {
  std::vector<std::string> members;
  std::vector<std::size_t> member_indices;
  double radius = 0;
};

/// Farthest-point sampling until the covering radius drops to
/// target_radius. The seed only selects the starting point.
EpsNet eps_net(const FiniteMetricSpace& space, double target_radius,
               std::uint64_t seed);

/// Farthest-point sampling with an explicit member budget; stops early if
/// the covering radius reaches target_radius. Shared by eps_net and the
/// net-based Gromov-Hausdorff estimators.
struct NetSelection {
  std::vector<std::size_t> members;
  double radius = 0;
};
NetSelection farthest_point_selection(const FiniteMetricSpace& space,
                                      std::size_t max_members,
                                      double target_radius, std::size_t start);

struct Isometry {
  std::vector<std::size_t> to_y;  // x index -> y index
  double max_discrepancy = 0;
};

/// Distance-preserving bijection within tol, if one exists. Branch and
/// bound over sorted-distance-profile-compatible assignments; exact, and
/// deterministic given input order. Size mismatch yields absent.
/// Throws Error if the search exceeds node_budget expansions.
std::optional<Isometry> find_isometry(const FiniteMetricSpace& x,
                                      const FiniteMetricSpace& y, double tol,
                                      std::size_t node_budget = 20'000'000);

}  // namespace hlskit
