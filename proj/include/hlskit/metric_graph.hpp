#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hlskit/foliated_complex.hpp"
#include "hlskit/metric_space.hpp"

namespace hlskit {

/// A finite metric graph: nodes and positive-length edges with the induced
/// length metric. Loops and multi-edges are permitted.
struct MetricGraph {
  struct Edge {
    std::string u, v;
    double length = 0;
  };
  std::vector<std::string> nodes;
  std::vector<Edge> edges;
};

/// Node degrees with loops counted twice.
std::vector<std::size_t> node_degrees(const MetricGraph& graph);

/// Throws StructuralError when ids are malformed, lengths nonpositive, or
/// the graph is disconnected.
void require_connected(const MetricGraph& graph);

/// Subdivides every edge into ceil(length/step) equal parts and returns the
/// geodesic metric of the subdivided graph. Points are the nodes plus the
/// subdivision points; covering radius of the underlying graph <= step/2.
FiniteMetricSpace sample_graph(const MetricGraph& graph, double step);

/// Node-identified union of two graphs; edge lengths unchanged. Every pair
/// is (node of g1, node of g2); the merged node keeps g1's id. Ids are
/// namespaced "a:" / "b:" only on collision.
MetricGraph glue_graphs(const MetricGraph& g1, const MetricGraph& g2,
                        const std::vector<std::pair<std::string, std::string>>& node_pairs);

/// Exact ball measures on a deterministic grid of centers and radii checked
/// against the bracket [eta/beta, beta*eta] with beta = max(2, max degree)
/// and eta0 = min edge length / 2.
struct MeasureReport {
  double beta = 0;
  double eta0 = 0;
  double min_ratio = 0;  // min over checks of mu(B)/eta
  double max_ratio = 0;
  std::size_t checks = 0;
  bool pass = false;

  struct WorstCase {
    std::string center;
    double eta = 0;
    double ratio = 0;
  };
  WorstCase worst_low, worst_high;
};

MeasureReport measure_ball_check(const MetricGraph& graph);

/// Decomposition-guided extraction of a metric graph from a Hausdorff leaf
/// space: node regions (diameter <= tol) become nodes, segment regions
/// (injective distance parametrization) become edges of length equal to the
/// region diameter. Segment endpoints attach to the nearest node region
/// within tol, or to fresh degree-one nodes.
enum class RegionKind { Node, Segment };

struct Region {
  std::string name;
  RegionKind kind = RegionKind::Node;
  std::vector<std::string> classes;
};

MetricGraph extract_graph(const HlsSpace& h, const std::vector<Region>& regions,
                          double tol);

}  // namespace hlskit
