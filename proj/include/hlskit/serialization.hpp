#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hlskit/convergence.hpp"
#include "hlskit/foliated_complex.hpp"
#include "hlskit/gh_distance.hpp"
#include "hlskit/metric_graph.hpp"
#include "hlskit/metric_space.hpp"
#include "hlskit/quotient.hpp"

namespace hlskit::io {

using json = nlohmann::ordered_json;

// values are emitted in a fixed key order so identical inputs produce
// byte-identical files
json to_json(const FiniteMetricSpace& space);
json to_json(const WeightedGraphSpace& graph);
json to_json(const FoliatedComplex& complex);
json to_json(const MetricGraph& graph);
json to_json(const HlsSpace& h);
json to_json(const QuotientResult& result);
json to_json(const EpsNet& net);
json to_json(const GhEstimate& estimate, const FiniteMetricSpace& x,
             const FiniteMetricSpace& y);
json to_json(const ValidationReport& report, const FiniteMetricSpace& space);
json to_json(const ComplexReport& report);
json to_json(const MeasureReport& report);
json to_json(const ConvergenceReport& report);
json to_json(const AuditReport& report);

FiniteMetricSpace space_from_json(const json& j);
WeightedGraphSpace weighted_graph_from_json(const json& j);
FoliatedComplex complex_from_json(const json& j);
MetricGraph graph_from_json(const json& j);
HlsSpace hls_from_json(const json& j);
WarpSpec warp_from_json(const json& j);
std::vector<std::pair<std::string, std::string>> pairs_from_json(const json& j);
std::vector<std::map<std::string, std::string>> generators_from_json(const json& j);

/// What an input file contains, judged by its keys.
enum class PayloadKind {
  MetricSpace,
  WeightedGraph,
  Complex,
  Graph,
  Hls,
  Quotient,
  Unknown,
};
PayloadKind detect_payload(const json& j);

json load_json_file(const std::string& path);
void save_text_file(const std::string& path, const std::string& text);
std::string dump(const json& j);  // two-space indent plus trailing newline

/// DOT rendering: vertices grouped by leaf, edges colored by kind.
std::string to_dot(const FoliatedComplex& complex);
std::string to_dot(const MetricGraph& graph);

/// CSV rows: n, gh_lower, gh_upper, method, density_radius, condition_holds.
/// Plain convergence runs leave the density columns empty; audits fill them
/// from the smallest epsilon of the grid.
std::string to_csv(const ConvergenceReport& report);
std::string to_csv(const AuditReport& report);

}  // namespace hlskit::io
