#include "hlskit/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace hlskit::io {

namespace {

double number_or_throw(const json& j, const std::string& context) {
  if (!j.is_number())
    throw StructuralError(context + " must be a number");
  return j.get<double>();
}

std::string string_or_throw(const json& j, const std::string& context) {
  if (!j.is_string())
    throw StructuralError(context + " must be a string");
  return j.get<std::string>();
}

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw StructuralError(std::string("missing field '") + key + "'");
  return *it;
}

json distance_value(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;  // disconnected quotients carry unreachable pairs
}

std::string format_number(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "converged";
    case Verdict::NotConverged: return "not-converged";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

const char* agreement_name(Agreement a) {
  switch (a) {
    case Agreement::Agree: return "agree";
    case Agreement::AgreeWithinSlack: return "agree-within-slack";
    case Agreement::Disagree: return "disagree";
  }
  return "disagree";
}

}  // namespace

json to_json(const FiniteMetricSpace& space) {
  json j;
  j["points"] = space.points;
  json rows = json::array();
  for (const auto& row : space.dist) {
    json r = json::array();
    for (double v : row) r.push_back(distance_value(v));
    rows.push_back(std::move(r));
  }
  j["dist"] = std::move(rows);
  if (!space.labels.empty()) j["labels"] = space.labels;
  return j;
}

json to_json(const WeightedGraphSpace& graph) {
  json j;
  j["vertices"] = graph.vertices;
  json edges = json::array();
  for (const auto& e : graph.edges) edges.push_back(json::array({e.u, e.v, e.length}));
  j["edges"] = std::move(edges);
  return j;
}

json to_json(const FoliatedComplex& complex) {
  json j;
  j["vertices"] = complex.vertices;
  j["leaf_of"] = complex.leaf_of;
  json edges = json::array();
  for (const auto& e : complex.edges)
    edges.push_back(json::array(
        {e.u, e.v, e.length,
         e.kind == EdgeKind::Tangential ? "tangential" : "transverse"}));
  j["edges"] = std::move(edges);
  j["mesh"] = complex.mesh;
  if (!complex.boundary_leaves.empty())
    j["boundary_leaves"] = complex.boundary_leaves;
  return j;
}

json to_json(const MetricGraph& graph) {
  json j;
  j["nodes"] = graph.nodes;
  json edges = json::array();
  for (const auto& e : graph.edges) edges.push_back(json::array({e.u, e.v, e.length}));
  j["edges"] = std::move(edges);
  return j;
}

json to_json(const HlsSpace& h) {
  json j;
  j["space"] = to_json(h.space);
  j["class_of_leaf"] = h.class_of_leaf;
  j["class_of_vertex"] = h.class_of_vertex;
  return j;
}

json to_json(const QuotientResult& result) {
  json j;
  j["space"] = to_json(result.space);
  j["class_map"] = result.class_map;
  j["connected"] = result.connected;
  return j;
}

json to_json(const EpsNet& net) {
  json j;
  j["members"] = net.members;
  j["radius"] = net.radius;
  return j;
}

json to_json(const GhEstimate& estimate, const FiniteMetricSpace& x,
             const FiniteMetricSpace& y) {
  json j;
  j["lower"] = estimate.lower;
  j["upper"] = estimate.upper;
  j["method"] = estimate.method;
  json witness;
  witness["distortion"] = estimate.witness.distortion;
  if (estimate.witness.pairs.size() <= 64) {
    json pairs = json::array();
    for (auto [i, k] : estimate.witness.pairs)
      pairs.push_back(json::array({x.points[i], y.points[k]}));
    witness["pairs"] = std::move(pairs);
  } else {
    witness["pair_count"] = estimate.witness.pairs.size();
  }
  j["witness"] = std::move(witness);
  return j;
}

json to_json(const ValidationReport& report, const FiniteMetricSpace& space) {
  json j;
  j["ok"] = report.ok();
  j["tolerance"] = report.tolerance;
  j["violation_count"] = report.total_count;
  json list = json::array();
  for (const auto& v : report.violations) list.push_back(v.describe(space));
  j["violations"] = std::move(list);
  return j;
}

json to_json(const ComplexReport& report) {
  json j;
  j["ok"] = report.ok();
  j["issues"] = report.issues;
  return j;
}

json to_json(const MeasureReport& report) {
  json j;
  j["pass"] = report.pass;
  j["beta"] = report.beta;
  j["eta0"] = report.eta0;
  j["min_ratio"] = report.min_ratio;
  j["max_ratio"] = report.max_ratio;
  j["checks"] = report.checks;
  j["worst_low"] = {{"center", report.worst_low.center},
                    {"eta", report.worst_low.eta},
                    {"ratio", report.worst_low.ratio}};
  j["worst_high"] = {{"center", report.worst_high.center},
                     {"eta", report.worst_high.eta},
                     {"ratio", report.worst_high.ratio}};
  return j;
}

json to_json(const ConvergenceReport& report) {
  json j;
  j["verdict"] = verdict_name(report.verdict);
  j["tau_conv"] = report.tau_conv;
  j["mesh"] = report.mesh;
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r;
    r["n"] = row.n;
    r["gh_lower"] = row.lower;
    r["gh_upper"] = row.upper;
    r["method"] = row.method;
    r["hls_net_radius"] = row.hls_net_radius;
    r["sample_cover_radius"] = row.sample_cover_radius;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

json to_json(const AuditReport& report) {
  json j;
  j["agreement"] = agreement_name(report.agreement);
  j["condition_side"] = report.condition_side;
  j["slack"] = report.slack;
  j["convergence"] = to_json(report.convergence);
  json eps_rows = json::array();
  for (const auto& row : report.eps_rows) {
    json r;
    r["eps"] = row.eps;
    r["holds_eventually"] = row.holds_eventually;
    r["first_n"] = row.first_n;
    r["final_radius"] = distance_value(row.final_radius);
    eps_rows.push_back(std::move(r));
  }
  j["eps_rows"] = std::move(eps_rows);
  json table = json::array();
  for (const auto& per_eps : report.condition_table) {
    json rows = json::array();
    for (const auto& c : per_eps) {
      json r;
      r["eps"] = c.eps;
      r["n"] = c.n;
      r["density_radius"] = distance_value(c.density_radius);
      r["holds"] = c.holds;
      r["family_size"] = c.family.size();
      rows.push_back(std::move(r));
    }
    table.push_back(std::move(rows));
  }
  j["condition_table"] = std::move(table);
  return j;
}

FiniteMetricSpace space_from_json(const json& j) {
  FiniteMetricSpace space;
  for (const auto& p : field(j, "points"))
    space.points.push_back(string_or_throw(p, "point id"));
  const json& rows = field(j, "dist");
  if (!rows.is_array()) throw StructuralError("'dist' must be an array");
  for (const auto& row : rows) {
    if (!row.is_array()) throw StructuralError("'dist' rows must be arrays");
    std::vector<double> r;
    for (const auto& v : row) r.push_back(number_or_throw(v, "distance"));
    space.dist.push_back(std::move(r));
  }
  if (j.contains("labels"))
    for (const auto& [k, v] : j.at("labels").items())
      space.labels[k] = string_or_throw(v, "label");
  return space;
}

WeightedGraphSpace weighted_graph_from_json(const json& j) {
  WeightedGraphSpace graph;
  for (const auto& v : field(j, "vertices"))
    graph.vertices.push_back(string_or_throw(v, "vertex id"));
  for (const auto& e : field(j, "edges")) {
    if (!e.is_array() || e.size() != 3)
      throw StructuralError("graph edges must be [u, v, length] triples");
    graph.edges.push_back({string_or_throw(e[0], "edge endpoint"),
                           string_or_throw(e[1], "edge endpoint"),
                           number_or_throw(e[2], "edge length")});
  }
  return graph;
}

FoliatedComplex complex_from_json(const json& j) {
  FoliatedComplex complex;
  for (const auto& v : field(j, "vertices"))
    complex.vertices.push_back(string_or_throw(v, "vertex id"));
  for (const auto& [k, v] : field(j, "leaf_of").items())
    complex.leaf_of[k] = string_or_throw(v, "leaf id");
  for (const auto& e : field(j, "edges")) {
    if (!e.is_array() || e.size() != 4)
      throw StructuralError("complex edges must be [u, v, length, kind]");
    std::string kind = string_or_throw(e[3], "edge kind");
    if (kind != "tangential" && kind != "transverse")
      throw StructuralError("edge kind must be 'tangential' or 'transverse', got '" +
                            kind + "'");
    complex.edges.push_back({string_or_throw(e[0], "edge endpoint"),
                             string_or_throw(e[1], "edge endpoint"),
                             number_or_throw(e[2], "edge length"),
                             kind == "tangential" ? EdgeKind::Tangential
                                                  : EdgeKind::Transverse});
  }
  complex.mesh = number_or_throw(field(j, "mesh"), "mesh");
  if (j.contains("boundary_leaves"))
    for (const auto& leaf : j.at("boundary_leaves"))
      complex.boundary_leaves.insert(string_or_throw(leaf, "boundary leaf"));
  return complex;
}

MetricGraph graph_from_json(const json& j) {
  MetricGraph graph;
  for (const auto& n : field(j, "nodes"))
    graph.nodes.push_back(string_or_throw(n, "node id"));
  for (const auto& e : field(j, "edges")) {
    if (!e.is_array() || e.size() != 3)
      throw StructuralError("graph edges must be [u, v, length] triples");
    graph.edges.push_back({string_or_throw(e[0], "edge endpoint"),
                           string_or_throw(e[1], "edge endpoint"),
                           number_or_throw(e[2], "edge length")});
  }
  return graph;
}

HlsSpace hls_from_json(const json& j) {
  HlsSpace h;
  h.space = space_from_json(field(j, "space"));
  for (const auto& [k, v] : field(j, "class_of_leaf").items())
    h.class_of_leaf[k] = string_or_throw(v, "class id");
  if (j.contains("class_of_vertex"))
    for (const auto& [k, v] : j.at("class_of_vertex").items())
      h.class_of_vertex[k] = string_or_throw(v, "class id");
  return h;
}

WarpSpec warp_from_json(const json& j) {
  WarpSpec spec;
  const json& values = j.contains("values") ? j.at("values") : j;
  if (!values.is_object())
    throw StructuralError("warp factors must map leaf ids to numbers");
  for (const auto& [k, v] : values.items())
    spec.values[k] = number_or_throw(v, "warp factor");
  return spec;
}

std::vector<std::pair<std::string, std::string>> pairs_from_json(const json& j) {
  const json& list = j.is_object() && j.contains("pairs") ? j.at("pairs") : j;
  if (!list.is_array()) throw StructuralError("pairs must be an array");
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& p : list) {
    if (!p.is_array() || p.size() != 2)
      throw StructuralError("each pair must be a [a, b] array");
    pairs.emplace_back(string_or_throw(p[0], "pair member"),
                       string_or_throw(p[1], "pair member"));
  }
  return pairs;
}

std::vector<std::map<std::string, std::string>> generators_from_json(const json& j) {
  if (!j.is_array()) throw StructuralError("generators must be an array of maps");
  std::vector<std::map<std::string, std::string>> generators;
  for (const auto& g : j) {
    if (!g.is_object()) throw StructuralError("each generator must be a map");
    std::map<std::string, std::string> gen;
    for (const auto& [k, v] : g.items())
      gen[k] = string_or_throw(v, "generator image");
    generators.push_back(std::move(gen));
  }
  return generators;
}

PayloadKind detect_payload(const json& j) {
  if (!j.is_object()) return PayloadKind::Unknown;
  if (j.contains("leaf_of")) return PayloadKind::Complex;
  if (j.contains("class_of_leaf")) return PayloadKind::Hls;
  if (j.contains("class_map")) return PayloadKind::Quotient;
  if (j.contains("dist")) return PayloadKind::MetricSpace;
  if (j.contains("nodes")) return PayloadKind::Graph;
  if (j.contains("vertices")) return PayloadKind::WeightedGraph;
  return PayloadKind::Unknown;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError("cannot parse '" + path + "': " + e.what());
  }
  return j;
}

void save_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw StructuralError("cannot write '" + path + "'");
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string to_dot(const FoliatedComplex& complex) {
  std::ostringstream out;
  out << "graph hls_complex {\n";
  out << "  node [shape=point];\n";
  std::size_t cluster = 0;
  for (const auto& leaf : complex.leaves()) {
    out << "  subgraph cluster_" << cluster++ << " {\n";
    out << "    label=\"" << leaf << "\";\n";
    for (const auto& v : complex.vertices)
      if (complex.leaf_of.at(v) == leaf) out << "    \"" << v << "\";\n";
    out << "  }\n";
  }
  for (const auto& e : complex.edges) {
    const char* style = e.kind == EdgeKind::Tangential
                            ? "color=black"
                            : "color=red, style=dashed";
    out << "  \"" << e.u << "\" -- \"" << e.v << "\" [" << style
        << ", label=\"" << format_number(e.length) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string to_dot(const MetricGraph& graph) {
  std::ostringstream out;
  out << "graph metric_graph {\n";
  for (const auto& n : graph.nodes) out << "  \"" << n << "\";\n";
  for (const auto& e : graph.edges)
    out << "  \"" << e.u << "\" -- \"" << e.v << "\" [label=\""
        << format_number(e.length) << "\"];\n";
  out << "}\n";
  return out.str();
}

namespace {

std::string csv_rows(const ConvergenceReport& report,
                     const std::vector<ConditionReport>* density) {
  std::ostringstream out;
  out << "n,gh_lower,gh_upper,method,density_radius,condition_holds\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& row = report.rows[i];
    out << row.n << "," << format_number(row.lower) << ","
        << format_number(row.upper) << "," << row.method << ",";
    if (density && i < density->size()) {
      const auto& c = (*density)[i];
      if (std::isfinite(c.density_radius))
        out << format_number(c.density_radius);
      else
        out << "inf";
      out << "," << (c.holds ? "true" : "false");
    } else {
      out << ",";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace

std::string to_csv(const ConvergenceReport& report) {
  return csv_rows(report, nullptr);
}

std::string to_csv(const AuditReport& report) {
  // density columns follow the tightest epsilon of the grid
  std::size_t tightest = 0;
  for (std::size_t i = 1; i < report.eps_rows.size(); ++i)
    if (report.eps_rows[i].eps < report.eps_rows[tightest].eps) tightest = i;
  return csv_rows(report.convergence, &report.condition_table[tightest]);
}

}  // namespace hlskit::io
