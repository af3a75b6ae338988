#include "hlskit/metric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "hlskit/union_find.hpp"

namespace hlskit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::unordered_map<std::string, std::size_t> node_index(
    const MetricGraph& graph) {
  std::unordered_map<std::string, std::size_t> idx;
  idx.reserve(graph.nodes.size());
  for (std::size_t i = 0; i < graph.nodes.size(); ++i)
    if (!idx.emplace(graph.nodes[i], i).second)
      throw StructuralError("duplicate node id '" + graph.nodes[i] + "'");
  return idx;
}

}  // namespace

std::vector<std::size_t> node_degrees(const MetricGraph& graph) {
  auto idx = node_index(graph);
  std::vector<std::size_t> degree(graph.nodes.size(), 0);
  for (const auto& e : graph.edges) {
    auto u = idx.find(e.u);
    auto v = idx.find(e.v);
    if (u == idx.end() || v == idx.end())
      throw StructuralError("edge ('" + e.u + "','" + e.v +
                            "') has an unknown endpoint");
    ++degree[u->second];
    ++degree[v->second];  // loops count twice
  }
  return degree;
}

void require_connected(const MetricGraph& graph) {
  auto idx = node_index(graph);
  if (graph.nodes.empty()) throw StructuralError("graph has no nodes");
  std::vector<std::vector<std::size_t>> adj(graph.nodes.size());
  for (const auto& e : graph.edges) {
    auto u = idx.find(e.u);
    auto v = idx.find(e.v);
    if (u == idx.end() || v == idx.end())
      throw StructuralError("edge ('" + e.u + "','" + e.v +
                            "') has an unknown endpoint");
    if (!(e.length > 0) || !std::isfinite(e.length))
      throw StructuralError("edge ('" + e.u + "','" + e.v +
                            "') has nonpositive length");
    adj[u->second].push_back(v->second);
    adj[v->second].push_back(u->second);
  }
  std::vector<bool> seen(graph.nodes.size(), false);
  std::queue<std::size_t> bfs;
  bfs.push(0);
  seen[0] = true;
  while (!bfs.empty()) {
    std::size_t u = bfs.front();
    bfs.pop();
    for (std::size_t v : adj[u])
      if (!seen[v]) {
        seen[v] = true;
        bfs.push(v);
      }
  }
  for (std::size_t i = 0; i < graph.nodes.size(); ++i)
    if (!seen[i])
      throw StructuralError("graph is disconnected: node '" + graph.nodes[i] +
                            "' unreachable from '" + graph.nodes[0] + "'");
}

FiniteMetricSpace sample_graph(const MetricGraph& graph, double step) {
  if (!(step > 0)) throw StructuralError("sampling step must be positive");
  require_connected(graph);

  WeightedGraphSpace g;
  g.vertices = graph.nodes;
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto& edge = graph.edges[e];
    auto parts = static_cast<std::size_t>(std::ceil(edge.length / step));
    if (parts < 1) parts = 1;
    double piece = edge.length / static_cast<double>(parts);
    std::string prev = edge.u;
    for (std::size_t k = 1; k < parts; ++k) {
      std::string mid = "e" + std::to_string(e) + "_" + std::to_string(k);
      g.vertices.push_back(mid);
      g.edges.push_back({prev, mid, piece});
      prev = mid;
    }
    g.edges.push_back({prev, edge.v, piece});
  }
  return geodesic_metric(g);
}

MetricGraph glue_graphs(const MetricGraph& g1, const MetricGraph& g2,
                        const std::vector<std::pair<std::string, std::string>>& node_pairs) {
  auto idx1 = node_index(g1);
  auto idx2 = node_index(g2);
  bool collide = false;
  for (const auto& n : g2.nodes)
    if (idx1.count(n)) collide = true;

  auto name1 = [&](const std::string& n) { return collide ? "a:" + n : n; };
  auto name2 = [&](const std::string& n) { return collide ? "b:" + n : n; };

  const std::size_t n1 = g1.nodes.size(), n2 = g2.nodes.size();
  UnionFind uf(n1 + n2);
  for (const auto& [a, b] : node_pairs) {
    auto ia = idx1.find(a);
    auto ib = idx2.find(b);
    if (ia == idx1.end())
      throw StructuralError("gluing pair names unknown node '" + a +
                            "' in the first graph");
    if (ib == idx2.end())
      throw StructuralError("gluing pair names unknown node '" + b +
                            "' in the second graph");
    uf.unite(ia->second, n1 + ib->second);
  }

  std::vector<std::string> merged_name(n1 + n2);
  MetricGraph out;
  for (std::size_t i = 0; i < n1 + n2; ++i) {
    std::size_t root = uf.find(i);
    if (merged_name[root].empty()) {
      merged_name[root] = root < n1 ? name1(g1.nodes[root])
                                    : name2(g2.nodes[root - n1]);
      out.nodes.push_back(merged_name[root]);
    }
    merged_name[i] = merged_name[root];
  }
  for (const auto& e : g1.edges)
    out.edges.push_back({merged_name[idx1.at(e.u)], merged_name[idx1.at(e.v)],
                         e.length});
  for (const auto& e : g2.edges)
    out.edges.push_back({merged_name[n1 + idx2.at(e.u)],
                         merged_name[n1 + idx2.at(e.v)], e.length});
  return out;
}

MeasureReport measure_ball_check(const MetricGraph& graph) {
  if (graph.edges.empty())
    throw StructuralError("measure check needs at least one edge");
  require_connected(graph);

  auto degrees = node_degrees(graph);
  MeasureReport report;
  report.beta = 2;
  for (std::size_t d : degrees)
    report.beta = std::max(report.beta, static_cast<double>(d));
  double min_len = kInf;
  for (const auto& e : graph.edges) min_len = std::min(min_len, e.length);
  report.eta0 = min_len / 2;

  struct Center {
    std::string label;
    bool on_edge = false;
    std::size_t edge = 0;
    double offset = 0;  // from edge.u
  };
  std::vector<Center> centers;
  for (const auto& n : graph.nodes) centers.push_back({n, false, 0, 0});
  for (std::size_t e = 0; e < graph.edges.size(); ++e)
    for (double f : {0.25, 0.5, 0.75})
      centers.push_back({"e" + std::to_string(e) + "@" + std::to_string(f),
                         true, e, f * graph.edges[e].length});

  report.min_ratio = kInf;
  report.max_ratio = 0;
  for (const auto& center : centers) {
    // center as a graph node, splitting its edge when needed
    WeightedGraphSpace g;
    g.vertices = graph.nodes;
    std::string source;
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
      const auto& edge = graph.edges[e];
      if (center.on_edge && center.edge == e) continue;
      g.edges.push_back({edge.u, edge.v, edge.length});
    }
    std::vector<MetricGraph::Edge> measured;
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
      const auto& edge = graph.edges[e];
      if (center.on_edge && center.edge == e) continue;
      measured.push_back(edge);
    }
    if (center.on_edge) {
      const auto& edge = graph.edges[center.edge];
      source = "__center__";
      g.vertices.push_back(source);
      g.edges.push_back({edge.u, source, center.offset});
      g.edges.push_back({source, edge.v, edge.length - center.offset});
      measured.push_back({edge.u, source, center.offset});
      measured.push_back({source, edge.v, edge.length - center.offset});
    } else {
      source = center.label;
    }
    auto dist = single_source_distances(g, source);
    std::unordered_map<std::string, double> dist_of;
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
      dist_of[g.vertices[i]] = dist[i];

    for (double eta : {report.eta0 / 2, report.eta0 / 4, report.eta0 / 8}) {
      double measure = 0;
      for (const auto& e : measured) {
        double a = std::clamp(eta - dist_of.at(e.u), 0.0, e.length);
        double b = std::clamp(eta - dist_of.at(e.v), 0.0, e.length);
        measure += std::min(e.length, a + b);
      }
      double ratio = measure / eta;
      ++report.checks;
      if (ratio < report.min_ratio) {
        report.min_ratio = ratio;
        report.worst_low = {center.label, eta, ratio};
      }
      if (ratio > report.max_ratio) {
        report.max_ratio = ratio;
        report.worst_high = {center.label, eta, ratio};
      }
    }
  }
  const double guard = 1e-9 * report.beta;
  report.pass = report.min_ratio >= 1 / report.beta - guard &&
                report.max_ratio <= report.beta + guard;
  return report;
}

MetricGraph extract_graph(const HlsSpace& h, const std::vector<Region>& regions,
                          double tol) {
  const std::size_t n = h.space.size();
  std::unordered_map<std::string, std::size_t> class_idx;
  for (std::size_t i = 0; i < n; ++i) class_idx.emplace(h.space.points[i], i);

  std::vector<int> owner(n, -1);
  for (std::size_t r = 0; r < regions.size(); ++r) {
    if (regions[r].classes.empty())
      throw StructuralError("region '" + regions[r].name + "' is empty");
    for (const auto& c : regions[r].classes) {
      auto it = class_idx.find(c);
      if (it == class_idx.end())
        throw StructuralError("region '" + regions[r].name +
                              "' names unknown class '" + c + "'");
      if (owner[it->second] != -1)
        throw StructuralError("class '" + c + "' appears in regions '" +
                              regions[owner[it->second]].name + "' and '" +
                              regions[r].name + "'");
      owner[it->second] = static_cast<int>(r);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (owner[i] == -1)
      throw StructuralError("class '" + h.space.points[i] +
                            "' is not covered by the decomposition");

  MetricGraph out;
  std::vector<std::string> node_of_region(regions.size());
  for (std::size_t r = 0; r < regions.size(); ++r) {
    if (regions[r].kind != RegionKind::Node) continue;
    double diam = 0;
    for (const auto& a : regions[r].classes)
      for (const auto& b : regions[r].classes)
        diam = std::max(diam, h.space.d(class_idx.at(a), class_idx.at(b)));
    if (diam > tol)
      throw StructuralError("node region '" + regions[r].name +
                            "' has diameter " + std::to_string(diam) +
                            " above the tolerance");
    node_of_region[r] = regions[r].name;
    out.nodes.push_back(regions[r].name);
  }

  // nearest node region to a class, or none within tol
  auto attach = [&](std::size_t cls) -> int {
    double best = kInf;
    int best_region = -1;
    for (std::size_t r = 0; r < regions.size(); ++r) {
      if (regions[r].kind != RegionKind::Node) continue;
      for (const auto& m : regions[r].classes)
        if (double d = h.space.d(cls, class_idx.at(m)); d < best) {
          best = d;
          best_region = static_cast<int>(r);
        }
    }
    return best <= tol ? best_region : -1;
  };

  for (std::size_t r = 0; r < regions.size(); ++r) {
    if (regions[r].kind != RegionKind::Segment) continue;
    const auto& classes = regions[r].classes;
    if (classes.size() < 2)
      throw StructuralError("segment region '" + regions[r].name +
                            "' needs at least two classes");
    std::size_t end_a = class_idx.at(classes[0]), end_b = end_a;
    double diam = -1;
    for (const auto& ca : classes)
      for (const auto& cb : classes) {
        std::size_t ia = class_idx.at(ca), ib = class_idx.at(cb);
        if (h.space.d(ia, ib) > diam) {
          diam = h.space.d(ia, ib);
          end_a = ia;
          end_b = ib;
        }
      }
    // injective (zero-scale) and segment-like (within tol) from one endpoint
    const double tau_inj = kRelTolerance * (1 + diameter(h.space));
    for (const auto& ca : classes)
      for (const auto& cb : classes) {
        if (ca >= cb) continue;
        std::size_t ia = class_idx.at(ca), ib = class_idx.at(cb);
        double gap = std::fabs(h.space.d(end_a, ia) - h.space.d(end_a, ib));
        if (gap <= tau_inj)
          throw StructuralError("segment region '" + regions[r].name +
                                "' is not segment-like: classes '" + ca +
                                "' and '" + cb + "' share the parameter");
        if (std::fabs(gap - h.space.d(ia, ib)) > tol)
          throw StructuralError("segment region '" + regions[r].name +
                                "' is not segment-like: classes '" + ca +
                                "' and '" + cb + "' break the segment law");
      }
    auto endpoint_node = [&](std::size_t end, int which) {
      int region = attach(end);
      if (region >= 0) return node_of_region[region];
      std::string fresh = regions[r].name + ":end" + std::to_string(which);
      out.nodes.push_back(fresh);
      return fresh;
    };
    std::string na = endpoint_node(end_a, 0);
    std::string nb = endpoint_node(end_b, 1);
    out.edges.push_back({na, nb, diam});
  }
  return out;
}

}  // namespace hlskit
