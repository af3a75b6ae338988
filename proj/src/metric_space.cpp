#include "hlskit/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <sstream>
#include <unordered_map>

#include "hlskit/parallel.hpp"

namespace hlskit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::unordered_map<std::string, std::size_t> index_map(
    const std::vector<std::string>& ids, const char* entity) {
  std::unordered_map<std::string, std::size_t> map;
  map.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!map.emplace(ids[i], i).second)
      throw StructuralError(std::string("duplicate ") + entity + " id '" +
                            ids[i] + "'");
  }
  return map;
}

struct Adjacency {
  std::vector<std::vector<std::pair<std::size_t, double>>> out;
};

Adjacency build_adjacency(const WeightedGraphSpace& graph,
                          const std::unordered_map<std::string, std::size_t>& idx) {
  Adjacency adj;
  adj.out.resize(graph.vertices.size());
  for (const auto& e : graph.edges) {
    auto u = idx.find(e.u);
    auto v = idx.find(e.v);
    if (u == idx.end())
      throw StructuralError("edge endpoint '" + e.u + "' is not a vertex");
    if (v == idx.end())
      throw StructuralError("edge endpoint '" + e.v + "' is not a vertex");
    if (!(e.length > 0) || !std::isfinite(e.length))
      throw StructuralError("edge ('" + e.u + "','" + e.v +
                            "') has nonpositive length");
    adj.out[u->second].emplace_back(v->second, e.length);
    adj.out[v->second].emplace_back(u->second, e.length);
  }
  return adj;
}

std::vector<double> dijkstra(const Adjacency& adj, std::size_t source) {
  std::vector<double> dist(adj.out.size(), kInf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = 0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    for (auto [v, w] : adj.out[u]) {
      double nd = d + w;
      if (nd < dist[v]) {
        dist[v] = nd;
        queue.emplace(nd, v);
      }
    }
  }
  return dist;
}

}  // namespace

std::optional<std::size_t> FiniteMetricSpace::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i] == id) return i;
  return std::nullopt;
}

void require_well_formed(const FiniteMetricSpace& space) {
  const std::size_t n = space.points.size();
  if (space.dist.size() != n)
    throw StructuralError("distance table has " +
                          std::to_string(space.dist.size()) + " rows for " +
                          std::to_string(n) + " points");
  for (std::size_t i = 0; i < n; ++i) {
    if (space.dist[i].size() != n)
      throw StructuralError("distance table row for point '" +
                            space.points[i] + "' has " +
                            std::to_string(space.dist[i].size()) +
                            " entries, expected " + std::to_string(n));
    for (std::size_t j = 0; j < n; ++j) {
      double v = space.dist[i][j];
      if (!std::isfinite(v))
        throw StructuralError("non-finite distance between '" +
                              space.points[i] + "' and '" + space.points[j] +
                              "'");
      if (v < 0)
        throw StructuralError("negative distance between '" + space.points[i] +
                              "' and '" + space.points[j] + "'");
    }
  }
  index_map(space.points, "point");
}

double diameter(const FiniteMetricSpace& space) {
  double diam = 0;
  for (const auto& row : space.dist)
    for (double v : row) diam = std::max(diam, v);
  return diam;
}

double default_tolerance(const FiniteMetricSpace& space) {
  return kRelTolerance * diameter(space);
}

std::string MetricViolation::describe(const FiniteMetricSpace& space) const {
  std::ostringstream out;
  const auto& p = space.points;
  switch (kind) {
    case Kind::Diagonal:
      out << "d('" << p[i] << "','" << p[i] << "') = " << amount << " != 0";
      break;
    case Kind::Asymmetry:
      out << "d('" << p[i] << "','" << p[j] << "') differs from reverse by "
          << amount;
      break;
    case Kind::StrictZero:
      out << "d('" << p[i] << "','" << p[j] << "') = 0 for distinct points";
      break;
    case Kind::Triangle:
      out << "triangle ('" << p[i] << "','" << p[j] << "','" << p[k]
          << "') violated by " << amount;
      break;
  }
  return out.str();
}

ValidationReport validate_metric(const FiniteMetricSpace& space, MetricMode mode,
                                 double tol, bool check_triangle) {
  require_well_formed(space);
  ValidationReport report;
  report.tolerance = tol < 0 ? default_tolerance(space) : tol;
  const double t = report.tolerance;
  const std::size_t n = space.size();

  auto record = [&report](MetricViolation v) {
    if (report.violations.size() < ValidationReport::kMaxRecorded)
      report.violations.push_back(v);
    ++report.total_count;
  };

  for (std::size_t i = 0; i < n; ++i)
    if (space.d(i, i) > t)
      record({MetricViolation::Kind::Diagonal, i, i, i, space.d(i, i)});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double gap = std::fabs(space.d(i, j) - space.d(j, i));
      if (gap > t) record({MetricViolation::Kind::Asymmetry, i, j, j, gap});
    }
  if (mode == MetricMode::Strict) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (space.d(i, j) <= t)
          record({MetricViolation::Kind::StrictZero, i, j, j, space.d(i, j)});
  }
  if (check_triangle) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          double excess = space.d(i, k) - space.d(i, j) - space.d(j, k);
          if (excess > t)
            record({MetricViolation::Kind::Triangle, i, j, k, excess});
        }
      }
  }
  return report;
}

FiniteMetricSpace geodesic_metric(const WeightedGraphSpace& graph) {
  const std::size_t n = graph.vertices.size();
  if (n == 0) throw StructuralError("graph has no vertices");
  auto idx = index_map(graph.vertices, "vertex");
  Adjacency adj = build_adjacency(graph, idx);

  FiniteMetricSpace space;
  space.points = graph.vertices;
  space.dist.assign(n, std::vector<double>(n, 0));
  parallel_for(n, [&](std::size_t i) { space.dist[i] = dijkstra(adj, i); });

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!std::isfinite(space.dist[i][j]))
        throw StructuralError("graph is disconnected: no path between '" +
                              graph.vertices[i] + "' and '" +
                              graph.vertices[j] + "'");
  return space;
}

std::vector<double> single_source_distances(const WeightedGraphSpace& graph,
                                            const std::string& source) {
  auto idx = index_map(graph.vertices, "vertex");
  auto it = idx.find(source);
  if (it == idx.end())
    throw StructuralError("unknown source vertex '" + source + "'");
  Adjacency adj = build_adjacency(graph, idx);
  return dijkstra(adj, it->second);
}

NetSelection farthest_point_selection(const FiniteMetricSpace& space,
                                      std::size_t max_members,
                                      double target_radius, std::size_t start) {
  const std::size_t n = space.size();
  NetSelection net;
  if (n == 0) return net;
  start %= n;
  net.members.push_back(start);
  std::vector<double> min_dist = space.dist[start];

  auto covering = [&] {
    double radius = 0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (min_dist[i] > radius) {
        radius = min_dist[i];
        arg = i;
      }
    return std::make_pair(radius, arg);
  };

  auto [radius, farthest] = covering();
  while (net.members.size() < std::min(max_members, n) &&
         radius > target_radius && radius > 0) {
    net.members.push_back(farthest);
    for (std::size_t i = 0; i < n; ++i)
      min_dist[i] = std::min(min_dist[i], space.d(farthest, i));
    std::tie(radius, farthest) = covering();
  }
  net.radius = radius;
  return net;
}

EpsNet eps_net(const FiniteMetricSpace& space, double target_radius,
               std::uint64_t seed) {
  require_well_formed(space);
  if (target_radius < 0)
    throw StructuralError("target radius must be nonnegative");
  if (space.size() == 0) throw StructuralError("empty space has no net");
  std::mt19937_64 rng(seed);
  std::size_t start = static_cast<std::size_t>(rng() % space.size());
  NetSelection sel =
      farthest_point_selection(space, space.size(), target_radius, start);
  EpsNet net;
  net.member_indices = sel.members;
  net.radius = sel.radius;
  for (std::size_t i : sel.members) net.members.push_back(space.points[i]);
  return net;
}

namespace {

// Sorted distance profiles; two points can correspond only if their
// profiles agree entrywise within tol.
std::vector<std::vector<double>> sorted_profiles(const FiniteMetricSpace& s) {
  std::vector<std::vector<double>> profiles(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    profiles[i] = s.dist[i];
    std::sort(profiles[i].begin(), profiles[i].end());
  }
  return profiles;
}

bool profile_compatible(const std::vector<double>& a,
                        const std::vector<double>& b, double tol) {
  for (std::size_t t = 0; t < a.size(); ++t)
    if (std::fabs(a[t] - b[t]) > tol) return false;
  return true;
}

struct IsometrySearch {
  IsometrySearch(const FiniteMetricSpace& x_in, const FiniteMetricSpace& y_in,
                 double tol_in, std::size_t budget_in)
      : x(x_in), y(y_in), tol(tol_in), budget(budget_in) {}

  const FiniteMetricSpace& x;
  const FiniteMetricSpace& y;
  double tol;
  std::size_t budget;
  std::size_t expansions = 0;
  std::vector<std::size_t> order;                  // x indices, most constrained first
  std::vector<std::vector<std::size_t>> candidates;  // per x index
  std::vector<std::size_t> assign;                 // x index -> y index
  std::vector<bool> used;

  bool search(std::size_t depth) {
    if (depth == order.size()) return true;
    if (++expansions > budget)
      throw Error("isometry search exceeded its node budget");
    std::size_t xi = order[depth];
    for (std::size_t yi : candidates[xi]) {
      if (used[yi]) continue;
      bool feasible = true;
      for (std::size_t prev = 0; prev < depth; ++prev) {
        std::size_t xj = order[prev];
        if (std::fabs(x.d(xi, xj) - y.d(yi, assign[xj])) > tol) {
          feasible = false;
          break;
        }
      }
      if (!feasible) continue;
      assign[xi] = yi;
      used[yi] = true;
      if (search(depth + 1)) return true;
      used[yi] = false;
    }
    return false;
  }
};

}  // namespace

std::optional<Isometry> find_isometry(const FiniteMetricSpace& x,
                                      const FiniteMetricSpace& y, double tol,
                                      std::size_t node_budget) {
  require_well_formed(x);
  require_well_formed(y);
  if (x.size() != y.size()) return std::nullopt;
  const std::size_t n = x.size();
  if (n == 0) return Isometry{{}, 0};

  auto px = sorted_profiles(x);
  auto py = sorted_profiles(y);

  IsometrySearch search{x, y, tol, node_budget};
  search.candidates.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      if (profile_compatible(px[i], py[j], tol))
        search.candidates[i].push_back(j);
    if (search.candidates[i].empty()) return std::nullopt;
  }
  search.order.resize(n);
  for (std::size_t i = 0; i < n; ++i) search.order[i] = i;
  std::stable_sort(search.order.begin(), search.order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return search.candidates[a].size() <
                            search.candidates[b].size();
                   });
  search.assign.assign(n, 0);
  search.used.assign(n, false);
  if (!search.search(0)) return std::nullopt;

  Isometry iso;
  iso.to_y = search.assign;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      iso.max_discrepancy = std::max(
          iso.max_discrepancy,
          std::fabs(x.d(i, j) - y.d(iso.to_y[i], iso.to_y[j])));
  return iso;
}

}  // namespace hlskit
