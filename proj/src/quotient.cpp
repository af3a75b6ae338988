#include "hlskit/quotient.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "hlskit/union_find.hpp"

namespace hlskit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::unordered_map<std::string, std::size_t> point_index(
    const std::vector<std::string>& ids) {
  std::unordered_map<std::string, std::size_t> map;
  map.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) map.emplace(ids[i], i);
  return map;
}

// Floyd-Warshall with absent edges kept absent: infinite entries are never
// summed, only skipped.
void all_pairs_over_classes(std::vector<std::vector<double>>& w) {
  const std::size_t k = w.size();
  for (std::size_t m = 0; m < k; ++m)
    for (std::size_t i = 0; i < k; ++i) {
      if (w[i][m] == kInf) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (w[m][j] == kInf) continue;
        double through = w[i][m] + w[m][j];
        if (through < w[i][j]) w[i][j] = through;
      }
    }
}

// Shared core: points with ids, a host tag per point (points of different
// hosts have no direct distance), and the generating pairs.
QuotientResult quotient_core(const std::vector<std::string>& ids,
                             const std::vector<std::size_t>& host,
                             const std::vector<const FiniteMetricSpace*>& spaces,
                             const std::vector<std::size_t>& local_index,
                             const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                             double zero_tol) {
  const std::size_t n = ids.size();
  UnionFind uf(n);
  for (auto [a, b] : pairs) uf.unite(a, b);
  std::vector<std::size_t> cls = uf.component_ids();
  std::size_t k = 0;
  for (std::size_t c : cls) k = std::max(k, c + 1);

  // Class graph: minimal member-pair distance within a common host.
  std::vector<std::vector<double>> w(k, std::vector<double>(k, kInf));
  for (std::size_t c = 0; c < k; ++c) w[c][c] = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (host[i] != host[j]) continue;
      double d = spaces[host[i]]->d(local_index[i], local_index[j]);
      std::size_t a = cls[i], b = cls[j];
      if (d < w[a][b]) w[a][b] = w[b][a] = d;
    }
  all_pairs_over_classes(w);

  if (zero_tol < 0) {
    double diam = 0;
    for (const auto* s : spaces) diam = std::max(diam, diameter(*s));
    zero_tol = kRelTolerance * diam;
  }

  // Merge classes at (numerically) zero quotient distance.
  UnionFind zero(k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      if (w[a][b] <= zero_tol) zero.unite(a, b);
  std::vector<std::size_t> group = zero.component_ids();
  std::size_t g = 0;
  for (std::size_t c : group) g = std::max(g, c + 1);

  std::vector<std::vector<double>> gd(g, std::vector<double>(g, kInf));
  for (std::size_t c = 0; c < g; ++c) gd[c][c] = 0;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      std::size_t ga = group[a], gb = group[b];
      if (ga == gb) continue;
      if (w[a][b] < gd[ga][gb]) gd[ga][gb] = gd[gb][ga] = w[a][b];
    }

  QuotientResult result;
  result.space.points.assign(g, {});
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t gi = group[cls[i]];
    if (result.space.points[gi].empty()) result.space.points[gi] = ids[i];
  }
  result.space.dist = std::move(gd);
  for (std::size_t i = 0; i < n; ++i)
    result.class_map[ids[i]] = result.space.points[group[cls[i]]];
  for (std::size_t a = 0; a < g && result.connected; ++a)
    for (std::size_t b = 0; b < g; ++b)
      if (result.space.dist[a][b] == kInf) {
        result.connected = false;
        break;
      }
  return result;
}

}  // namespace

QuotientResult quotient_metric(const FiniteMetricSpace& space,
                               const PointRelation& rel, double zero_tol) {
  require_well_formed(space);
  const std::size_t n = space.size();
  auto idx = point_index(space.points);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(rel.pairs.size());
  for (const auto& [a, b] : rel.pairs) {
    auto ia = idx.find(a);
    auto ib = idx.find(b);
    if (ia == idx.end())
      throw StructuralError("relation refers to unknown point '" + a + "'");
    if (ib == idx.end())
      throw StructuralError("relation refers to unknown point '" + b + "'");
    pairs.emplace_back(ia->second, ib->second);
  }
  std::vector<std::size_t> host(n, 0), local(n);
  for (std::size_t i = 0; i < n; ++i) local[i] = i;
  return quotient_core(space.points, host, {&space}, local, pairs, zero_tol);
}

QuotientResult glue(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                    const std::vector<std::pair<std::string, std::string>>& f,
                    double zero_tol) {
  require_well_formed(x);
  require_well_formed(y);
  auto xi = point_index(x.points);
  auto yi = point_index(y.points);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<bool> seen_a(x.size(), false), seen_b(y.size(), false);
  for (const auto& [a, b] : f) {
    auto ia = xi.find(a);
    auto ib = yi.find(b);
    if (ia == xi.end())
      throw StructuralError("gluing map refers to unknown point '" + a +
                            "' in the first space");
    if (ib == yi.end())
      throw StructuralError("gluing map refers to unknown point '" + b +
                            "' in the second space");
    if (seen_a[ia->second])
      throw StructuralError("gluing map is not injective at '" + a + "'");
    if (seen_b[ib->second])
      throw StructuralError("gluing map is not injective onto '" + b + "'");
    seen_a[ia->second] = seen_b[ib->second] = true;
    pairs.emplace_back(ia->second, x.size() + ib->second);
  }

  std::vector<std::string> ids;
  std::vector<std::size_t> host, local;
  ids.reserve(x.size() + y.size());
  for (const auto& p : x.points) ids.push_back("x:" + p);
  for (const auto& p : y.points) ids.push_back("y:" + p);
  for (std::size_t i = 0; i < x.size(); ++i) {
    host.push_back(0);
    local.push_back(i);
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    host.push_back(1);
    local.push_back(i);
  }
  return quotient_core(ids, host, {&x, &y}, local, pairs, zero_tol);
}

QuotientResult collapse_subset(const FiniteMetricSpace& space,
                               const std::vector<std::string>& subset,
                               double zero_tol) {
  if (subset.empty())
    throw StructuralError("cannot collapse an empty subset");
  PointRelation rel;
  for (std::size_t i = 1; i < subset.size(); ++i)
    rel.pairs.emplace_back(subset[0], subset[i]);
  return quotient_metric(space, rel, zero_tol);
}

QuotientResult orbit_quotient(
    const FiniteMetricSpace& space,
    const std::vector<std::map<std::string, std::string>>& generators,
    double zero_tol) {
  require_well_formed(space);
  auto idx = point_index(space.points);
  PointRelation rel;
  for (std::size_t g = 0; g < generators.size(); ++g) {
    const auto& gen = generators[g];
    if (gen.size() != space.size())
      throw StructuralError("generator " + std::to_string(g) +
                            " does not cover all points");
    std::vector<bool> hit(space.size(), false);
    for (const auto& [from, to] : gen) {
      auto f = idx.find(from);
      auto t = idx.find(to);
      if (f == idx.end() || t == idx.end())
        throw StructuralError("generator " + std::to_string(g) +
                              " maps unknown point '" +
                              (f == idx.end() ? from : to) + "'");
      if (hit[t->second])
        throw StructuralError("generator " + std::to_string(g) +
                              " is not a bijection: '" + to +
                              "' has two preimages");
      hit[t->second] = true;
      rel.pairs.emplace_back(from, to);
    }
  }
  return quotient_metric(space, rel, zero_tol);
}

}  // namespace hlskit
