#include "hlskit/foliated_complex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "hlskit/metric_graph.hpp"
#include "hlskit/union_find.hpp"

namespace hlskit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::unordered_map<std::string, std::size_t> vertex_index(
    const FoliatedComplex& k) {
  std::unordered_map<std::string, std::size_t> idx;
  idx.reserve(k.vertices.size());
  for (std::size_t i = 0; i < k.vertices.size(); ++i) {
    if (!idx.emplace(k.vertices[i], i).second)
      throw StructuralError("duplicate vertex id '" + k.vertices[i] + "'");
  }
  return idx;
}

const std::string& leaf_of_vertex(const FoliatedComplex& k,
                                  const std::string& v) {
  auto it = k.leaf_of.find(v);
  if (it == k.leaf_of.end())
    throw StructuralError("vertex '" + v + "' has no leaf label");
  return it->second;
}

std::string id_of(std::size_t i) { return std::to_string(i); }

}  // namespace

std::vector<std::string> FoliatedComplex::leaves() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& v : vertices) {
    auto it = leaf_of.find(v);
    if (it == leaf_of.end()) continue;  // reported by validate_complex
    if (seen.insert(it->second).second) out.push_back(it->second);
  }
  return out;
}

WeightedGraphSpace as_weighted_graph(const FoliatedComplex& k) {
  WeightedGraphSpace g;
  g.vertices = k.vertices;
  g.edges.reserve(k.edges.size());
  for (const auto& e : k.edges) g.edges.push_back({e.u, e.v, e.length});
  return g;
}

ComplexReport validate_complex(const FoliatedComplex& k) {
  ComplexReport report;
  auto idx = vertex_index(k);

  for (const auto& v : k.vertices)
    if (!k.leaf_of.count(v))
      report.issues.push_back("vertex '" + v + "' has no leaf label");
  for (const auto& [v, leaf] : k.leaf_of)
    if (!idx.count(v))
      report.issues.push_back("leaf label for unknown vertex '" + v + "'");

  for (const auto& e : k.edges) {
    if (!idx.count(e.u) || !idx.count(e.v)) {
      report.issues.push_back("edge ('" + e.u + "','" + e.v +
                              "') has an unknown endpoint");
      continue;
    }
    if (!(e.length > 0) || !std::isfinite(e.length))
      report.issues.push_back("edge ('" + e.u + "','" + e.v +
                              "') has nonpositive length");
    auto lu = k.leaf_of.find(e.u);
    auto lv = k.leaf_of.find(e.v);
    if (lu == k.leaf_of.end() || lv == k.leaf_of.end()) continue;
    bool same = lu->second == lv->second;
    if (same && e.kind != EdgeKind::Tangential)
      report.issues.push_back("transverse edge ('" + e.u + "','" + e.v +
                              "') stays inside leaf '" + lu->second + "'");
    if (!same && e.kind != EdgeKind::Transverse)
      report.issues.push_back("tangential edge ('" + e.u + "','" + e.v +
                              "') crosses leaves '" + lu->second + "' and '" +
                              lv->second + "'");
  }
  if (!report.issues.empty()) return report;  // graph checks need sound edges

  const std::size_t n = k.vertices.size();
  // connectivity of the whole complex
  {
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& e : k.edges) {
      adj[idx[e.u]].push_back(idx[e.v]);
      adj[idx[e.v]].push_back(idx[e.u]);
    }
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> bfs;
    if (n > 0) {
      bfs.push(0);
      seen[0] = true;
    }
    while (!bfs.empty()) {
      std::size_t u = bfs.front();
      bfs.pop();
      for (std::size_t v : adj[u])
        if (!seen[v]) {
          seen[v] = true;
          bfs.push(v);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
      if (!seen[i]) {
        report.issues.push_back("complex is disconnected: vertex '" +
                                k.vertices[i] + "' unreachable from '" +
                                k.vertices[0] + "'");
        break;
      }
  }
  // tangential connectivity of each leaf
  {
    UnionFind uf(n);
    for (const auto& e : k.edges)
      if (e.kind == EdgeKind::Tangential) uf.unite(idx[e.u], idx[e.v]);
    std::unordered_map<std::string, std::size_t> rep;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& leaf = k.leaf_of.at(k.vertices[i]);
      auto [it, fresh] = rep.emplace(leaf, i);
      if (!fresh && !uf.same(it->second, i))
        report.issues.push_back("leaf '" + leaf +
                                "' is not tangentially connected (vertices '" +
                                k.vertices[it->second] + "' and '" +
                                k.vertices[i] + "')");
    }
  }
  // mesh contract: a transverse neighbor within mesh, or an exempt leaf
  {
    std::vector<double> best(n, kInf);
    for (const auto& e : k.edges)
      if (e.kind == EdgeKind::Transverse) {
        best[idx[e.u]] = std::min(best[idx[e.u]], e.length);
        best[idx[e.v]] = std::min(best[idx[e.v]], e.length);
      }
    for (std::size_t i = 0; i < n; ++i) {
      const auto& leaf = k.leaf_of.at(k.vertices[i]);
      if (k.boundary_leaves.count(leaf)) continue;
      if (best[i] > k.mesh)
        report.issues.push_back(
            "vertex '" + k.vertices[i] +
            "' has no transverse neighbor within the declared mesh");
    }
  }
  return report;
}

FiniteMetricSpace leaf_distance_matrix(const FoliatedComplex& k) {
  FiniteMetricSpace vertex_space = geodesic_metric(as_weighted_graph(k));
  std::vector<std::string> leaf_ids = k.leaves();
  std::unordered_map<std::string, std::size_t> leaf_idx;
  for (std::size_t i = 0; i < leaf_ids.size(); ++i)
    leaf_idx.emplace(leaf_ids[i], i);

  const std::size_t n = k.vertices.size();
  std::vector<std::size_t> leaf_of(n);
  for (std::size_t i = 0; i < n; ++i)
    leaf_of[i] = leaf_idx.at(leaf_of_vertex(k, k.vertices[i]));

  FiniteMetricSpace out;
  out.points = leaf_ids;
  out.dist.assign(leaf_ids.size(),
                  std::vector<double>(leaf_ids.size(), kInf));
  for (std::size_t i = 0; i < leaf_ids.size(); ++i) out.dist[i][i] = 0;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      std::size_t lu = leaf_of[u], lv = leaf_of[v];
      if (lu == lv) continue;
      double d = vertex_space.d(u, v);
      if (d < out.dist[lu][lv]) out.dist[lu][lv] = out.dist[lv][lu] = d;
    }
  return out;
}

HlsSpace hls(const FoliatedComplex& k, double zero_tol) {
  FiniteMetricSpace ldm = leaf_distance_matrix(k);
  const std::size_t m = ldm.size();
  if (zero_tol < 0) zero_tol = kRelTolerance * diameter(ldm);

  // chain infimum = shortest paths over the complete leaf graph
  std::vector<std::vector<double>> rho = ldm.dist;
  for (std::size_t mid = 0; mid < m; ++mid)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        double through = rho[i][mid] + rho[mid][j];
        if (through < rho[i][j]) rho[i][j] = through;
      }

  UnionFind zero(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (rho[i][j] <= zero_tol) zero.unite(i, j);
  std::vector<std::size_t> group = zero.component_ids();
  std::size_t g = 0;
  for (std::size_t c : group) g = std::max(g, c + 1);

  HlsSpace out;
  out.space.points.assign(g, {});
  for (std::size_t i = 0; i < m; ++i)
    if (out.space.points[group[i]].empty())
      out.space.points[group[i]] = ldm.points[i];
  out.space.dist.assign(g, std::vector<double>(g, kInf));
  for (std::size_t c = 0; c < g; ++c) out.space.dist[c][c] = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t gi = group[i], gj = group[j];
      if (gi == gj) continue;
      if (rho[i][j] < out.space.dist[gi][gj])
        out.space.dist[gi][gj] = out.space.dist[gj][gi] = rho[i][j];
    }
  for (std::size_t i = 0; i < m; ++i)
    out.class_of_leaf[ldm.points[i]] = out.space.points[group[i]];
  for (const auto& v : k.vertices)
    out.class_of_vertex[v] = out.class_of_leaf.at(leaf_of_vertex(k, v));
  return out;
}

FoliatedComplex warp(const FoliatedComplex& k, const WarpSpec& factors) {
  for (const auto& leaf : k.leaves()) {
    auto it = factors.values.find(leaf);
    if (it == factors.values.end())
      throw StructuralError("warp factors are missing leaf '" + leaf + "'");
    if (!(it->second > 0) || !std::isfinite(it->second))
      throw StructuralError("warp factor for leaf '" + leaf +
                            "' must be positive");
  }
  FoliatedComplex out = k;
  for (auto& e : out.edges)
    if (e.kind == EdgeKind::Tangential)
      e.length *= factors.values.at(leaf_of_vertex(k, e.u));
  return out;
}

namespace {

FoliatedComplex rename_complex(const FoliatedComplex& k,
                               const std::string& prefix) {
  FoliatedComplex out;
  out.mesh = k.mesh;
  out.vertices.reserve(k.vertices.size());
  for (const auto& v : k.vertices) out.vertices.push_back(prefix + v);
  for (const auto& [v, leaf] : k.leaf_of) out.leaf_of[prefix + v] = prefix + leaf;
  out.edges.reserve(k.edges.size());
  for (const auto& e : k.edges)
    out.edges.push_back({prefix + e.u, prefix + e.v, e.length, e.kind});
  for (const auto& leaf : k.boundary_leaves)
    out.boundary_leaves.insert(prefix + leaf);
  return out;
}

bool ids_collide(const FoliatedComplex& a, const FoliatedComplex& b) {
  std::unordered_set<std::string> ids(a.vertices.begin(), a.vertices.end());
  for (const auto& v : b.vertices)
    if (ids.count(v)) return true;
  std::unordered_set<std::string> leaves_a;
  for (const auto& [v, leaf] : a.leaf_of) leaves_a.insert(leaf);
  for (const auto& [v, leaf] : b.leaf_of)
    if (leaves_a.count(leaf)) return true;
  return false;
}

void rederive_kinds(FoliatedComplex& k) {
  for (auto& e : k.edges)
    e.kind = leaf_of_vertex(k, e.u) == leaf_of_vertex(k, e.v)
                 ? EdgeKind::Tangential
                 : EdgeKind::Transverse;
}

bool complex_connected(const FoliatedComplex& k) {
  if (k.vertices.empty()) return true;
  auto idx = vertex_index(k);
  std::vector<std::vector<std::size_t>> adj(k.vertices.size());
  for (const auto& e : k.edges) {
    adj[idx.at(e.u)].push_back(idx.at(e.v));
    adj[idx.at(e.v)].push_back(idx.at(e.u));
  }
  std::vector<bool> seen(k.vertices.size(), false);
  std::queue<std::size_t> bfs;
  bfs.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!bfs.empty()) {
    std::size_t u = bfs.front();
    bfs.pop();
    for (std::size_t v : adj[u])
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        bfs.push(v);
      }
  }
  return reached == k.vertices.size();
}

}  // namespace

GlueComplexResult glue_complexes(
    const FoliatedComplex& k1_in, const FoliatedComplex& k2_in,
    const std::vector<std::pair<std::string, std::string>>& vertex_pairs,
    GlueMode mode) {
  const bool collide = ids_collide(k1_in, k2_in);
  FoliatedComplex k1 = collide ? rename_complex(k1_in, "a:") : k1_in;
  FoliatedComplex k2 = collide ? rename_complex(k2_in, "b:") : k2_in;
  auto lift = [&collide](const std::string& id, const char* prefix) {
    return collide ? prefix + id : id;
  };

  auto idx1 = vertex_index(k1);
  auto idx2 = vertex_index(k2);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (k1, k2) indices
  std::vector<bool> used1(k1.vertices.size(), false);
  std::vector<bool> used2(k2.vertices.size(), false);
  for (const auto& [a_raw, b_raw] : vertex_pairs) {
    std::string a = lift(a_raw, "a:"), b = lift(b_raw, "b:");
    auto ia = idx1.find(a);
    auto ib = idx2.find(b);
    if (ia == idx1.end())
      throw StructuralError("gluing pair refers to unknown vertex '" + a_raw +
                            "' in the first complex");
    if (ib == idx2.end())
      throw StructuralError("gluing pair refers to unknown vertex '" + b_raw +
                            "' in the second complex");
    if (used1[ia->second] || used2[ib->second])
      throw StructuralError("gluing map is not injective at vertex '" + a_raw +
                            "' / '" + b_raw + "'");
    used1[ia->second] = used2[ib->second] = true;
    pairs.emplace_back(ia->second, ib->second);
  }

  std::map<std::string, std::string> leaf_rename;  // k2 leaf -> k1 leaf
  if (mode == GlueMode::Tangential) {
    std::map<std::string, std::string> forward, backward;
    for (auto [i1, i2] : pairs) {
      const auto& l1 = leaf_of_vertex(k1, k1.vertices[i1]);
      const auto& l2 = leaf_of_vertex(k2, k2.vertices[i2]);
      auto [fit, fresh_f] = forward.emplace(l1, l2);
      if (!fresh_f && fit->second != l2)
        throw StructuralError("tangential gluing does not map leaves onto "
                              "leaves: leaf '" + l1 + "' meets both '" +
                              fit->second + "' and '" + l2 + "'");
      auto [bit, fresh_b] = backward.emplace(l2, l1);
      if (!fresh_b && bit->second != l1)
        throw StructuralError("tangential gluing does not map leaves onto "
                              "leaves: leaves '" + bit->second + "' and '" +
                              l1 + "' both meet '" + l2 + "'");
    }
    for (const auto& [l2, l1] : backward) leaf_rename[l2] = l1;
  }

  // merged vertices keep the first complex's id and leaf
  std::vector<std::string> merged_into(k2.vertices.size());
  FoliatedComplex out;
  out.mesh = std::max(k1.mesh, k2.mesh);
  out.vertices = k1.vertices;
  out.leaf_of = k1.leaf_of;
  for (auto [i1, i2] : pairs) merged_into[i2] = k1.vertices[i1];
  for (std::size_t i2 = 0; i2 < k2.vertices.size(); ++i2) {
    if (!merged_into[i2].empty()) continue;
    const auto& v = k2.vertices[i2];
    out.vertices.push_back(v);
    const auto& leaf = leaf_of_vertex(k2, v);
    auto ren = leaf_rename.find(leaf);
    out.leaf_of[v] = ren == leaf_rename.end() ? leaf : ren->second;
  }
  auto map2 = [&](const std::string& v) -> const std::string& {
    std::size_t i2 = idx2.at(v);
    return merged_into[i2].empty() ? v : merged_into[i2];
  };
  out.edges = k1.edges;
  for (const auto& e : k2.edges)
    out.edges.push_back({map2(e.u), map2(e.v), e.length, e.kind});
  rederive_kinds(out);

  std::unordered_set<std::string> matched_k1_leaves;
  for (const auto& [l2, l1] : leaf_rename) matched_k1_leaves.insert(l1);
  for (const auto& leaf : k1.boundary_leaves)
    if (!matched_k1_leaves.count(leaf)) out.boundary_leaves.insert(leaf);
  for (const auto& leaf : k2.boundary_leaves)
    if (!leaf_rename.count(leaf)) out.boundary_leaves.insert(leaf);

  GlueComplexResult result;
  result.connected = complex_connected(out);
  result.complex = std::move(out);
  return result;
}

FoliatedComplex fuse_leaves(const FoliatedComplex& k,
                            const std::vector<std::string>& leaf_ids,
                            const std::string& fused_id) {
  if (leaf_ids.empty()) throw StructuralError("no leaves to fuse");
  std::unordered_set<std::string> fused(leaf_ids.begin(), leaf_ids.end());
  auto all = k.leaves();
  std::unordered_set<std::string> known(all.begin(), all.end());
  for (const auto& leaf : leaf_ids)
    if (!known.count(leaf))
      throw StructuralError("cannot fuse unknown leaf '" + leaf + "'");
  for (const auto& leaf : all)
    if (!fused.count(leaf) && leaf == fused_id)
      throw StructuralError("fused leaf id '" + fused_id +
                            "' collides with an existing leaf");

  FoliatedComplex out = k;
  for (auto& [v, leaf] : out.leaf_of)
    if (fused.count(leaf)) leaf = fused_id;
  rederive_kinds(out);

  // the fused transversal behaves like a compact leaf
  for (const auto& leaf : leaf_ids) out.boundary_leaves.erase(leaf);
  out.boundary_leaves.insert(fused_id);

  // the fused leaf must be tangentially connected
  auto idx = vertex_index(out);
  UnionFind uf(out.vertices.size());
  for (const auto& e : out.edges)
    if (e.kind == EdgeKind::Tangential) uf.unite(idx.at(e.u), idx.at(e.v));
  std::size_t rep = SIZE_MAX;
  for (std::size_t i = 0; i < out.vertices.size(); ++i) {
    if (out.leaf_of.at(out.vertices[i]) != fused_id) continue;
    if (rep == SIZE_MAX)
      rep = i;
    else if (!uf.same(rep, i))
      throw Error("fusing these leaves leaves '" + fused_id +
                  "' tangentially disconnected; fuse a transversally "
                  "consecutive chain");
  }
  return out;
}

FoliatedComplex generate(const ProductIBundleSpec& spec) {
  if (!(spec.length > 0))
    throw StructuralError("bundle length must be positive");
  if (spec.leaf_count < 2)
    throw StructuralError("bundle needs at least two leaves");
  if (spec.fiber_size < 1)
    throw StructuralError("fiber needs at least one vertex");
  const std::size_t n = spec.leaf_count, m = spec.fiber_size;
  const double mesh = spec.length / static_cast<double>(n - 1);

  FoliatedComplex k;
  k.mesh = mesh;
  for (std::size_t i = 0; i < n; ++i) {
    std::string leaf = "L" + id_of(i);
    for (std::size_t j = 0; j < m; ++j) {
      std::string v = leaf + "_v" + id_of(j);
      k.vertices.push_back(v);
      k.leaf_of[v] = leaf;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j + 1 < m; ++j)
      k.edges.push_back({"L" + id_of(i) + "_v" + id_of(j),
                         "L" + id_of(i) + "_v" + id_of(j + 1), mesh,
                         EdgeKind::Tangential});
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      k.edges.push_back({"L" + id_of(i) + "_v" + id_of(j),
                         "L" + id_of(i + 1) + "_v" + id_of(j), mesh,
                         EdgeKind::Transverse});
  k.boundary_leaves = {"L0", "L" + id_of(n - 1)};
  return k;
}

FoliatedComplex generate(const KroneckerTorusSpec& spec) {
  const std::size_t r = spec.resolution;
  if (r < 2) throw StructuralError("resolution must be at least 2");
  FoliatedComplex k;
  k.mesh = 1.0 / static_cast<double>(r);
  const double slot_gap = 1.0 / static_cast<double>(r * r);

  auto vertex = [](std::size_t j, std::size_t s) {
    return "K" + id_of(j) + "_s" + id_of(s);
  };
  for (std::size_t j = 0; j < r; ++j) {
    std::string leaf = "K" + id_of(j);
    for (std::size_t s = 0; s < r; ++s) {
      k.vertices.push_back(vertex(j, s));
      k.leaf_of[vertex(j, s)] = leaf;
    }
  }
  // each leaf winds once around per strand
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t s = 0; s < r; ++s)
      k.edges.push_back(
          {vertex(j, s), vertex(j, (s + 1) % r), 1.0, EdgeKind::Tangential});
  // interleaved strands: slot p = s*r + j, neighbors are consecutive slots
  for (std::size_t p = 0; p < r * r; ++p) {
    std::size_t q = (p + 1) % (r * r);
    k.edges.push_back({vertex(p % r, p / r), vertex(q % r, q / r), slot_gap,
                       EdgeKind::Transverse});
  }
  return k;
}

namespace {

double accumulation_length(std::size_t i, std::size_t r) {
  // strictly increasing in i, bounded by 1/(4(r+1)) < mesh
  return static_cast<double>(i + 1) /
         (4.0 * static_cast<double>(r) * static_cast<double>(r + 1));
}

}  // namespace

FoliatedComplex generate(const ReebAnnulusSpec& spec) {
  const std::size_t r = spec.resolution;
  if (r < 2) throw StructuralError("resolution must be at least 2");
  FoliatedComplex k;
  k.mesh = 1.0 / static_cast<double>(r);
  const double arc = k.mesh;

  for (std::size_t p = 0; p < r; ++p) {
    std::string v = "B_p" + id_of(p);
    k.vertices.push_back(v);
    k.leaf_of[v] = "B";
  }
  for (std::size_t p = 0; p < r; ++p)
    k.edges.push_back({"B_p" + id_of(p), "B_p" + id_of((p + 1) % r), arc,
                       EdgeKind::Tangential});
  for (std::size_t i = 0; i < r; ++i) {
    std::string leaf = "I" + id_of(i);
    for (std::size_t t = 0; t < r; ++t) {
      std::string v = leaf + "_t" + id_of(t);
      k.vertices.push_back(v);
      k.leaf_of[v] = leaf;
      if (t > 0)
        k.edges.push_back({leaf + "_t" + id_of(t - 1), v, arc,
                           EdgeKind::Tangential});
      k.edges.push_back({v, "B_p" + id_of((t + i) % r),
                         accumulation_length(i, r), EdgeKind::Transverse});
    }
  }
  k.boundary_leaves = {"B"};
  return k;
}

FoliatedComplex generate(const StarBlockSpec& spec) {
  const std::size_t kb = spec.boundary_count, r = spec.resolution;
  if (kb < 1) throw StructuralError("need at least one boundary leaf");
  if (r < 2) throw StructuralError("resolution must be at least 2");
  FoliatedComplex k;
  k.mesh = 1.0 / static_cast<double>(r);
  const double arc = k.mesh;

  for (std::size_t b = 0; b < kb; ++b) {
    std::string leaf = "B" + id_of(b);
    for (std::size_t p = 0; p < r; ++p) {
      std::string v = leaf + "_p" + id_of(p);
      k.vertices.push_back(v);
      k.leaf_of[v] = leaf;
    }
    for (std::size_t p = 0; p < r; ++p)
      k.edges.push_back({leaf + "_p" + id_of(p),
                         leaf + "_p" + id_of((p + 1) % r), arc,
                         EdgeKind::Tangential});
    k.boundary_leaves.insert(leaf);
  }
  for (std::size_t i = 0; i < r; ++i) {
    std::string leaf = "I" + id_of(i);
    for (std::size_t b = 0; b < kb; ++b) {
      std::string v = leaf + "_c" + id_of(b);
      k.vertices.push_back(v);
      k.leaf_of[v] = leaf;
      if (b > 0)
        k.edges.push_back({leaf + "_c" + id_of(b - 1), v, arc,
                           EdgeKind::Tangential});
      k.edges.push_back({v, "B" + id_of(b) + "_p" + id_of(i % r),
                         accumulation_length(i, r), EdgeKind::Transverse});
    }
  }
  return k;
}

RealizedComplex realize_graph(const MetricGraph& graph,
                              std::size_t resolution) {
  if (resolution < 2) throw StructuralError("resolution must be at least 2");
  require_connected(graph);
  const std::size_t node_count = graph.nodes.size();

  RealizedComplex out;
  if (node_count == 1 && graph.edges.empty()) {
    out.complex = rename_complex(generate(KroneckerTorusSpec{resolution}),
                                 "n0:");
    for (const auto& leaf : out.complex.leaves())
      out.leaf_block[leaf] = "node:" + graph.nodes[0];
    return out;
  }

  std::vector<std::size_t> degree = node_degrees(graph);
  std::unordered_map<std::string, std::size_t> node_idx;
  for (std::size_t i = 0; i < node_count; ++i)
    node_idx.emplace(graph.nodes[i], i);

  FoliatedComplex acc;
  bool first = true;
  for (std::size_t i = 0; i < node_count; ++i) {
    FoliatedComplex block = rename_complex(
        generate(StarBlockSpec{degree[i], resolution}), "n" + id_of(i) + ":");
    if (first) {
      acc = std::move(block);
      first = false;
    } else {
      acc = glue_complexes(acc, block, {}, GlueMode::Tangential).complex;
    }
  }

  std::vector<std::size_t> next_slot(node_count, 0);
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto& edge = graph.edges[e];
    std::size_t ia = node_idx.at(edge.u), ib = node_idx.at(edge.v);
    std::size_t bundle_leaves = std::max<std::size_t>(
        2, static_cast<std::size_t>(
               std::ceil(edge.length * static_cast<double>(resolution))) + 1);
    FoliatedComplex bundle = rename_complex(
        generate(ProductIBundleSpec{edge.length, bundle_leaves, resolution}),
        "e" + id_of(e) + ":");

    std::size_t slot_a = next_slot[ia]++;
    std::size_t slot_b = next_slot[ib]++;
    std::vector<std::pair<std::string, std::string>> pairs;
    for (std::size_t j = 0; j < resolution; ++j) {
      pairs.emplace_back(
          "n" + id_of(ia) + ":B" + id_of(slot_a) + "_p" + id_of(j),
          "e" + id_of(e) + ":L0_v" + id_of(j));
      pairs.emplace_back(
          "n" + id_of(ib) + ":B" + id_of(slot_b) + "_p" + id_of(j),
          "e" + id_of(e) + ":L" + id_of(bundle_leaves - 1) + "_v" + id_of(j));
    }
    acc = glue_complexes(acc, bundle, pairs, GlueMode::Tangential).complex;
  }

  for (const auto& leaf : acc.leaves()) {
    auto colon = leaf.find(':');
    std::string block = leaf.substr(0, colon);
    if (block.empty() || colon == std::string::npos)
      continue;  // cannot happen for generated ids
    if (block[0] == 'n') {
      std::size_t i = std::stoul(block.substr(1));
      out.leaf_block[leaf] = "node:" + graph.nodes[i];
    } else {
      out.leaf_block[leaf] = "edge:" + block.substr(1);
    }
  }
  out.complex = std::move(acc);
  return out;
}

std::map<std::string, double> segment_parameter(const HlsSpace& h,
                                                const std::string& base_class,
                                                double tol) {
  auto base = h.space.index_of(base_class);
  if (!base)
    throw StructuralError("unknown class '" + base_class + "'");
  const std::size_t n = h.space.size();
  std::map<std::string, double> values;
  for (std::size_t i = 0; i < n; ++i)
    values[h.space.points[i]] = h.space.d(*base, i);

  // distinctness is a zero-scale property; only the segment law uses tol
  const double tau_inj = kRelTolerance * (1 + diameter(h.space));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double gap = std::fabs(h.space.d(*base, i) - h.space.d(*base, j));
      if (gap <= tau_inj)
        throw Error("not a segment-like HLS: classes '" + h.space.points[i] +
                    "' and '" + h.space.points[j] +
                    "' share the parameter value");
      if (std::fabs(gap - h.space.d(i, j)) > tol)
        throw Error("not a segment-like HLS: parameter gap between '" +
                    h.space.points[i] + "' and '" + h.space.points[j] +
                    "' deviates from their distance by " +
                    std::to_string(std::fabs(gap - h.space.d(i, j))));
    }
  return values;
}

}  // namespace hlskit
