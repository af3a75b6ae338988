#include <doctest.h>

#include <cmath>
#include <random>

#include "hlskit/foliated_complex.hpp"
#include "hlskit/gh_distance.hpp"
#include "hlskit/metric_graph.hpp"
#include "hlskit/quotient.hpp"
#include "oracles.hpp"

using namespace hlskit;

namespace {

FoliatedComplex two_leaf_bridge(double tangential_len, double bridge_len) {
  FoliatedComplex k;
  k.vertices = {"a0", "a1", "b0"};
  k.leaf_of = {{"a0", "A"}, {"a1", "A"}, {"b0", "B"}};
  k.edges = {{"a0", "a1", tangential_len, EdgeKind::Tangential},
             {"a0", "b0", bridge_len, EdgeKind::Transverse}};
  k.mesh = std::max(tangential_len, bridge_len);
  return k;
}

// random generator zoo for property tests
FoliatedComplex random_generator(std::mt19937_64& rng) {
  switch (rng() % 4) {
    case 0: {
      std::uniform_real_distribution<double> len(0.5, 2.0);
      return generate(ProductIBundleSpec{len(rng), 4 + rng() % 5,
                                         2 + rng() % 3});
    }
    case 1:
      return generate(KroneckerTorusSpec{4 + rng() % 5});
    case 2:
      return generate(ReebAnnulusSpec{4 + rng() % 5});
    default:
      return generate(StarBlockSpec{1 + rng() % 3, 4 + rng() % 5});
  }
}

WarpSpec random_warp(std::mt19937_64& rng, const FoliatedComplex& k) {
  std::uniform_real_distribution<double> factor(0.05, 1.0);
  WarpSpec spec;
  for (const auto& leaf : k.leaves()) spec.values[leaf] = factor(rng);
  return spec;
}

double min_upper(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                 std::size_t k, std::uint64_t seed) {
  auto net = gromov_net_bound(x, y, k, seed);
  auto heur = gh_heuristic(x, y, 64, seed);
  return std::min(net.upper, heur.upper);
}

}  // namespace

TEST_CASE("generators produce valid complexes") {
  CHECK(validate_complex(generate(ProductIBundleSpec{1.0, 11, 4})).ok());
  CHECK(validate_complex(generate(KroneckerTorusSpec{8})).ok());
  CHECK(validate_complex(generate(ReebAnnulusSpec{8})).ok());
  CHECK(validate_complex(generate(StarBlockSpec{3, 8})).ok());
}

TEST_CASE("validate_complex: flags kind/leaf mismatches") {
  auto k = two_leaf_bridge(1.0, 0.3);
  k.edges[0].kind = EdgeKind::Transverse;  // stays inside leaf A
  auto report = validate_complex(k);
  REQUIRE_FALSE(report.ok());
  CHECK(report.issues[0].find("inside leaf") != std::string::npos);
}

TEST_CASE("leaf_distance_matrix: single leaf is a zero matrix") {
  FoliatedComplex k;
  k.vertices = {"a", "b"};
  k.leaf_of = {{"a", "L"}, {"b", "L"}};
  k.edges = {{"a", "b", 1, EdgeKind::Tangential}};
  k.mesh = 1;
  k.boundary_leaves = {"L"};
  auto m = leaf_distance_matrix(k);
  REQUIRE(m.size() == 1);
  CHECK(m.d(0, 0) == 0);
}

TEST_CASE("leaf_distance_matrix: one transverse edge sets the distance") {
  auto k = two_leaf_bridge(1.0, 0.3);
  auto m = leaf_distance_matrix(k);
  REQUIRE(m.size() == 2);
  CHECK(m.d(0, 1) == doctest::Approx(0.3));
}

TEST_CASE("leaf_distance_matrix: leaf chain with a tangential junction") {
  // L1 - L2 - L3 with both bridges meeting the same L2 vertex; a long
  // tangential detour inside L2 must not matter
  FoliatedComplex k;
  k.vertices = {"x", "j", "far", "y"};
  k.leaf_of = {{"x", "L1"}, {"j", "L2"}, {"far", "L2"}, {"y", "L3"}};
  k.edges = {{"x", "j", 1, EdgeKind::Transverse},
             {"j", "far", 5, EdgeKind::Tangential},
             {"j", "y", 1, EdgeKind::Transverse}};
  k.mesh = 1;
  k.boundary_leaves = {"L1", "L2", "L3"};
  auto m = leaf_distance_matrix(k);
  auto geo = geodesic_metric(as_weighted_graph(k));
  REQUIRE(m.size() == 3);
  auto l1 = m.index_of("L1");
  auto l3 = m.index_of("L3");
  CHECK(m.d(*l1, *l3) == doctest::Approx(2.0));
  // oracle: the minimum over vertex pairs of the geodesic metric
  double expected = oracles::kInf;
  expected = std::min(expected, geo.d(*geo.index_of("x"), *geo.index_of("y")));
  CHECK(m.d(*l1, *l3) == doctest::Approx(expected));
}

TEST_CASE("hls: bundle diameter is the bundle length") {
  auto k = generate(ProductIBundleSpec{1.0, 11, 4});
  auto h = hls(k);
  REQUIRE(h.space.size() == 11);
  CHECK(diameter(h.space) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(validate_metric(h.space, MetricMode::Strict).ok());
}

TEST_CASE("hls: bundle leaf space matches a sampled segment") {
  auto k = generate(ProductIBundleSpec{1.0, 6, 3});
  auto h = hls(k);
  MetricGraph edge;
  edge.nodes = {"s", "t"};
  edge.edges = {{"s", "t", 1.0}};
  auto segment = sample_graph(edge, k.mesh);
  double upper = min_upper(h.space, segment, segment.size(), 0);
  CHECK(upper <= 3 * k.mesh + 1e-9);
}

TEST_CASE("hls: dense-leaf torus collapses to mesh scale") {
  auto k = generate(KroneckerTorusSpec{8});
  auto h = hls(k);
  CHECK(diameter(h.space) <= 2 * k.mesh + 1e-12);
}

TEST_CASE("hls: single leaf gives a singleton") {
  FoliatedComplex k;
  k.vertices = {"a", "b"};
  k.leaf_of = {{"a", "L"}, {"b", "L"}};
  k.edges = {{"a", "b", 1, EdgeKind::Tangential}};
  k.mesh = 1;
  k.boundary_leaves = {"L"};
  auto h = hls(k);
  CHECK(h.space.size() == 1);
}

TEST_CASE("hls agrees with the vertex-space quotient route") {
  // same-leaf quotient of the geodesic metric must reproduce the leaf-chain
  // computation
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 6; ++trial) {
    auto k = random_generator(rng);
    auto h = hls(k);
    auto vertex_space = geodesic_metric(as_weighted_graph(k));
    PointRelation same_leaf;
    auto leaves = k.leaves();
    std::map<std::string, std::string> first_of;
    for (const auto& v : k.vertices) {
      auto [it, fresh] = first_of.emplace(k.leaf_of.at(v), v);
      if (!fresh) same_leaf.pairs.emplace_back(it->second, v);
    }
    auto q = quotient_metric(vertex_space, same_leaf);
    REQUIRE(q.connected);
    auto iso = find_isometry(h.space, q.space,
                             kRelTolerance * (1 + diameter(h.space)));
    CHECK(iso.has_value());
  }
}

TEST_CASE("warp: identity factors change nothing") {
  auto k = generate(ProductIBundleSpec{1.0, 5, 3});
  WarpSpec ones;
  for (const auto& leaf : k.leaves()) ones.values[leaf] = 1.0;
  auto warped = warp(k, ones);
  for (std::size_t e = 0; e < k.edges.size(); ++e)
    CHECK(warped.edges[e].length == k.edges[e].length);
}

TEST_CASE("warp: scales tangential lengths only") {
  auto k = two_leaf_bridge(2.0, 0.3);
  WarpSpec f;
  f.values = {{"A", 0.5}, {"B", 1.0}};
  auto warped = warp(k, f);
  CHECK(warped.edges[0].length == doctest::Approx(1.0));
  CHECK(warped.edges[1].length == doctest::Approx(0.3));
}

TEST_CASE("warp: missing or nonpositive factors are structural") {
  auto k = two_leaf_bridge(1.0, 0.3);
  WarpSpec missing;
  missing.values = {{"A", 0.5}};
  CHECK_THROWS_AS(warp(k, missing), StructuralError);
  WarpSpec zero;
  zero.values = {{"A", 0.0}, {"B", 1.0}};
  CHECK_THROWS_AS(warp(k, zero), StructuralError);
}

TEST_CASE("warping never changes the leaf space") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 10; ++trial) {
    auto k = random_generator(rng);
    auto f = random_warp(rng, k);
    auto h = hls(k);
    auto hw = hls(warp(k, f));
    double tau = kRelTolerance * (1 + diameter(h.space));
    auto iso = find_isometry(hw.space, h.space, tau);
    CHECK(iso.has_value());
  }
}

TEST_CASE("monotone warping: smaller factors shrink every distance") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 5; ++trial) {
    auto k = random_generator(rng);
    auto f_small = random_warp(rng, k);
    WarpSpec f_large;
    std::uniform_real_distribution<double> bump(1.0, 1.5);
    for (const auto& [leaf, v] : f_small.values)
      f_large.values[leaf] = std::min(1.0, v * bump(rng));
    auto small_metric = geodesic_metric(as_weighted_graph(warp(k, f_small)));
    auto large_metric = geodesic_metric(as_weighted_graph(warp(k, f_large)));
    for (std::size_t i = 0; i < small_metric.size(); ++i)
      for (std::size_t j = 0; j < small_metric.size(); ++j)
        CHECK(small_metric.d(i, j) <= large_metric.d(i, j) + 1e-12);
  }
}

TEST_CASE("glue_complexes: two bundles end to end") {
  auto k1 = generate(ProductIBundleSpec{1.0, 5, 3});
  auto k2 = generate(ProductIBundleSpec{0.5, 3, 3});
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int j = 0; j < 3; ++j)
    pairs.emplace_back("L4_v" + std::to_string(j), "L0_v" + std::to_string(j));
  auto glued = glue_complexes(k1, k2, pairs, GlueMode::Tangential);
  REQUIRE(glued.connected);
  CHECK(validate_complex(glued.complex).ok());

  auto h = hls(glued.complex);
  CHECK(diameter(h.space) == doctest::Approx(1.5).epsilon(1e-9));

  // compare against gluing the two leaf spaces along the matched classes
  auto h1 = hls(k1);
  auto h2 = hls(k2);
  auto matched = glue(h1.space, h2.space,
                      {{h1.class_of_leaf.at("L4"), h2.class_of_leaf.at("L0")}});
  REQUIRE(matched.connected);
  double upper = min_upper(h.space, matched.space,
                           std::min(h.space.size(), matched.space.size()), 1);
  CHECK(upper <= 2 * std::max(k1.mesh, k2.mesh) + 1e-9);
}

TEST_CASE("glue_complexes: empty identification is flagged") {
  auto k1 = generate(ProductIBundleSpec{1.0, 3, 2});
  auto k2 = generate(ProductIBundleSpec{1.0, 3, 2});
  auto glued = glue_complexes(k1, k2, {}, GlueMode::Tangential);
  CHECK_FALSE(glued.connected);
}

TEST_CASE("glue_complexes: leaf-respect violation names the pair") {
  auto k1 = generate(ProductIBundleSpec{1.0, 3, 2});
  auto k2 = generate(ProductIBundleSpec{1.0, 3, 2});
  // mixing two k1 leaves onto one k2 leaf
  std::vector<std::pair<std::string, std::string>> bad = {
      {"L0_v0", "L0_v0"}, {"L1_v0", "L0_v1"}};
  CHECK_THROWS_AS(glue_complexes(k1, k2, bad, GlueMode::Tangential),
                  StructuralError);
}

TEST_CASE("glue_complexes: transverse gluing along an endpoint fiber") {
  auto k1 = generate(ProductIBundleSpec{1.0, 5, 3});
  auto k2 = generate(ProductIBundleSpec{0.5, 3, 3});
  // identify the whole end fiber of k1 with the whole start fiber of k2;
  // leaves stay distinct but the quotient sees segments joined at a point
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int j = 0; j < 3; ++j)
    pairs.emplace_back("L4_v" + std::to_string(j), "L0_v" + std::to_string(j));
  auto glued = glue_complexes(k1, k2, pairs, GlueMode::Transverse);
  REQUIRE(glued.connected);
  CHECK(validate_complex(glued.complex).ok());

  auto h = hls(glued.complex);
  auto h1 = hls(k1);
  auto h2 = hls(k2);
  auto joined = glue(h1.space, h2.space,
                     {{h1.class_of_leaf.at("L4"), h2.class_of_leaf.at("L0")}});
  REQUIRE(joined.connected);
  double upper = min_upper(h.space, joined.space,
                           std::min(h.space.size(), joined.space.size()), 2);
  CHECK(upper <= 2 * std::max(k1.mesh, k2.mesh) + 1e-9);
}

TEST_CASE("fuse_leaves matches collapsing the classes in the leaf space") {
  auto k = generate(ProductIBundleSpec{1.0, 6, 3});
  auto h = hls(k);
  std::vector<std::string> chain = {"L2", "L3"};
  auto fused = fuse_leaves(k, chain, "fused");
  CHECK(validate_complex(fused).ok());
  auto route_a = hls(fused);
  std::vector<std::string> classes;
  for (const auto& leaf : chain) classes.push_back(h.class_of_leaf.at(leaf));
  auto route_b = collapse_subset(h.space, classes);
  double tau = kRelTolerance * (1 + diameter(h.space));
  auto iso = find_isometry(route_a.space, route_b.space, tau);
  CHECK(iso.has_value());
}

TEST_CASE("fuse_leaves rejects a disconnected transversal") {
  auto k = generate(ProductIBundleSpec{1.0, 6, 3});
  CHECK_THROWS_AS(fuse_leaves(k, {"L0", "L4"}, "fused"), Error);
}

TEST_CASE("generate: annulus and star blocks stay within mesh scale") {
  auto reeb = generate(ReebAnnulusSpec{32});
  CHECK(diameter(hls(reeb).space) <= 2 * reeb.mesh + 1e-12);

  auto star = generate(StarBlockSpec{3, 32});
  auto h = hls(star);
  CHECK(diameter(h.space) <= 2 * star.mesh + 1e-12);
  // at a coarse collapse tolerance the boundary leaves land together
  auto coarse = hls(star, 2 * star.mesh);
  CHECK(coarse.class_of_leaf.at("B0") == coarse.class_of_leaf.at("B1"));
  CHECK(coarse.class_of_leaf.at("B1") == coarse.class_of_leaf.at("B2"));
}

TEST_CASE("generate: rejects nonpositive parameters") {
  CHECK_THROWS_AS(generate(ProductIBundleSpec{0.0, 5, 2}), StructuralError);
  CHECK_THROWS_AS(generate(ProductIBundleSpec{1.0, 1, 2}), StructuralError);
  CHECK_THROWS_AS(generate(StarBlockSpec{0, 8}), StructuralError);
  CHECK_THROWS_AS(generate(KroneckerTorusSpec{1}), StructuralError);
}

TEST_CASE("realize_graph: a single node yields a mesh-scale leaf space") {
  MetricGraph g;
  g.nodes = {"only"};
  auto realized = realize_graph(g, 8);
  CHECK(validate_complex(realized.complex).ok());
  auto h = hls(realized.complex);
  CHECK(diameter(h.space) <= 2 * realized.complex.mesh + 1e-12);
  auto coarse = hls(realized.complex, 2 * realized.complex.mesh);
  CHECK(coarse.space.size() == 1);
}

TEST_CASE("realize_graph: a single edge realizes a segment") {
  MetricGraph g;
  g.nodes = {"s", "t"};
  g.edges = {{"s", "t", 1.0}};
  auto realized = realize_graph(g, 8);
  CHECK(validate_complex(realized.complex).ok());
  auto h = hls(realized.complex);
  auto segment = sample_graph(g, 1.0 / 8);
  double upper = min_upper(h.space, segment, segment.size(), 3);
  CHECK(upper <= 3.0 / 8 + 1e-9);
}

TEST_CASE("realize_graph: triangle at a modest resolution") {
  MetricGraph g;
  g.nodes = {"a", "b", "c"};
  g.edges = {{"a", "b", 1}, {"b", "c", 1}, {"c", "a", 1}};
  auto realized = realize_graph(g, 8);
  CHECK(validate_complex(realized.complex).ok());
  auto h = hls(realized.complex);
  auto sampled = sample_graph(g, 1.0 / 8);
  double upper = min_upper(h.space, sampled, sampled.size(), 4);
  CHECK(upper <= 3.0 / 8 + 1e-9);
}

TEST_CASE("realize_graph: a loop realizes a circle") {
  MetricGraph loop;
  loop.nodes = {"o"};
  loop.edges = {{"o", "o", 1.5}};
  auto realized = realize_graph(loop, 8);
  CHECK(validate_complex(realized.complex).ok());
  auto h = hls(realized.complex);
  auto sampled = sample_graph(loop, 1.0 / 8);
  double upper = min_upper(h.space, sampled, sampled.size(), 7);
  CHECK(upper <= 3 * realized.complex.mesh + 1e-9);
}

TEST_CASE("realize_graph: weighted edges keep their lengths") {
  MetricGraph g;
  g.nodes = {"a", "b", "c"};
  g.edges = {{"a", "b", 0.7}, {"b", "c", 1.3}, {"c", "a", 0.4}};
  auto realized = realize_graph(g, 8);
  CHECK(validate_complex(realized.complex).ok());
  CHECK(realized.complex.mesh == doctest::Approx(1.0 / 8));
  auto h = hls(realized.complex);
  auto sampled = sample_graph(g, 1.0 / 8);
  double upper = min_upper(h.space, sampled, sampled.size(), 8);
  CHECK(upper <= 3 * realized.complex.mesh + 1e-9);
}

TEST_CASE("segment_parameter: bundle classes read off their position") {
  auto k = generate(ProductIBundleSpec{1.0, 11, 4});
  auto h = hls(k);
  auto values = segment_parameter(h, h.class_of_leaf.at("L0"), 1e-9);
  for (int i = 0; i <= 10; ++i) {
    auto cls = h.class_of_leaf.at("L" + std::to_string(i));
    CHECK(values.at(cls) == doctest::Approx(0.1 * i).epsilon(1e-9));
  }
}

TEST_CASE("segment_parameter: singleton leaf space") {
  FoliatedComplex k;
  k.vertices = {"a"};
  k.leaf_of = {{"a", "L"}};
  k.mesh = 1;
  k.boundary_leaves = {"L"};
  auto h = hls(k);
  auto values = segment_parameter(h, h.space.points[0], 1e-9);
  CHECK(values.size() == 1);
  CHECK(values.begin()->second == 0);
}

TEST_CASE("segment_parameter: a loop is rejected") {
  // glue the two ends of a bundle onto a second bundle to close a circle
  auto k1 = generate(ProductIBundleSpec{1.0, 5, 2});
  auto k2 = generate(ProductIBundleSpec{1.0, 5, 2});
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int j = 0; j < 2; ++j) {
    pairs.emplace_back("L0_v" + std::to_string(j), "L0_v" + std::to_string(j));
    pairs.emplace_back("L4_v" + std::to_string(j), "L4_v" + std::to_string(j));
  }
  auto glued = glue_complexes(k1, k2, pairs, GlueMode::Tangential);
  REQUIRE(glued.connected);
  auto h = hls(glued.complex);
  CHECK_THROWS_WITH_AS(
      segment_parameter(h, h.space.points[0], 1e-9),
      doctest::Contains("not a segment-like HLS"), Error);
}
