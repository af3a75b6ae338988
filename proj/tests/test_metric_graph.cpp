#include <doctest.h>

#include <random>

#include "hlskit/foliated_complex.hpp"
#include "hlskit/gh_distance.hpp"
#include "hlskit/metric_graph.hpp"
#include "oracles.hpp"

using namespace hlskit;

namespace {

MetricGraph unit_triangle() {
  MetricGraph g;
  g.nodes = {"a", "b", "c"};
  g.edges = {{"a", "b", 1}, {"b", "c", 1}, {"c", "a", 1}};
  return g;
}

MetricGraph random_glued_graph(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> len(0.2, 2.0);
  MetricGraph acc;
  acc.nodes = {"n0", "n1"};
  acc.edges = {{"n0", "n1", len(rng)}};
  std::size_t segments = 2 + rng() % 5;
  for (std::size_t s = 0; s < segments; ++s) {
    MetricGraph seg;
    seg.nodes = {"s" + std::to_string(s) + "a", "s" + std::to_string(s) + "b"};
    seg.edges = {{seg.nodes[0], seg.nodes[1], len(rng)}};
    // attach one or both endpoints to random existing nodes
    std::vector<std::pair<std::string, std::string>> pairs;
    pairs.emplace_back(acc.nodes[rng() % acc.nodes.size()], seg.nodes[0]);
    if (rng() % 2 == 0)
      pairs.emplace_back(acc.nodes[rng() % acc.nodes.size()], seg.nodes[1]);
    acc = glue_graphs(acc, seg, pairs);
  }
  return acc;
}

}  // namespace

TEST_CASE("sample_graph: one edge at half steps") {
  MetricGraph g;
  g.nodes = {"u", "v"};
  g.edges = {{"u", "v", 1.0}};
  auto space = sample_graph(g, 0.5);
  REQUIRE(space.size() == 3);
  auto u = space.index_of("u");
  auto v = space.index_of("v");
  auto mid = space.index_of("e0_1");
  REQUIRE((u && v && mid));
  CHECK(space.d(*u, *mid) == doctest::Approx(0.5));
  CHECK(space.d(*u, *v) == doctest::Approx(1.0));
}

TEST_CASE("sample_graph: a single node is a singleton space") {
  MetricGraph g;
  g.nodes = {"only"};
  auto space = sample_graph(g, 0.5);
  CHECK(space.size() == 1);
}

TEST_CASE("sample_graph: triangle distances match path enumeration") {
  auto g = unit_triangle();
  auto space = sample_graph(g, 0.25);
  // independent subdivision of the same graph
  WeightedGraphSpace manual;
  manual.vertices = {"a", "b", "c"};
  auto subdivide = [&manual](const std::string& from, const std::string& to,
                             const std::string& tag) {
    std::string prev = from;
    for (int k = 1; k < 4; ++k) {
      std::string mid = tag + std::to_string(k);
      manual.vertices.push_back(mid);
      manual.edges.push_back({prev, mid, 0.25});
      prev = mid;
    }
    manual.edges.push_back({prev, to, 0.25});
  };
  subdivide("a", "b", "ab");
  subdivide("b", "c", "bc");
  subdivide("c", "a", "ca");
  auto oracle = oracles::exhaustive_path_metric(manual);
  for (const auto& p : {"a", "b", "c"})
    for (const auto& q : {"a", "b", "c"})
      CHECK(space.d(*space.index_of(p), *space.index_of(q)) ==
            doctest::Approx(oracle.d(*oracle.index_of(p), *oracle.index_of(q))));
}

TEST_CASE("sample_graph: covering radius halves with the step") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 4; ++trial) {
    auto g = random_glued_graph(rng);
    double s = 0.3;
    auto coarse = sample_graph(g, s);
    auto fine = sample_graph(g, s / 2);
    auto est = gromov_net_bound(coarse, fine, coarse.size(), trial);
    CHECK(est.upper <= 3 * s + 1e-9);
  }
}

TEST_CASE("glue_graphs: segments end to end add lengths") {
  MetricGraph g1;
  g1.nodes = {"a", "b"};
  g1.edges = {{"a", "b", 1.0}};
  MetricGraph g2;
  g2.nodes = {"c", "d"};
  g2.edges = {{"c", "d", 0.5}};
  auto glued = glue_graphs(g1, g2, {{"b", "c"}});
  REQUIRE(glued.nodes.size() == 3);
  auto space = sample_graph(glued, 10);
  CHECK(space.d(*space.index_of("a"), *space.index_of("d")) ==
        doctest::Approx(1.5));
}

TEST_CASE("glue_graphs: both endpoints onto one node makes a loop") {
  MetricGraph base;
  base.nodes = {"hub"};
  MetricGraph seg;
  seg.nodes = {"x", "y"};
  seg.edges = {{"x", "y", 1.0}};
  auto glued = glue_graphs(base, seg, {{"hub", "x"}, {"hub", "y"}});
  REQUIRE(glued.nodes.size() == 1);
  REQUIRE(glued.edges.size() == 1);
  CHECK(glued.edges[0].u == glued.edges[0].v);
  CHECK(node_degrees(glued)[0] == 2);
}

TEST_CASE("glue_graphs: star assembly reaches the expected degree") {
  MetricGraph acc;
  acc.nodes = {"hub"};
  for (int arm = 0; arm < 4; ++arm) {
    MetricGraph seg;
    seg.nodes = {"a" + std::to_string(arm), "b" + std::to_string(arm)};
    seg.edges = {{seg.nodes[0], seg.nodes[1], 1.0}};
    acc = glue_graphs(acc, seg, {{"hub", seg.nodes[0]}});
  }
  auto degrees = node_degrees(acc);
  CHECK(degrees[0] == 4);
  CHECK(acc.nodes.size() == 5);
}

TEST_CASE("glue_graphs: dangling ids are structural") {
  MetricGraph g1;
  g1.nodes = {"a"};
  MetricGraph g2;
  g2.nodes = {"b"};
  CHECK_THROWS_AS(glue_graphs(g1, g2, {{"a", "nope"}}), StructuralError);
}

TEST_CASE("glue_graphs: colliding ids are namespaced") {
  MetricGraph g;
  g.nodes = {"a", "b"};
  g.edges = {{"a", "b", 1.0}};
  auto glued = glue_graphs(g, g, {{"b", "a"}});
  REQUIRE(glued.nodes.size() == 3);
  auto space = sample_graph(glued, 10);
  CHECK(space.d(*space.index_of("a:a"), *space.index_of("b:b")) ==
        doctest::Approx(2.0));
}

TEST_CASE("measure_ball_check: single unit edge") {
  MetricGraph g;
  g.nodes = {"u", "v"};
  g.edges = {{"u", "v", 1.0}};
  auto report = measure_ball_check(g);
  CHECK(report.pass);
  CHECK(report.beta == doctest::Approx(2));
  CHECK(report.eta0 == doctest::Approx(0.5));
  // interior centers see a full interval (ratio 2), endpoints half of it
  CHECK(report.max_ratio == doctest::Approx(2));
  CHECK(report.min_ratio == doctest::Approx(1));
}

TEST_CASE("measure_ball_check: three-arm star is tight at the hub") {
  MetricGraph g;
  g.nodes = {"hub", "a", "b", "c"};
  g.edges = {{"hub", "a", 1}, {"hub", "b", 1}, {"hub", "c", 1}};
  auto report = measure_ball_check(g);
  CHECK(report.pass);
  CHECK(report.beta == doctest::Approx(3));
  CHECK(report.max_ratio == doctest::Approx(3));  // the hub center
  CHECK(report.min_ratio == doctest::Approx(1));  // a leaf center
}

TEST_CASE("measure_ball_check: passes on random glued graphs") {
  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = random_glued_graph(rng);
    auto report = measure_ball_check(g);
    CHECK(report.pass);
  }
}

TEST_CASE("measure_ball_check: rejects an edgeless graph") {
  MetricGraph g;
  g.nodes = {"only"};
  CHECK_THROWS_AS(measure_ball_check(g), StructuralError);
}

TEST_CASE("extract_graph: a bundle leaf space as one segment region") {
  auto k = generate(ProductIBundleSpec{1.0, 9, 3});
  auto h = hls(k);
  Region all;
  all.name = "segment";
  all.kind = RegionKind::Segment;
  all.classes = h.space.points;
  auto g = extract_graph(h, {all}, 2 * k.mesh);
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0].length == doctest::Approx(1.0));
  CHECK(g.nodes.size() == 2);  // fresh endpoints
}

TEST_CASE("extract_graph: singleton leaf space as one node region") {
  FoliatedComplex k;
  k.vertices = {"a"};
  k.leaf_of = {{"a", "L"}};
  k.mesh = 1;
  k.boundary_leaves = {"L"};
  auto h = hls(k);
  Region node;
  node.name = "n";
  node.kind = RegionKind::Node;
  node.classes = h.space.points;
  auto g = extract_graph(h, {node}, 0.1);
  CHECK(g.nodes.size() == 1);
  CHECK(g.edges.empty());
}

TEST_CASE("extract_graph: rejects bad decompositions") {
  auto k = generate(ProductIBundleSpec{1.0, 5, 2});
  auto h = hls(k);
  Region partial;
  partial.name = "partial";
  partial.kind = RegionKind::Segment;
  partial.classes = {h.space.points[0], h.space.points[1]};
  CHECK_THROWS_AS(extract_graph(h, {partial}, 2 * k.mesh), StructuralError);

  Region fat;
  fat.name = "fat";
  fat.kind = RegionKind::Node;
  fat.classes = h.space.points;
  CHECK_THROWS_WITH_AS(extract_graph(h, {fat}, k.mesh / 10),
                       doctest::Contains("fat"), StructuralError);
}

TEST_CASE("extract_graph: realize round trip recovers the triangle") {
  auto g = unit_triangle();
  const std::size_t r = 8;
  auto realized = realize_graph(g, r);
  auto h = hls(realized.complex);

  // regions straight from the recorded provenance
  std::map<std::string, Region> by_block;
  for (const auto& [leaf, block] : realized.leaf_block) {
    auto& region = by_block[block];
    region.name = block;
    region.kind = block.rfind("node:", 0) == 0 ? RegionKind::Node
                                               : RegionKind::Segment;
  }
  for (const auto& [leaf, cls] : h.class_of_leaf) {
    auto it = realized.leaf_block.find(leaf);
    REQUIRE(it != realized.leaf_block.end());
    by_block[it->second].classes.push_back(cls);
  }
  std::vector<Region> regions;
  for (auto& [name, region] : by_block) regions.push_back(region);

  double mesh = realized.complex.mesh;
  auto extracted = extract_graph(h, regions, 2 * mesh);
  REQUIRE(extracted.edges.size() == 3);
  for (const auto& e : extracted.edges)
    CHECK(std::abs(e.length - 1.0) <= 3 * mesh);

  double s = 0.25;
  auto sampled_original = sample_graph(g, s);
  auto sampled_extracted = sample_graph(extracted, s);
  auto net = gromov_net_bound(sampled_extracted, sampled_original,
                              std::min(sampled_extracted.size(),
                                       sampled_original.size()),
                              5);
  auto heur = gh_heuristic(sampled_extracted, sampled_original, 64, 5);
  CHECK(std::min(net.upper, heur.upper) <= 3 * mesh + 2 * s + 1e-9);
}
