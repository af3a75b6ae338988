#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hlskit/metric_space.hpp"

namespace hlskit {

struct MetricGraph;  // metric_graph.hpp

enum class EdgeKind { Tangential, Transverse };

struct FoliatedEdge {
  std::string u, v;
  double length = 0;
  EdgeKind kind = EdgeKind::Transverse;
};

/// Discrete model of a compact foliated Riemannian manifold: a leaf-labeled
/// weighted complex. Tangential edges stay inside a leaf, transverse edges
/// cross between leaves. `mesh` is the declared discretization scale: every
/// vertex is expected to have a transverse neighbor within mesh unless its
/// leaf is listed in boundary_leaves.
struct FoliatedComplex {
  std::vector<std::string> vertices;
  std::map<std::string, std::string> leaf_of;
  std::vector<FoliatedEdge> edges;
  double mesh = 0;
  std::set<std::string> boundary_leaves;

  /// Distinct leaf ids in first-appearance order over `vertices`.
  std::vector<std::string> leaves() const;
};

struct ComplexReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

/// Structural soundness plus the invariants: edge kinds consistent with the
/// leaf labeling, complex connected, every leaf tangentially connected, and
/// the mesh contract honored.
ComplexReport validate_complex(const FoliatedComplex& complex);

/// The underlying weighted graph (kinds forgotten).
WeightedGraphSpace as_weighted_graph(const FoliatedComplex& complex);

/// Leaf-to-leaf set distances: minimal geodesic distance between the two
/// vertex sets. A pseudometric on leaves; the triangle inequality is not
/// expected to hold for set distances.
FiniteMetricSpace leaf_distance_matrix(const FoliatedComplex& complex);

/// The Hausdorff leaf space of a complex: leaf classes with the
/// chain-infimum metric and zero-distance classes identified.
struct HlsSpace {
  FiniteMetricSpace space;  // strict metric over class ids
  std::map<std::string, std::string> class_of_leaf;
  std::map<std::string, std::string> class_of_vertex;
};

/// Chain-infimum metric over leaves (shortest paths over the complete leaf
/// graph weighted by leaf_distance_matrix), with classes at distance
/// <= zero_tol merged (default kRelTolerance * leaf diameter).
HlsSpace hls(const FoliatedComplex& complex, double zero_tol = -1);

/// Leafwise-constant positive scaling factors for tangential lengths.
struct WarpSpec {
  std::map<std::string, double> values;
};

/// Scales every tangential edge by the factor of its leaf; transverse edges
/// are unchanged.
FoliatedComplex warp(const FoliatedComplex& complex, const WarpSpec& factors);

enum class GlueMode { Tangential, Transverse };

struct GlueComplexResult {
  FoliatedComplex complex;
  bool connected = true;
};

/// Merges vertex pairs across two complexes. Tangential mode requires the
/// map to send leaves onto leaves and merges the matched leaves; transverse
/// mode keeps all leaves distinct and the merged vertex takes the first
/// complex's leaf. Edge kinds are re-derived from the final leaf labeling.
/// Vertex and leaf ids are namespaced "a:" / "b:" only on collision.
GlueComplexResult glue_complexes(
    const FoliatedComplex& k1, const FoliatedComplex& k2,
    const std::vector<std::pair<std::string, std::string>>& vertex_pairs,
    GlueMode mode);

/// Relabels the given leaves as one leaf. Transverse edges between fused
/// leaves become tangential; the fused leaf must come out tangentially
/// connected. The discrete counterpart of collapsing a closed transversal.
FoliatedComplex fuse_leaves(const FoliatedComplex& complex,
                            const std::vector<std::string>& leaf_ids,
                            const std::string& fused_id);

// --- generators --------------------------------------------------------------

/// Product I-bundle: `leaf_count` leaves at evenly spaced parameters along
/// [0, length], each a fiber path of `fiber_size` vertices. Grid spacing
/// (tangential and transverse) equals mesh = length / (leaf_count - 1).
struct ProductIBundleSpec {
  double length = 1;
  std::size_t leaf_count = 11;
  std::size_t fiber_size = 4;
};

/// Dense-leaf interleaving on a transverse circle: `resolution` leaves whose
/// strands occupy interleaved slots, so every leaf passes within
/// mesh = 1/resolution of every other.
struct KroneckerTorusSpec {
  std::size_t resolution = 16;
};

/// One compact boundary cycle plus `resolution` interior leaves, each
/// accumulating on the boundary within mesh = 1/resolution.
struct ReebAnnulusSpec {
  std::size_t resolution = 16;
};

/// `boundary_count` boundary cycles with interior leaves accumulating on
/// all of them within mesh = 1/resolution.
struct StarBlockSpec {
  std::size_t boundary_count = 2;
  std::size_t resolution = 16;
};

FoliatedComplex generate(const ProductIBundleSpec& spec);
FoliatedComplex generate(const KroneckerTorusSpec& spec);
FoliatedComplex generate(const ReebAnnulusSpec& spec);
FoliatedComplex generate(const StarBlockSpec& spec);

/// A complex whose Hausdorff leaf space approximates a finite connected
/// metric graph: one star block per node, one I-bundle per edge, assembled
/// by tangential gluing along boundary leaves. leaf_block records which
/// graph element each leaf came from ("node:<id>" or "edge:<index>").
struct RealizedComplex {
  FoliatedComplex complex;
  std::map<std::string, std::string> leaf_block;
};

RealizedComplex realize_graph(const MetricGraph& graph, std::size_t resolution);

/// Distance-from-base parametrization d(c) of a segment-like space.
/// Verifies that the values are pairwise distinct and that |d(x) - d(y)|
/// matches the class distance within tol; otherwise throws Error
/// ("not a segment-like HLS").
std::map<std::string, double> segment_parameter(const HlsSpace& h,
                                                const std::string& base_class,
                                                double tol);

}  // namespace hlskit
