#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hlskit/foliated_complex.hpp"

namespace hlskit {

/// Closed-form families of warp factors indexed by n >= 1.
struct WarpFamily {
  enum class Kind {
    ConstantInverse,    // 1/n on every leaf
    LeafSubsetInverse,  // 1/n on a chosen leaf set, 1 elsewhere
    Custom,             // explicit table per index
  };
  Kind kind = Kind::ConstantInverse;
  std::set<std::string> leaf_subset;
  std::map<int, WarpSpec> custom;

  WarpSpec term(const FoliatedComplex& base, int n) const;
};

struct WarpSequence {
  FoliatedComplex base;
  WarpFamily family;
};

enum class Verdict { Converged, NotConverged, Inconclusive };

struct ConvergenceRow {
  int n = 0;
  double lower = 0;
  double upper = 0;
  std::string method;
  double hls_net_radius = 0;     // net radius on the leaf-space side
  double sample_cover_radius = 0;  // nonzero when the warped space was subsampled
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  Verdict verdict = Verdict::Inconclusive;
  double tau_conv = 0;
  double mesh = 0;
};

struct ConvergenceOptions {
  std::size_t vertex_cap = 1200;  // subsample the warped space above this
  std::size_t budget = 48;        // heuristic iteration budget per row
  std::uint64_t seed = 0;
};

/// For each index n, warps the base, measures Gromov-Hausdorff bounds
/// against the base's Hausdorff leaf space, and judges the final upper
/// bound against tau_conv (default: 2 * mesh + final leaf-space net radius).
ConvergenceReport run_convergence(const WarpSequence& seq,
                                  const std::vector<int>& ns,
                                  double tau_conv = -1,
                                  const ConvergenceOptions& options = {});

struct ConditionReport {
  double eps = 0;
  int n = 0;
  std::vector<std::string> family;  // leaves with factor < eps
  double density_radius = 0;        // +inf when the family is empty
  bool holds = false;
};

/// The candidate leaf family is every leaf with f_n(leaf) < eps; the
/// condition holds when the union of their vertices is eps-dense in the
/// base geodesic metric.
ConditionReport check_density_condition(const WarpSequence& seq, double eps,
                                        int n);

enum class Agreement { Agree, AgreeWithinSlack, Disagree };

struct AuditEpsRow {
  double eps = 0;
  bool holds_eventually = false;  // condition holds from some n in ns onward
  int first_n = -1;
  double final_radius = 0;
};

struct AuditReport {
  ConvergenceReport convergence;
  std::vector<AuditEpsRow> eps_rows;
  std::vector<std::vector<ConditionReport>> condition_table;  // per eps, per n
  bool condition_side = false;  // condition holds eventually for every eps
  Agreement agreement = Agreement::Agree;
  double slack = 0;  // mesh + final estimator gap
};

/// Cross-tabulates the density condition against the convergence verdict.
/// Disagreements beyond the tolerance slack are flagged, never reconciled.
AuditReport iff_audit(const WarpSequence& seq, const std::vector<double>& eps_grid,
                      const std::vector<int>& ns, double tau_conv = -1,
                      const ConvergenceOptions& options = {});

}  // namespace hlskit
