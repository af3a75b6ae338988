#include "hlskit/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hlskit/gh_distance.hpp"

namespace hlskit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

FiniteMetricSpace restrict_to(const FiniteMetricSpace& space,
                              const std::vector<std::size_t>& members) {
  FiniteMetricSpace out;
  out.points.reserve(members.size());
  for (std::size_t i : members) out.points.push_back(space.points[i]);
  out.dist.assign(members.size(), std::vector<double>(members.size(), 0));
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = 0; b < members.size(); ++b)
      out.dist[a][b] = space.d(members[a], members[b]);
  return out;
}

}  // namespace

WarpSpec WarpFamily::term(const FoliatedComplex& base, int n) const {
  if (n < 1) throw StructuralError("warp family index must be at least 1");
  WarpSpec spec;
  switch (kind) {
    case Kind::ConstantInverse:
      for (const auto& leaf : base.leaves())
        spec.values[leaf] = 1.0 / static_cast<double>(n);
      return spec;
    case Kind::LeafSubsetInverse:
      for (const auto& leaf : base.leaves())
        spec.values[leaf] =
            leaf_subset.count(leaf) ? 1.0 / static_cast<double>(n) : 1.0;
      return spec;
    case Kind::Custom: {
      auto it = custom.find(n);
      if (it == custom.end())
        throw StructuralError("custom warp family has no term for n=" +
                              std::to_string(n));
      return it->second;
    }
  }
  throw StructuralError("unknown warp family kind");
}

ConvergenceReport run_convergence(const WarpSequence& seq,
                                  const std::vector<int>& ns,
                                  double tau_conv,
                                  const ConvergenceOptions& options) {
  if (ns.empty()) throw StructuralError("no sequence indices given");
  for (std::size_t i = 1; i < ns.size(); ++i)
    if (ns[i] <= ns[i - 1])
      throw StructuralError("sequence indices must be strictly ascending");

  HlsSpace limit = hls(seq.base);
  ConvergenceReport report;
  report.mesh = seq.base.mesh;

  for (int n : ns) {
    FoliatedComplex warped = warp(seq.base, seq.family.term(seq.base, n));
    FiniteMetricSpace full = geodesic_metric(as_weighted_graph(warped));

    ConvergenceRow row;
    row.n = n;
    FiniteMetricSpace sample = full;
    if (full.size() > options.vertex_cap) {
      auto sel = farthest_point_selection(full, options.vertex_cap, -1.0, 0);
      row.sample_cover_radius = sel.radius;
      sample = restrict_to(full, sel.members);
    }

    if (sample.size() * limit.space.size() <= 16) {
      double exact = gh_exact(sample, limit.space);
      row.upper = exact + row.sample_cover_radius;
      row.lower = std::max(0.0, exact - row.sample_cover_radius);
      row.method = "exact";
    } else {
      std::size_t k = std::min(limit.space.size(), sample.size());
      GhEstimate net = gromov_net_bound(sample, limit.space, k, options.seed);
      GhEstimate heur = gh_heuristic(sample, limit.space, options.budget,
                                     options.seed);
      double upper = std::min(net.upper, heur.upper);
      double lower = std::max(net.lower, heur.lower);
      row.upper = upper + row.sample_cover_radius;
      row.lower = std::max(0.0, lower - row.sample_cover_radius);
      row.hls_net_radius = net.net_radius_y;
      row.method = net.upper <= heur.upper ? net.method : heur.method;
    }
    if (row.sample_cover_radius > 0) row.method += "+subsample";
    report.rows.push_back(std::move(row));
  }

  const ConvergenceRow& last = report.rows.back();
  report.tau_conv =
      tau_conv < 0 ? 2 * seq.base.mesh + last.hls_net_radius : tau_conv;
  if (last.upper <= report.tau_conv)
    report.verdict = Verdict::Converged;
  else if (last.lower > report.tau_conv)
    report.verdict = Verdict::NotConverged;
  else
    report.verdict = Verdict::Inconclusive;
  return report;
}

ConditionReport check_density_condition(const WarpSequence& seq, double eps,
                                        int n) {
  if (!(eps > 0)) throw StructuralError("eps must be positive");
  WarpSpec term = seq.family.term(seq.base, n);

  ConditionReport report;
  report.eps = eps;
  report.n = n;
  for (const auto& leaf : seq.base.leaves())
    if (term.values.at(leaf) < eps) report.family.push_back(leaf);

  if (report.family.empty()) {
    report.density_radius = kInf;
    report.holds = false;
    return report;
  }
  std::set<std::string> family(report.family.begin(), report.family.end());
  FiniteMetricSpace base_space = geodesic_metric(as_weighted_graph(seq.base));
  double radius = 0;
  for (std::size_t i = 0; i < base_space.size(); ++i) {
    double nearest = kInf;
    for (std::size_t j = 0; j < base_space.size(); ++j)
      if (family.count(seq.base.leaf_of.at(base_space.points[j])))
        nearest = std::min(nearest, base_space.d(i, j));
    radius = std::max(radius, nearest);
  }
  report.density_radius = radius;
  report.holds = radius <= eps;
  return report;
}

AuditReport iff_audit(const WarpSequence& seq, const std::vector<double>& eps_grid,
                      const std::vector<int>& ns, double tau_conv,
                      const ConvergenceOptions& options) {
  if (eps_grid.empty()) throw StructuralError("empty eps grid");
  AuditReport report;
  report.convergence = run_convergence(seq, ns, tau_conv, options);

  report.condition_side = true;
  for (double eps : eps_grid) {
    std::vector<ConditionReport> per_n;
    per_n.reserve(ns.size());
    for (int n : ns) per_n.push_back(check_density_condition(seq, eps, n));

    AuditEpsRow row;
    row.eps = eps;
    row.final_radius = per_n.back().density_radius;
    // the condition must hold on a whole suffix of the index list
    for (std::size_t start = 0; start < per_n.size(); ++start) {
      bool all = true;
      for (std::size_t i = start; i < per_n.size(); ++i)
        if (!per_n[i].holds) {
          all = false;
          break;
        }
      if (all) {
        row.holds_eventually = true;
        row.first_n = ns[start];
        break;
      }
    }
    if (!row.holds_eventually) report.condition_side = false;
    report.eps_rows.push_back(row);
    report.condition_table.push_back(std::move(per_n));
  }

  const ConvergenceRow& last = report.convergence.rows.back();
  report.slack = seq.base.mesh + (last.upper - last.lower);
  bool converged = report.convergence.verdict == Verdict::Converged;
  if (report.condition_side == converged) {
    report.agreement = Agreement::Agree;
  } else if (report.condition_side && !converged) {
    report.agreement = last.upper <= report.convergence.tau_conv + report.slack
                           ? Agreement::AgreeWithinSlack
                           : Agreement::Disagree;
  } else {
    report.agreement =
        report.convergence.tau_conv - last.lower <= report.slack
            ? Agreement::AgreeWithinSlack
            : Agreement::Disagree;
  }
  return report;
}

}  // namespace hlskit
