#include "hlskit/gh_distance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace hlskit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Canonical input order so every estimator returns the same value on (x,y)
// and (y,x): smaller space first, ties broken by the distance table and
// then the point ids.
bool canonical_before(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  if (x.size() != y.size()) return x.size() < y.size();
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x.d(i, j) != y.d(i, j)) return x.d(i, j) < y.d(i, j);
    }
  return x.points <= y.points;
}

std::vector<double> eccentricities(const FiniteMetricSpace& s) {
  std::vector<double> ecc(s.size(), 0);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      ecc[i] = std::max(ecc[i], s.d(i, j));
  return ecc;
}

double hausdorff_1d(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  auto one_sided = [](const std::vector<double>& from,
                      const std::vector<double>& to) {
    double worst = 0;
    for (double v : from) {
      auto it = std::lower_bound(to.begin(), to.end(), v);
      double best = kInf;
      if (it != to.end()) best = std::min(best, *it - v);
      if (it != to.begin()) best = std::min(best, v - *(it - 1));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

// --- bijection matching between two index sets ------------------------------

// scalar position invariants; cheap tie-break comparable across space sizes
struct PointScore {
  double ecc = 0;
  double avg = 0;
};

std::vector<PointScore> point_scores(const FiniteMetricSpace& s) {
  std::vector<PointScore> scores(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    double total = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      scores[i].ecc = std::max(scores[i].ecc, s.d(i, j));
      total += s.d(i, j);
    }
    scores[i].avg = total / static_cast<double>(s.size());
  }
  return scores;
}

double score_gap(const PointScore& a, const PointScore& b) {
  return std::fabs(a.ecc - b.ecc) + std::fabs(a.avg - b.avg);
}

double matching_cost(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                     const std::vector<std::size_t>& a,
                     const std::vector<std::size_t>& b,
                     const std::vector<std::size_t>& perm) {
  double worst = 0;
  for (std::size_t p = 0; p < a.size(); ++p)
    for (std::size_t q = p + 1; q < a.size(); ++q)
      worst = std::max(worst, std::fabs(x.d(a[p], a[q]) -
                                        y.d(b[perm[p]], b[perm[q]])));
  return worst;
}

std::vector<std::size_t> exhaustive_matching(const FiniteMetricSpace& x,
                                             const FiniteMetricSpace& y,
                                             const std::vector<std::size_t>& a,
                                             const std::vector<std::size_t>& b) {
  std::vector<std::size_t> perm(a.size()), best(a.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  best = perm;
  double best_cost = matching_cost(x, y, a, b, perm);
  while (std::next_permutation(perm.begin(), perm.end())) {
    double cost = matching_cost(x, y, a, b, perm);
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  }
  return best;
}

// Greedy bottleneck insertion: place members one by one, each on the target
// that keeps the running maximum discrepancy smallest; ties fall back to the
// scalar position invariants (exact partners win them outright).
std::vector<std::size_t> greedy_matching(const FiniteMetricSpace& x,
                                         const FiniteMetricSpace& y,
                                         const std::vector<std::size_t>& a,
                                         const std::vector<std::size_t>& b,
                                         const std::vector<std::size_t>& order,
                                         const std::vector<PointScore>& sx,
                                         const std::vector<PointScore>& sy) {
  const std::size_t k = a.size();
  std::vector<std::size_t> perm(k, SIZE_MAX);
  std::vector<bool> used(k, false);
  std::vector<std::size_t> placed;
  for (std::size_t p : order) {
    double best_cost = kInf, best_tie = kInf;
    std::size_t best_q = SIZE_MAX;
    for (std::size_t q = 0; q < k; ++q) {
      if (used[q]) continue;
      double cost = 0;
      for (std::size_t prev : placed) {
        cost = std::max(cost, std::fabs(x.d(a[p], a[prev]) -
                                        y.d(b[q], b[perm[prev]])));
        if (cost > best_cost) break;
      }
      double tie = score_gap(sx[a[p]], sy[b[q]]);
      if (cost < best_cost || (cost == best_cost && tie < best_tie)) {
        best_cost = cost;
        best_tie = tie;
        best_q = q;
      }
    }
    perm[p] = best_q;
    used[best_q] = true;
    placed.push_back(p);
  }
  return perm;
}

// Partner selection over the whole second space: instead of matching two
// independently chosen nets, pick for each net member of X (visited in the
// given order) the Y point that best continues the partial matching.
// Returns the chosen Y indices aligned with `a`.
std::vector<std::size_t> greedy_select_partners(
    const FiniteMetricSpace& x, const FiniteMetricSpace& y,
    const std::vector<std::size_t>& a, const std::vector<std::size_t>& order,
    const std::vector<PointScore>& sx, const std::vector<PointScore>& sy) {
  std::vector<std::size_t> chosen(a.size(), SIZE_MAX);
  std::vector<std::size_t> placed;
  std::vector<bool> used(y.size(), false);
  for (std::size_t p : order) {
    double best_cost = kInf, best_tie = kInf;
    std::size_t best_j = SIZE_MAX;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (used[j]) continue;
      double cost = 0;
      for (std::size_t q : placed) {
        cost = std::max(cost, std::fabs(x.d(a[p], a[q]) - y.d(j, chosen[q])));
        if (cost > best_cost) break;
      }
      double tie = score_gap(sx[a[p]], sy[j]);
      if (cost < best_cost || (cost == best_cost && tie < best_tie)) {
        best_cost = cost;
        best_tie = tie;
        best_j = j;
      }
    }
    chosen[p] = best_j;
    used[best_j] = true;
    placed.push_back(p);
  }
  return chosen;
}

double covering_radius(const FiniteMetricSpace& s,
                       const std::vector<std::size_t>& members) {
  double radius = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double nearest = kInf;
    for (std::size_t m : members) nearest = std::min(nearest, s.d(i, m));
    radius = std::max(radius, nearest);
  }
  return radius;
}

// Reassignment descent on aligned nets: repeatedly re-pick one endpoint of
// the bottleneck pair anywhere in y, accepting moves that shrink
// max(r_a, r_b, delta). The x-side members stay fixed.
double partner_descent(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                       const std::vector<std::size_t>& a, double radius_a,
                       std::vector<std::size_t>& chosen, double& radius_b,
                       double& delta) {
  const std::size_t k = a.size();
  std::vector<bool> used(y.size(), false);
  for (std::size_t j : chosen) used[j] = true;

  auto full_delta = [&](std::size_t& bp, std::size_t& bq) {
    double worst = -1;
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t q = p + 1; q < k; ++q) {
        double v = std::fabs(x.d(a[p], a[q]) - y.d(chosen[p], chosen[q]));
        if (v > worst) {
          worst = v;
          bp = p;
          bq = q;
        }
      }
    return std::max(worst, 0.0);
  };

  std::size_t bp = 0, bq = 0;
  delta = full_delta(bp, bq);
  radius_b = covering_radius(y, chosen);
  double eps = std::max({radius_a, radius_b, delta});
  for (int round = 0; round < 64 && k >= 2; ++round) {
    double best_delta = delta;
    std::size_t best_slot = SIZE_MAX, best_j = SIZE_MAX;
    for (std::size_t slot : {bp, bq}) {
      double base = 0;
      for (std::size_t p = 0; p < k; ++p) {
        if (p == slot) continue;
        for (std::size_t q = p + 1; q < k; ++q) {
          if (q == slot) continue;
          base = std::max(base, std::fabs(x.d(a[p], a[q]) -
                                          y.d(chosen[p], chosen[q])));
        }
      }
      for (std::size_t j = 0; j < y.size(); ++j) {
        if (used[j] && j != chosen[slot]) continue;
        double cand = base;
        for (std::size_t q = 0; q < k; ++q) {
          if (q == slot) continue;
          cand = std::max(cand, std::fabs(x.d(a[slot], a[q]) -
                                          y.d(j, chosen[q])));
          if (cand >= best_delta) break;
        }
        if (cand < best_delta) {
          best_delta = cand;
          best_slot = slot;
          best_j = j;
        }
      }
    }
    if (best_slot == SIZE_MAX) break;
    std::size_t previous = chosen[best_slot];
    used[previous] = false;
    used[best_j] = true;
    chosen[best_slot] = best_j;
    double new_radius = covering_radius(y, chosen);
    double new_eps = std::max({radius_a, new_radius, best_delta});
    if (new_eps < eps) {
      eps = new_eps;
      radius_b = new_radius;
      delta = full_delta(bp, bq);
    } else {
      used[best_j] = false;
      used[previous] = true;
      chosen[best_slot] = previous;
      break;
    }
  }
  return eps;
}

// Swap descent on the bottleneck objective. Full pair scan for small k,
// swaps touching the current bottleneck pair otherwise.
void swap_descent(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                  const std::vector<std::size_t>& a,
                  const std::vector<std::size_t>& b,
                  std::vector<std::size_t>& perm, double& cost) {
  const std::size_t k = a.size();
  bool improved = true;
  std::size_t rounds = 0;
  while (improved && rounds++ < 64) {
    improved = false;
    if (k <= 60) {
      for (std::size_t p = 0; p < k && !improved; ++p)
        for (std::size_t q = p + 1; q < k && !improved; ++q) {
          std::swap(perm[p], perm[q]);
          double c = matching_cost(x, y, a, b, perm);
          if (c < cost) {
            cost = c;
            improved = true;
          } else {
            std::swap(perm[p], perm[q]);
          }
        }
    } else {
      // locate the bottleneck pair, try swaps involving its members
      std::size_t bp = 0, bq = 1;
      double worst = -1;
      for (std::size_t p = 0; p < k; ++p)
        for (std::size_t q = p + 1; q < k; ++q) {
          double v = std::fabs(x.d(a[p], a[q]) - y.d(b[perm[p]], b[perm[q]]));
          if (v > worst) {
            worst = v;
            bp = p;
            bq = q;
          }
        }
      for (std::size_t side : {bp, bq}) {
        for (std::size_t other = 0; other < k && !improved; ++other) {
          if (other == side) continue;
          std::swap(perm[side], perm[other]);
          double c = matching_cost(x, y, a, b, perm);
          if (c < cost) {
            cost = c;
            improved = true;
          } else {
            std::swap(perm[side], perm[other]);
          }
        }
        if (improved) break;
      }
    }
  }
}

std::vector<std::size_t> match_nets(const FiniteMetricSpace& x,
                                    const FiniteMetricSpace& y,
                                    const std::vector<std::size_t>& a,
                                    const std::vector<std::size_t>& b,
                                    std::uint64_t seed, double& cost_out) {
  const std::size_t k = a.size();
  if (k <= 8) {
    auto perm = exhaustive_matching(x, y, a, b);
    cost_out = matching_cost(x, y, a, b, perm);
    return perm;
  }
  auto sx = point_scores(x);
  auto sy = point_scores(y);
  std::vector<std::size_t> best;
  double best_cost = kInf;
  std::mt19937_64 rng(seed);
  for (int restart = 0; restart < 4; ++restart) {
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (restart > 0) std::shuffle(order.begin(), order.end(), rng);
    auto perm = greedy_matching(x, y, a, b, order, sx, sy);
    double cost = matching_cost(x, y, a, b, perm);
    swap_descent(x, y, a, b, perm, cost);
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
    if (best_cost == 0) break;
  }
  cost_out = best_cost;
  return best;
}

}  // namespace

double distortion_of(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                     const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  double worst = 0;
  for (std::size_t p = 0; p < pairs.size(); ++p)
    for (std::size_t q = p + 1; q < pairs.size(); ++q)
      worst = std::max(worst,
                       std::fabs(x.d(pairs[p].first, pairs[q].first) -
                                 y.d(pairs[p].second, pairs[q].second)));
  return worst;
}

double gh_exact(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                std::size_t cap) {
  require_well_formed(x);
  require_well_formed(y);
  const std::size_t n = x.size(), m = y.size();
  if (n == 0 || m == 0) throw StructuralError("empty space has no distance");
  if (n * m > cap)
    throw Error("gh_exact refused: " + std::to_string(n) + "x" +
                std::to_string(m) + " exceeds the cap of " +
                std::to_string(cap) + " relation cells; use an estimator");
  if (n * m > 30)
    throw Error("gh_exact cap above 30 relation cells is not enumerable");

  const std::size_t cells = n * m;
  // cost[p][q] for pair cells p = i*m + j, q = i'*m + j'
  std::vector<std::vector<double>> cost(cells, std::vector<double>(cells, 0));
  for (std::size_t p = 0; p < cells; ++p)
    for (std::size_t q = 0; q < cells; ++q)
      cost[p][q] = std::fabs(x.d(p / m, q / m) - y.d(p % m, q % m));

  std::vector<std::uint32_t> row_mask(n, 0), col_mask(m, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      row_mask[i] |= 1u << (i * m + j);
      col_mask[j] |= 1u << (i * m + j);
    }

  double best = kInf;
  const std::uint32_t all = cells == 32 ? 0xffffffffu : ((1u << cells) - 1);
  for (std::uint32_t mask = 1; mask <= all; ++mask) {
    bool total = true;
    for (std::size_t i = 0; i < n && total; ++i)
      if (!(mask & row_mask[i])) total = false;
    for (std::size_t j = 0; j < m && total; ++j)
      if (!(mask & col_mask[j])) total = false;
    if (!total) continue;

    double worst = 0;
    std::uint32_t rest = mask;
    while (rest && worst < best) {
      std::size_t p = static_cast<std::size_t>(std::countr_zero(rest));
      rest &= rest - 1;
      std::uint32_t rest2 = rest;
      while (rest2) {
        std::size_t q = static_cast<std::size_t>(std::countr_zero(rest2));
        rest2 &= rest2 - 1;
        worst = std::max(worst, cost[p][q]);
      }
    }
    if (worst < best) best = worst;
    if (best == 0) break;
  }
  return best / 2;
}

namespace {

struct NetCandidate {
  std::vector<std::size_t> members_a, members_b;  // aligned: p <-> p
  double radius_a = 0, radius_b = 0, delta = 0;
  double eps() const { return std::max({radius_a, radius_b, delta}); }
};

// Aligned nets of up to k members in each space, built three ways (matched
// farthest-point nets, and partner selection seeded from either side) and
// polished by reassignment descent; the candidate with the smallest
// max(r_a, r_b, delta) wins.
NetCandidate best_aligned_nets(const FiniteMetricSpace& a,
                               const FiniteMetricSpace& b, std::size_t k,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto fps_a = farthest_point_selection(
      a, k, -1.0, static_cast<std::size_t>(rng() % a.size()));
  auto fps_b = farthest_point_selection(
      b, k, -1.0, static_cast<std::size_t>(rng() % b.size()));
  auto sa = point_scores(a);
  auto sb = point_scores(b);

  std::vector<NetCandidate> candidates;
  {
    // matched farthest-point nets; duplicates in a pseudometric can leave
    // the selections shorter than requested, so align on the shorter prefix
    NetCandidate c;
    std::size_t common = std::min(fps_a.members.size(), fps_b.members.size());
    c.members_a.assign(fps_a.members.begin(), fps_a.members.begin() + common);
    std::vector<std::size_t> net_b(fps_b.members.begin(),
                                   fps_b.members.begin() + common);
    auto perm = match_nets(a, b, c.members_a, net_b, seed, c.delta);
    c.members_b.resize(common);
    for (std::size_t p = 0; p < common; ++p) c.members_b[p] = net_b[perm[p]];
    c.radius_a = covering_radius(a, c.members_a);
    partner_descent(a, b, c.members_a, c.radius_a, c.members_b, c.radius_b,
                    c.delta);
    candidates.push_back(std::move(c));
  }
  // partner selection for each side's net, with a few visit orders
  for (int restart = 0; restart < 4; ++restart) {
    std::vector<std::size_t> order_a(fps_a.members.size());
    std::vector<std::size_t> order_b(fps_b.members.size());
    std::iota(order_a.begin(), order_a.end(), std::size_t{0});
    std::iota(order_b.begin(), order_b.end(), std::size_t{0});
    if (restart > 0) {
      std::shuffle(order_a.begin(), order_a.end(), rng);
      std::shuffle(order_b.begin(), order_b.end(), rng);
    }
    {
      NetCandidate c;
      c.members_a = fps_a.members;
      c.members_b = greedy_select_partners(a, b, c.members_a, order_a, sa, sb);
      c.radius_a = fps_a.radius;
      partner_descent(a, b, c.members_a, c.radius_a, c.members_b, c.radius_b,
                      c.delta);
      candidates.push_back(std::move(c));
    }
    {
      NetCandidate c;
      c.members_b = fps_b.members;
      c.members_a = greedy_select_partners(b, a, c.members_b, order_b, sb, sa);
      c.radius_b = fps_b.radius;
      partner_descent(b, a, c.members_b, c.radius_b, c.members_a, c.radius_a,
                      c.delta);
      candidates.push_back(std::move(c));
    }
    if (candidates.back().eps() == 0) break;
  }

  std::size_t best = 0;
  for (std::size_t c = 1; c < candidates.size(); ++c)
    if (candidates[c].eps() < candidates[best].eps()) best = c;
  return candidates[best];
}

}  // namespace

GhEstimate gromov_net_bound(const FiniteMetricSpace& x,
                            const FiniteMetricSpace& y, std::size_t k,
                            std::uint64_t seed) {
  require_well_formed(x);
  require_well_formed(y);
  if (k < 1) throw StructuralError("net size must be at least 1");
  if (x.size() == 0 || y.size() == 0)
    throw StructuralError("empty space has no net");
  const bool flip = !canonical_before(x, y);
  const FiniteMetricSpace& a = flip ? y : x;
  const FiniteMetricSpace& b = flip ? x : y;

  GhEstimate est;
  std::size_t clamped = std::min({k, a.size(), b.size()});
  est.method = "gromov-net(k=" + std::to_string(clamped) + ")";
  if (clamped < k) est.method += " [clamped from " + std::to_string(k) + "]";

  NetCandidate best = best_aligned_nets(a, b, clamped, seed);

  est.net_radius_x = flip ? best.radius_b : best.radius_a;
  est.net_radius_y = flip ? best.radius_a : best.radius_b;
  est.net_discrepancy = best.delta;
  est.upper = 3 * best.eps();
  est.lower = lower_bounds(a, b);
  for (std::size_t p = 0; p < best.members_a.size(); ++p) {
    if (flip)
      est.witness.pairs.emplace_back(best.members_b[p], best.members_a[p]);
    else
      est.witness.pairs.emplace_back(best.members_a[p], best.members_b[p]);
  }
  est.witness.distortion = best.delta;
  return est;
}

namespace {

// Independent initialization: pair every point with its nearest match in
// quantile-profile space. No sequential commitments, so near-isometric
// inputs land close to the natural projection even in symmetric geometries.
std::vector<std::pair<std::size_t, std::size_t>> profile_assignment(
    const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
  const std::size_t samples =
      std::max<std::size_t>(2, std::min<std::size_t>({a.size(), b.size(), 64}));
  auto quantiles = [samples](const FiniteMetricSpace& s) {
    std::vector<std::vector<double>> q(s.size(),
                                       std::vector<double>(samples, 0));
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::vector<double> row = s.dist[i];
      std::sort(row.begin(), row.end());
      for (std::size_t k = 0; k < samples; ++k) {
        double t = static_cast<double>(k) / static_cast<double>(samples - 1);
        q[i][k] = row[static_cast<std::size_t>(
            std::lround(t * static_cast<double>(row.size() - 1)))];
      }
    }
    return q;
  };
  auto qa = quantiles(a);
  auto qb = quantiles(b);
  auto gap = [&](std::size_t i, std::size_t j) {
    double worst = 0;
    for (std::size_t k = 0; k < samples; ++k)
      worst = std::max(worst, std::fabs(qa[i][k] - qb[j][k]));
    return worst;
  };
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<bool> covered_b(b.size(), false);
  for (std::size_t i = 0; i < a.size(); ++i) {
    double best = kInf;
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (double g = gap(i, j); g < best) {
        best = g;
        best_j = j;
      }
    pairs.emplace_back(i, best_j);
    covered_b[best_j] = true;
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (covered_b[j]) continue;
    double best = kInf;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (double g = gap(i, j); g < best) {
        best = g;
        best_i = i;
      }
    pairs.emplace_back(best_i, j);
  }
  return pairs;
}

// Extend an anchor matching to a full correspondence: every uncovered point
// joins the partner that best agrees with the anchor pairs. Coverage is
// tracked explicitly so the result is always total on both sides.
std::vector<std::pair<std::size_t, std::size_t>> extend_correspondence(
    const FiniteMetricSpace& a, const FiniteMetricSpace& b,
    const std::vector<std::size_t>& anchors_a,
    const std::vector<std::size_t>& anchors_b,
    const std::vector<std::size_t>& perm) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<bool> covered_a(a.size(), false), covered_b(b.size(), false);
  for (std::size_t p = 0; p < anchors_a.size(); ++p) {
    std::size_t i = anchors_a[p], j = anchors_b[perm[p]];
    if (covered_a[i] && covered_b[j]) continue;
    pairs.emplace_back(i, j);
    covered_a[i] = true;
    covered_b[j] = true;
  }
  auto anchor_cost_against = [&](std::size_t i, std::size_t j, double cutoff) {
    double cost = 0;
    for (std::size_t p = 0; p < anchors_a.size(); ++p) {
      cost = std::max(cost, std::fabs(a.d(i, anchors_a[p]) -
                                      b.d(j, anchors_b[perm[p]])));
      if (cost > cutoff) break;
    }
    return cost;
  };
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (covered_a[i]) continue;
    double best_cost = kInf;
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      double cost = anchor_cost_against(i, j, best_cost);
      if (cost < best_cost) {
        best_cost = cost;
        best_j = j;
      }
    }
    pairs.emplace_back(i, best_j);
    covered_a[i] = true;
    covered_b[best_j] = true;
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (covered_b[j]) continue;
    double best_cost = kInf;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      double cost = anchor_cost_against(i, j, best_cost);
      if (cost < best_cost) {
        best_cost = cost;
        best_i = i;
      }
    }
    pairs.emplace_back(best_i, j);
    covered_b[j] = true;
  }
  return pairs;
}

// One local move: re-pair one endpoint of the current bottleneck pair.
// Candidates are scored incrementally against the rest of the
// correspondence, so a move costs O(P^2 + (|a|+|b|) P) rather than a full
// re-evaluation per candidate.
bool improve_once(const FiniteMetricSpace& a, const FiniteMetricSpace& b,
                  std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                  double& cost) {
  const std::size_t count = pairs.size();
  std::size_t bp = 0, bq = 0;
  double worst = -1;
  for (std::size_t p = 0; p < count; ++p)
    for (std::size_t q = p + 1; q < count; ++q) {
      double v = std::fabs(a.d(pairs[p].first, pairs[q].first) -
                           b.d(pairs[p].second, pairs[q].second));
      if (v > worst) {
        worst = v;
        bp = p;
        bq = q;
      }
    }
  auto try_reassign = [&](std::size_t slot) {
    const auto original = pairs[slot];
    int covers_first = 0, covers_second = 0;
    for (const auto& pr : pairs) {
      if (pr.first == original.first) ++covers_first;
      if (pr.second == original.second) ++covers_second;
    }
    double base = 0;  // distortion over pair-pairs not involving slot
    for (std::size_t p = 0; p < count; ++p) {
      if (p == slot) continue;
      for (std::size_t q = p + 1; q < count; ++q) {
        if (q == slot) continue;
        base = std::max(base, std::fabs(a.d(pairs[p].first, pairs[q].first) -
                                        b.d(pairs[p].second, pairs[q].second)));
      }
    }
    auto slot_cost = [&](std::size_t i, std::size_t j) {
      double c = base;
      for (std::size_t q = 0; q < count; ++q) {
        if (q == slot) continue;
        c = std::max(c, std::fabs(a.d(i, pairs[q].first) -
                                  b.d(j, pairs[q].second)));
      }
      return c;
    };
    double best_cost = cost;
    auto best_pair = original;
    // moving the only cover of a point would break totality
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (covers_second == 1 && j != original.second) continue;
      double c = slot_cost(original.first, j);
      if (c < best_cost) {
        best_cost = c;
        best_pair = {original.first, j};
      }
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (covers_first == 1 && i != original.first) continue;
      double c = slot_cost(i, original.second);
      if (c < best_cost) {
        best_cost = c;
        best_pair = {i, original.second};
      }
    }
    if (best_cost < cost) {
      pairs[slot] = best_pair;
      cost = best_cost;
      return true;
    }
    return false;
  };
  if (try_reassign(bp)) return true;
  return try_reassign(bq);
}

}  // namespace

GhEstimate gh_heuristic(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                        std::size_t budget, std::uint64_t seed) {
  require_well_formed(x);
  require_well_formed(y);
  if (budget < 1) throw StructuralError("budget must be at least 1");
  if (x.size() == 0 || y.size() == 0)
    throw StructuralError("empty space has no correspondence");
  const bool flip = !canonical_before(x, y);
  const FiniteMetricSpace& a = flip ? y : x;
  const FiniteMetricSpace& b = flip ? x : y;

  const std::size_t anchor_count = std::min<std::size_t>(
      {32, a.size(), b.size()});
  NetCandidate anchors = best_aligned_nets(a, b, anchor_count, seed);
  const std::size_t common = anchors.members_a.size();
  std::vector<std::size_t> identity(common);
  std::iota(identity.begin(), identity.end(), std::size_t{0});
  auto pairs = extend_correspondence(a, b, anchors.members_a,
                                     anchors.members_b, identity);
  double cost = distortion_of(a, b, pairs);

  // alternative start: independent nearest-profile assignment
  {
    auto by_profile = profile_assignment(a, b);
    double profile_cost = distortion_of(a, b, by_profile);
    if (profile_cost < cost) {
      pairs = std::move(by_profile);
      cost = profile_cost;
    }
  }

  // coordinate-descent sweeps: re-extend everything from the current
  // partners of the anchor points until the distortion stops improving
  for (int sweep = 0; sweep < 6; ++sweep) {
    if (cost == 0) break;
    std::vector<std::size_t> partner(a.size(), SIZE_MAX);
    for (const auto& pr : pairs)
      if (partner[pr.first] == SIZE_MAX) partner[pr.first] = pr.second;
    std::vector<std::size_t> current(common);
    for (std::size_t p = 0; p < common; ++p)
      current[p] = partner[anchors.members_a[p]];
    auto refined = extend_correspondence(a, b, anchors.members_a, current,
                                         identity);
    double refined_cost = distortion_of(a, b, refined);
    if (refined_cost < cost) {
      pairs = std::move(refined);
      cost = refined_cost;
    } else {
      break;
    }
  }

  for (std::size_t iter = 1; iter < budget; ++iter) {
    if (cost == 0) break;
    if (!improve_once(a, b, pairs, cost)) break;
  }

  GhEstimate est;
  est.method = "heuristic(budget=" + std::to_string(budget) + ")";
  est.upper = cost / 2;
  est.lower = lower_bounds(a, b);
  est.witness.distortion = cost;
  est.witness.pairs.reserve(pairs.size());
  for (const auto& pr : pairs) {
    if (flip)
      est.witness.pairs.emplace_back(pr.second, pr.first);
    else
      est.witness.pairs.push_back(pr);
  }
  return est;
}

double lower_bounds(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  require_well_formed(x);
  require_well_formed(y);
  double diam_gap = std::fabs(diameter(x) - diameter(y)) / 2;
  double ecc_gap = hausdorff_1d(eccentricities(x), eccentricities(y)) / 2;
  return std::max(diam_gap, ecc_gap);
}

}  // namespace hlskit
