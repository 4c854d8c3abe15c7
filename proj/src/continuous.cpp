#include "basesel/continuous.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "basesel/objective.hpp"

namespace basesel {

namespace {

using Clock = std::chrono::steady_clock;

struct ThresholdEntry {
  double q;
  bool is_candidate;
  std::size_t index;  // into candidates() or preselected()
};

// Per novel class: similarities of all base classes sorted descending,
// ties resolved by id for determinism.
using NovelThresholds = std::vector<std::vector<ThresholdEntry>>;

NovelThresholds build_thresholds(const SelectionProblem& p) {
  NovelThresholds out(p.num_novel());
  for (std::size_t j = 0; j < p.num_novel(); ++j) {
    auto& list = out[j];
    list.reserve(p.base_size());
    for (std::size_t c = 0; c < p.num_candidates(); ++c) {
      list.push_back({p.sim(c, j), true, c});
    }
    for (std::size_t q = 0; q < p.num_preselected(); ++q) {
      list.push_back({p.pre_sim(q, j), false, q});
    }
    std::sort(list.begin(), list.end(), [&](const ThresholdEntry& a, const ThresholdEntry& b) {
      if (a.q != b.q) return a.q > b.q;
      const ClassId& ia = a.is_candidate ? p.candidates()[a.index] : p.preselected()[a.index];
      const ClassId& ib = b.is_candidate ? p.candidates()[b.index] : p.preselected()[b.index];
      return ia < ib;
    });
  }
  return out;
}

// One DP sweep (the order-statistic recursion) for a single novel class.
// `p_geq` holds P(s_[j] >= q_[i]) for j = 0..K as the sweep advances; the
// excluded candidate, if any, is treated as probability 0.
template <typename PerColumn>
void sweep_dp(const std::vector<ThresholdEntry>& thresholds, const std::vector<double>& x,
              int k, std::size_t exclude, PerColumn&& per_column) {
  std::vector<double> p(static_cast<std::size_t>(k) + 1, 0.0);
  p[0] = 1.0;
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const ThresholdEntry& e = thresholds[i];
    if (e.is_candidate) {
      const double xi = (e.index == exclude) ? 0.0 : x[e.index];
      for (int j = k; j >= 1; --j) p[j] = (1.0 - xi) * p[j] + xi * p[j - 1];
    } else {
      for (int j = k; j >= 1; --j) p[j] = p[j - 1];
    }
    per_column(i, p);
  }
}

constexpr std::size_t kNoExclude = static_cast<std::size_t>(-1);

// dF/dx_u (first and second term together) with probabilities conditioned on
// u being absent. The short-set event contributes its exact term
// P(|S| + |B_s| < K) * f(c_n, c_u), which coincides with the sentinel-0
// threshold convention whenever similarities are nonnegative.
double partial_with_cache(const SelectionProblem& p, const NovelThresholds& cache,
                          const std::vector<double>& x, std::size_t u) {
  const int k = p.k();
  double first = 0.0;
  for (std::size_t j = 0; j < p.num_novel(); ++j) {
    const double v = p.sim(u, j);
    double acc = 0.0;
    double geq_k = 0.0;
    double prev = 0.0;
    sweep_dp(cache[j], x, k, u, [&](std::size_t i, const std::vector<double>& col) {
      const double eq = col[k] - prev;
      prev = col[k];
      const double diff = v - cache[j][i].q;
      if (diff > 0.0) acc += eq * diff;
      geq_k = col[k];
    });
    acc += (1.0 - geq_k) * v;
    first += acc;
  }
  const double n = static_cast<double>(p.num_novel());
  return first / (n * k) -
         p.lambda() * p.candidate_novel_sum(u) / (n * (p.num_preselected() + p.m()));
}

double value_with_cache(const SelectionProblem& p, const NovelThresholds& cache,
                        const std::vector<double>& x) {
  const int k = p.k();
  double first = 0.0;
  double linear = 0.0;
  for (std::size_t j = 0; j < p.num_novel(); ++j) {
    std::vector<double> prev(static_cast<std::size_t>(k) + 1, 0.0);
    prev[0] = 1.0;
    sweep_dp(cache[j], x, k, kNoExclude, [&](std::size_t i, const std::vector<double>& col) {
      const double q = cache[j][i].q;
      for (int jj = 1; jj <= k; ++jj) first += (col[jj] - prev[jj]) * q;
      std::copy(col.begin(), col.end(), prev.begin());
    });
    for (std::size_t q = 0; q < p.num_preselected(); ++q) linear += p.pre_sim(q, j);
    for (std::size_t c = 0; c < p.num_candidates(); ++c) linear += x[c] * p.sim(c, j);
  }
  const double n = static_cast<double>(p.num_novel());
  return first / (n * k) - p.lambda() * linear / (n * (p.num_preselected() + p.m()));
}

void validate_fractional(const SelectionProblem& p, const FractionalSolution& x) {
  if (x.ids != p.candidates() || x.x.size() != p.num_candidates()) {
    throw Error("bad-fractional", "fractional solution is not aligned with the candidate set");
  }
  for (double v : x.x) {
    if (!std::isfinite(v) || v < -1e-12 || v > 1.0 + 1e-12) {
      throw Error("bad-fractional", "coordinate outside [0, 1]");
    }
  }
}

double rate_sum(const GradientTable& g, double l) {
  double total = 0.0;
  for (std::size_t u = 0; u < g.ascent.size(); ++u) {
    const double ap = std::max(g.ascent[u] - l, 0.0);
    const double bp = std::max(g.removal[u] + l, 0.0);
    if (ap + bp > 0.0) total += ap / (ap + bp);
  }
  return total;
}

double find_water_level(const GradientTable& g, double m, double tol) {
  double lo = *std::min_element(g.ascent.begin(), g.ascent.end()) -
              *std::max_element(g.removal.begin(), g.removal.end()) - 1.0;
  double hi = *std::max_element(g.ascent.begin(), g.ascent.end()) + 1.0;
  for (int i = 0; i < 64 && rate_sum(g, lo) < m; ++i) lo -= std::max(hi - lo, 1.0);
  for (int i = 0; i < 64 && rate_sum(g, hi) > m; ++i) hi += std::max(hi - lo, 1.0);
  if (rate_sum(g, lo) < m || rate_sum(g, hi) > m) {
    throw Error("level-bracket", "water level not bracketed: sum(" + std::to_string(lo) + ") = " +
                                     std::to_string(rate_sum(g, lo)) + ", sum(" +
                                     std::to_string(hi) + ") = " + std::to_string(rate_sum(g, hi)) +
                                     ", target m = " + std::to_string(m));
  }
  int guard = 0;
  while (hi - lo > tol && ++guard < 400) {
    const double mid = 0.5 * (lo + hi);
    if (rate_sum(g, mid) >= m) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<std::size_t> pipage_impl(const SelectionProblem& p, const NovelThresholds& cache,
                                     std::vector<double> x) {
  const double snap = 1e-9;
  auto snap_coord = [&](double& v) {
    if (v < snap) v = 0.0;
    if (v > 1.0 - snap) v = 1.0;
  };
  for (double& v : x) snap_coord(v);

  for (std::size_t round = 0; round <= x.size(); ++round) {
    std::size_t i = x.size(), j = x.size();
    for (std::size_t c = 0; c < x.size(); ++c) {
      if (x[c] > 0.0 && x[c] < 1.0) {
        if (i == x.size()) {
          i = c;
        } else {
          j = c;
          break;
        }
      }
    }
    if (i == x.size()) break;  // integral
    if (j == x.size()) {
      throw Error("pipage-infeasible", "a single fractional coordinate remained; the input did "
                                       "not sum to an integer budget");
    }
    const double up = std::min(1.0 - x[i], x[j]);
    const double down = std::min(x[i], 1.0 - x[j]);
    std::vector<double> xa = x, xb = x;
    xa[i] += up;
    xa[j] -= up;
    xb[i] -= down;
    xb[j] += down;
    snap_coord(xa[i]);
    snap_coord(xa[j]);
    snap_coord(xb[i]);
    snap_coord(xb[j]);
    const double fa = value_with_cache(p, cache, xa);
    const double fb = value_with_cache(p, cache, xb);
    x = (fa >= fb) ? std::move(xa) : std::move(xb);
  }

  std::vector<std::size_t> chosen;
  for (std::size_t c = 0; c < x.size(); ++c) {
    if (x[c] == 1.0) chosen.push_back(c);
  }
  if (chosen.size() != static_cast<std::size_t>(p.m())) {
    throw Error("pipage-infeasible", "rounded solution has " + std::to_string(chosen.size()) +
                                         " elements, budget is " + std::to_string(p.m()));
  }
  return chosen;
}

}  // namespace

FractionalSolution make_fractional(const SelectionProblem& problem, std::vector<double> x) {
  FractionalSolution f;
  f.ids = problem.candidates();
  f.budget = problem.m();
  if (x.size() != problem.num_candidates()) {
    throw Error("bad-fractional", "coordinate count " + std::to_string(x.size()) +
                                      " != candidate count " +
                                      std::to_string(problem.num_candidates()));
  }
  f.x = std::move(x);
  validate_fractional(problem, f);
  return f;
}

OrderStatProbTable::OrderStatProbTable(std::vector<ClassId> sorted_ids,
                                       std::vector<double> thresholds, std::vector<double> p_geq,
                                       int k)
    : sorted_ids_(std::move(sorted_ids)),
      thresholds_(std::move(thresholds)),
      p_geq_(std::move(p_geq)),
      k_(k) {}

OrderStatProbTable order_stat_probs(const SelectionProblem& problem, const FractionalSolution& x,
                                    const ClassId& novel, const ClassId& exclude) {
  validate_fractional(problem, x);
  auto u = problem.candidate_index(exclude);
  if (!u) throw Error("not-a-candidate", "excluded class '" + exclude + "' is not a candidate");
  std::size_t novel_index = problem.num_novel();
  for (std::size_t j = 0; j < problem.num_novel(); ++j) {
    if (problem.novel()[j] == novel) novel_index = j;
  }
  if (novel_index == problem.num_novel()) {
    throw Error("unknown-id", "novel id '" + novel + "' not in problem");
  }

  NovelThresholds cache = build_thresholds(problem);
  const auto& list = cache[novel_index];
  const int k = problem.k();
  std::vector<ClassId> ids;
  std::vector<double> thresholds;
  ids.reserve(list.size());
  thresholds.reserve(list.size());
  for (const auto& e : list) {
    ids.push_back(e.is_candidate ? problem.candidates()[e.index] : problem.preselected()[e.index]);
    thresholds.push_back(e.q);
  }
  std::vector<double> table(static_cast<std::size_t>(k) * list.size(), 0.0);
  sweep_dp(list, x.x, k, *u, [&](std::size_t i, const std::vector<double>& col) {
    for (int j = 1; j <= k; ++j) table[(j - 1) * list.size() + i] = col[j];
  });
  return OrderStatProbTable(std::move(ids), std::move(thresholds), std::move(table), k);
}

double multilinear_partial(const SelectionProblem& problem, const FractionalSolution& x,
                           const ClassId& u) {
  validate_fractional(problem, x);
  auto c = problem.candidate_index(u);
  if (!c) throw Error("not-a-candidate", "class '" + u + "' is not a candidate");
  NovelThresholds cache = build_thresholds(problem);
  return partial_with_cache(problem, cache, x.x, *c);
}

double multilinear_value(const SelectionProblem& problem, const FractionalSolution& x) {
  validate_fractional(problem, x);
  NovelThresholds cache = build_thresholds(problem);
  return value_with_cache(problem, cache, x.x);
}

FractionalSolution continuous_double_greedy(const SelectionProblem& problem, int steps) {
  if (steps < 1) throw Error("bad-argument", "steps must be >= 1");
  const std::size_t n = problem.num_candidates();
  const double m = static_cast<double>(problem.m());
  NovelThresholds cache = build_thresholds(problem);

  std::vector<double> x(n, 0.0), y(n, 1.0);
  GradientTable g;
  g.ascent.resize(n);
  g.removal.resize(n);
  for (int t = 0; t < steps; ++t) {
    for (std::size_t u = 0; u < n; ++u) {
      g.ascent[u] = partial_with_cache(problem, cache, x, u);
      g.removal[u] = -partial_with_cache(problem, cache, y, u);
    }
    const double level = find_water_level(g, m, 1e-9);
    for (std::size_t u = 0; u < n; ++u) {
      const double ap = std::max(g.ascent[u] - level, 0.0);
      const double bp = std::max(g.removal[u] + level, 0.0);
      if (ap + bp <= 0.0) continue;  // frozen coordinate
      x[u] += (ap / (ap + bp)) / steps;
      y[u] -= (bp / (ap + bp)) / steps;
      x[u] = std::clamp(x[u], 0.0, 1.0);
      y[u] = std::clamp(y[u], 0.0, 1.0);
      if (x[u] > y[u]) x[u] = y[u];
    }
  }
  double total = 0.0;
  for (double v : x) total += v;
  if (std::abs(total - m) > 1e-6) {
    throw Error("budget-drift", "sum x = " + std::to_string(total) + " after " +
                                    std::to_string(steps) + " steps, budget m = " +
                                    std::to_string(problem.m()));
  }
  return make_fractional(problem, std::move(x));
}

SelectionResult pipage_round(const SelectionProblem& problem, const FractionalSolution& x,
                             std::uint64_t seed) {
  const auto start = Clock::now();
  validate_fractional(problem, x);
  double total = 0.0;
  for (double v : x.x) total += v;
  if (std::abs(total - problem.m()) > 1e-6) {
    throw Error("bad-fractional", "sum x = " + std::to_string(total) + " is not the budget m = " +
                                      std::to_string(problem.m()));
  }
  NovelThresholds cache = build_thresholds(problem);
  std::vector<std::size_t> chosen = pipage_impl(problem, cache, x.x);
  SelectionResult result;
  result.algorithm = "pipage";
  result.seed = seed;
  for (std::size_t c : chosen) result.chosen.push_back(problem.candidates()[c]);
  result.objective = objective(problem, result.chosen);
  result.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

SelectionResult continuous_double_select(const SelectionProblem& problem, int steps,
                                         std::uint64_t seed) {
  const auto start = Clock::now();
  FractionalSolution x = continuous_double_greedy(problem, steps);
  SelectionResult result = pipage_round(problem, x, seed);
  result.algorithm = "continuous-double";
  result.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

}  // namespace basesel
