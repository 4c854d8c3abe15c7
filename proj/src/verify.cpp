#include "basesel/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "basesel/greedy.hpp"
#include "basesel/objective.hpp"
#include "basesel/rng.hpp"

namespace basesel {

namespace {

using Clock = std::chrono::steady_clock;

// Keeps the k largest fed values in an ascending array (front = kth largest).
inline void topk_feed(double* top, std::size_t& filled, std::size_t k, double v) {
  if (filled < k) {
    std::size_t i = filled++;
    top[i] = v;
    while (i > 0 && top[i] < top[i - 1]) {
      std::swap(top[i], top[i - 1]);
      --i;
    }
  } else if (v > top[0]) {
    top[0] = v;
    std::size_t i = 0;
    while (i + 1 < k && top[i] > top[i + 1]) {
      std::swap(top[i], top[i + 1]);
      ++i;
    }
  }
}

// Index-set objective evaluator, allocation-free per call after construction.
class IndexEvaluator {
 public:
  explicit IndexEvaluator(const SelectionProblem& p)
      : p_(&p), top_(static_cast<std::size_t>(p.k())) {
    const double n = static_cast<double>(p.num_novel());
    first_scale_ = 1.0 / (n * p.k());
    second_scale_ = p.lambda() / (n * (p.num_preselected() + p.m()));
  }

  double h(const std::vector<std::size_t>& set) const {
    const SelectionProblem& p = *p_;
    const std::size_t k = static_cast<std::size_t>(p.k());
    double first = 0.0, second = 0.0;
    for (std::size_t j = 0; j < p.num_novel(); ++j) {
      std::size_t filled = 0;
      double sum_all = 0.0;
      for (std::size_t q = 0; q < p.num_preselected(); ++q) {
        const double v = p.pre_sim(q, j);
        sum_all += v;
        topk_feed(top_.data(), filled, k, v);
      }
      for (std::size_t c : set) {
        const double v = p.sim(c, j);
        sum_all += v;
        topk_feed(top_.data(), filled, k, v);
      }
      for (std::size_t i = 0; i < filled; ++i) first += top_[i];
      second += sum_all;
    }
    return first * first_scale_ - second * second_scale_;
  }

  double h_with(const std::vector<std::size_t>& set, std::size_t extra) const {
    scratch_ = set;
    scratch_.push_back(extra);
    return h(scratch_);
  }

 private:
  const SelectionProblem* p_;
  mutable std::vector<double> top_;
  mutable std::vector<std::size_t> scratch_;
  double first_scale_;
  double second_scale_;
};

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t m, std::uint64_t cap) {
  if (m > n) return 0;
  m = std::min(m, n - m);
  long double value = 1.0L;
  for (std::uint64_t i = 1; i <= m; ++i) {
    value = value * static_cast<long double>(n - m + i) / static_cast<long double>(i);
    if (value > static_cast<long double>(cap) * 2.0L) return cap + 1;
  }
  return static_cast<std::uint64_t>(value + 0.5L);
}

bool has_negative_similarity(const SelectionProblem& p) {
  for (std::size_t c = 0; c < p.num_candidates(); ++c) {
    for (std::size_t j = 0; j < p.num_novel(); ++j) {
      if (p.sim(c, j) < 0.0) return true;
    }
  }
  for (std::size_t q = 0; q < p.num_preselected(); ++q) {
    for (std::size_t j = 0; j < p.num_novel(); ++j) {
      if (p.pre_sim(q, j) < 0.0) return true;
    }
  }
  return false;
}

}  // namespace

SelectionResult brute_force_optimum(const SelectionProblem& problem, std::uint64_t enumeration_cap) {
  const auto start = Clock::now();
  const std::size_t n = problem.num_candidates();
  const std::size_t m = static_cast<std::size_t>(problem.m());
  const std::uint64_t count = binomial_capped(n, m, enumeration_cap);
  if (count > enumeration_cap) {
    throw Error("enum-cap", "C(" + std::to_string(n) + ", " + std::to_string(m) +
                                ") exceeds the enumeration cap " + std::to_string(enumeration_cap) +
                                "; run without the oracle or raise --enum-cap");
  }

  IndexEvaluator eval(problem);
  std::vector<std::size_t> combo(m);
  std::iota(combo.begin(), combo.end(), std::size_t{0});
  std::vector<std::size_t> best = combo;
  double best_value = eval.h(combo);

  auto advance = [&]() -> bool {
    std::size_t i = m;
    while (i > 0) {
      --i;
      if (combo[i] != i + n - m) {
        ++combo[i];
        for (std::size_t j = i + 1; j < m; ++j) combo[j] = combo[j - 1] + 1;
        return true;
      }
    }
    return false;
  };
  while (advance()) {
    const double v = eval.h(combo);
    if (v > best_value) {
      best_value = v;
      best = combo;
    }
  }

  SelectionResult result;
  result.algorithm = "oracle";
  for (std::size_t c : best) result.chosen.push_back(problem.candidates()[c]);
  result.objective = objective(problem, result.chosen);
  result.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

double average_similarity_Q(const SelectionProblem& problem) {
  double total = 0.0;
  for (std::size_t c = 0; c < problem.num_candidates(); ++c) {
    total += problem.candidate_novel_sum(c);
  }
  return total / (static_cast<double>(problem.num_candidates()) *
                  static_cast<double>(problem.num_novel()));
}

SubmodularityReport check_submodularity(const SelectionProblem& problem, std::uint64_t trials,
                                        std::uint64_t seed) {
  if (trials < 1) throw Error("bad-argument", "trials must be >= 1");
  const std::size_t n = problem.num_candidates();
  IndexEvaluator eval(problem);
  Rng rng(seed);
  SubmodularityReport report;
  report.trials = trials;
  report.worst_lattice_margin = std::numeric_limits<double>::infinity();
  report.worst_dr_margin = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> a, b, a_and_b, a_or_b;
  std::vector<char> in_b(n, 0);
  for (std::uint64_t t = 0; t < trials; ++t) {
    // Lattice form on two independent uniform subsets.
    a.clear();
    b.clear();
    a_and_b.clear();
    a_or_b.clear();
    for (std::size_t c = 0; c < n; ++c) {
      const std::uint64_t bits = rng();
      const bool in_a_set = bits & 1;
      const bool in_b_set = bits & 2;
      if (in_a_set) a.push_back(c);
      if (in_b_set) b.push_back(c);
      if (in_a_set && in_b_set) a_and_b.push_back(c);
      if (in_a_set || in_b_set) a_or_b.push_back(c);
    }
    const double lattice_margin = eval.h(a) + eval.h(b) - eval.h(a_or_b) - eval.h(a_and_b);
    report.worst_lattice_margin = std::min(report.worst_lattice_margin, lattice_margin);
    if (lattice_margin < -report.tolerance) ++report.lattice_violations;

    // Diminishing returns on a nested pair with u outside the larger set.
    std::fill(in_b.begin(), in_b.end(), 0);
    b.clear();
    a.clear();
    for (std::size_t c = 0; c < n; ++c) {
      const std::uint64_t bits = rng();
      if ((bits & 3) == 0) continue;  // leave roughly a quarter outside B
      in_b[c] = 1;
      b.push_back(c);
      if (bits & 4) a.push_back(c);
    }
    std::size_t outside = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (!in_b[c]) ++outside;
    }
    if (outside == 0) {
      const std::size_t drop = static_cast<std::size_t>(uniform_below(rng, b.size()));
      const std::size_t victim = b[drop];
      b.erase(b.begin() + drop);
      a.erase(std::remove(a.begin(), a.end(), victim), a.end());
      in_b[victim] = 0;
    }
    std::size_t pick = static_cast<std::size_t>(
        uniform_below(rng, std::count(in_b.begin(), in_b.end(), char{0})));
    std::size_t u = n;
    for (std::size_t c = 0; c < n; ++c) {
      if (!in_b[c] && pick-- == 0) {
        u = c;
        break;
      }
    }
    const double gain_a = eval.h_with(a, u) - eval.h(a);
    const double gain_b = eval.h_with(b, u) - eval.h(b);
    const double dr_margin = gain_a - gain_b;
    report.worst_dr_margin = std::min(report.worst_dr_margin, dr_margin);
    if (dr_margin < -report.tolerance) ++report.dr_violations;
  }
  return report;
}

BoundCertificate certify_bounds(const SelectionProblem& problem, const SelectionResult& result,
                                std::uint64_t mc_trials, std::uint64_t enumeration_cap) {
  constexpr double kEuler = 2.718281828459045235360287471352662498;
  constexpr double kTol = 1e-9;

  BoundCertificate cert;
  cert.algorithm = result.algorithm;
  cert.q = average_similarity_Q(problem);
  cert.h_alg = result.objective;

  if (problem.num_preselected() > 0) {
    cert.assumption_flags.push_back("B_s nonempty - theorem scope exceeded");
  }
  if (has_negative_similarity(problem)) {
    cert.assumption_flags.push_back("negative similarities present");
  }
  try {
    cert.h_opt = brute_force_optimum(problem, enumeration_cap).objective;
  } catch (const Error&) {
    cert.assumption_flags.push_back("enumeration cap exceeded - h_opt unavailable");
  }

  const double r = static_cast<double>(problem.num_candidates());
  const double m = static_cast<double>(problem.m());
  const double lambda = problem.lambda();

  if (result.algorithm == "greedy-novel") {
    cert.theorem = "theorem-1";
    if (lambda != 0.0) cert.assumption_flags.push_back("lambda > 0 - Theorem 1 needs lambda = 0");
    if (m < static_cast<double>(problem.k()) * static_cast<double>(problem.num_novel())) {
      cert.assumption_flags.push_back("m < K*|N| - Theorem 1 precondition unmet");
    }
    cert.bound_value = cert.h_opt.value_or(std::numeric_limits<double>::quiet_NaN());
    cert.satisfied = cert.h_opt && cert.h_alg >= *cert.h_opt - kTol;
  } else if (result.algorithm == "greedy-target") {
    cert.theorem = "theorem-2";
    if (lambda != 0.0) cert.assumption_flags.push_back("lambda > 0 - Theorem 2 needs lambda = 0");
    if (problem.m() < problem.k()) {
      cert.assumption_flags.push_back("short-set regime (m < K) - bound not validated");
    }
    if (cert.h_opt) {
      cert.bound_value = (1.0 - 1.0 / kEuler) * *cert.h_opt + cert.q / kEuler;
      cert.satisfied = cert.h_alg >= cert.bound_value - kTol;
    } else {
      cert.bound_value = std::numeric_limits<double>::quiet_NaN();
      cert.satisfied = false;
    }
  } else if (result.algorithm == "random-greedy" || result.algorithm == "continuous-double" ||
             result.algorithm == "pipage") {
    const bool first_term = result.algorithm == "random-greedy";
    cert.theorem = first_term ? "theorem-4-first" : "theorem-4-second";
    cert.assumption_flags.push_back("asymptotic terms ignored");
    if (!(lambda > 0.0 && lambda < 1.0 / (kEuler - 1.0))) {
      cert.assumption_flags.push_back("lambda outside (0, 1/(e-1)) - Theorem 4 scope");
    }
    const double root = 2.0 * std::sqrt((r - m) * m);
    cert.c1 = 1.0 / kEuler + (1.0 - 1.0 / kEuler) * m / r - (1.0 - 1.0 / kEuler) * lambda;
    cert.c2 = (1.0 - lambda) * r / (root + r);
    if (first_term && mc_trials >= 1) {
      const std::uint64_t base_seed = result.seed.value_or(0);
      double sum = 0.0, sum_sq = 0.0;
      for (std::uint64_t t = 0; t < mc_trials; ++t) {
        const double v = random_greedy(problem, base_seed + t).objective;
        sum += v;
        sum_sq += v * v;
      }
      cert.mc_trials = mc_trials;
      cert.h_alg = sum / static_cast<double>(mc_trials);
      const double variance =
          std::max(0.0, (sum_sq / mc_trials - cert.h_alg * cert.h_alg) * mc_trials /
                            std::max<double>(1.0, static_cast<double>(mc_trials) - 1.0));
      cert.mc_stderr = std::sqrt(variance / static_cast<double>(mc_trials));
    }
    if (cert.h_opt) {
      if (first_term) {
        cert.bound_value = (1.0 - m / (kEuler * r)) / kEuler * *cert.h_opt + *cert.c1 * cert.q;
      } else {
        const double factor = (root == 0.0) ? 0.0 : 1.0 / (1.0 + r / root);
        cert.bound_value = factor * *cert.h_opt + *cert.c2 * cert.q;
      }
      const double slack = cert.mc_stderr ? 3.0 * *cert.mc_stderr : 0.0;
      cert.satisfied = cert.h_alg >= cert.bound_value - slack - kTol;
    } else {
      cert.bound_value = std::numeric_limits<double>::quiet_NaN();
      cert.satisfied = false;
    }
  } else {
    cert.theorem = "feasibility-only";
    cert.assumption_flags.push_back("no guarantee applies to algorithm '" + result.algorithm + "'");
    cert.bound_value = std::numeric_limits<double>::quiet_NaN();
    cert.satisfied = result.chosen.size() == static_cast<std::size_t>(problem.m());
  }
  return cert;
}

}  // namespace basesel
