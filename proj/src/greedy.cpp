#include "basesel/greedy.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "basesel/rng.hpp"

namespace basesel {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

SelectionResult finalize(const SelectionProblem& problem, SelectionResult result,
                         Clock::time_point start) {
  result.objective = objective(problem, result.chosen);
  result.elapsed_seconds = seconds_since(start);
  return result;
}

}  // namespace

std::string algorithm_name(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::GreedyNovelClass: return "greedy-novel";
    case AlgorithmKind::GreedyTarget: return "greedy-target";
    case AlgorithmKind::RandomGreedy: return "random-greedy";
    case AlgorithmKind::ContinuousDouble: return "continuous-double";
  }
  return "unknown";
}

SelectionResult greedy_on_novel_class(const SelectionProblem& problem) {
  const auto start = Clock::now();
  if (problem.lambda() != 0.0) {
    throw Error("wrong-engine", "greedy_on_novel_class requires lambda = 0");
  }
  const std::size_t n_cand = problem.num_candidates();
  const std::size_t n_novel = problem.num_novel();

  // Per novel class, candidates sorted by descending similarity; ties resolve
  // to the smaller candidate index (candidates are in sorted id order).
  std::vector<std::vector<std::size_t>> order(n_novel);
  for (std::size_t j = 0; j < n_novel; ++j) {
    auto& ord = order[j];
    ord.resize(n_cand);
    std::iota(ord.begin(), ord.end(), std::size_t{0});
    std::stable_sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) {
      return problem.sim(a, j) > problem.sim(b, j);
    });
  }
  std::vector<std::size_t> cursor(n_novel, 0);
  std::vector<char> chosen(n_cand, 0);
  std::vector<char> active(n_novel, 1);
  std::size_t active_count = n_novel;

  SelectionState state(problem);
  SelectionResult result;
  result.algorithm = algorithm_name(AlgorithmKind::GreedyNovelClass);

  for (int i = 0; i < problem.m(); ++i) {
    std::size_t best_novel = n_novel;
    std::size_t best_cand = n_cand;
    double best_sim = 0.0;
    for (std::size_t j = 0; j < n_novel; ++j) {
      if (!active[j]) continue;
      auto& cur = cursor[j];
      while (cur < n_cand && chosen[order[j][cur]]) ++cur;
      if (cur >= n_cand) continue;
      const std::size_t cand = order[j][cur];
      const double s = problem.sim(cand, j);
      if (best_novel == n_novel || s > best_sim ||
          (s == best_sim && (cand < best_cand || (cand == best_cand && j < best_novel)))) {
        best_sim = s;
        best_cand = cand;
        best_novel = j;
      }
    }
    result.step_gains.push_back(state.push(best_cand));
    result.chosen.push_back(problem.candidates()[best_cand]);
    chosen[best_cand] = 1;
    active[best_novel] = 0;
    if (--active_count == 0) {
      std::fill(active.begin(), active.end(), 1);
      active_count = n_novel;
    }
  }
  return finalize(problem, std::move(result), start);
}

SelectionResult greedy_on_target(const SelectionProblem& problem) {
  const auto start = Clock::now();
  const std::size_t n_cand = problem.num_candidates();
  SelectionState state(problem);
  SelectionResult result;
  result.algorithm = algorithm_name(AlgorithmKind::GreedyTarget);
  for (int i = 0; i < problem.m(); ++i) {
    std::size_t best = n_cand;
    double best_gain = 0.0;
    for (std::size_t c = 0; c < n_cand; ++c) {
      if (state.is_chosen(c)) continue;
      const double g = state.gain(c);
      if (best == n_cand || g > best_gain) {
        best = c;
        best_gain = g;
      }
    }
    result.step_gains.push_back(state.push(best));
    result.chosen.push_back(problem.candidates()[best]);
  }
  return finalize(problem, std::move(result), start);
}

SelectionResult random_greedy(const SelectionProblem& problem, std::uint64_t seed) {
  const auto start = Clock::now();
  const std::size_t n_cand = problem.num_candidates();
  const std::size_t m = static_cast<std::size_t>(problem.m());
  Rng rng(seed);
  SelectionState state(problem);
  SelectionResult result;
  result.algorithm = algorithm_name(AlgorithmKind::RandomGreedy);
  result.seed = seed;

  std::vector<std::size_t> pool;
  pool.reserve(m);
  while (state.size() < m) {
    pool.clear();
    for (std::size_t c = 0; c < n_cand; ++c) {
      if (!state.is_chosen(c)) pool.push_back(c);
    }
    // Top-m by gain; remaining ties already favor the smaller index via the
    // stable sort over the index-ordered pool.
    std::vector<double> gains(n_cand, 0.0);
    for (std::size_t c : pool) gains[c] = state.gain(c);
    std::stable_sort(pool.begin(), pool.end(),
                     [&](std::size_t a, std::size_t b) { return gains[a] > gains[b]; });
    if (pool.size() > m) pool.resize(m);
    const std::size_t draw = static_cast<std::size_t>(uniform_below(rng, m));
    if (draw >= pool.size()) continue;  // phantom: nothing added this round
    const std::size_t pick = pool[draw];
    result.step_gains.push_back(state.push(pick));
    result.chosen.push_back(problem.candidates()[pick]);
  }
  return finalize(problem, std::move(result), start);
}

AlgorithmChoice choose_algorithm(const SelectionProblem& problem, double gamma) {
  if (!(gamma > 1.0)) throw Error("bad-argument", "gamma must be > 1");
  AlgorithmChoice choice;
  choice.gamma = gamma;
  const double m = problem.m();
  const double r = static_cast<double>(problem.num_candidates());
  if (problem.lambda() == 0.0) {
    const double pivot = gamma * problem.k() * static_cast<double>(problem.num_novel());
    if (m > pivot) {
      choice.kind = AlgorithmKind::GreedyNovelClass;
      choice.rationale = "lambda = 0 and m > gamma*K*|N| = " + std::to_string(pivot);
    } else {
      choice.kind = AlgorithmKind::GreedyTarget;
      choice.rationale = "lambda = 0 and m <= gamma*K*|N| = " + std::to_string(pivot);
    }
  } else if (m < choice.low_fraction * r || m > choice.high_fraction * r) {
    choice.kind = AlgorithmKind::RandomGreedy;
    choice.rationale = "lambda > 0 and m outside [" + std::to_string(choice.low_fraction * r) +
                       ", " + std::to_string(choice.high_fraction * r) + "]";
  } else {
    choice.kind = AlgorithmKind::ContinuousDouble;
    choice.rationale = "lambda > 0 and 0.08|B_u| <= m <= 0.92|B_u|";
  }
  return choice;
}

}  // namespace basesel
