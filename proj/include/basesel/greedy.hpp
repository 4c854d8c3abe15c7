#ifndef BASESEL_GREEDY_HPP
#define BASESEL_GREEDY_HPP

#include <cstdint>
#include <string>

#include "basesel/objective.hpp"
#include "basesel/types.hpp"

namespace basesel {

enum class AlgorithmKind { GreedyNovelClass, GreedyTarget, RandomGreedy, ContinuousDouble };

std::string algorithm_name(AlgorithmKind kind);

struct AlgorithmChoice {
  AlgorithmKind kind;
  std::string rationale;
  double gamma = 1.2;
  double low_fraction = 0.08;
  double high_fraction = 0.92;
};

/// Repeatedly picks the (candidate, novel) pair with the largest similarity,
/// retiring the novel class until the pool empties and is refilled.
/// Only valid for lambda = 0.
SelectionResult greedy_on_novel_class(const SelectionProblem& problem);

/// Plain greedy on the objective: m rounds, each accepting the candidate with
/// the largest marginal gain (ties to the lexicographically smallest id).
SelectionResult greedy_on_target(const SelectionProblem& problem);

/// Each round draws uniformly among the m candidates with the largest gains;
/// when fewer than m candidates remain the pool is padded with zero-gain
/// phantoms, and a phantom draw leaves the chosen set unchanged. Rounds
/// continue until m real elements are accepted.
SelectionResult random_greedy(const SelectionProblem& problem, std::uint64_t seed);

/// Applicability rules: lambda = 0 picks a greedy variant by m vs gamma*K*|N|;
/// lambda > 0 picks random greedy outside [0.08|B_u|, 0.92|B_u|] and the
/// continuous method inside.
AlgorithmChoice choose_algorithm(const SelectionProblem& problem, double gamma = 1.2);

}  // namespace basesel

#endif
