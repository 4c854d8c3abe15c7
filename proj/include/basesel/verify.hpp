#ifndef BASESEL_VERIFY_HPP
#define BASESEL_VERIFY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "basesel/types.hpp"

namespace basesel {

inline constexpr std::uint64_t kDefaultEnumerationCap = 5'000'000;

/// Exact maximizer by exhaustive enumeration; ties go to the lexicographically
/// smallest chosen set. Refuses when C(|B_u|, m) exceeds the cap.
SelectionResult brute_force_optimum(const SelectionProblem& problem,
                                    std::uint64_t enumeration_cap = kDefaultEnumerationCap);

/// Mean similarity between candidate base classes and novel classes (the Q of
/// the greedy lower bounds). Uses the B_u rows only.
double average_similarity_Q(const SelectionProblem& problem);

struct SubmodularityReport {
  std::uint64_t trials = 0;
  std::uint64_t lattice_violations = 0;   // h(A&B) + h(A|B) <= h(A) + h(B)
  std::uint64_t dr_violations = 0;        // gain(u|A) >= gain(u|B) for A subset of B
  double worst_lattice_margin = 0.0;      // min of h(A)+h(B)-h(A|B)-h(A&B); negative = violation
  double worst_dr_margin = 0.0;           // min of gain(u|A)-gain(u|B)
  double tolerance = 1e-12;
};

/// Samples random subset pairs and diminishing-returns triples and counts
/// violations beyond the tolerance.
SubmodularityReport check_submodularity(const SelectionProblem& problem, std::uint64_t trials,
                                        std::uint64_t seed);

struct BoundCertificate {
  std::string algorithm;
  std::string theorem;  // which guarantee was applied
  double h_alg = 0.0;   // Monte-Carlo mean for randomized algorithms
  std::optional<double> h_opt;
  double q = 0.0;
  std::optional<double> c1;
  std::optional<double> c2;
  double bound_value = 0.0;
  bool satisfied = false;
  std::optional<double> mc_stderr;  // present for randomized algorithms
  std::uint64_t mc_trials = 0;
  std::vector<std::string> assumption_flags;
};

/// Evaluates the guarantee matching the result's algorithm against the
/// exhaustive optimum. Unmet theorem preconditions turn into assumption
/// flags, never errors; randomized algorithms are certified on the mean over
/// `mc_trials` seeded reruns with the bound relaxed by three standard errors.
BoundCertificate certify_bounds(const SelectionProblem& problem, const SelectionResult& result,
                                std::uint64_t mc_trials = 200,
                                std::uint64_t enumeration_cap = kDefaultEnumerationCap);

}  // namespace basesel

#endif
