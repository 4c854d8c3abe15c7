#ifndef BASESEL_CONTINUOUS_HPP
#define BASESEL_CONTINUOUS_HPP

#include <cstdint>
#include <vector>

#include "basesel/types.hpp"

namespace basesel {

/// Inclusion probabilities over the candidate set, aligned with
/// SelectionProblem::candidates(); the continuous relaxation variable.
struct FractionalSolution {
  std::vector<ClassId> ids;
  std::vector<double> x;
  int budget = 0;
};

FractionalSolution make_fractional(const SelectionProblem& problem, std::vector<double> x);

/// Order-statistic probabilities for one novel class: thresholds are the
/// similarities of all base classes sorted descending, and p_geq(j, i) is the
/// probability that the j-th largest similarity over the random set reaches
/// threshold i. Missing order statistics (set shorter than j) form the
/// residual "short" mass.
class OrderStatProbTable {
 public:
  OrderStatProbTable(std::vector<ClassId> sorted_ids, std::vector<double> thresholds,
                     std::vector<double> p_geq, int k);

  int k() const { return k_; }
  std::size_t base_size() const { return thresholds_.size(); }
  const std::vector<ClassId>& sorted_ids() const { return sorted_ids_; }
  const std::vector<double>& thresholds() const { return thresholds_; }

  // j in 1..K, i in 1..|B|.
  double p_geq(int j, std::size_t i) const { return p_geq_[(j - 1) * thresholds_.size() + (i - 1)]; }
  double p_eq(int j, std::size_t i) const {
    return p_geq(j, i) - (i >= 2 ? p_geq(j, i - 1) : 0.0);
  }
  double p_short(int j) const { return 1.0 - p_geq(j, thresholds_.size()); }

 private:
  std::vector<ClassId> sorted_ids_;
  std::vector<double> thresholds_;
  std::vector<double> p_geq_;  // K x |B| row-major
  int k_;
};

/// DP table at the point x with the excluded candidate's coordinate forced
/// to 0 (the conditioning used by the partial derivative).
OrderStatProbTable order_stat_probs(const SelectionProblem& problem, const FractionalSolution& x,
                                    const ClassId& novel, const ClassId& exclude);

/// Partial derivative of the multilinear extension at x with respect to u.
double multilinear_partial(const SelectionProblem& problem, const FractionalSolution& x,
                           const ClassId& u);

/// Exact multilinear extension value via order-statistic expectations.
double multilinear_value(const SelectionProblem& problem, const FractionalSolution& x);

struct GradientTable {
  std::vector<double> ascent;   // dF/dx_u at x
  std::vector<double> removal;  // gain of removing u at y, i.e. -dF/dy_u
};

struct ContinuousOptions {
  int steps = 100;
  double level_tolerance = 1e-9;
};

/// Water-filling double greedy on the multilinear extension: x grows from 0,
/// y shrinks from all-ones, each step allocating total rate m across
/// coordinates at the level l* where sum max(a-l,0)/(max(a-l,0)+max(b+l,0))
/// equals m. Returns x after `steps` rounds with sum x = m.
FractionalSolution continuous_double_greedy(const SelectionProblem& problem, int steps);

/// Deterministic pairwise rounding: repeatedly takes the two smallest-id
/// fractional coordinates, pushes mass to whichever extreme point has the
/// larger extension value, and stops when x is integral. The seed is accepted
/// for interface stability but the pairing is deterministic.
SelectionResult pipage_round(const SelectionProblem& problem, const FractionalSolution& x,
                             std::uint64_t seed);

/// Algorithm pipeline for the lambda > 0 mid-budget regime: continuous double
/// greedy followed by pipage rounding.
SelectionResult continuous_double_select(const SelectionProblem& problem, int steps,
                                         std::uint64_t seed);

}  // namespace basesel

#endif
