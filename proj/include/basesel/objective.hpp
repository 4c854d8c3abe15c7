#ifndef BASESEL_OBJECTIVE_HPP
#define BASESEL_OBJECTIVE_HPP

#include <span>
#include <vector>

#include "basesel/types.hpp"

namespace basesel {

/// Sum of the min(k, |y|) largest entries; empty input gives 0.
/// For |y| < k this is the sum of all entries (short-vector padding).
double max_k_sum(std::span<const double> y, int k);

/// The selection objective on a chosen set U of candidate ids:
/// mean over novel classes of (top-K similarity sum)/K, minus
/// lambda * mean over novel classes of (similarity sum)/(|B_s| + m).
/// The second denominator uses the budget m even for partial U.
double objective(const SelectionProblem& problem, const std::vector<ClassId>& chosen);

/// Incremental per-novel top-K heaps plus running sums over B_s + chosen.
/// Single-writer; marginal gains and the running objective are O(|N|).
class SelectionState {
 public:
  explicit SelectionState(const SelectionProblem& problem);

  const std::vector<ClassId>& chosen() const { return chosen_; }
  std::size_t size() const { return chosen_.size(); }
  bool is_chosen(std::size_t candidate_index) const { return chosen_mask_[candidate_index]; }

  /// Exact marginal gain of adding candidate c, equal to the from-scratch
  /// objective difference. No state change.
  double gain(std::size_t candidate_index) const;

  /// Accept candidate c into the chosen set; returns its gain.
  double push(std::size_t candidate_index);

  /// Objective of the current chosen set, from the maintained heaps.
  double objective_value() const;

  /// Kth-largest similarity for novel j, or the short-set sentinel when
  /// fewer than K similarities are present (heap not yet full).
  bool topk_full(std::size_t novel_index) const;
  double kth_value(std::size_t novel_index) const;

 private:
  const SelectionProblem* problem_;
  std::vector<ClassId> chosen_;
  std::vector<char> chosen_mask_;
  std::vector<std::vector<double>> topk_;  // per-novel min-heap, size <= K
  std::vector<double> sum_all_;            // per-novel running similarity sum
  double second_term_scale_;               // lambda / (|N| * (|B_s| + m))
  double first_term_scale_;                // 1 / (|N| * K)

  void feed(std::size_t novel_index, double value);
};

/// Public-op form: validates that u is an unchosen candidate.
double marginal_gain(const SelectionProblem& problem, const SelectionState& state,
                     const ClassId& u);

struct SimilarityRatioEntry {
  ClassId novel;
  double numerator = 0.0;    // mean of the top-K similarities over B_s + U
  double denominator = 0.0;  // mean over all of B_s + U
  double ratio = 0.0;        // numerator / denominator; meaningless when !defined
  bool defined = true;       // false when the denominator is 0
};

std::vector<SimilarityRatioEntry> similarity_ratio(const SelectionProblem& problem,
                                                   const std::vector<ClassId>& chosen);

}  // namespace basesel

#endif
