#include "basesel/objective.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace basesel {

double max_k_sum(std::span<const double> y, int k) {
  if (k < 1) throw Error("bad-argument", "max_k_sum needs k >= 1");
  if (y.empty()) return 0.0;
  if (static_cast<std::size_t>(k) >= y.size()) {
    double total = 0.0;
    for (double v : y) total += v;
    return total;
  }
  std::vector<double> work(y.begin(), y.end());
  std::nth_element(work.begin(), work.begin() + (k - 1), work.end(), std::greater<>());
  double total = 0.0;
  for (int i = 0; i < k; ++i) total += work[i];
  return total;
}

namespace {

// Top-K sum and full sum of the similarities of B_s + U against novel j.
void accumulate_novel(const SelectionProblem& p, const std::vector<std::size_t>& chosen_idx,
                      std::size_t j, double& topk_sum, double& full_sum) {
  std::vector<double> sims;
  sims.reserve(p.num_preselected() + chosen_idx.size());
  for (std::size_t q = 0; q < p.num_preselected(); ++q) sims.push_back(p.pre_sim(q, j));
  for (std::size_t c : chosen_idx) sims.push_back(p.sim(c, j));
  topk_sum = max_k_sum(sims, p.k());
  full_sum = 0.0;
  for (double v : sims) full_sum += v;
}

std::vector<std::size_t> resolve_chosen(const SelectionProblem& p,
                                        const std::vector<ClassId>& chosen) {
  std::vector<std::size_t> idx;
  idx.reserve(chosen.size());
  std::vector<char> seen(p.num_candidates(), 0);
  for (const ClassId& id : chosen) {
    auto c = p.candidate_index(id);
    if (!c) throw Error("not-a-candidate", "class '" + id + "' is not an unselected candidate");
    if (seen[*c]) throw Error("duplicate-id", "class '" + id + "' chosen twice");
    seen[*c] = 1;
    idx.push_back(*c);
  }
  return idx;
}

}  // namespace

double objective(const SelectionProblem& problem, const std::vector<ClassId>& chosen) {
  std::vector<std::size_t> idx = resolve_chosen(problem, chosen);
  const double n = static_cast<double>(problem.num_novel());
  double first = 0.0, second = 0.0;
  for (std::size_t j = 0; j < problem.num_novel(); ++j) {
    double topk = 0.0, full = 0.0;
    accumulate_novel(problem, idx, j, topk, full);
    first += topk;
    second += full;
  }
  first /= n * problem.k();
  second *= problem.lambda() / (n * (problem.num_preselected() + problem.m()));
  return first - second;
}

SelectionState::SelectionState(const SelectionProblem& problem) : problem_(&problem) {
  chosen_mask_.assign(problem.num_candidates(), 0);
  topk_.assign(problem.num_novel(), {});
  sum_all_.assign(problem.num_novel(), 0.0);
  const double n = static_cast<double>(problem.num_novel());
  first_term_scale_ = 1.0 / (n * problem.k());
  second_term_scale_ = problem.lambda() / (n * (problem.num_preselected() + problem.m()));
  for (std::size_t j = 0; j < problem.num_novel(); ++j) {
    topk_[j].reserve(problem.k());
    for (std::size_t q = 0; q < problem.num_preselected(); ++q) feed(j, problem.pre_sim(q, j));
  }
}

void SelectionState::feed(std::size_t j, double value) {
  sum_all_[j] += value;
  auto& heap = topk_[j];
  if (heap.size() < static_cast<std::size_t>(problem_->k())) {
    heap.push_back(value);
    std::push_heap(heap.begin(), heap.end(), std::greater<>());
  } else if (value > heap.front()) {
    std::pop_heap(heap.begin(), heap.end(), std::greater<>());
    heap.back() = value;
    std::push_heap(heap.begin(), heap.end(), std::greater<>());
  }
}

bool SelectionState::topk_full(std::size_t j) const {
  return topk_[j].size() == static_cast<std::size_t>(problem_->k());
}

double SelectionState::kth_value(std::size_t j) const { return topk_[j].front(); }

double SelectionState::gain(std::size_t c) const {
  const SelectionProblem& p = *problem_;
  double first = 0.0;
  for (std::size_t j = 0; j < p.num_novel(); ++j) {
    const double v = p.sim(c, j);
    const auto& heap = topk_[j];
    if (heap.size() < static_cast<std::size_t>(p.k())) {
      first += v;  // short set: every new similarity enters the padded top-K sum
    } else if (v > heap.front()) {
      first += v - heap.front();
    }
  }
  return first * first_term_scale_ - p.candidate_novel_sum(c) * second_term_scale_;
}

double SelectionState::push(std::size_t c) {
  if (chosen_mask_[c]) {
    throw Error("already-chosen", "class '" + problem_->candidates()[c] + "' already chosen");
  }
  double g = gain(c);
  for (std::size_t j = 0; j < problem_->num_novel(); ++j) feed(j, problem_->sim(c, j));
  chosen_mask_[c] = 1;
  chosen_.push_back(problem_->candidates()[c]);
  return g;
}

double SelectionState::objective_value() const {
  double first = 0.0, second = 0.0;
  for (std::size_t j = 0; j < topk_.size(); ++j) {
    for (double v : topk_[j]) first += v;
    second += sum_all_[j];
  }
  return first * first_term_scale_ - second * second_term_scale_;
}

double marginal_gain(const SelectionProblem& problem, const SelectionState& state,
                     const ClassId& u) {
  auto c = problem.candidate_index(u);
  if (!c) throw Error("not-a-candidate", "class '" + u + "' is not a candidate");
  if (state.is_chosen(*c)) throw Error("already-chosen", "class '" + u + "' already chosen");
  return state.gain(*c);
}

std::vector<SimilarityRatioEntry> similarity_ratio(const SelectionProblem& problem,
                                                   const std::vector<ClassId>& chosen) {
  std::vector<std::size_t> idx = resolve_chosen(problem, chosen);
  const std::size_t count = problem.num_preselected() + idx.size();
  if (count == 0) throw Error("empty-base", "similarity ratio over an empty base set");
  std::vector<SimilarityRatioEntry> out;
  out.reserve(problem.num_novel());
  for (std::size_t j = 0; j < problem.num_novel(); ++j) {
    double topk = 0.0, full = 0.0;
    accumulate_novel(problem, idx, j, topk, full);
    SimilarityRatioEntry e;
    e.novel = problem.novel()[j];
    e.numerator = topk / std::min<std::size_t>(problem.k(), count);
    e.denominator = full / count;
    if (e.denominator == 0.0) {
      e.defined = false;
      e.ratio = std::numeric_limits<double>::quiet_NaN();
    } else {
      e.ratio = e.numerator / e.denominator;
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace basesel
