#ifndef BASESEL_TYPES_HPP
#define BASESEL_TYPES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace basesel {

/// Domain error with a stable machine-readable code plus a human message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

using ClassId = std::string;
using Centroid = std::vector<double>;

/// Ordered id -> centroid table; all centroids share one dimension.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;

  void add(const ClassId& id, Centroid centroid);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }
  bool contains(const ClassId& id) const { return entries_.count(id) > 0; }
  const Centroid& at(const ClassId& id) const;

  std::vector<ClassId> ids() const;  // sorted
  const std::map<ClassId, Centroid>& entries() const { return entries_; }

 private:
  std::map<ClassId, Centroid> entries_;
  std::size_t dim_ = 0;
};

/// Dense base x novel similarity table. Axis order is sorted id order.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  SimilarityMatrix(std::vector<ClassId> base_ids, std::vector<ClassId> novel_ids,
                   std::vector<double> values);  // row-major |base| x |novel|

  const std::vector<ClassId>& base_ids() const { return base_ids_; }
  const std::vector<ClassId>& novel_ids() const { return novel_ids_; }

  std::size_t rows() const { return base_ids_.size(); }
  std::size_t cols() const { return novel_ids_.size(); }

  double at(std::size_t base_index, std::size_t novel_index) const {
    return values_[base_index * novel_ids_.size() + novel_index];
  }
  double at(const ClassId& base, const ClassId& novel) const;

  std::optional<std::size_t> base_index(const ClassId& id) const;
  std::optional<std::size_t> novel_index(const ClassId& id) const;

  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<ClassId> base_ids_;
  std::vector<ClassId> novel_ids_;
  std::vector<double> values_;
  std::unordered_map<ClassId, std::size_t> base_lookup_;
  std::unordered_map<ClassId, std::size_t> novel_lookup_;
};

double cosine_similarity(const Centroid& a, const Centroid& b);

/// Entry (b, n) = cosine of the two centroids; axes follow sorted id order.
SimilarityMatrix build_similarity_matrix(const EmbeddingTable& base,
                                         const EmbeddingTable& novel);

/// One selection instance: (B_u, B_s, N, m, K, lambda) plus the matrix.
///
/// Candidate/preselected ids resolve against the matrix base axis, novel ids
/// against the novel axis. Similarities are cached densely per candidate and
/// per preselected class so engines never touch id lookups in a hot loop.
class SelectionProblem {
 public:
  SelectionProblem(SimilarityMatrix matrix, std::vector<ClassId> candidates,
                   std::vector<ClassId> preselected, std::vector<ClassId> novel,
                   int m, int k, double lambda);

  const SimilarityMatrix& matrix() const { return matrix_; }
  const std::vector<ClassId>& candidates() const { return candidates_; }
  const std::vector<ClassId>& preselected() const { return preselected_; }
  const std::vector<ClassId>& novel() const { return novel_; }

  int m() const { return m_; }
  int k() const { return k_; }
  double lambda() const { return lambda_; }

  std::size_t num_candidates() const { return candidates_.size(); }
  std::size_t num_preselected() const { return preselected_.size(); }
  std::size_t num_novel() const { return novel_.size(); }
  std::size_t base_size() const { return candidates_.size() + preselected_.size(); }

  // f(c_n, c_u) for candidate index c and novel index j (both in problem order).
  double sim(std::size_t c, std::size_t j) const { return cand_sims_[c * novel_.size() + j]; }
  double pre_sim(std::size_t p, std::size_t j) const { return pre_sims_[p * novel_.size() + j]; }

  // Sum over novel classes of f(c_n, c_u); the lambda-term row sum.
  double candidate_novel_sum(std::size_t c) const { return cand_novel_sums_[c]; }

  std::optional<std::size_t> candidate_index(const ClassId& id) const;

 private:
  SimilarityMatrix matrix_;
  std::vector<ClassId> candidates_;
  std::vector<ClassId> preselected_;
  std::vector<ClassId> novel_;
  int m_;
  int k_;
  double lambda_;

  std::vector<double> cand_sims_;   // |B_u| x |N|
  std::vector<double> pre_sims_;    // |B_s| x |N|
  std::vector<double> cand_novel_sums_;
  std::unordered_map<ClassId, std::size_t> candidate_lookup_;
};

struct SelectionResult {
  std::vector<ClassId> chosen;      // in selection order, |chosen| = m
  double objective = 0.0;           // fresh Eq-style recomputation on chosen
  std::vector<double> step_gains;   // per-step accepted marginal gains (greedy engines)
  std::string algorithm;
  std::optional<std::uint64_t> seed;
  double elapsed_seconds = 0.0;
};

}  // namespace basesel

#endif
