#ifndef BASESEL_BASELINES_HPP
#define BASESEL_BASELINES_HPP

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "basesel/types.hpp"

namespace basesel {

/// Uniform m-subset of the candidates, without replacement.
SelectionResult random_select(const SelectionProblem& problem, std::uint64_t seed);

/// Top-m candidates by mean similarity across the novel columns (the
/// matrix-level fallback when no embeddings are available).
SelectionResult domain_similarity_select(const SelectionProblem& problem);

/// Top-m candidates by cosine against the unnormalized mean of the novel
/// centroids, the target-domain representation.
SelectionResult domain_similarity_select(const SelectionProblem& problem,
                                         const EmbeddingTable& base,
                                         const EmbeddingTable& novel);

struct PamResult {
  std::vector<std::size_t> medoids;  // sorted
  double build_cost = 0.0;           // total dissimilarity after BUILD
  double final_cost = 0.0;           // after SWAP converges
};

/// PAM over a dense dissimilarity matrix (row-major n x n): greedy BUILD,
/// then best-improvement SWAP until no swap helps.
PamResult pam_medoids(const std::vector<double>& dissimilarity, std::size_t n, std::size_t m);

/// K-medoids over the candidate centroids with dissimilarity 1 - cosine; the
/// m medoids are the selection. Deterministic; the seed is reserved for
/// randomized restarts, which are not enabled.
SelectionResult k_medoids_select(const SelectionProblem& problem, const EmbeddingTable& candidates,
                                 std::uint64_t seed);

struct RegressionSample {
  double acc;
  double x1;
  double x2;
};

struct RegressionFit {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double alpha = 0.0;
  double r_squared = 0.0;
  std::array<double, 3> ci95{};  // half-widths for beta1, beta2, alpha
};

/// OLS of acc on (x1, x2) with intercept; normal-theory 95% intervals.
RegressionFit fit_sr_regression(const std::vector<RegressionSample>& samples);

struct SyntheticWorldConfig {
  int clusters = 5;
  int classes_per_cluster = 20;
  int novel_classes = 10;
  int dim = 16;
  double intra_spread = 0.1;
  double inter_spread = 1.0;
  std::uint64_t seed = 0;
};

/// Clustered gaussian world: cluster centers at scale inter_spread, class
/// centroids at center + noise of scale intra_spread; novel classes sample a
/// cluster uniformly and follow the same noise process.
std::pair<EmbeddingTable, EmbeddingTable> generate_synthetic_world(
    const SyntheticWorldConfig& config);

}  // namespace basesel

#endif
