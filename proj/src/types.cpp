#include "basesel/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace basesel {

namespace {

void require_finite(const Centroid& c, const ClassId& id) {
  for (double v : c) {
    if (!std::isfinite(v)) throw Error("bad-centroid", "non-finite entry in centroid of '" + id + "'");
  }
}

}  // namespace

void EmbeddingTable::add(const ClassId& id, Centroid centroid) {
  if (id.empty()) throw Error("bad-id", "empty class id");
  if (centroid.empty()) throw Error("bad-centroid", "centroid of '" + id + "' has dimension 0");
  require_finite(centroid, id);
  if (entries_.empty()) {
    dim_ = centroid.size();
  } else if (centroid.size() != dim_) {
    throw Error("dim-mismatch", "centroid of '" + id + "' has dimension " +
                                    std::to_string(centroid.size()) + ", table has " +
                                    std::to_string(dim_));
  }
  if (!entries_.emplace(id, std::move(centroid)).second) {
    throw Error("duplicate-id", "class id '" + id + "' appears twice");
  }
}

const Centroid& EmbeddingTable::at(const ClassId& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw Error("unknown-id", "class id '" + id + "' not in table");
  return it->second;
}

std::vector<ClassId> EmbeddingTable::ids() const {
  std::vector<ClassId> out;
  out.reserve(entries_.size());
  for (const auto& [id, _] : entries_) out.push_back(id);
  return out;
}

double cosine_similarity(const Centroid& a, const Centroid& b) {
  if (a.size() != b.size()) {
    throw Error("dim-mismatch", "cosine of vectors with dimensions " + std::to_string(a.size()) +
                                    " and " + std::to_string(b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error("zero-vector", "cosine of an all-zero vector");
  double v = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(v, -1.0, 1.0);
}

SimilarityMatrix::SimilarityMatrix(std::vector<ClassId> base_ids, std::vector<ClassId> novel_ids,
                                   std::vector<double> values)
    : base_ids_(std::move(base_ids)), novel_ids_(std::move(novel_ids)), values_(std::move(values)) {
  if (values_.size() != base_ids_.size() * novel_ids_.size()) {
    throw Error("bad-shape", "similarity matrix has " + std::to_string(values_.size()) +
                                 " entries, expected " +
                                 std::to_string(base_ids_.size() * novel_ids_.size()));
  }
  for (double& v : values_) {
    if (!std::isfinite(v)) throw Error("bad-entry", "non-finite similarity entry");
    if (v < -1.0 - 1e-9 || v > 1.0 + 1e-9) {
      throw Error("bad-entry", "similarity entry outside [-1, 1]");
    }
    v = std::clamp(v, -1.0, 1.0);
  }
  for (std::size_t i = 0; i < base_ids_.size(); ++i) {
    if (base_ids_[i].empty()) throw Error("bad-id", "empty base id");
    if (!base_lookup_.emplace(base_ids_[i], i).second) {
      throw Error("duplicate-id", "base id '" + base_ids_[i] + "' appears twice");
    }
  }
  for (std::size_t j = 0; j < novel_ids_.size(); ++j) {
    if (novel_ids_[j].empty()) throw Error("bad-id", "empty novel id");
    if (!novel_lookup_.emplace(novel_ids_[j], j).second) {
      throw Error("duplicate-id", "novel id '" + novel_ids_[j] + "' appears twice");
    }
  }
}

double SimilarityMatrix::at(const ClassId& base, const ClassId& novel) const {
  auto bi = base_index(base);
  auto nj = novel_index(novel);
  if (!bi) throw Error("unknown-id", "base id '" + base + "' not in matrix");
  if (!nj) throw Error("unknown-id", "novel id '" + novel + "' not in matrix");
  return at(*bi, *nj);
}

std::optional<std::size_t> SimilarityMatrix::base_index(const ClassId& id) const {
  auto it = base_lookup_.find(id);
  if (it == base_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> SimilarityMatrix::novel_index(const ClassId& id) const {
  auto it = novel_lookup_.find(id);
  if (it == novel_lookup_.end()) return std::nullopt;
  return it->second;
}

SimilarityMatrix build_similarity_matrix(const EmbeddingTable& base, const EmbeddingTable& novel) {
  if (base.size() == 0 || novel.size() == 0) {
    throw Error("empty-table", "similarity matrix needs nonempty base and novel tables");
  }
  if (base.dim() != novel.dim()) {
    throw Error("dim-mismatch", "base table dimension " + std::to_string(base.dim()) +
                                    " vs novel table dimension " + std::to_string(novel.dim()));
  }
  std::vector<ClassId> base_ids = base.ids();
  std::vector<ClassId> novel_ids = novel.ids();
  std::vector<double> values(base_ids.size() * novel_ids.size());
  for (std::size_t i = 0; i < base_ids.size(); ++i) {
    const Centroid& cb = base.at(base_ids[i]);
    for (std::size_t j = 0; j < novel_ids.size(); ++j) {
      values[i * novel_ids.size() + j] = cosine_similarity(cb, novel.at(novel_ids[j]));
    }
  }
  return SimilarityMatrix(std::move(base_ids), std::move(novel_ids), std::move(values));
}

SelectionProblem::SelectionProblem(SimilarityMatrix matrix, std::vector<ClassId> candidates,
                                   std::vector<ClassId> preselected, std::vector<ClassId> novel,
                                   int m, int k, double lambda)
    : matrix_(std::move(matrix)),
      candidates_(std::move(candidates)),
      preselected_(std::move(preselected)),
      novel_(std::move(novel)),
      m_(m),
      k_(k),
      lambda_(lambda) {
  std::sort(candidates_.begin(), candidates_.end());
  std::sort(preselected_.begin(), preselected_.end());
  std::sort(novel_.begin(), novel_.end());
  if (std::adjacent_find(candidates_.begin(), candidates_.end()) != candidates_.end()) {
    throw Error("duplicate-id", "duplicate candidate id");
  }
  if (std::adjacent_find(preselected_.begin(), preselected_.end()) != preselected_.end()) {
    throw Error("duplicate-id", "duplicate preselected id");
  }
  if (std::adjacent_find(novel_.begin(), novel_.end()) != novel_.end()) {
    throw Error("duplicate-id", "duplicate novel id");
  }
  if (candidates_.empty()) throw Error("bad-problem", "no candidate classes");
  if (novel_.empty()) throw Error("bad-problem", "no novel classes");

  std::vector<ClassId> overlap;
  std::set_intersection(candidates_.begin(), candidates_.end(), preselected_.begin(),
                        preselected_.end(), std::back_inserter(overlap));
  if (!overlap.empty()) {
    throw Error("bad-problem", "class '" + overlap.front() + "' is both candidate and preselected");
  }
  if (m_ < 1 || static_cast<std::size_t>(m_) > candidates_.size()) {
    throw Error("bad-problem", "budget m=" + std::to_string(m_) + " outside [1, " +
                                   std::to_string(candidates_.size()) + "]");
  }
  if (k_ < 1) throw Error("bad-problem", "K must be >= 1");
  if (!(lambda_ >= 0.0)) throw Error("bad-problem", "lambda must be >= 0");

  std::vector<std::size_t> novel_cols(novel_.size());
  for (std::size_t j = 0; j < novel_.size(); ++j) {
    auto col = matrix_.novel_index(novel_[j]);
    if (!col) throw Error("unknown-id", "novel id '" + novel_[j] + "' not in matrix");
    novel_cols[j] = *col;
  }
  auto fill_sims = [&](const std::vector<ClassId>& ids, std::vector<double>& out) {
    out.resize(ids.size() * novel_.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      auto row = matrix_.base_index(ids[i]);
      if (!row) throw Error("unknown-id", "base id '" + ids[i] + "' not in matrix");
      for (std::size_t j = 0; j < novel_.size(); ++j) {
        out[i * novel_.size() + j] = matrix_.at(*row, novel_cols[j]);
      }
    }
  };
  fill_sims(candidates_, cand_sims_);
  fill_sims(preselected_, pre_sims_);

  cand_novel_sums_.resize(candidates_.size());
  for (std::size_t c = 0; c < candidates_.size(); ++c) {
    double s = 0.0;
    for (std::size_t j = 0; j < novel_.size(); ++j) s += sim(c, j);
    cand_novel_sums_[c] = s;
  }
  for (std::size_t c = 0; c < candidates_.size(); ++c) candidate_lookup_[candidates_[c]] = c;
}

std::optional<std::size_t> SelectionProblem::candidate_index(const ClassId& id) const {
  auto it = candidate_lookup_.find(id);
  if (it == candidate_lookup_.end()) return std::nullopt;
  return it->second;
}

}  // namespace basesel
