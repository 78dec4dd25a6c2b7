#pragma once

#include <span>
#include <vector>

namespace qosketch {

/// Fraction of positives scoring strictly above the k-th highest negative.
/// Ties count against the positive. Throws if k > |neg| or either side empty.
double hits_at_k(std::span<const double> pos_scores,
                 std::span<const double> neg_scores, std::size_t k);

/// Mean reciprocal rank: each positive is ranked against its own candidate
/// set; rank = 1 + #(negatives with score >= positive).
double mrr(std::span<const double> pos_scores,
           std::span<const std::vector<double>> neg_scores_per_pos);

}  // namespace qosketch
