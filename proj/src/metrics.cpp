#include "qosketch/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace qosketch {

double hits_at_k(std::span<const double> pos_scores,
                 std::span<const double> neg_scores, std::size_t k) {
  if (pos_scores.empty() || neg_scores.empty())
    throw std::invalid_argument("hits_at_k: empty score sequence");
  if (k == 0 || k > neg_scores.size())
    throw std::invalid_argument("hits_at_k: k out of range");
  std::vector<double> neg(neg_scores.begin(), neg_scores.end());
  std::nth_element(neg.begin(), neg.begin() + (k - 1), neg.end(),
                   std::greater<double>());
  const double threshold = neg[k - 1];
  std::size_t above = 0;
  for (double s : pos_scores)
    if (s > threshold) ++above;
  return static_cast<double>(above) / static_cast<double>(pos_scores.size());
}

double mrr(std::span<const double> pos_scores,
           std::span<const std::vector<double>> neg_scores_per_pos) {
  if (pos_scores.empty() || neg_scores_per_pos.size() != pos_scores.size())
    throw std::invalid_argument("mrr: positives/candidates mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < pos_scores.size(); ++i) {
    const auto& negs = neg_scores_per_pos[i];
    if (negs.empty()) throw std::invalid_argument("mrr: empty candidate set");
    std::size_t rank = 1;
    for (double s : negs)
      if (s >= pos_scores[i]) ++rank;
    total += 1.0 / static_cast<double>(rank);
  }
  return total / static_cast<double>(pos_scores.size());
}

}  // namespace qosketch
