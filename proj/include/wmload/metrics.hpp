#pragma once

#include <span>
#include <vector>

#include "wmload/syntax_tree.hpp"

namespace wmload {

// Open-node counts u_1..u_n of one sentence, one per word in word order.
class OpenNodeProfile {
 public:
  // Throws EmptyInput on an empty list and DomainError on a count < 1.
  explicit OpenNodeProfile(std::vector<int> counts);

  std::span<const int> counts() const noexcept { return counts_; }
  std::size_t size() const noexcept { return counts_.size(); }

  friend bool operator==(const OpenNodeProfile&, const OpenNodeProfile&) = default;

 private:
  std::vector<int> counts_;
};

struct MetricConfig {
  double sigma = 1.0;

  // Throws DomainError unless sigma is finite and positive.
  void validate() const;
};

struct ThetaEstimate {
  double theta_mle = 0.0;
};

struct EntropyResult {
  double h_bits = 0.0;
};

// Every edge from a parent into its (j+1)-th child contributes 1 + j; a
// word's count is the sum along its path from the outermost root.
OpenNodeProfile open_node_counts(const SyntaxTree& tree);

// Mean of the counts; the argmax of the Gaussian likelihood for any sigma.
ThetaEstimate theta_mle(const OpenNodeProfile& profile);

// exp(-((u - theta) / sigma)^2 / 2)
double gaussian_match(int u, double theta, const MetricConfig& cfg);

// Product of gaussian_match over the profile. Underflows to 0 for long,
// badly matched profiles; use log_likelihood there.
double likelihood(const OpenNodeProfile& profile, double theta, const MetricConfig& cfg);
double log_likelihood(const OpenNodeProfile& profile, double theta, const MetricConfig& cfg);

// Entropy in bits of the empirical distribution of the counts.
EntropyResult shannon_entropy(const OpenNodeProfile& profile);

}  // namespace wmload
