#include "wmload/metrics.hpp"

#include <cmath>
#include <map>
#include <utility>

#include "wmload/error.hpp"

namespace wmload {

OpenNodeProfile::OpenNodeProfile(std::vector<int> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) {
    throw EmptyInput("open-node profile");
  }
  for (int u : counts_) {
    if (u < 1) {
      throw DomainError("open-node count must be >= 1");
    }
  }
}

void MetricConfig::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("sigma must be positive");
  }
}

namespace {

void accumulate_counts(const Node& node, int base, std::vector<int>& out) {
  const auto& kids = node.children();
  for (std::size_t j = 0; j < kids.size(); ++j) {
    const int u = base + 1 + static_cast<int>(j);
    if (kids[j].is_leaf()) {
      out.push_back(u);
    } else {
      accumulate_counts(kids[j], u, out);
    }
  }
}

}  // namespace

OpenNodeProfile open_node_counts(const SyntaxTree& tree) {
  std::vector<int> counts;
  accumulate_counts(tree.root(), 0, counts);
  return OpenNodeProfile(std::move(counts));
}

ThetaEstimate theta_mle(const OpenNodeProfile& profile) {
  long long sum = 0;
  for (int u : profile.counts()) {
    sum += u;
  }
  return {static_cast<double>(sum) / static_cast<double>(profile.size())};
}

double gaussian_match(int u, double theta, const MetricConfig& cfg) {
  cfg.validate();
  const double z = (static_cast<double>(u) - theta) / cfg.sigma;
  return std::exp(-0.5 * z * z);
}

double log_likelihood(const OpenNodeProfile& profile, double theta, const MetricConfig& cfg) {
  cfg.validate();
  double acc = 0.0;
  for (int u : profile.counts()) {
    const double z = (static_cast<double>(u) - theta) / cfg.sigma;
    acc -= 0.5 * z * z;
  }
  return acc;
}

double likelihood(const OpenNodeProfile& profile, double theta, const MetricConfig& cfg) {
  double product = 1.0;
  for (int u : profile.counts()) {
    product *= gaussian_match(u, theta, cfg);
  }
  return product;
}

EntropyResult shannon_entropy(const OpenNodeProfile& profile) {
  // std::map iterates counts in ascending order, which fixes the summation order.
  std::map<int, std::size_t> freq;
  for (int u : profile.counts()) {
    ++freq[u];
  }
  const double n = static_cast<double>(profile.size());
  double h = 0.0;
  for (const auto& [value, count] : freq) {
    const double p = static_cast<double>(count) / n;
    h -= p * std::log2(p);
  }
  return {h == 0.0 ? 0.0 : h};
}

}  // namespace wmload
