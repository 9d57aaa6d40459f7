#pragma once

#include <climits>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wmload/stats_fit.hpp"
#include "wmload/structure_gen.hpp"

namespace wmload {

struct SimConfig {
  int min_len = 1;
  int max_len = 100;
  int tokens_per_length = 1000;
  std::vector<MechanismKind> mechanisms;
  std::uint64_t seed = 0;
  double sigma = 1.0;
  int workers = 1;

  // Throws ConfigError on an empty or inverted length range, a token count
  // below 1, no mechanisms, or two mechanisms sharing a name.
  void validate() const;
};

struct SimRow {
  MechanismKind mechanism;
  int length = 0;
  double mean_theta = 0.0;
  double sd_theta = 0.0;  // population sd
  double mean_entropy_bits = 0.0;
  int tokens = 0;
};

struct SimCurve {
  // Sorted by (mechanism name, length).
  std::vector<SimRow> rows;

  const SimRow* find(const std::string& mechanism, int length) const;
  std::vector<SimRow> rows_for(const std::string& mechanism) const;
};

// One row per (mechanism, length). Deterministic mechanisms are evaluated
// once per length; random ones average over tokens_per_length trees, each
// drawn from its own GenSeed stream. The result does not depend on workers.
SimCurve run_simulation(const SimConfig& cfg);

// Header: mechanism,length,mean_theta,sd_theta,mean_entropy_bits,tokens
void write_sim_csv(std::ostream& out, const SimCurve& curve);

struct CompareOptions {
  int fit_min_len = 5;
  int fit_max_len = INT_MAX;
};

struct DominanceRow {
  std::string mechanism;
  int length = 0;
  double ratio = 0.0;  // mean_theta(hierarchical) / mean_theta(linear)
};

struct LogFitSummary {
  std::string mechanism;
  FitResult fit;  // theta(n) = a + b ln n over the fit window
};

struct MechanismComparison {
  std::vector<DominanceRow> dominance;
  std::vector<LogFitSummary> log_fits;
};

// Throws ConfigError unless the curve holds "linear" and at least one other
// mechanism.
MechanismComparison compare_mechanisms(const SimCurve& curve, const CompareOptions& options = {});

}  // namespace wmload
