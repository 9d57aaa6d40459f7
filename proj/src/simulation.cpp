#include "wmload/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "wmload/csv.hpp"
#include "wmload/error.hpp"
#include "wmload/metrics.hpp"
#include "wmload/parallel.hpp"

namespace wmload {

void SimConfig::validate() const {
  if (min_len < 1 || max_len < min_len) {
    throw ConfigError("length range must satisfy 1 <= min_len <= max_len");
  }
  if (tokens_per_length < 1) {
    throw ConfigError("tokens per length must be >= 1");
  }
  if (mechanisms.empty()) {
    throw ConfigError("no mechanism selected");
  }
  std::set<std::string> names;
  for (const auto& m : mechanisms) {
    m.validate();
    if (!names.insert(m.name()).second) {
      throw ConfigError("mechanism '" + m.name() + "' given twice");
    }
  }
  MetricConfig{sigma}.validate();
}

const SimRow* SimCurve::find(const std::string& mechanism, int length) const {
  for (const auto& r : rows) {
    if (r.length == length && r.mechanism.name() == mechanism) return &r;
  }
  return nullptr;
}

std::vector<SimRow> SimCurve::rows_for(const std::string& mechanism) const {
  std::vector<SimRow> out;
  for (const auto& r : rows) {
    if (r.mechanism.name() == mechanism) out.push_back(r);
  }
  return out;
}

namespace {

SimRow simulate_cell(const MechanismKind& mech, int length, const SimConfig& cfg) {
  SimRow row;
  row.mechanism = mech;
  row.length = length;
  row.tokens = cfg.tokens_per_length;

  if (mech.deterministic()) {
    const auto profile = open_node_counts(generate(mech, length, GenSeed{}));
    row.mean_theta = theta_mle(profile).theta_mle;
    row.mean_entropy_bits = shannon_entropy(profile).h_bits;
    return row;
  }

  std::vector<double> thetas(static_cast<std::size_t>(cfg.tokens_per_length));
  double entropy_sum = 0.0;
  for (int t = 0; t < cfg.tokens_per_length; ++t) {
    const GenSeed seed{cfg.seed, mech.stream_id(), static_cast<std::uint64_t>(length),
                       static_cast<std::uint64_t>(t)};
    const auto profile = open_node_counts(generate(mech, length, seed));
    thetas[static_cast<std::size_t>(t)] = theta_mle(profile).theta_mle;
    entropy_sum += shannon_entropy(profile).h_bits;
  }
  const double count = static_cast<double>(thetas.size());
  double sum = 0.0;
  for (double v : thetas) sum += v;
  const double mean = sum / count;
  double ss = 0.0;
  for (double v : thetas) ss += (v - mean) * (v - mean);
  row.mean_theta = mean;
  row.sd_theta = std::sqrt(ss / count);
  row.mean_entropy_bits = entropy_sum / count;
  return row;
}

}  // namespace

SimCurve run_simulation(const SimConfig& cfg) {
  cfg.validate();
  std::vector<MechanismKind> mechs = cfg.mechanisms;
  std::sort(mechs.begin(), mechs.end(),
            [](const MechanismKind& a, const MechanismKind& b) { return a.name() < b.name(); });

  const auto lengths = static_cast<std::size_t>(cfg.max_len - cfg.min_len + 1);
  SimCurve curve;
  curve.rows.resize(mechs.size() * lengths);
  parallel_for(curve.rows.size(), cfg.workers, [&](std::size_t cell) {
    const auto& mech = mechs[cell / lengths];
    const int length = cfg.min_len + static_cast<int>(cell % lengths);
    curve.rows[cell] = simulate_cell(mech, length, cfg);
  });
  return curve;
}

void write_sim_csv(std::ostream& out, const SimCurve& curve) {
  out << "mechanism,length,mean_theta,sd_theta,mean_entropy_bits,tokens\n";
  for (const auto& r : curve.rows) {
    out << r.mechanism.name() << ',' << r.length << ',' << format_number(r.mean_theta) << ','
        << format_number(r.sd_theta) << ',' << format_number(r.mean_entropy_bits) << ','
        << r.tokens << '\n';
  }
}

MechanismComparison compare_mechanisms(const SimCurve& curve, const CompareOptions& options) {
  const auto linear = curve.rows_for("linear");
  if (linear.empty()) {
    throw ConfigError("comparison needs the linear mechanism");
  }
  std::vector<std::string> hierarchical;
  for (const auto& r : curve.rows) {
    const std::string name = r.mechanism.name();
    if (name != "linear" &&
        std::find(hierarchical.begin(), hierarchical.end(), name) == hierarchical.end()) {
      hierarchical.push_back(name);
    }
  }
  if (hierarchical.empty()) {
    throw ConfigError("comparison needs a hierarchical mechanism");
  }

  MechanismComparison out;
  for (const auto& name : hierarchical) {
    std::vector<Point> points;
    for (const auto& r : curve.rows_for(name)) {
      if (const SimRow* lin = curve.find("linear", r.length)) {
        out.dominance.push_back({name, r.length, r.mean_theta / lin->mean_theta});
      }
      if (r.length >= options.fit_min_len && r.length <= options.fit_max_len) {
        points.push_back({static_cast<double>(r.length), r.mean_theta});
      }
    }
    if (points.size() > 2) {
      out.log_fits.push_back({name, fit(points, ModelSpec::log())});
    }
  }
  return out;
}

}  // namespace wmload
