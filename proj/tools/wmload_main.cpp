// wmload: batch front end for the open-node working-memory metrics.
//
//   wmload simulate  generated-structure curves (CSV)
//   wmload analyze   corpus sentences, group summaries and length curves (CSV)
//   wmload stats     per-group sentence-length statistics (CSV)
//   wmload fit       nonlinear regression on x,y points (JSON)
//   wmload ttest     one-sample t-test on a value column (JSON)
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wmload/corpus.hpp"
#include "wmload/csv.hpp"
#include "wmload/distributions.hpp"
#include "wmload/error.hpp"
#include "wmload/simulation.hpp"
#include "wmload/stats_fit.hpp"

namespace {

namespace fs = std::filesystem;
using namespace wmload;

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

// Outputs are staged in memory and written once the command has succeeded,
// so a failing run never leaves partial files behind.
class Outputs {
 public:
  void add(const std::string& path, std::string content) {
    staged_.emplace_back(path, std::move(content));
  }

  void flush() const {
    for (const auto& [path, content] : staged_) {
      if (path.empty() || path == "-") {
        std::cout << content;
        continue;
      }
      std::ofstream out(path, std::ios::binary);
      if (!out) throw Error("cannot open '" + path + "' for writing");
      out << content;
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> staged_;
};

const CLI::Validator kWritablePath(
    [](std::string& path) -> std::string {
      if (path.empty() || path == "-") return {};
      const fs::path parent = fs::path(path).parent_path();
      if (!parent.empty() && !fs::is_directory(parent)) {
        return "output directory does not exist: " + parent.string();
      }
      return {};
    },
    "PATH");

struct IngestFlags {
  std::string input;
  std::string format = "jsonl";
  std::string group = "corpus";
  IngestOptions options;
  bool iqr_filter = false;
  double sigma = 1.0;
  int workers = 1;
};

void add_ingest_flags(CLI::App* cmd, IngestFlags& f) {
  cmd->add_option("--input", f.input, "Corpus file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--format", f.format, "jsonl or bracketed")
      ->check(CLI::IsMember({"jsonl", "bracketed"}))
      ->capture_default_str();
  cmd->add_option("--group", f.group, "Group label for bracketed input")->capture_default_str();
  cmd->add_option("--group-key", f.options.group_key, "JSONL field holding the group")
      ->capture_default_str();
  cmd->add_flag("--strip-labels,!--no-strip-labels", f.options.strip_labels,
                "Drop category labels from bracketed trees (default on)");
  cmd->add_flag("--collapse-unary,!--no-collapse-unary", f.options.collapse_unary,
                "Fuse unary internal chains (default on)");
  cmd->add_flag("--drop-punct", f.options.drop_punct, "Remove punctuation-only leaves");
  cmd->add_flag("--iqr-filter", f.iqr_filter, "Keep lengths within the 1.5 IQR fences");
  cmd->add_option("--sigma", f.sigma, "Gaussian match spread")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--workers", f.workers, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

std::vector<SentenceRecord> load_records(const IngestFlags& f) {
  std::ifstream in(f.input, std::ios::binary);
  if (!in) throw Error("cannot read '" + f.input + "'");
  IngestOptions options = f.options;
  options.default_group = f.group;
  const auto docs = ingest(in, parse_corpus_format(f.format), options);
  std::optional<FilterBounds> bounds;
  if (!f.iqr_filter) bounds = FilterBounds::keep_all();
  return analyze(docs, bounds, MetricConfig{f.sigma}, f.workers);
}

template <typename Write>
std::string render(Write&& write) {
  std::ostringstream os;
  write(os);
  return os.str();
}

std::string comparison_json(const MechanismComparison& cmp) {
  nlohmann::ordered_json j;
  j["dominance"] = nlohmann::ordered_json::array();
  for (const auto& d : cmp.dominance) {
    j["dominance"].push_back({{"mechanism", d.mechanism}, {"length", d.length}, {"ratio", d.ratio}});
  }
  j["log_fits"] = nlohmann::ordered_json::array();
  for (const auto& f : cmp.log_fits) {
    j["log_fits"].push_back({{"mechanism", f.mechanism},
                             {"fit", nlohmann::ordered_json::parse(to_json(f.fit))}});
  }
  return j.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open-node working-memory load metrics"};
  app.require_subcommand(1);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo curves over generated structures");
  std::vector<std::string> mechanisms;
  SimConfig sim;
  std::uint64_t seed = 0;
  int min_children = 1;
  int max_children = 4;
  std::string sim_out = "-";
  std::string compare_out;
  sim_cmd->add_option("--mechanism", mechanisms, "linear, binary, multi or all (repeatable)")
      ->required()
      ->check(CLI::IsMember({"linear", "binary", "multi", "all"}));
  sim_cmd->add_option("--min-len", sim.min_len, "Shortest length")->capture_default_str();
  sim_cmd->add_option("--max-len", sim.max_len, "Longest length")->capture_default_str();
  sim_cmd->add_option("--tokens", sim.tokens_per_length, "Structure tokens per length")
      ->capture_default_str();
  sim_cmd->add_option("--seed", seed, "Root random seed")->required();
  sim_cmd->add_option("--sigma", sim.sigma, "Gaussian match spread")->capture_default_str();
  sim_cmd->add_option("--min-children", min_children, "Multi-node smallest group")
      ->capture_default_str();
  sim_cmd->add_option("--max-children", max_children, "Multi-node largest group")
      ->capture_default_str();
  sim_cmd->add_option("--workers", sim.workers, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim_cmd->add_option("--out", sim_out, "Curve CSV (default stdout)")->check(kWritablePath);
  sim_cmd->add_option("--compare-out", compare_out, "Dominance and log-fit JSON")
      ->check(kWritablePath);

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "Per-sentence metrics and group curves");
  IngestFlags analyze_flags;
  std::string out_sentences;
  std::string out_summary;
  std::string out_curves;
  add_ingest_flags(analyze_cmd, analyze_flags);
  analyze_cmd->add_option("--out-sentences", out_sentences, "Sentence CSV")->check(kWritablePath);
  analyze_cmd->add_option("--out-summary", out_summary, "Group summary CSV")->check(kWritablePath);
  analyze_cmd->add_option("--out-curves", out_curves, "Per-length curve CSV")->check(kWritablePath);

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Descriptive sentence-length statistics");
  IngestFlags stats_flags;
  std::string stats_out = "-";
  add_ingest_flags(stats_cmd, stats_flags);
  stats_cmd->add_option("--out", stats_out, "Table CSV (default stdout)")->check(kWritablePath);

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Nonlinear regression on x,y points");
  std::string fit_input;
  std::string model_name = "log";
  std::vector<double> init;
  FitOptions fit_options;
  std::string fit_out = "-";
  fit_cmd->add_option("--input", fit_input, "CSV with header x,y")
      ->required()
      ->check(CLI::ExistingFile);
  fit_cmd->add_option("--model", model_name, "log or logistic")
      ->check(CLI::IsMember({"log", "logistic"}))
      ->capture_default_str();
  fit_cmd->add_option("--init", init, "Initial parameters")->delimiter(',');
  fit_cmd->add_option("--tol", fit_options.tol, "Relative SSE change tolerance")
      ->capture_default_str();
  fit_cmd->add_option("--max-iter", fit_options.max_iter, "Iteration limit")->capture_default_str();
  fit_cmd->add_option("--out", fit_out, "Result JSON (default stdout)")->check(kWritablePath);

  // ttest
  auto* ttest_cmd = app.add_subcommand("ttest", "One-sample two-sided t-test");
  std::string ttest_input;
  std::string column = "value";
  double mu0 = 0.0;
  std::string ttest_out = "-";
  ttest_cmd->add_option("--input", ttest_input, "CSV holding the value column")
      ->required()
      ->check(CLI::ExistingFile);
  ttest_cmd->add_option("--column", column, "Column to test")->capture_default_str();
  ttest_cmd->add_option("--mu0", mu0, "Null mean")->required();
  ttest_cmd->add_option("--out", ttest_out, "Result JSON (default stdout)")->check(kWritablePath);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsageError;
  }

  try {
    Outputs outputs;
    if (*sim_cmd) {
      for (const auto& name : mechanisms) {
        if (name == "all") {
          for (const char* each : {"binary", "linear", "multi"}) {
            sim.mechanisms.push_back(parse_mechanism(each, min_children, max_children));
          }
        } else {
          sim.mechanisms.push_back(parse_mechanism(name, min_children, max_children));
        }
      }
      sim.seed = seed;
      const SimCurve curve = run_simulation(sim);
      outputs.add(sim_out, render([&](std::ostream& os) { write_sim_csv(os, curve); }));
      if (!compare_out.empty()) {
        outputs.add(compare_out, comparison_json(compare_mechanisms(curve)));
      }
    } else if (*analyze_cmd) {
      const auto records = load_records(analyze_flags);
      if (out_sentences.empty() && out_summary.empty() && out_curves.empty()) {
        out_summary = "-";
      }
      if (!out_sentences.empty()) {
        outputs.add(out_sentences,
                    render([&](std::ostream& os) { write_sentences_csv(os, records); }));
      }
      if (!out_summary.empty() || !out_curves.empty()) {
        const auto groups = aggregate(records);
        if (!out_summary.empty()) {
          outputs.add(out_summary, render([&](std::ostream& os) { write_summary_csv(os, groups); }));
        }
        if (!out_curves.empty()) {
          outputs.add(out_curves, render([&](std::ostream& os) { write_curves_csv(os, groups); }));
        }
      }
    } else if (*stats_cmd) {
      const auto table = descriptive_stats(load_records(stats_flags));
      outputs.add(stats_out, render([&](std::ostream& os) { write_descriptive_csv(os, table); }));
    } else if (*fit_cmd) {
      std::ifstream in(fit_input, std::ios::binary);
      const auto cols = read_numeric_csv(in, {"x", "y"});
      std::vector<Point> points;
      for (std::size_t i = 0; i < cols[0].size(); ++i) points.push_back({cols[0][i], cols[1][i]});
      const ModelFamily family = model_name == "log" ? ModelFamily::Log : ModelFamily::Logistic;
      ModelSpec model = default_model(family, points);
      if (!init.empty()) model.initial = init;
      outputs.add(fit_out, to_json(fit(points, model, fit_options)));
    } else if (*ttest_cmd) {
      std::ifstream in(ttest_input, std::ios::binary);
      const auto cols = read_numeric_csv(in, {column});
      const TTestResult r = one_sample_test(cols[0], mu0);
      nlohmann::ordered_json j;
      j["t"] = r.t;
      j["df"] = r.df;
      j["p_two_sided"] = r.p_two_sided;
      j["mean"] = r.mean;
      j["sd"] = r.sd;
      j["n"] = cols[0].size();
      outputs.add(ttest_out, j.dump(2) + "\n");
    }
    outputs.flush();
  } catch (const ConfigError& e) {
    std::cerr << "wmload: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "wmload: " << e.what() << '\n';
    return kDataError;
  }
  return 0;
}
