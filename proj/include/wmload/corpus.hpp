#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "wmload/metrics.hpp"
#include "wmload/syntax_tree.hpp"

namespace wmload {

struct CorpusDocument {
  std::string id;
  std::string group;
  SyntaxTree tree;
  std::vector<std::string> tokens;  // leaf sequence of `tree`
};

enum class CorpusFormat { Jsonl, Bracketed };

// "jsonl" or "bracketed"; throws ConfigError otherwise.
CorpusFormat parse_corpus_format(const std::string& name);

struct IngestOptions {
  bool strip_labels = true;
  bool collapse_unary = true;
  bool drop_punct = false;
  std::string group_key = "group";
  // Group of every line in bracketed format, which carries no metadata.
  std::string default_group = "corpus";
};

// JSONL lines are objects with string `id`, string group (under group_key)
// and exactly one of `tree` (nested arrays of strings) or `bracketed`.
// Bracketed lines hold one tree each and are identified by line number.
// Blank lines are skipped. Throws IngestError naming the offending line.
std::vector<CorpusDocument> ingest(std::istream& in, CorpusFormat format,
                                   const IngestOptions& options = {});

// Sentence-length fences q1 - 1.5 iqr .. q3 + 1.5 iqr.
struct FilterBounds {
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double length) const noexcept { return length >= lower && length <= upper; }
  static FilterBounds keep_all();
};

// Quantile by linear interpolation between order statistics at (n - 1) p.
// `sorted` must be ascending and non-empty.
double quantile_linear(std::span<const double> sorted, double p);

// Throws EmptyInput on an empty list.
FilterBounds iqr_filter(std::span<const int> lengths);

struct SentenceRecord {
  std::string id;
  std::string group;
  int length = 0;
  double theta_hier = 0.0;
  double theta_linear = 0.0;
  double entropy_bits = 0.0;
  bool kept = true;
};

// Per-sentence metrics in input order. Bounds default to iqr_filter over the
// documents' own lengths.
std::vector<SentenceRecord> analyze(std::span<const CorpusDocument> documents,
                                    const std::optional<FilterBounds>& bounds,
                                    const MetricConfig& cfg = {}, int workers = 1);

struct LengthCurveRow {
  int length = 0;
  double mean_theta_hier = 0.0;
  double mean_theta_linear = 0.0;
  int count = 0;
};

struct GroupSummary {
  std::string group;
  int sentence_count = 0;
  double mean_length = 0.0;
  double sd_length = 0.0;  // population sd
  double mean_theta_hier = 0.0;
  double mean_theta_linear = 0.0;
  std::vector<LengthCurveRow> curve;  // ascending length
};

// Kept records only, groups in lexicographic order. Throws EmptyInput for no
// records and EmptyAfterFilter when none is kept.
std::vector<GroupSummary> aggregate(std::span<const SentenceRecord> records);

struct DescriptiveRow {
  std::string group;
  int count = 0;
  double mean_length = 0.0;
  double sd_length = 0.0;
  int min_length = 0;
  int max_length = 0;
  double q1 = 0.0;
  double q3 = 0.0;
};

// Length statistics per group over kept records; same errors as aggregate.
std::vector<DescriptiveRow> descriptive_stats(std::span<const SentenceRecord> records);

// id,group,length,theta_hier,theta_linear,entropy_bits,kept sorted by (group, id)
void write_sentences_csv(std::ostream& out, std::span<const SentenceRecord> records);
// group,count,mean_length,sd_length,mean_theta_hier,mean_theta_linear
void write_summary_csv(std::ostream& out, std::span<const GroupSummary> groups);
// group,length,mean_theta_hier,mean_theta_linear,count
void write_curves_csv(std::ostream& out, std::span<const GroupSummary> groups);
// group,count,mean_length,sd_length,min_length,max_length,q1,q3
void write_descriptive_csv(std::ostream& out, std::span<const DescriptiveRow> rows);

}  // namespace wmload
