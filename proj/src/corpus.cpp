#include "wmload/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "json.hpp"

#include "wmload/csv.hpp"
#include "wmload/error.hpp"
#include "wmload/parallel.hpp"
#include "wmload/structure_gen.hpp"

namespace wmload {

CorpusFormat parse_corpus_format(const std::string& name) {
  if (name == "jsonl") return CorpusFormat::Jsonl;
  if (name == "bracketed") return CorpusFormat::Bracketed;
  throw ConfigError("unknown corpus format '" + name + "'");
}

namespace {

using nlohmann::json;

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

bool valid_atom(const std::string& token) {
  if (token.empty()) return false;
  return std::none_of(token.begin(), token.end(), [](char c) {
    return c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c));
  });
}

Node node_from_json(const json& value) {
  if (value.is_string()) {
    auto token = value.get<std::string>();
    if (!valid_atom(token)) {
      throw std::invalid_argument("leaf '" + token + "' is empty or holds whitespace/parentheses");
    }
    return Node::leaf(std::move(token));
  }
  if (!value.is_array()) {
    throw std::invalid_argument("tree nodes must be strings or arrays");
  }
  if (value.empty()) {
    throw std::invalid_argument("empty array in tree");
  }
  std::vector<Node> kids;
  kids.reserve(value.size());
  for (const auto& child : value) {
    kids.push_back(node_from_json(child));
  }
  return Node::internal(std::move(kids));
}

SyntaxTree normalize(SyntaxTree tree, const IngestOptions& options) {
  if (options.drop_punct) {
    tree = drop_leaves_if(tree, [](const std::string& t) { return is_punctuation_token(t); });
  }
  if (options.collapse_unary) {
    tree = collapse_unary(tree);
  }
  return tree;
}

SyntaxTree bracketed_tree(const std::string& text, const IngestOptions& options) {
  ParseOptions parse;
  parse.strip_labels = options.strip_labels;
  return normalize(parse_bracketed(text, parse), options);
}

CorpusDocument document_from_json(const std::string& line, const IngestOptions& options) {
  const json obj = json::parse(line);
  if (!obj.is_object()) {
    throw std::invalid_argument("line is not a JSON object");
  }
  auto string_field = [&](const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
      throw std::invalid_argument("missing string field '" + key + "'");
    }
    return it->get<std::string>();
  };
  CorpusDocument doc{string_field("id"), string_field(options.group_key),
                     SyntaxTree(Node::leaf("_")), {}};
  if (doc.group.empty()) {
    throw std::invalid_argument("empty group");
  }
  const bool has_tree = obj.contains("tree");
  const bool has_bracketed = obj.contains("bracketed");
  if (has_tree == has_bracketed) {
    throw std::invalid_argument("need exactly one of 'tree' or 'bracketed'");
  }
  if (has_tree) {
    const json& tree = obj.at("tree");
    if (!tree.is_array()) {
      throw std::invalid_argument("'tree' must be an array");
    }
    doc.tree = normalize(SyntaxTree(node_from_json(tree)), options);
  } else {
    doc.tree = bracketed_tree(string_field("bracketed"), options);
  }
  doc.tokens = doc.tree.leaves();
  return doc;
}

}  // namespace

std::vector<CorpusDocument> ingest(std::istream& in, CorpusFormat format,
                                   const IngestOptions& options) {
  std::vector<CorpusDocument> docs;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    CorpusDocument doc{{}, {}, SyntaxTree(Node::leaf("_")), {}};
    try {
      if (format == CorpusFormat::Jsonl) {
        doc = document_from_json(line, options);
      } else {
        doc = CorpusDocument{std::to_string(line_no), options.default_group,
                             bracketed_tree(line, options), {}};
        doc.tokens = doc.tree.leaves();
      }
    } catch (const json::exception& e) {
      throw IngestError(line_no, e.what());
    } catch (const Error& e) {
      throw IngestError(line_no, e.what());
    } catch (const std::invalid_argument& e) {
      throw IngestError(line_no, e.what());
    }
    if (!seen.insert(doc.id).second) {
      throw IngestError(line_no, "duplicate id '" + doc.id + "'");
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

FilterBounds FilterBounds::keep_all() {
  const double inf = std::numeric_limits<double>::infinity();
  return {-inf, inf, inf, -inf, inf};
}

double quantile_linear(std::span<const double> sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

FilterBounds iqr_filter(std::span<const int> lengths) {
  if (lengths.empty()) {
    throw EmptyInput("sentence lengths");
  }
  std::vector<double> sorted(lengths.begin(), lengths.end());
  std::sort(sorted.begin(), sorted.end());
  FilterBounds b;
  b.q1 = quantile_linear(sorted, 0.25);
  b.q3 = quantile_linear(sorted, 0.75);
  b.iqr = b.q3 - b.q1;
  b.lower = b.q1 - 1.5 * b.iqr;
  b.upper = b.q3 + 1.5 * b.iqr;
  return b;
}

std::vector<SentenceRecord> analyze(std::span<const CorpusDocument> documents,
                                    const std::optional<FilterBounds>& bounds,
                                    const MetricConfig& cfg, int workers) {
  cfg.validate();
  std::vector<SentenceRecord> records(documents.size());
  parallel_for(documents.size(), workers, [&](std::size_t i) {
    const auto& doc = documents[i];
    const auto profile = open_node_counts(doc.tree);
    auto& r = records[i];
    r.id = doc.id;
    r.group = doc.group;
    r.length = static_cast<int>(profile.size());
    r.theta_hier = theta_mle(profile).theta_mle;
    r.theta_linear = *closed_form_theta(MechanismKind::linear(), r.length);
    r.entropy_bits = shannon_entropy(profile).h_bits;
  });
  if (records.empty()) {
    return records;
  }
  FilterBounds active;
  if (bounds) {
    active = *bounds;
  } else {
    std::vector<int> lengths;
    lengths.reserve(records.size());
    for (const auto& r : records) lengths.push_back(r.length);
    active = iqr_filter(lengths);
  }
  for (auto& r : records) {
    r.kept = active.contains(r.length);
  }
  return records;
}

namespace {

// Kept records grouped by name; each group sorted by id so that sums do not
// depend on input order.
std::map<std::string, std::vector<const SentenceRecord*>> kept_by_group(
    std::span<const SentenceRecord> records) {
  if (records.empty()) {
    throw EmptyInput("sentence records");
  }
  std::map<std::string, std::vector<const SentenceRecord*>> groups;
  for (const auto& r : records) {
    if (r.kept) groups[r.group].push_back(&r);
  }
  if (groups.empty()) {
    throw EmptyAfterFilter();
  }
  for (auto& [name, members] : groups) {
    std::sort(members.begin(), members.end(),
              [](const SentenceRecord* a, const SentenceRecord* b) { return a->id < b->id; });
  }
  return groups;
}

std::pair<double, double> mean_sd(const std::vector<const SentenceRecord*>& members) {
  const double n = static_cast<double>(members.size());
  double sum = 0.0;
  for (const auto* r : members) sum += r->length;
  const double mean = sum / n;
  double ss = 0.0;
  for (const auto* r : members) ss += (r->length - mean) * (r->length - mean);
  return {mean, std::sqrt(ss / n)};
}

}  // namespace

std::vector<GroupSummary> aggregate(std::span<const SentenceRecord> records) {
  std::vector<GroupSummary> out;
  for (const auto& [name, members] : kept_by_group(records)) {
    GroupSummary g;
    g.group = name;
    g.sentence_count = static_cast<int>(members.size());
    std::tie(g.mean_length, g.sd_length) = mean_sd(members);

    std::map<int, LengthCurveRow> by_length;
    double hier = 0.0;
    double lin = 0.0;
    for (const auto* r : members) {
      hier += r->theta_hier;
      lin += r->theta_linear;
      auto& row = by_length[r->length];
      row.length = r->length;
      row.mean_theta_hier += r->theta_hier;
      row.mean_theta_linear += r->theta_linear;
      ++row.count;
    }
    g.mean_theta_hier = hier / g.sentence_count;
    g.mean_theta_linear = lin / g.sentence_count;
    for (auto& [len, row] : by_length) {
      row.mean_theta_hier /= row.count;
      row.mean_theta_linear /= row.count;
      g.curve.push_back(row);
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<DescriptiveRow> descriptive_stats(std::span<const SentenceRecord> records) {
  std::vector<DescriptiveRow> out;
  for (const auto& [name, members] : kept_by_group(records)) {
    DescriptiveRow row;
    row.group = name;
    row.count = static_cast<int>(members.size());
    std::tie(row.mean_length, row.sd_length) = mean_sd(members);
    std::vector<double> sorted;
    sorted.reserve(members.size());
    for (const auto* r : members) sorted.push_back(r->length);
    std::sort(sorted.begin(), sorted.end());
    row.min_length = static_cast<int>(sorted.front());
    row.max_length = static_cast<int>(sorted.back());
    row.q1 = quantile_linear(sorted, 0.25);
    row.q3 = quantile_linear(sorted, 0.75);
    out.push_back(std::move(row));
  }
  return out;
}

void write_sentences_csv(std::ostream& out, std::span<const SentenceRecord> records) {
  std::vector<const SentenceRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const SentenceRecord* a, const SentenceRecord* b) {
    return std::tie(a->group, a->id) < std::tie(b->group, b->id);
  });
  out << "id,group,length,theta_hier,theta_linear,entropy_bits,kept\n";
  for (const auto* r : sorted) {
    out << csv_field(r->id) << ',' << csv_field(r->group) << ',' << r->length << ',' << format_number(r->theta_hier)
        << ',' << format_number(r->theta_linear) << ',' << format_number(r->entropy_bits) << ','
        << (r->kept ? "true" : "false") << '\n';
  }
}

void write_summary_csv(std::ostream& out, std::span<const GroupSummary> groups) {
  out << "group,count,mean_length,sd_length,mean_theta_hier,mean_theta_linear\n";
  for (const auto& g : groups) {
    out << csv_field(g.group) << ',' << g.sentence_count << ',' << format_number(g.mean_length) << ','
        << format_number(g.sd_length) << ',' << format_number(g.mean_theta_hier) << ','
        << format_number(g.mean_theta_linear) << '\n';
  }
}

void write_curves_csv(std::ostream& out, std::span<const GroupSummary> groups) {
  out << "group,length,mean_theta_hier,mean_theta_linear,count\n";
  for (const auto& g : groups) {
    for (const auto& row : g.curve) {
      out << csv_field(g.group) << ',' << row.length << ',' << format_number(row.mean_theta_hier) << ','
          << format_number(row.mean_theta_linear) << ',' << row.count << '\n';
    }
  }
}

void write_descriptive_csv(std::ostream& out, std::span<const DescriptiveRow> rows) {
  out << "group,count,mean_length,sd_length,min_length,max_length,q1,q3\n";
  for (const auto& r : rows) {
    out << csv_field(r.group) << ',' << r.count << ',' << format_number(r.mean_length) << ','
        << format_number(r.sd_length) << ',' << r.min_length << ',' << r.max_length << ','
        << format_number(r.q1) << ',' << format_number(r.q3) << '\n';
  }
}

}  // namespace wmload
