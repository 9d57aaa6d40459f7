#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "wmload/corpus.hpp"
#include "wmload/error.hpp"
#include "wmload/structure_gen.hpp"

using namespace wmload;

namespace {

std::vector<CorpusDocument> ingest_text(const std::string& text,
                                        CorpusFormat format = CorpusFormat::Jsonl,
                                        IngestOptions options = {}) {
  std::istringstream in(text);
  return ingest(in, format, options);
}

std::vector<CorpusDocument> fixture() {
  std::ifstream in(WMLOAD_FIXTURE_DIR "/corpus20.jsonl");
  REQUIRE(in.good());
  return ingest(in, CorpusFormat::Jsonl);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename Write>
std::string render(Write&& write) {
  std::ostringstream os;
  write(os);
  return os.str();
}

SentenceRecord record(std::string id, std::string group, int length, double hier,
                      bool kept = true) {
  SentenceRecord r;
  r.id = std::move(id);
  r.group = std::move(group);
  r.length = length;
  r.theta_hier = hier;
  r.theta_linear = *closed_form_theta(MechanismKind::linear(), length);
  r.kept = kept;
  return r;
}

}  // namespace

TEST_CASE("ingest jsonl with nested arrays") {
  const auto docs =
      ingest_text(R"j({"id":"a1","group":"en","tree":["the",["little","dog"]]})j" "\n");
  REQUIRE(docs.size() == 1);
  CHECK(docs[0].id == "a1");
  CHECK(docs[0].group == "en");
  CHECK(docs[0].tokens == std::vector<std::string>{"the", "little", "dog"});
  CHECK(to_bracketed(docs[0].tree) == "(the (little dog))");
}

TEST_CASE("ingest bracketed lines with label stripping") {
  IngestOptions opts;
  opts.default_group = "g";
  const auto docs = ingest_text("(NP (DT the) (NN dog))\n\n(S (NP (PRP it)) (VP (VBD ran)))\n",
                                CorpusFormat::Bracketed, opts);
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].tokens == std::vector<std::string>{"the", "dog"});
  CHECK(docs[0].id == "1");
  CHECK(docs[1].id == "3");
  CHECK(docs[1].group == "g");
  // Collapse keeps the unary pre-terminal-free constituents.
  CHECK(to_bracketed(docs[1].tree) == "((it) (ran))");
}

TEST_CASE("ingest flags") {
  const std::string line = R"j({"id":"x","lang":"fr","bracketed":"(ROOT (S (NP (DT le) (NN chat)) (PONCT .)))"})j";
  IngestOptions opts;
  opts.group_key = "lang";
  opts.drop_punct = true;
  auto docs = ingest_text(line + "\n", CorpusFormat::Jsonl, opts);
  CHECK(docs[0].group == "fr");
  CHECK(docs[0].tokens == std::vector<std::string>{"le", "chat"});
  CHECK(to_bracketed(docs[0].tree) == "(le chat)");

  opts.drop_punct = false;
  opts.collapse_unary = false;
  opts.strip_labels = false;
  docs = ingest_text(line + "\n", CorpusFormat::Jsonl, opts);
  CHECK(docs[0].tree.leaf_count() == 9);
}

TEST_CASE("ingest errors name the line") {
  auto fails_at = [](const std::string& text, std::size_t line) {
    try {
      ingest_text(text);
    } catch (const IngestError& e) {
      return e.line() == line;
    }
    return false;
  };
  CHECK(fails_at("{broken\n", 1));
  CHECK(fails_at("\n{\"id\":\"a\",\"group\":\"g\"}\n", 2));
  CHECK(fails_at(R"j({"id":"a","group":"g","tree":["x"],"bracketed":"(x)"})j", 1));
  CHECK(fails_at(R"j({"id":"a","group":"g","tree":[]})j", 1));
  CHECK(fails_at(R"j({"id":"a","group":"g","tree":["x",3]})j", 1));
  CHECK(fails_at(R"j({"id":"a","group":"g","tree":["a b"]})j", 1));
  CHECK(fails_at(R"j({"id":"a","group":"","tree":["x"]})j", 1));
  CHECK(fails_at(R"j({"id":"a","group":"g","bracketed":"((x)"})j", 1));
  CHECK(fails_at(R"j([1,2])j", 1));
  CHECK(fails_at(R"j({"id":"a","group":"g","tree":["x"]})j"
                 "\n"
                 R"j({"id":"a","group":"g","tree":["y"]})j",
                 2));
  CHECK_THROWS_AS(ingest_text("(a (b)\n", CorpusFormat::Bracketed), IngestError);
}

TEST_CASE("iqr filter bounds") {
  auto b = iqr_filter(std::vector<int>{1, 2, 3, 4, 100});
  CHECK(b.q1 == 2.0);
  CHECK(b.q3 == 4.0);
  CHECK(b.iqr == 2.0);
  CHECK(b.lower == -1.0);
  CHECK(b.upper == 7.0);
  CHECK_FALSE(b.contains(100));
  CHECK(b.contains(1));

  b = iqr_filter(std::vector<int>{5, 5, 5, 5});
  CHECK(b.iqr == 0.0);
  CHECK(b.lower == 5.0);
  CHECK(b.upper == 5.0);
  CHECK(b.contains(5));

  b = iqr_filter(std::vector<int>{7});
  CHECK(b.q1 == 7.0);
  CHECK(b.q3 == 7.0);

  // Interpolation between order statistics, unsorted input.
  b = iqr_filter(std::vector<int>{10, 1, 4, 7});
  CHECK(b.q1 == doctest::Approx(3.25));
  CHECK(b.q3 == doctest::Approx(7.75));

  CHECK_THROWS_AS(iqr_filter(std::vector<int>{}), EmptyInput);
}

TEST_CASE("analyze computes both thetas") {
  const auto docs = ingest_text(
      R"j({"id":"flat","group":"g","tree":["a","b","c"]})j"
      "\n"
      R"j({"id":"one","group":"g","tree":["w"]})j"
      "\n"
      R"j({"id":"lb","group":"g","tree":[[[["a","b"],"c"],"d"],"e"]})j"
      "\n");
  const auto recs = analyze(docs, FilterBounds::keep_all());
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].theta_hier == 2.0);
  CHECK(recs[0].theta_linear == doctest::Approx(7.0 / 3.0).epsilon(1e-15));
  CHECK(recs[1].theta_hier == 1.0);
  CHECK(recs[1].theta_linear == 1.0);
  CHECK(recs[1].entropy_bits == 0.0);
  CHECK(recs[2].theta_hier == recs[2].theta_linear);
  for (const auto& r : recs) CHECK(r.kept);
}

TEST_CASE("analyze derives bounds from the documents when none are given") {
  std::string text;
  for (int len : {1, 2, 3, 4, 100}) {
    text += R"j({"id":"s)j" + std::to_string(len) + R"j(","group":"g","tree":[)j";
    for (int i = 0; i < len; ++i) text += (i ? ",\"w\"" : "\"w\"");
    text += "]}\n";
  }
  const auto recs = analyze(ingest_text(text), std::nullopt);
  CHECK(std::count_if(recs.begin(), recs.end(), [](const auto& r) { return !r.kept; }) == 1);
  CHECK_FALSE(recs[4].kept);
}

TEST_CASE("aggregate per group and per length") {
  const std::vector<SentenceRecord> recs{record("a", "g1", 3, 2.0), record("b", "g1", 3, 3.0),
                                         record("c", "g1", 5, 4.0), record("d", "g2", 4, 1.0),
                                         record("e", "g2", 9, 9.0, false)};
  const auto groups = aggregate(recs);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].group == "g1");
  CHECK(groups[0].sentence_count == 3);
  REQUIRE(groups[0].curve.size() == 2);
  CHECK(groups[0].curve[0].length == 3);
  CHECK(groups[0].curve[0].count == 2);
  CHECK(groups[0].curve[0].mean_theta_hier == 2.5);
  CHECK(groups[0].curve[1].length == 5);
  CHECK(groups[0].curve[1].count == 1);
  CHECK(groups[0].mean_theta_hier == 3.0);
  CHECK(groups[1].sentence_count == 1);
  CHECK(groups[1].mean_theta_hier == 1.0);

  CHECK_THROWS_AS(aggregate(std::vector<SentenceRecord>{}), EmptyInput);
  CHECK_THROWS_AS(aggregate(std::vector<SentenceRecord>{record("x", "g", 3, 1.0, false)}),
                  EmptyAfterFilter);
}

TEST_CASE("descriptive statistics") {
  const std::vector<SentenceRecord> recs{record("a", "g", 2, 1.0), record("b", "g", 4, 1.0),
                                         record("c", "g", 6, 1.0), record("d", "h", 3, 1.0, false)};
  const auto rows = descriptive_stats(recs);
  REQUIRE(rows.size() == 1);  // "h" has nothing kept
  CHECK(rows[0].count == 3);
  CHECK(rows[0].mean_length == 4.0);
  CHECK(rows[0].min_length == 2);
  CHECK(rows[0].max_length == 6);
  CHECK(rows[0].q1 == 3.0);
  CHECK(rows[0].q3 == 5.0);
  CHECK(rows[0].sd_length == doctest::Approx(std::sqrt(8.0 / 3.0)));
}

TEST_CASE("fixture corpus: baseline and conservation invariants") {
  const auto docs = fixture();
  REQUIRE(docs.size() == 20);
  const auto recs = analyze(docs, std::nullopt);
  for (const auto& r : recs) {
    const auto lb = open_node_counts(gen_left_branching(r.length));
    CHECK(std::fabs(r.theta_linear - theta_mle(lb).theta_mle) <= 1e-12);
  }
  const auto groups = aggregate(recs);
  for (const auto& g : groups) {
    int total = 0;
    double weighted = 0.0;
    for (const auto& row : g.curve) {
      total += row.count;
      weighted += row.mean_theta_hier * row.count;
    }
    CHECK(total == g.sentence_count);
    CHECK(weighted / total == doctest::Approx(g.mean_theta_hier).epsilon(1e-12));
    CHECK(g.mean_theta_hier < g.mean_theta_linear);
  }
}

TEST_CASE("filter bounds reused on the kept subset remove nothing more") {
  const auto recs = analyze(fixture(), std::nullopt);
  std::vector<int> lengths;
  for (const auto& r : recs) lengths.push_back(r.length);
  const FilterBounds b = iqr_filter(lengths);
  for (const auto& r : recs) {
    if (r.kept) CHECK(b.contains(r.length));
  }
}

TEST_CASE("fixture corpus golden outputs") {
  const auto recs = analyze(fixture(), std::nullopt);
  const auto groups = aggregate(recs);
  const auto table = descriptive_stats(recs);
  CHECK(render([&](std::ostream& os) { write_sentences_csv(os, recs); }) ==
        read_file(WMLOAD_GOLDEN_DIR "/corpus20_sentences.csv"));
  CHECK(render([&](std::ostream& os) { write_summary_csv(os, groups); }) ==
        read_file(WMLOAD_GOLDEN_DIR "/corpus20_summary.csv"));
  CHECK(render([&](std::ostream& os) { write_curves_csv(os, groups); }) ==
        read_file(WMLOAD_GOLDEN_DIR "/corpus20_curves.csv"));
  CHECK(render([&](std::ostream& os) { write_descriptive_csv(os, table); }) ==
        read_file(WMLOAD_GOLDEN_DIR "/corpus20_stats.csv"));
}

TEST_CASE("outputs are invariant to input order and worker count") {
  auto docs = fixture();
  auto outputs = [](const std::vector<CorpusDocument>& d, int workers) {
    const auto recs = analyze(d, std::nullopt, {}, workers);
    const auto groups = aggregate(recs);
    return render([&](std::ostream& os) {
      write_sentences_csv(os, recs);
      write_summary_csv(os, groups);
      write_curves_csv(os, groups);
    });
  };
  const std::string reference = outputs(docs, 1);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(docs.begin(), docs.end(), rng);
    CHECK(outputs(docs, 1 + i % 4) == reference);
  }
}

TEST_CASE("csv fields with commas are quoted") {
  const std::vector<SentenceRecord> recs{record("a,b", "g", 1, 1.0)};
  CHECK(render([&](std::ostream& os) { write_sentences_csv(os, recs); }) ==
        "id,group,length,theta_hier,theta_linear,entropy_bits,kept\n\"a,b\",g,1,1,1,0,true\n");
}
