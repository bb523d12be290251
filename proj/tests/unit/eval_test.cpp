#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>

#include "codemap/error.hpp"
#include "codemap/eval.hpp"
#include "fixtures.hpp"
#include "json.hpp"
#include "test_util.hpp"

using namespace codemap;

namespace {

ErrorKind parse_error(const std::string& text, std::string* message = nullptr) {
  try {
    parse_dataset(text, "/data");
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  ADD_FAILURE() << "no error for " << text;
  return ErrorKind::kRepoError;
}

const char* kRecord =
    R"({"id":"r1","repo":"repos/a","source":{"commit":"c1","file":"a.py","l1":1,"c1":1,"l2":2,"c2":3},"target_commit":"c2","expected":{"file":"a.py","l1":3,"c1":1,"l2":4,"c2":3},"tags":["x"]})";

}  // namespace

TEST(Metrics, CharDistanceWorkedExample) {
  EXPECT_EQ(char_distance({20, 55}, {18, 63}), 10);
}

TEST(Metrics, OverlapRatios) {
  const OverlapMetrics m = overlap_metrics(AbsInterval{0, 10}, AbsInterval{5, 25});
  EXPECT_DOUBLE_EQ(m.recall, 5.0 / 20.0);
  EXPECT_DOUBLE_EQ(m.precision, 5.0 / 10.0);
  EXPECT_NEAR(m.f1, 2 * 0.25 * 0.5 / 0.75, 1e-12);
  const OverlapMetrics none = overlap_metrics(AbsInterval{0, 3}, AbsInterval{3, 6});
  EXPECT_EQ(none.f1, 0.0);
}

TEST(Metrics, FileMismatchThrows) {
  const Document doc("abc\n");
  EXPECT_THROW(overlap_metrics(Region::at("c", "a", make_range(1, 1, 1, 2)),
                               Region::at("c", "b", make_range(1, 1, 1, 2)), doc),
               Error);
}

TEST(Score, OutcomeKinds) {
  const Document doc("abcdef\nghij\n");
  const Region exp = Region::at("c", "f", make_range(1, 2, 1, 5));
  EXPECT_EQ(score_outcome(exp, exp, doc).kind, OutcomeKind::kExact);
  const EvalOutcome partial =
      score_outcome(Region::at("c", "f", make_range(1, 3, 2, 1)), exp, doc);
  EXPECT_EQ(partial.kind, OutcomeKind::kPartialOverlap);
  EXPECT_EQ(partial.char_distance, 1 + 3);
  EXPECT_EQ(score_outcome(Region::at("c", "f", make_range(2, 1, 2, 2)), exp, doc).kind,
            OutcomeKind::kNoOverlap);
  const EvalOutcome both = score_outcome(Region::deleted(), Region::deleted(), doc);
  EXPECT_EQ(both.kind, OutcomeKind::kCorrectDeletion);
  EXPECT_EQ(both.f1, 1.0);
  EXPECT_TRUE(both.exact());
  const EvalOutcome wrong = score_outcome(Region::deleted(), exp, doc);
  EXPECT_EQ(wrong.kind, OutcomeKind::kWrongDeletion);
  EXPECT_EQ(wrong.recall, 0.0);
  EXPECT_EQ(score_outcome(exp, Region::deleted(), doc).kind,
            OutcomeKind::kMissedDeletion);
}

TEST(Aggregate, AllExactHasNoCharDistance) {
  std::vector<EvalOutcome> outcomes(3);
  for (auto& o : outcomes) {
    o.kind = OutcomeKind::kExact;
    o.recall = o.precision = o.f1 = 1.0;
  }
  const Aggregate a = aggregate(outcomes);
  EXPECT_EQ(a.exact, 3u);
  EXPECT_DOUBLE_EQ(a.exact_rate, 1.0);
  EXPECT_FALSE(a.mean_char_distance.has_value());
}

TEST(Aggregate, PermutationInvariantAndSkipsErrors) {
  std::mt19937 rng(9);
  std::vector<EvalOutcome> outcomes;
  for (int i = 0; i < 30; ++i) {
    EvalOutcome o;
    o.kind = static_cast<OutcomeKind>(i % 7);
    o.recall = (i % 5) / 4.0;
    o.precision = (i % 3) / 2.0;
    o.f1 = (i % 4) / 3.0;
    if (o.kind == OutcomeKind::kPartialOverlap) o.char_distance = i;
    outcomes.push_back(o);
  }
  const Aggregate a = aggregate(outcomes);
  EXPECT_EQ(a.total, 30u);
  EXPECT_EQ(a.errored, 4u);
  EXPECT_EQ(a.evaluated, 26u);
  EXPECT_EQ(a.overlapping, a.exact + a.partial);
  for (int k = 0; k < 10; ++k) {
    std::shuffle(outcomes.begin(), outcomes.end(), rng);
    const Aggregate b = aggregate(outcomes);
    EXPECT_EQ(b.exact, a.exact);
    EXPECT_NEAR(b.mean_f1, a.mean_f1, 1e-12);
    EXPECT_NEAR(*b.mean_char_distance, *a.mean_char_distance, 1e-12);
  }
}

TEST(Dataset, ParsesRecordsAndResolvesRepo) {
  const auto records = parse_dataset(std::string(kRecord) + "\n\n" + kRecord + "\n", "/data");
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].id, "r1");
  EXPECT_EQ(records[0].repo, "/data/repos/a");
  EXPECT_EQ(records[0].source.range(), make_range(1, 1, 2, 3));
  EXPECT_EQ(records[0].expected.commit(), "c2");
  EXPECT_EQ(records[1].line_no, 3);
  EXPECT_EQ(records[0].tags, std::vector<std::string>{"x"});
}

TEST(Dataset, RoundTripsThroughDatasetLine) {
  const auto records = parse_dataset(kRecord, "/data");
  EvalRecord r = records[0];
  r.expected = Region::deleted();
  const auto again = parse_dataset(dataset_line(r), "/");
  ASSERT_EQ(again.size(), 1u);
  EXPECT_TRUE(again[0].expected.is_deleted());
  EXPECT_EQ(again[0].source, r.source);
}

TEST(Dataset, ErrorsNameTheLine) {
  std::string message;
  EXPECT_EQ(parse_error(std::string(kRecord) + "\n{not json\n", &message),
            ErrorKind::kDatasetError);
  EXPECT_NE(message.find("line 2"), std::string::npos) << message;
  EXPECT_EQ(parse_error(R"({"repo":"r","target_commit":"c","expected":"deleted"})"),
            ErrorKind::kDatasetError);
  std::string bad_range = kRecord;
  bad_range.replace(bad_range.find("\"l2\":2"), 6, "\"l2\":0");
  EXPECT_EQ(parse_error(bad_range), ErrorKind::kDatasetError);
  std::string bad_version = kRecord;
  bad_version.insert(1, "\"schema_version\":2,");
  EXPECT_EQ(parse_error(bad_version), ErrorKind::kDatasetError);
}

TEST(Evaluate, EmptyDatasetGivesEmptyReport) {
  const EvalReport r = evaluate({}, {});
  EXPECT_EQ(r.overall.total, 0u);
  EXPECT_TRUE(r.outcomes.empty());
  const auto j = nlohmann::json::parse(report_to_json(r));
  EXPECT_EQ(j["summary"]["total"], 0);
}

TEST(Evaluate, MissingRepositoryIsRecordedNotFatal) {
  test::TempDir dir;
  auto records = parse_dataset(kRecord, dir.path());
  const EvalReport r = evaluate(records, {});
  ASSERT_EQ(r.outcomes.size(), 1u);
  EXPECT_EQ(r.outcomes[0].kind, OutcomeKind::kError);
  EXPECT_FALSE(r.outcomes[0].error.empty());
  EXPECT_EQ(r.overall.errored, 1u);
}

TEST(Evaluate, FixturesMatchManifestAndJobsAgree) {
  test::TempDir dir;
  const auto fixtures = fixtures::build_fixtures(dir / "fx");
  fixtures::write_corpus(dir / "fx", fixtures);
  const auto records = load_dataset(dir / "fx" / "dataset.jsonl");
  std::ifstream manifest_file(dir / "fx" / "manifest.json");
  const auto manifest = nlohmann::json::parse(manifest_file);
  EvalOptions serial;
  EvalOptions parallel;
  parallel.jobs = 4;
  const EvalReport a = evaluate(records, serial);
  const EvalReport b = evaluate(records, parallel);
  ASSERT_EQ(a.outcomes.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(to_string(a.outcomes[i].kind),
              manifest[records[i].id].get<std::string>())
        << records[i].id;
    EXPECT_EQ(a.outcomes[i].kind, b.outcomes[i].kind);
    EXPECT_EQ(a.outcomes[i].predicted, b.outcomes[i].predicted);
  }
  EXPECT_EQ(a.by_tag.at("fig1").total, 2u);
}

TEST(Evaluate, AblationAndSweepAreReported) {
  EvalOptions options;
  options.ablation = true;
  options.context_sweep = {0, 5};
  const EvalReport r = evaluate({}, options);
  std::vector<std::string> names;
  for (const auto& [name, a] : r.ablation) names.push_back(name);
  EXPECT_EQ(names, (std::vector<std::string>{"full", "no_diff", "no_refine",
                                             "no_move", "no_search", "no_context"}));
  ASSERT_EQ(r.context_sweep.size(), 2u);
  EXPECT_EQ(r.context_sweep[1].first, 5);
}
