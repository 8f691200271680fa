#include "cogme/profiler.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "cogme/errors.hpp"
#include "generators.hpp"
#include "profile_oracle.hpp"

namespace cogme {
namespace {

const std::filesystem::path kFixtures = COGME_FIXTURE_DIR;

QuestionAnnotation question(std::string qid, std::vector<TargetTag> targets, std::string thinking,
                            std::vector<std::string> contents = {}) {
  QuestionAnnotation a;
  a.qid = std::move(qid);
  a.targets = std::move(targets);
  a.thinking = std::move(thinking);
  a.contents = std::move(contents);
  return a;
}

std::vector<QuestionAnnotation> two_questions() {
  return {question("q1", {{"character", true}}, "recall"),
          question("q2", {{"character", true}, {"emotion", false}}, "reasoning")};
}

TEST(JoinOutcomes, CorrectFlagAndIndices) {
  auto a = two_questions();
  a[1].correct_index = 2;
  a[1].num_options = 5;
  std::vector<PredictionRecord> p{{"q1", CorrectFlag{true}}, {"q2", PredictedIndex{2}}};
  auto r = join_outcomes(a, p);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.outcomes, (std::map<std::string, bool>{{"q1", true}, {"q2", true}}));

  p[1] = {"q2", PredictedIndex{3}};
  r = join_outcomes(a, p);
  EXPECT_FALSE(r.outcomes.at("q2"));
}

TEST(JoinOutcomes, ReportsUnmatchedOnBothSides) {
  const auto a = two_questions();
  std::vector<PredictionRecord> p{{"q1", CorrectFlag{true}}, {"zz", CorrectFlag{false}}};
  const auto r = join_outcomes(a, p);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.unknown_predictions, std::vector<std::string>{"zz"});
  EXPECT_EQ(r.uncovered, std::vector<std::string>{"q2"});
}

TEST(JoinOutcomes, IndexErrorsAndTextOnly) {
  auto a = two_questions();
  std::vector<PredictionRecord> p{{"q1", PredictedIndex{0}}, {"q2", PredictedText{"sad"}}};
  auto r = join_outcomes(a, p);
  EXPECT_EQ(r.errors.size(), 1u);  // q1 has no answer key
  EXPECT_EQ(r.text_only, std::vector<std::string>{"q2"});

  a[0].correct_index = 0;
  a[0].num_options = 4;
  p[0] = {"q1", PredictedIndex{4}};
  r = join_outcomes(a, p);
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_NE(r.errors[0].find("out of range"), std::string::npos);

  p = {{"q1", CorrectFlag{true}}, {"q1", CorrectFlag{false}}};
  EXPECT_NE(join_outcomes(a, p).errors.at(0).find("duplicate prediction"), std::string::npos);
}

TEST(AggregateProfile, TwoQuestionFixture) {
  const auto report =
      aggregate_profile(two_questions(), {{"q1", true}, {"q2", false}}, MetricConfig{});
  const auto* character = report.find(Module::target, "character");
  ASSERT_NE(character, nullptr);
  EXPECT_EQ(character->allotted, Rational(11, 3));
  EXPECT_EQ(character->earned, Rational(1));
  EXPECT_EQ(character->accuracy_pct(), Rational(300, 11));
  EXPECT_EQ(character->question_count, 2);
  EXPECT_EQ(character->correct_count, 1);
  EXPECT_EQ(report.find(Module::target, "emotion")->accuracy_pct(), Rational(0));
  EXPECT_EQ(report.overall_accuracy_pct(), Rational(20));  // 1 of 5
}

TEST(AggregateProfile, EveryActiveElementAppearsOnce) {
  const auto report = aggregate_profile(two_questions(), {{"q1", true}}, MetricConfig{});
  const auto v = ElementVocabulary::defaults();
  for (Module m : kModules) {
    const auto& rows = report.modules.at(m);
    ASSERT_EQ(rows.size(), v.active(m).size());
    for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].element, v.active(m)[i]);
  }
  EXPECT_EQ(report.find(Module::target, "humor"), nullptr);
  EXPECT_EQ(report.uncovered_total, 1);
}

TEST(AggregateProfile, AllCorrectGivesHundredEverywhere) {
  std::mt19937 rng(5);
  const auto data = gen::dataset(rng, 40);
  std::map<std::string, bool> outcomes;
  for (const auto& q : data) outcomes[q.qid] = true;
  const auto report = aggregate_profile(data, outcomes, MetricConfig{});
  for (const auto& [m, rows] : report.modules) {
    for (const auto& p : rows) {
      if (p.allotted > 0) EXPECT_EQ(p.accuracy_pct(), Rational(100)) << p.element;
    }
  }
}

TEST(AggregateProfile, EmptyOutcomesStillReports) {
  const auto report = aggregate_profile(two_questions(), {}, MetricConfig{});
  EXPECT_EQ(report.question_total, 0);
  EXPECT_EQ(report.uncovered_total, 2);
  EXPECT_FALSE(report.overall_accuracy_pct().has_value());
  for (const auto& [m, rows] : report.modules) {
    for (const auto& p : rows) EXPECT_FALSE(p.accuracy_pct().has_value());
  }
}

TEST(MergePartials, IdentityCommutativityAndHalves) {
  const MetricConfig c;
  const auto data = two_questions();
  PartialProfile whole(c), first(c), second(c);
  whole.add(data[0], true);
  whole.add(data[1], false);
  first.add(data[0], true);
  second.add(data[1], false);

  EXPECT_EQ(merge_partials(whole, PartialProfile(c)), whole);
  EXPECT_EQ(merge_partials(first, second), merge_partials(second, first));
  EXPECT_EQ(merge_partials(first, second), whole);
  EXPECT_EQ(finalize(merge_partials(first, second)),
            aggregate_profile(data, {{"q1", true}, {"q2", false}}, c));
}

TEST(MergePartials, ConfigMismatch) {
  MetricConfig other;
  other.key_target_weight = 3;
  EXPECT_THROW(merge_partials(PartialProfile(MetricConfig{}), PartialProfile(other)), DataError);
}

TEST(Diagnostics, ThresholdIsStrict) {
  ProfileReport r;
  r.question_total = 10;
  r.modules[Module::target] = {
      ElementProfile{"commonsense", Module::target, 5, 2, Rational(1000), Rational(354)},
      ElementProfile{"emotion", Module::target, 5, 3, Rational(2), Rational(1)},
      ElementProfile{"place", Module::target, 0, 0, Rational(0), Rational(0)}};
  const auto flags = diagnostics(r, MetricConfig{});
  ASSERT_EQ(flags.size(), 2u);
  EXPECT_EQ(flags[0].element, "commonsense");
  EXPECT_EQ(flags[0].flag, DiagnosticFlag::low_accuracy);
  EXPECT_EQ(flags[0].accuracy_pct, Rational(354, 10));
  EXPECT_EQ(flags[1].element, "place");
  EXPECT_EQ(flags[1].flag, DiagnosticFlag::low_frequency);
  EXPECT_FALSE(flags[1].accuracy_pct.has_value());
}

TEST(Diagnostics, LowBoth) {
  ProfileReport r;
  r.question_total = 100;
  r.modules[Module::content] = {
      ElementProfile{"means", Module::content, 2, 0, Rational(4), Rational(0)}};
  const auto flags = diagnostics(r, MetricConfig{});
  ASSERT_EQ(flags.size(), 1u);
  EXPECT_EQ(flags[0].flag, DiagnosticFlag::low_both);
}

TEST(SliceByQtype, Ratios) {
  std::vector<QuestionAnnotation> data;
  std::map<std::string, bool> outcomes;
  for (int i = 0; i < 20; ++i) {
    auto q = question("w" + std::to_string(i), {{"character", true}}, "recall");
    q.qtype = QuestionType::who;
    data.push_back(q);
    outcomes[q.qid] = i != 7;
  }
  auto slices = slice_by_qtype(data, outcomes);
  EXPECT_EQ(slices.at("who").accuracy_pct(), Rational(95));

  for (auto& [qid, ok] : outcomes) ok = true;
  EXPECT_EQ(slice_by_qtype(data, outcomes).at("who").accuracy_pct(), Rational(100));

  for (auto& q : data) q.qtype.reset();
  slices = slice_by_qtype(data, outcomes);
  ASSERT_EQ(slices.size(), 1u);
  EXPECT_EQ(slices.begin()->first, "other");
}

TEST(DiffProfiles, SelfDiffIsZero) {
  const auto r = aggregate_profile(two_questions(), {{"q1", true}, {"q2", false}}, MetricConfig{});
  const auto d = diff_profiles(r, r);
  for (const auto& e : d.elements) {
    if (e.comparable()) EXPECT_EQ(*e.delta(), 0);
  }
  EXPECT_EQ(d.overall_delta(), Rational(0));
}

TEST(DiffProfiles, AgainstAllCorrectRun) {
  const auto a = aggregate_profile(two_questions(), {{"q1", true}, {"q2", false}}, MetricConfig{});
  const auto b = aggregate_profile(two_questions(), {{"q1", true}, {"q2", true}}, MetricConfig{});
  const auto d = diff_profiles(a, b);
  const auto it = std::find_if(d.elements.begin(), d.elements.end(),
                               [](const ElementDelta& e) { return e.element == "character"; });
  ASSERT_NE(it, d.elements.end());
  EXPECT_EQ(*it->delta(), Rational(800, 11));
  EXPECT_EQ(to_fixed(*it->delta()), "72.7273");
}

TEST(DiffProfiles, ElementInOnlyOneReportIsIncomparable) {
  const auto a = aggregate_profile(two_questions(), {{"q1", true}, {"q2", false}}, MetricConfig{});
  auto b = a;
  b.modules[Module::target].push_back(
      ElementProfile{"weather", Module::target, 1, 1, Rational(1), Rational(1)});
  const auto d = diff_profiles(a, b);
  const auto it = std::find_if(d.elements.begin(), d.elements.end(),
                               [](const ElementDelta& e) { return e.element == "weather"; });
  ASSERT_NE(it, d.elements.end());
  EXPECT_FALSE(it->comparable());
  EXPECT_FALSE(it->in_a);

  auto c = a;
  c.modules[Module::content].push_back(
      ElementProfile{"character", Module::content, 0, 0, Rational(0), Rational(0)});
  EXPECT_THROW(diff_profiles(a, c), DataError);
}

// Randomized invariants.
class ProfileProperties : public ::testing::Test {
 protected:
  std::mt19937 rng{31337};
};

TEST_F(ProfileProperties, MatchesBruteForceOracle) {
  for (int round = 0; round < 30; ++round) {
    MetricConfig c;
    if (round % 2) c.content_attribution = ContentAttribution::split;
    const auto data = gen::dataset(rng, 1 + rng() % 100);
    auto outcomes = gen::outcomes(rng, data);
    if (round % 3 == 0) outcomes.erase(data.front().qid);
    const auto report = aggregate_profile(data, outcomes, c);
    const auto oracle = oracle::oracle_profile(data, outcomes, c);
    EXPECT_EQ(report.question_total, oracle.question_total);
    EXPECT_EQ(report.allotted_total, oracle.allotted_total);
    EXPECT_EQ(report.earned_total, oracle.earned_total);
    for (const auto& [key, row] : oracle.rows) {
      const auto* p = report.find(key.first, key.second);
      ASSERT_NE(p, nullptr);
      EXPECT_EQ(p->question_count, row.questions);
      EXPECT_EQ(p->correct_count, row.correct);
      EXPECT_EQ(p->allotted, row.allotted);
      EXPECT_EQ(p->earned, row.earned);
    }
  }
}

TEST_F(ProfileProperties, PermutationInvariant) {
  for (int round = 0; round < 20; ++round) {
    auto data = gen::dataset(rng, 30);
    const auto outcomes = gen::outcomes(rng, data);
    const auto expected = aggregate_profile(data, outcomes, MetricConfig{});
    std::shuffle(data.begin(), data.end(), rng);
    EXPECT_EQ(aggregate_profile(data, outcomes, MetricConfig{}), expected);
  }
}

TEST_F(ProfileProperties, ParallelEqualsSerial) {
  const auto data = gen::dataset(rng, 73);
  const auto outcomes = gen::outcomes(rng, data);
  const auto serial = aggregate_profile(data, outcomes, MetricConfig{});
  for (unsigned jobs : {1u, 2u, 3u, 8u, 200u}) {
    EXPECT_EQ(aggregate_profile_parallel(data, outcomes, MetricConfig{}, jobs), serial);
  }
}

TEST_F(ProfileProperties, FlippingToCorrectNeverLowersAccuracy) {
  for (int round = 0; round < 40; ++round) {
    const auto data = gen::dataset(rng, 25);
    auto outcomes = gen::outcomes(rng, data);
    const auto wrong = std::find_if(outcomes.begin(), outcomes.end(),
                                    [](const auto& kv) { return !kv.second; });
    if (wrong == outcomes.end()) continue;
    const auto before = aggregate_profile(data, outcomes, MetricConfig{});
    const std::string flipped = wrong->first;
    wrong->second = true;
    const auto after = aggregate_profile(data, outcomes, MetricConfig{});
    const auto& q = *std::find_if(data.begin(), data.end(),
                                  [&](const QuestionAnnotation& a) { return a.qid == flipped; });
    for (const auto& [m, rows] : before.modules) {
      for (const auto& p : rows) {
        const auto a = p.accuracy_pct();
        const auto b = after.find(m, p.element)->accuracy_pct();
        if (!a) continue;
        if (oracle::oracle_tags(q, m, p.element)) EXPECT_GT(*b, *a) << p.element;
        else EXPECT_EQ(*b, *a) << p.element;
      }
    }
  }
}

TEST_F(ProfileProperties, OverallWithinTargetRange) {
  for (int round = 0; round < 40; ++round) {
    const auto data = gen::dataset(rng, 20);
    const auto report = aggregate_profile(data, gen::outcomes(rng, data), MetricConfig{});
    std::optional<Rational> lo, hi;
    for (const auto& p : report.modules.at(Module::target)) {
      const auto a = p.accuracy_pct();
      if (!a) continue;
      lo = lo ? std::min(*lo, *a) : *a;
      hi = hi ? std::max(*hi, *a) : *a;
    }
    const auto overall = report.overall_accuracy_pct();
    ASSERT_TRUE(overall && lo && hi);
    EXPECT_LE(*lo, *overall);
    EXPECT_LE(*overall, *hi);
  }
}

TEST_F(ProfileProperties, MergeOverAnyPartitionEqualsWhole) {
  for (int round = 0; round < 20; ++round) {
    const auto data = gen::dataset(rng, 40);
    const auto outcomes = gen::outcomes(rng, data);
    const MetricConfig c;
    std::vector<PartialProfile> parts(1 + rng() % 5, PartialProfile(c));
    PartialProfile whole(c);
    for (const auto& q : data) {
      parts[rng() % parts.size()].add(q, outcomes.at(q.qid));
      whole.add(q, outcomes.at(q.qid));
    }
    std::shuffle(parts.begin(), parts.end(), rng);
    PartialProfile merged(c);
    for (const auto& p : parts) merged = merge_partials(merged, p);
    EXPECT_EQ(merged, whole);
  }
}

}  // namespace
}  // namespace cogme
