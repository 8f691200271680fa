#include "cogme/ingest.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "cogme/errors.hpp"
#include "generators.hpp"

namespace cogme {
namespace {

const std::filesystem::path kFixtures = COGME_FIXTURE_DIR;

std::vector<QuestionAnnotation> annotations_from(const std::string& text,
                                                 ParseOptions options = {}) {
  std::istringstream in(text);
  return parse_annotations(in, options);
}

std::vector<PredictionRecord> predictions_from(const std::string& text) {
  std::istringstream in(text);
  return parse_predictions(in);
}

Taxonomy taxonomy_from(const std::string& text) {
  std::istringstream in(text);
  return parse_taxonomy(in);
}

constexpr const char* kLine =
    R"({"qid":"q1","level":"shot","question":"Who?","qtype":"who",)"
    R"("targets":[{"element":"character","key":true},{"element":"emotion"}],)"
    R"("contents":["feature"],"thinking":"reasoning","correct_index":1,"num_options":5})";

TEST(ParseAnnotations, OneWellFormedLine) {
  const auto list = annotations_from(std::string(kLine) + "\n");
  ASSERT_EQ(list.size(), 1u);
  const auto& a = list[0];
  EXPECT_EQ(a.qid, "q1");
  EXPECT_EQ(a.level, Level::shot);
  EXPECT_EQ(a.qtype, QuestionType::who);
  ASSERT_EQ(a.targets.size(), 2u);
  EXPECT_TRUE(a.targets[0].key);
  EXPECT_FALSE(a.targets[1].key);  // key defaults to false
  EXPECT_EQ(a.contents, std::vector<std::string>{"feature"});
  EXPECT_EQ(a.correct_index, 1);
  EXPECT_EQ(a.num_options, 5);
}

TEST(ParseAnnotations, EmptyInput) {
  EXPECT_TRUE(annotations_from("").empty());
  EXPECT_TRUE(annotations_from("\n  \n").empty());
}

TEST(ParseAnnotations, MissingThinkingNamesFieldAndLine) {
  try {
    annotations_from(R"({"qid":"q1","level":"shot","targets":[]})");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.field(), "thinking");
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("thinking"), std::string::npos);
  }
}

TEST(ParseAnnotations, MalformedLineCarriesLineAndByteOffset) {
  const std::string text = std::string(kLine) + "\n" + R"({"qid": "q2", oops})" + "\n";
  try {
    annotations_from(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    const std::size_t second_line = std::string(kLine).size() + 1;
    EXPECT_GE(e.byte_offset(), second_line);
    EXPECT_LT(e.byte_offset(), text.size());
  }
}

TEST(ParseAnnotations, StrictRejectsUnknownFieldsLenientIgnoresThem) {
  const std::string text =
      R"({"qid":"q1","level":"scene","targets":[{"element":"place","key":true,"weight":3}],"thinking":"recall","tags":1})";
  EXPECT_THROW(annotations_from(text), ParseError);
  const auto list = annotations_from(text, ParseOptions{false});
  ASSERT_EQ(list.size(), 1u);
  EXPECT_EQ(list[0].targets[0].element, "place");
}

TEST(ParseAnnotations, RejectsBadEnumsAndTypes) {
  EXPECT_THROW(annotations_from(R"({"qid":"q","level":"clip","targets":[],"thinking":"recall"})"),
               ParseError);
  EXPECT_THROW(
      annotations_from(R"({"qid":"q","level":"shot","qtype":"which","targets":[],"thinking":"recall"})"),
      ParseError);
  EXPECT_THROW(annotations_from(R"({"qid":1,"level":"shot","targets":[],"thinking":"recall"})"),
               ParseError);
  EXPECT_THROW(annotations_from(R"(["not","an","object"])"), ParseError);
}

TEST(ParseAnnotations, RoundTripsThroughSerialization) {
  std::mt19937 rng(99);
  for (int round = 0; round < 20; ++round) {
    const auto data = gen::dataset(rng, 15);
    const std::string text = serialize_annotations(data);
    EXPECT_EQ(annotations_from(text), data);
    EXPECT_EQ(serialize_annotations(annotations_from(text)), text);
  }
}

TEST(ParseAnnotations, FileNotFoundIsIoError) {
  EXPECT_THROW(parse_annotations(kFixtures / "does_not_exist.jsonl"), IoError);
}

TEST(ParsePredictions, OutcomeForms) {
  const auto list = predictions_from(
      "{\"qid\":\"q1\",\"correct\":true}\n"
      "{\"qid\":\"q2\",\"predicted_index\":2}\n"
      "{\"qid\":\"q3\",\"predicted_text\":\"a cat\"}\n");
  ASSERT_EQ(list.size(), 3u);
  EXPECT_EQ(list[0].outcome, Outcome(CorrectFlag{true}));
  EXPECT_EQ(list[1].outcome, Outcome(PredictedIndex{2}));
  EXPECT_EQ(list[2].outcome, Outcome(PredictedText{"a cat"}));
}

TEST(ParsePredictions, AmbiguousAndMissingOutcomes) {
  try {
    predictions_from(R"({"qid":"q1","correct":true,"predicted_index":2})");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("ambiguous outcome"), std::string::npos);
  }
  EXPECT_THROW(predictions_from(R"({"qid":"q1"})"), ParseError);
  EXPECT_THROW(predictions_from(R"({"qid":"","correct":true})"), ParseError);
}

TEST(ParseConfig, EmptyObjectGivesDefaults) {
  const auto c = parse_config_text("{}");
  EXPECT_EQ(c.thinking_weights.at("recognition"), Rational(3, 2));
  EXPECT_EQ(c.thinking_weights.at("reasoning"), Rational(2));
  EXPECT_EQ(c.thinking_weights.at("recall"), Rational(1));
  EXPECT_EQ(c.key_target_weight, Rational(2));
  EXPECT_EQ(c.content_attribution, ContentAttribution::full);
  EXPECT_EQ(c.accuracy_threshold_pct, Rational(50));
  EXPECT_EQ(c.low_frequency_fraction, Rational(1, 20));
  EXPECT_EQ(c, MetricConfig{});
}

TEST(ParseConfig, NonPositiveWeight) {
  try {
    parse_config_text(R"({"thinking_weights":{"reasoning":0}})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("non-positive weight"), std::string::npos);
  }
  EXPECT_THROW(parse_config_text(R"({"key_target_weight":0.5})"), ConfigError);
}

TEST(ParseConfig, PassThroughAndExactDecimals) {
  const auto c = parse_config_text(
      R"({"key_target_weight":3.0,"thinking_weights":{"recognition":"7/4","recall":0.1},)"
      R"("content_attribution":"split","accuracy_threshold_pct":60,"low_frequency_fraction":0.1})");
  EXPECT_EQ(c.key_target_weight, Rational(3));
  EXPECT_EQ(c.thinking_weights.at("recognition"), Rational(7, 4));
  EXPECT_EQ(c.thinking_weights.at("recall"), Rational(1, 10));
  EXPECT_EQ(c.content_attribution, ContentAttribution::split);
  EXPECT_EQ(c.accuracy_threshold_pct, Rational(60));
}

TEST(ParseConfig, VocabularyOverride) {
  const auto c = parse_config_text(
      R"({"vocabulary":{"targets":["hero","villain","weather"],"contents":["plot"],)"
      R"("thinking":["recall","imagination"],"excluded":["weather"]},)"
      R"("thinking_weights":{"imagination":2.5}})");
  EXPECT_TRUE(c.vocabulary.is_active(Module::target, "hero"));
  EXPECT_TRUE(c.vocabulary.is_excluded("weather"));
  EXPECT_EQ(c.thinking_weights.size(), 2u);
  EXPECT_EQ(c.thinking_weights.at("imagination"), Rational(5, 2));
}

TEST(ParseConfig, Errors) {
  EXPECT_THROW(parse_config_text(R"({"vocabulary":{"thinking":["recall","dreaming"]}})"),
               ConfigError);  // dreaming has no weight
  EXPECT_THROW(parse_config_text(R"({"excluded_elements":["time"],"vocabulary":{"excluded":["humor"]}})"),
               ConfigError);
  EXPECT_THROW(parse_config_text(R"({"accuracy_threshold_pct":150})"), ConfigError);
  EXPECT_THROW(parse_config_text(R"({"low_frequency_fraction":0})"), ConfigError);
  EXPECT_THROW(parse_config_text(R"({"content_attribution":"half"})"), ConfigError);
  EXPECT_THROW(parse_config_text(R"({"weights":{}})"), ParseError);
  EXPECT_NO_THROW(parse_config_text(R"({"weights":{}})", ParseOptions{false}));
  EXPECT_THROW(parse_config_text("{\n  \"key_target_weight\": ,\n}"), ParseError);
}

TEST(ParseTaxonomy, ToyGraph) {
  const Taxonomy t = parse_taxonomy(kFixtures / "toy_taxonomy.tsv");
  EXPECT_EQ(t.size(), 5u);
  EXPECT_EQ(t.root(), "animal");
  EXPECT_EQ(t.depth("animal"), 1);
  EXPECT_EQ(t.depth("feline"), 2);
  EXPECT_EQ(t.depth("cat"), 3);
}

TEST(ParseTaxonomy, DepthUsesShortestPathInDag) {
  const Taxonomy t = taxonomy_from("a\tb\nb\tc\nc\troot\na\troot\n");
  EXPECT_EQ(t.depth("a"), 2);
  EXPECT_EQ(t.depth("b"), 3);
}

TEST(ParseTaxonomy, SelfEdgeIsACycle) {
  try {
    taxonomy_from("x\tx\n");
    FAIL();
  } catch (const TaxonomyError& e) {
    EXPECT_NE(std::string(e.what()).find("cycle"), std::string::npos);
  }
}

TEST(ParseTaxonomy, LongerCycle) {
  try {
    taxonomy_from("a\tb\nb\tc\nc\ta\nd\troot\n");
    FAIL();
  } catch (const TaxonomyError& e) {
    EXPECT_NE(std::string(e.what()).find("cycle"), std::string::npos);
  }
}

TEST(ParseTaxonomy, OrphanParent) {
  try {
    taxonomy_from("cat\tfeline\nfeline\tanimal\ndog\tcanine\n");
    FAIL();
  } catch (const TaxonomyError& e) {
    EXPECT_NE(std::string(e.what()).find("orphan parent"), std::string::npos);
  }
  EXPECT_THROW(Taxonomy::from_edges({{"cat", "feline"}, {"dog", "canine"}}, "feline"),
               TaxonomyError);
}

TEST(ParseTaxonomy, MalformedLine) {
  try {
    taxonomy_from("# header\ncat feline\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(taxonomy_from("# only comments\n"), TaxonomyError);
}

}  // namespace
}  // namespace cogme
