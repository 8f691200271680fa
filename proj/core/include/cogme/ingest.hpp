#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cogme/config.hpp"
#include "cogme/schema.hpp"
#include "cogme/taxonomy.hpp"

namespace cogme {

struct ParseOptions {
  // Reject unknown fields. Lenient parsing ignores them.
  bool strict = true;
};

struct CorrectFlag {
  bool value;
  bool operator==(const CorrectFlag&) const = default;
};
struct PredictedIndex {
  int value;
  bool operator==(const PredictedIndex&) const = default;
};
struct PredictedText {
  std::string value;
  bool operator==(const PredictedText&) const = default;
};

// Exactly one outcome form per record.
using Outcome = std::variant<CorrectFlag, PredictedIndex, PredictedText>;

struct PredictionRecord {
  std::string qid;
  Outcome outcome;

  bool operator==(const PredictionRecord&) const = default;
};

// Readers for the JSON Lines annotation and prediction files. One record per
// non-blank line, in input order. Errors are ParseError with the 1-based line
// number and the byte offset of the offending position; a file that cannot be
// opened raises IoError. Schema rules are not checked here.
std::vector<QuestionAnnotation> parse_annotations(const std::filesystem::path& path,
                                                  ParseOptions options = {});
std::vector<QuestionAnnotation> parse_annotations(std::istream& in,
                                                  ParseOptions options = {});

std::vector<PredictionRecord> parse_predictions(const std::filesystem::path& path,
                                                ParseOptions options = {});
std::vector<PredictionRecord> parse_predictions(std::istream& in,
                                                ParseOptions options = {});

// Absent fields keep their defaults. Throws ConfigError for rule violations
// and ParseError for malformed JSON or unknown fields.
MetricConfig parse_config(const std::filesystem::path& path,
                          ParseOptions options = {});
MetricConfig parse_config_text(std::string_view text, ParseOptions options = {});

// "child<TAB>parent" lines; '#' starts a comment line. TaxonomyError for
// structural problems, ParseError for malformed lines.
Taxonomy parse_taxonomy(const std::filesystem::path& path);
Taxonomy parse_taxonomy(std::istream& in);

// One JSON object per annotation, without trailing newline. Reparsing the
// output yields an equal annotation.
std::string serialize_annotation(const QuestionAnnotation& annotation);
std::string serialize_annotations(std::span<const QuestionAnnotation> annotations);

std::string read_file(const std::filesystem::path& path);

}  // namespace cogme
