#pragma once

#include <map>
#include <string>
#include <utility>

#include "cogme/config.hpp"
#include "cogme/rational.hpp"
#include "cogme/schema.hpp"

namespace cogme {

// Score allotted to one question and how it is attributed to the question's
// story elements.
struct ScoreBreakdown {
  std::string qid;
  Rational sc;     // allotted score: target count times thinking weight
  int nt = 0;      // number of tagged targets
  Rational w_r;    // thinking weight applied
  Rational t_sum;  // (nt - 1) + key weight
  std::map<std::string, Rational> target_scores;
  std::map<std::string, Rational> content_attributions;
  std::pair<std::string, Rational> thinking_attribution;

  bool operator==(const ScoreBreakdown&) const = default;
};

// The weight configured for the question's thinking element. Throws
// ConfigError when there is none.
Rational thinking_weight(const QuestionAnnotation& annotation, const MetricConfig& config);

// nt * w_r. Throws InvalidAnnotation for a question without targets.
Rational question_score(const QuestionAnnotation& annotation, const MetricConfig& config);

// Distributes the allotted score over the targets: the key target receives
// sc * key_weight / t_sum, every other target sc / t_sum. The values sum to
// sc exactly. Throws InvalidAnnotation unless exactly one target is key.
std::map<std::string, Rational> target_distribution(const QuestionAnnotation& annotation,
                                                    const MetricConfig& config);

ScoreBreakdown score_breakdown(const QuestionAnnotation& annotation,
                               const MetricConfig& config);

}  // namespace cogme
