#pragma once

#include <map>
#include <string>

#include "cogme/rational.hpp"
#include "cogme/schema.hpp"

namespace cogme {

// How a question's allotted score is attributed to its content elements.
// full: each tagged content element receives the whole score.
// split: the score is divided equally among them.
enum class ContentAttribution { full, split };

std::string_view to_string(ContentAttribution policy);

struct MetricConfig {
  std::map<std::string, Rational> thinking_weights = {
      {"recall", Rational(1)},
      {"recognition", Rational(3, 2)},
      {"reasoning", Rational(2)}};
  Rational key_target_weight = 2;
  ContentAttribution content_attribution = ContentAttribution::full;
  ElementVocabulary vocabulary = ElementVocabulary::defaults();
  Rational accuracy_threshold_pct = 50;
  Rational low_frequency_fraction = Rational(1, 20);

  // Throws ConfigError: non-positive weight, key weight below 1, a weight for
  // a non-thinking element, an active thinking element without a weight, or
  // thresholds out of range.
  void check() const;

  bool operator==(const MetricConfig&) const = default;
};

}  // namespace cogme
