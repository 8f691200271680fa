#include "cogme/config.hpp"

#include "cogme/errors.hpp"

namespace cogme {

std::string_view to_string(ContentAttribution policy) {
  return policy == ContentAttribution::full ? "full" : "split";
}

void MetricConfig::check() const {
  for (const auto& [element, weight] : thinking_weights) {
    if (weight <= 0) {
      throw ConfigError("non-positive weight for thinking element '" +
                        element + "': " + to_exact(weight));
    }
    if (vocabulary.module_of(element) != Module::thinking) {
      throw ConfigError("weight given for '" + element +
                        "', which is not a thinking element");
    }
  }
  for (const auto& element : vocabulary.active(Module::thinking)) {
    if (!thinking_weights.contains(element)) {
      throw ConfigError("missing weight for thinking element '" + element +
                        "'");
    }
  }
  if (key_target_weight <= 0) {
    throw ConfigError("non-positive weight: key_target_weight = " +
                      to_exact(key_target_weight));
  }
  if (key_target_weight < 1) {
    throw ConfigError("key_target_weight must be at least 1, got " +
                      to_exact(key_target_weight));
  }
  if (accuracy_threshold_pct < 0 || accuracy_threshold_pct > 100) {
    throw ConfigError("accuracy_threshold_pct must lie in [0, 100], got " +
                      to_exact(accuracy_threshold_pct));
  }
  if (low_frequency_fraction <= 0 || low_frequency_fraction > 1) {
    throw ConfigError("low_frequency_fraction must lie in (0, 1], got " +
                      to_exact(low_frequency_fraction));
  }
}

}  // namespace cogme
