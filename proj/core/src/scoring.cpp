#include "cogme/scoring.hpp"

#include "cogme/errors.hpp"

namespace cogme {

Rational thinking_weight(const QuestionAnnotation& a, const MetricConfig& config) {
  auto it = config.thinking_weights.find(a.thinking);
  if (it == config.thinking_weights.end()) {
    throw ConfigError("no weight configured for thinking element '" + a.thinking +
                      "' (question " + a.qid + ")");
  }
  return it->second;
}

Rational question_score(const QuestionAnnotation& a, const MetricConfig& config) {
  if (a.targets.empty()) {
    throw InvalidAnnotation("question " + a.qid + " has no target elements");
  }
  return Rational(static_cast<long long>(a.targets.size())) * thinking_weight(a, config);
}

namespace {

Rational weight_total(const QuestionAnnotation& a, const MetricConfig& config) {
  return Rational(static_cast<long long>(a.targets.size()) - 1) + config.key_target_weight;
}

std::map<std::string, Rational> distribute(const QuestionAnnotation& a,
                                           const MetricConfig& config, const Rational& sc,
                                           const Rational& t_sum) {
  if (a.key_target() == nullptr) {
    throw InvalidAnnotation("question " + a.qid + " must have exactly one key target");
  }
  std::map<std::string, Rational> out;
  for (const auto& t : a.targets) {
    const Rational share = t.key ? config.key_target_weight : Rational(1);
    out[t.element] += sc * share / t_sum;
  }
  return out;
}

}  // namespace

std::map<std::string, Rational> target_distribution(const QuestionAnnotation& a,
                                                    const MetricConfig& config) {
  const Rational sc = question_score(a, config);
  return distribute(a, config, sc, weight_total(a, config));
}

ScoreBreakdown score_breakdown(const QuestionAnnotation& a, const MetricConfig& config) {
  ScoreBreakdown b;
  b.qid = a.qid;
  b.w_r = thinking_weight(a, config);
  b.sc = question_score(a, config);
  b.nt = static_cast<int>(a.targets.size());
  b.t_sum = weight_total(a, config);
  b.target_scores = distribute(a, config, b.sc, b.t_sum);
  if (!a.contents.empty()) {
    const Rational share =
        config.content_attribution == ContentAttribution::full
            ? b.sc
            : b.sc / Rational(static_cast<long long>(a.contents.size()));
    for (const auto& c : a.contents) b.content_attributions[c] += share;
  }
  b.thinking_attribution = {a.thinking, b.sc};
  return b;
}

}  // namespace cogme
