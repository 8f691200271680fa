#include "cogme/profiler.hpp"

#include <algorithm>
#include <set>
#include <thread>

#include "cogme/errors.hpp"
#include "cogme/scoring.hpp"

namespace cogme {

namespace {

std::string qtype_key(const QuestionAnnotation& a) {
  return std::string(to_string(a.qtype.value_or(QuestionType::other)));
}

std::optional<Rational> percent(const Rational& part, const Rational& whole) {
  if (whole == 0) return std::nullopt;
  return Rational(100) * part / whole;
}

}  // namespace

JoinResult join_outcomes(std::span<const QuestionAnnotation> annotations,
                         std::span<const PredictionRecord> predictions) {
  JoinResult result;
  std::map<std::string, const QuestionAnnotation*> by_qid;
  for (const auto& a : annotations) by_qid.emplace(a.qid, &a);

  std::map<std::string, const PredictionRecord*> matched;
  std::set<std::string> unknown;
  for (const auto& p : predictions) {
    if (!by_qid.contains(p.qid)) {
      unknown.insert(p.qid);
      continue;
    }
    if (!matched.emplace(p.qid, &p).second) {
      result.errors.push_back("duplicate prediction for qid " + p.qid);
    }
  }
  for (const auto& qid : unknown) {
    result.unknown_predictions.push_back(qid);
    result.errors.push_back("prediction for unknown qid " + qid);
  }

  for (const auto& [qid, annotation] : by_qid) {
    auto it = matched.find(qid);
    if (it == matched.end()) {
      result.uncovered.push_back(qid);
      continue;
    }
    const Outcome& outcome = it->second->outcome;
    if (const auto* flag = std::get_if<CorrectFlag>(&outcome)) {
      result.outcomes[qid] = flag->value;
    } else if (const auto* index = std::get_if<PredictedIndex>(&outcome)) {
      if (!annotation->has_answer_key()) {
        result.errors.push_back("predicted_index for qid " + qid +
                                " whose annotation has no correct_index/num_options");
      } else if (index->value < 0 || index->value >= *annotation->num_options) {
        result.errors.push_back("predicted_index " + std::to_string(index->value) +
                                " out of range for qid " + qid);
      } else {
        result.outcomes[qid] = index->value == *annotation->correct_index;
      }
    } else {
      result.text_only.push_back(qid);
      result.uncovered.push_back(qid);
    }
  }
  std::sort(result.uncovered.begin(), result.uncovered.end());
  std::sort(result.errors.begin(), result.errors.end());
  return result;
}

std::optional<Rational> QtypeSlice::accuracy_pct() const {
  return percent(Rational(correct_count), Rational(question_count));
}

PartialProfile::PartialProfile(MetricConfig config) : config_(std::move(config)) {}

void PartialProfile::add(const QuestionAnnotation& a, bool correct) {
  const ScoreBreakdown b = score_breakdown(a, config_);
  auto credit = [&](Module module, const std::string& element, const Rational& weight) {
    ElementTally& t = tallies_[ElementKey{module, element}];
    ++t.question_count;
    t.allotted += weight;
    if (correct) {
      ++t.correct_count;
      t.earned += weight;
    }
  };
  for (const auto& [element, weight] : b.target_scores) credit(Module::target, element, weight);
  for (const auto& [element, weight] : b.content_attributions) {
    credit(Module::content, element, weight);
  }
  credit(Module::thinking, b.thinking_attribution.first, b.thinking_attribution.second);

  ++question_total_;
  allotted_total_ += b.sc;
  if (correct) earned_total_ += b.sc;

  QtypeSlice& slice = qtypes_[qtype_key(a)];
  ++slice.question_count;
  if (correct) ++slice.correct_count;
}

PartialProfile merge_partials(const PartialProfile& a, const PartialProfile& b) {
  if (!(a.config_ == b.config_)) {
    throw DataError("cannot merge partial profiles built with different configurations");
  }
  PartialProfile out = a;
  for (const auto& [key, t] : b.tallies_) {
    ElementTally& dst = out.tallies_[key];
    dst.question_count += t.question_count;
    dst.correct_count += t.correct_count;
    dst.allotted += t.allotted;
    dst.earned += t.earned;
  }
  for (const auto& [key, s] : b.qtypes_) {
    QtypeSlice& dst = out.qtypes_[key];
    dst.question_count += s.question_count;
    dst.correct_count += s.correct_count;
  }
  out.question_total_ += b.question_total_;
  out.uncovered_total_ += b.uncovered_total_;
  out.allotted_total_ += b.allotted_total_;
  out.earned_total_ += b.earned_total_;
  return out;
}

std::optional<Rational> ElementProfile::accuracy_pct() const { return percent(earned, allotted); }

std::optional<Rational> ElementProfile::question_ratio_pct() const {
  return percent(Rational(correct_count), Rational(question_count));
}

std::string_view to_string(DiagnosticFlag flag) {
  switch (flag) {
    case DiagnosticFlag::low_accuracy: return "LOW_ACCURACY";
    case DiagnosticFlag::low_frequency: return "LOW_FREQUENCY";
    case DiagnosticFlag::low_both: return "LOW_BOTH";
  }
  return "LOW_ACCURACY";
}

std::optional<DiagnosticFlag> diagnostic_flag_from_string(std::string_view text) {
  for (auto f : {DiagnosticFlag::low_accuracy, DiagnosticFlag::low_frequency,
                 DiagnosticFlag::low_both}) {
    if (to_string(f) == text) return f;
  }
  return std::nullopt;
}

std::optional<Rational> ProfileReport::overall_accuracy_pct() const {
  return percent(earned_total, allotted_total);
}

const ElementProfile* ProfileReport::find(Module module, std::string_view element) const {
  auto it = modules.find(module);
  if (it == modules.end()) return nullptr;
  for (const auto& p : it->second) {
    if (p.element == element) return &p;
  }
  return nullptr;
}

ProfileReport finalize(const PartialProfile& partial) {
  ProfileReport report;
  report.config = partial.config();
  report.question_total = partial.question_total();
  report.uncovered_total = partial.uncovered_total();
  report.allotted_total = partial.allotted_total();
  report.earned_total = partial.earned_total();
  report.qtype_slices = partial.qtype_slices();

  std::map<ElementKey, ElementTally> rows;
  for (Module m : kModules) {
    for (const auto& e : report.config.vocabulary.active(m)) rows[ElementKey{m, e}];
  }
  for (const auto& [key, t] : partial.tallies()) rows[key] = t;
  for (Module m : kModules) report.modules[m];
  for (const auto& [key, t] : rows) {
    report.modules[key.module].push_back(ElementProfile{
        key.element, key.module, t.question_count, t.correct_count, t.allotted, t.earned});
  }
  report.diagnostics = diagnostics(report, report.config);
  return report;
}

ProfileReport aggregate_profile(std::span<const QuestionAnnotation> annotations,
                                const std::map<std::string, bool>& outcomes,
                                const MetricConfig& config) {
  PartialProfile partial(config);
  for (const auto& a : annotations) {
    auto it = outcomes.find(a.qid);
    if (it == outcomes.end()) {
      partial.add_uncovered();
    } else {
      partial.add(a, it->second);
    }
  }
  return finalize(partial);
}

ProfileReport aggregate_profile_parallel(std::span<const QuestionAnnotation> annotations,
                                         const std::map<std::string, bool>& outcomes,
                                         const MetricConfig& config, unsigned jobs) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(annotations.size())));
  if (jobs <= 1) return aggregate_profile(annotations, outcomes, config);

  std::vector<PartialProfile> partials(jobs, PartialProfile(config));
  std::vector<std::exception_ptr> failures(jobs);
  {
    std::vector<std::jthread> workers;
    const std::size_t chunk = (annotations.size() + jobs - 1) / jobs;
    for (unsigned j = 0; j < jobs; ++j) {
      const std::size_t begin = std::min(annotations.size(), j * chunk);
      const std::size_t end = std::min(annotations.size(), begin + chunk);
      workers.emplace_back([&, j, begin, end] {
        try {
          for (std::size_t i = begin; i < end; ++i) {
            const auto& a = annotations[i];
            auto it = outcomes.find(a.qid);
            if (it == outcomes.end()) {
              partials[j].add_uncovered();
            } else {
              partials[j].add(a, it->second);
            }
          }
        } catch (...) {
          failures[j] = std::current_exception();
        }
      });
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  PartialProfile merged(config);
  for (const auto& p : partials) merged = merge_partials(merged, p);
  return finalize(merged);
}

std::vector<Diagnostic> diagnostics(const ProfileReport& report, const MetricConfig& config) {
  std::vector<Diagnostic> out;
  for (const auto& [module, rows] : report.modules) {
    for (const auto& p : rows) {
      const auto accuracy = p.accuracy_pct();
      const Rational frequency =
          report.question_total > 0
              ? Rational(p.question_count) / Rational(report.question_total)
              : Rational(0);
      const bool low_accuracy = accuracy && *accuracy < config.accuracy_threshold_pct;
      const bool low_frequency = frequency < config.low_frequency_fraction;
      if (!low_accuracy && !low_frequency) continue;
      const DiagnosticFlag flag = low_accuracy && low_frequency ? DiagnosticFlag::low_both
                                  : low_accuracy                ? DiagnosticFlag::low_accuracy
                                                                : DiagnosticFlag::low_frequency;
      out.push_back(Diagnostic{module, p.element, flag, accuracy, frequency});
    }
  }
  return out;
}

std::map<std::string, QtypeSlice> slice_by_qtype(
    std::span<const QuestionAnnotation> annotations,
    const std::map<std::string, bool>& outcomes) {
  std::map<std::string, QtypeSlice> out;
  for (const auto& a : annotations) {
    auto it = outcomes.find(a.qid);
    if (it == outcomes.end()) continue;
    QtypeSlice& slice = out[qtype_key(a)];
    ++slice.question_count;
    if (it->second) ++slice.correct_count;
  }
  return out;
}

std::optional<Rational> ElementDelta::delta() const {
  if (!comparable()) return std::nullopt;
  return *b_pct - *a_pct;
}

std::optional<Rational> ProfileDiff::overall_delta() const {
  if (!a_overall || !b_overall) return std::nullopt;
  return *b_overall - *a_overall;
}

ProfileDiff diff_profiles(const ProfileReport& a, const ProfileReport& b) {
  std::map<std::string, Module> modules_a;
  for (const auto& [module, rows] : a.modules) {
    for (const auto& p : rows) modules_a.emplace(p.element, module);
  }
  std::map<ElementKey, ElementDelta> rows;
  for (const auto& [module, list] : a.modules) {
    for (const auto& p : list) {
      ElementDelta& d = rows[ElementKey{module, p.element}];
      d.module = module;
      d.element = p.element;
      d.in_a = true;
      d.a_pct = p.accuracy_pct();
    }
  }
  for (const auto& [module, list] : b.modules) {
    for (const auto& p : list) {
      auto other = modules_a.find(p.element);
      if (other != modules_a.end() && other->second != module) {
        throw DataError("vocabulary mismatch: '" + p.element + "' is a " +
                        std::string(to_string(other->second)) + " element in the first report and a " +
                        std::string(to_string(module)) + " element in the second");
      }
      ElementDelta& d = rows[ElementKey{module, p.element}];
      d.module = module;
      d.element = p.element;
      d.in_b = true;
      d.b_pct = p.accuracy_pct();
    }
  }
  ProfileDiff diff;
  for (auto& [key, d] : rows) diff.elements.push_back(std::move(d));
  diff.a_overall = a.overall_accuracy_pct();
  diff.b_overall = b.overall_accuracy_pct();
  return diff;
}

}  // namespace cogme
