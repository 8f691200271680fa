#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cogme/config.hpp"
#include "cogme/ingest.hpp"
#include "cogme/rational.hpp"
#include "cogme/schema.hpp"

namespace cogme {

// Correctness per question after matching predictions to annotations.
struct JoinResult {
  std::map<std::string, bool> outcomes;
  // Annotations with no usable outcome. They are left out of profiles.
  std::vector<std::string> uncovered;
  // Prediction qids with no annotation.
  std::vector<std::string> unknown_predictions;
  // Annotations whose only prediction is free text (scored by text metrics).
  std::vector<std::string> text_only;
  // Duplicate predictions, index outcomes without an answer key, indices out
  // of range, and unknown prediction qids.
  std::vector<std::string> errors;

  bool ok() const { return errors.empty(); }
};

// An explicit `correct` flag wins over a predicted index, which is compared to
// the annotation's correct_index.
JoinResult join_outcomes(std::span<const QuestionAnnotation> annotations,
                         std::span<const PredictionRecord> predictions);

struct ElementKey {
  Module module;
  std::string element;

  auto operator<=>(const ElementKey&) const = default;
};

struct ElementTally {
  long long question_count = 0;
  long long correct_count = 0;
  Rational allotted;
  Rational earned;

  bool operator==(const ElementTally&) const = default;
};

struct QtypeSlice {
  long long question_count = 0;
  long long correct_count = 0;

  // Unweighted correct ratio in percent; empty without questions.
  std::optional<Rational> accuracy_pct() const;
  bool operator==(const QtypeSlice&) const = default;
};

// Running sums over some subset of questions. Partials built with the same
// configuration merge associatively and commutatively.
class PartialProfile {
 public:
  explicit PartialProfile(MetricConfig config);

  // Throws InvalidAnnotation / ConfigError like score_breakdown.
  void add(const QuestionAnnotation& annotation, bool correct);
  void add_uncovered() { ++uncovered_total_; }

  const MetricConfig& config() const { return config_; }
  const std::map<ElementKey, ElementTally>& tallies() const { return tallies_; }
  const std::map<std::string, QtypeSlice>& qtype_slices() const { return qtypes_; }
  long long question_total() const { return question_total_; }
  long long uncovered_total() const { return uncovered_total_; }
  const Rational& allotted_total() const { return allotted_total_; }
  const Rational& earned_total() const { return earned_total_; }

  bool operator==(const PartialProfile&) const = default;

 private:
  friend PartialProfile merge_partials(const PartialProfile&, const PartialProfile&);

  MetricConfig config_;
  std::map<ElementKey, ElementTally> tallies_;
  std::map<std::string, QtypeSlice> qtypes_;
  long long question_total_ = 0;
  long long uncovered_total_ = 0;
  Rational allotted_total_;
  Rational earned_total_;
};

// Field-wise sums. Throws DataError when the configurations differ.
PartialProfile merge_partials(const PartialProfile& a, const PartialProfile& b);

struct ElementProfile {
  std::string element;
  Module module = Module::target;
  long long question_count = 0;
  long long correct_count = 0;
  Rational allotted;
  Rational earned;

  // 100 * earned / allotted; empty when nothing was allotted.
  std::optional<Rational> accuracy_pct() const;
  // 100 * correct_count / question_count; empty without questions.
  std::optional<Rational> question_ratio_pct() const;

  bool operator==(const ElementProfile&) const = default;
};

enum class DiagnosticFlag { low_accuracy, low_frequency, low_both };

std::string_view to_string(DiagnosticFlag flag);
std::optional<DiagnosticFlag> diagnostic_flag_from_string(std::string_view text);

struct Diagnostic {
  Module module = Module::target;
  std::string element;
  DiagnosticFlag flag = DiagnosticFlag::low_accuracy;
  std::optional<Rational> accuracy_pct;
  Rational frequency;  // question_count / question_total

  bool operator==(const Diagnostic&) const = default;
};

struct ProfileReport {
  MetricConfig config;
  // Every active vocabulary element once, ordered by module then element.
  std::map<Module, std::vector<ElementProfile>> modules;
  long long question_total = 0;
  long long uncovered_total = 0;
  Rational allotted_total;
  Rational earned_total;
  std::vector<Diagnostic> diagnostics;
  std::map<std::string, QtypeSlice> qtype_slices;

  std::optional<Rational> overall_accuracy_pct() const;
  const ElementProfile* find(Module module, std::string_view element) const;

  bool operator==(const ProfileReport&) const = default;
};

// Turns sums into a report, filling in zero rows for untagged elements and
// computing diagnostics.
ProfileReport finalize(const PartialProfile& partial);

// Weighted per-element profile. Target elements are credited their share of
// the allotted score, content elements their attribution, and the thinking
// element the whole score. Questions without an outcome count as uncovered.
ProfileReport aggregate_profile(std::span<const QuestionAnnotation> annotations,
                                const std::map<std::string, bool>& outcomes,
                                const MetricConfig& config);

// Same result as aggregate_profile, computed over `jobs` contiguous
// partitions on separate threads and merged.
ProfileReport aggregate_profile_parallel(std::span<const QuestionAnnotation> annotations,
                                         const std::map<std::string, bool>& outcomes,
                                         const MetricConfig& config, unsigned jobs);

// LOW_ACCURACY below the threshold (strict), LOW_FREQUENCY below the
// frequency fraction, LOW_BOTH when both hold.
std::vector<Diagnostic> diagnostics(const ProfileReport& report, const MetricConfig& config);

// Unweighted correct ratio per question type; untyped questions count as
// "other".
std::map<std::string, QtypeSlice> slice_by_qtype(
    std::span<const QuestionAnnotation> annotations,
    const std::map<std::string, bool>& outcomes);

struct ElementDelta {
  Module module = Module::target;
  std::string element;
  bool in_a = false;
  bool in_b = false;
  std::optional<Rational> a_pct;
  std::optional<Rational> b_pct;

  bool comparable() const { return a_pct.has_value() && b_pct.has_value(); }
  // b - a, in percentage points.
  std::optional<Rational> delta() const;
};

struct ProfileDiff {
  std::vector<ElementDelta> elements;  // canonical order
  std::optional<Rational> a_overall;
  std::optional<Rational> b_overall;

  std::optional<Rational> overall_delta() const;
};

// Element-aligned accuracy differences. Elements missing from one report, or
// without accuracy in either, are incomparable. Throws DataError when an
// element sits in different modules in the two reports.
ProfileDiff diff_profiles(const ProfileReport& a, const ProfileReport& b);

}  // namespace cogme
