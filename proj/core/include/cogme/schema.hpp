#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cogme {

// The three cognitive modules. Declaration order is the canonical report
// order (lexicographic by name).
enum class Module { content, target, thinking };

inline constexpr Module kModules[] = {Module::content, Module::target,
                                      Module::thinking};

std::string_view to_string(Module module);
std::optional<Module> module_from_string(std::string_view text);

// Story elements available to annotators, grouped by module, plus the subset
// disabled for the current dataset. Loaded from configuration so new story
// forms can extend it.
class ElementVocabulary {
 public:
  // character..commonsense / identity..motivation / recall..reasoning, with
  // time and humor excluded.
  static ElementVocabulary defaults();

  // Throws ConfigError when the module sets overlap or an excluded element is
  // not in any module.
  ElementVocabulary(std::set<std::string> targets,
                    std::set<std::string> contents,
                    std::set<std::string> thinking,
                    std::set<std::string> excluded);

  const std::set<std::string>& elements(Module module) const;
  const std::set<std::string>& excluded() const { return excluded_; }

  std::optional<Module> module_of(std::string_view element) const;
  bool is_excluded(std::string_view element) const;
  // In `module` and not excluded.
  bool is_active(Module module, std::string_view element) const;
  std::vector<std::string> active(Module module) const;

  bool operator==(const ElementVocabulary&) const = default;

 private:
  std::set<std::string> targets_;
  std::set<std::string> contents_;
  std::set<std::string> thinking_;
  std::set<std::string> excluded_;
};

enum class Level { shot, scene };
enum class QuestionType { who, what, where, when, why, how, other };

std::string_view to_string(Level level);
std::optional<Level> level_from_string(std::string_view text);
std::string_view to_string(QuestionType type);
std::optional<QuestionType> question_type_from_string(std::string_view text);

struct TargetTag {
  std::string element;
  bool key = false;

  bool operator==(const TargetTag&) const = default;
};

// One question's story-element tags. correct_index and num_options travel
// together; when both are absent correctness comes from a predictions file.
struct QuestionAnnotation {
  std::string qid;
  Level level = Level::shot;
  std::string question;
  std::optional<QuestionType> qtype;
  std::vector<TargetTag> targets;
  std::vector<std::string> contents;
  std::string thinking;
  std::optional<int> correct_index;
  std::optional<int> num_options;

  bool has_answer_key() const {
    return correct_index.has_value() && num_options.has_value();
  }
  // The key target, or nullptr when there is not exactly one.
  const TargetTag* key_target() const;

  bool operator==(const QuestionAnnotation&) const = default;
};

enum class Severity { error, warning };

struct Violation {
  std::string qid;
  std::string path;  // e.g. "targets[1].key"
  std::string message;
  Severity severity = Severity::error;

  auto operator<=>(const Violation&) const = default;
};

struct ValidationReport {
  // Sorted by (qid, path, message).
  std::vector<Violation> violations;

  std::size_t error_count() const;
  std::size_t warning_count() const;
  bool ok() const { return error_count() == 0; }
};

// Every violation of the annotation rules, not just the first. A question
// without content elements is reported as a warning.
ValidationReport validate_annotation(const QuestionAnnotation& annotation,
                                     const ElementVocabulary& vocabulary);

// Per-record violations plus duplicate qids. Independent of record order.
ValidationReport validate_dataset(std::span<const QuestionAnnotation> annotations,
                                  const ElementVocabulary& vocabulary);

}  // namespace cogme
