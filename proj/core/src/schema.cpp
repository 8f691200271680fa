#include "cogme/schema.hpp"

#include <algorithm>
#include <map>

#include "cogme/errors.hpp"

namespace cogme {

std::string_view to_string(Module module) {
  switch (module) {
    case Module::content: return "content";
    case Module::target: return "target";
    case Module::thinking: return "thinking";
  }
  return "unknown";
}

std::optional<Module> module_from_string(std::string_view text) {
  for (Module m : kModules) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

std::string_view to_string(Level level) {
  return level == Level::shot ? "shot" : "scene";
}

std::optional<Level> level_from_string(std::string_view text) {
  if (text == "shot") return Level::shot;
  if (text == "scene") return Level::scene;
  return std::nullopt;
}

namespace {
constexpr QuestionType kQuestionTypes[] = {
    QuestionType::who, QuestionType::what, QuestionType::where,
    QuestionType::when, QuestionType::why, QuestionType::how,
    QuestionType::other};
}  // namespace

std::string_view to_string(QuestionType type) {
  switch (type) {
    case QuestionType::who: return "who";
    case QuestionType::what: return "what";
    case QuestionType::where: return "where";
    case QuestionType::when: return "when";
    case QuestionType::why: return "why";
    case QuestionType::how: return "how";
    case QuestionType::other: return "other";
  }
  return "other";
}

std::optional<QuestionType> question_type_from_string(std::string_view text) {
  for (QuestionType t : kQuestionTypes) {
    if (to_string(t) == text) return t;
  }
  return std::nullopt;
}

ElementVocabulary ElementVocabulary::defaults() {
  return ElementVocabulary(
      {"character", "object", "place", "time", "conversation", "behavior",
       "event", "emotion", "humor", "commonsense"},
      {"identity", "feature", "relationship", "means", "context", "sequence",
       "causality", "motivation"},
      {"recall", "recognition", "reasoning"}, {"time", "humor"});
}

ElementVocabulary::ElementVocabulary(std::set<std::string> targets,
                                     std::set<std::string> contents,
                                     std::set<std::string> thinking,
                                     std::set<std::string> excluded)
    : targets_(std::move(targets)),
      contents_(std::move(contents)),
      thinking_(std::move(thinking)),
      excluded_(std::move(excluded)) {
  std::map<std::string, Module> seen;
  for (Module m : kModules) {
    for (const auto& e : elements(m)) {
      if (e.empty()) throw ConfigError("vocabulary: empty element identifier");
      auto [it, inserted] = seen.emplace(e, m);
      if (!inserted) {
        throw ConfigError("vocabulary: element '" + e + "' is in both " +
                          std::string(to_string(it->second)) + " and " +
                          std::string(to_string(m)));
      }
    }
  }
  for (const auto& e : excluded_) {
    if (!seen.contains(e)) {
      throw ConfigError("vocabulary: excluded element '" + e +
                        "' is not in any module");
    }
  }
}

const std::set<std::string>& ElementVocabulary::elements(Module module) const {
  switch (module) {
    case Module::target: return targets_;
    case Module::content: return contents_;
    case Module::thinking: return thinking_;
  }
  return targets_;
}

std::optional<Module> ElementVocabulary::module_of(std::string_view element) const {
  for (Module m : kModules) {
    const auto& set = elements(m);
    if (set.find(std::string(element)) != set.end()) return m;
  }
  return std::nullopt;
}

bool ElementVocabulary::is_excluded(std::string_view element) const {
  return excluded_.find(std::string(element)) != excluded_.end();
}

bool ElementVocabulary::is_active(Module module, std::string_view element) const {
  const auto& set = elements(module);
  return set.find(std::string(element)) != set.end() && !is_excluded(element);
}

std::vector<std::string> ElementVocabulary::active(Module module) const {
  std::vector<std::string> out;
  for (const auto& e : elements(module)) {
    if (!is_excluded(e)) out.push_back(e);
  }
  return out;
}

const TargetTag* QuestionAnnotation::key_target() const {
  const TargetTag* found = nullptr;
  for (const auto& t : targets) {
    if (!t.key) continue;
    if (found != nullptr) return nullptr;
    found = &t;
  }
  return found;
}

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(std::count_if(
      violations.begin(), violations.end(),
      [](const Violation& v) { return v.severity == Severity::error; }));
}

std::size_t ValidationReport::warning_count() const {
  return violations.size() - error_count();
}

namespace {

// Checks one tagged element against its expected module.
void check_element(const std::string& qid, const std::string& path,
                   const std::string& element, Module expected,
                   const ElementVocabulary& vocabulary,
                   std::vector<Violation>& out) {
  const auto actual = vocabulary.module_of(element);
  if (!actual) {
    out.push_back({qid, path, "unknown element '" + element + "'"});
  } else if (*actual != expected) {
    out.push_back({qid, path,
                   "element '" + element + "' belongs to the " +
                       std::string(to_string(*actual)) + " module, not " +
                       std::string(to_string(expected))});
  } else if (vocabulary.is_excluded(element)) {
    out.push_back({qid, path, "element excluded: '" + element + "'"});
  }
}

void sort_violations(std::vector<Violation>& v) {
  std::sort(v.begin(), v.end());
}

}  // namespace

ValidationReport validate_annotation(const QuestionAnnotation& a,
                                     const ElementVocabulary& vocabulary) {
  std::vector<Violation> out;
  const std::string& qid = a.qid;
  if (qid.empty()) out.push_back({qid, "qid", "empty qid"});

  if (a.targets.empty()) {
    out.push_back({qid, "targets", "no target elements"});
  } else {
    std::size_t keys = 0;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < a.targets.size(); ++i) {
      const auto& t = a.targets[i];
      const std::string path = "targets[" + std::to_string(i) + "]";
      if (t.key) ++keys;
      if (!seen.insert(t.element).second) {
        out.push_back({qid, path + ".element",
                       "duplicate target element '" + t.element + "'"});
      }
      check_element(qid, path + ".element", t.element, Module::target,
                    vocabulary, out);
    }
    if (keys == 0) {
      out.push_back({qid, "targets", "no key target"});
    } else if (keys > 1) {
      out.push_back({qid, "targets", "multiple key targets"});
    }
  }

  std::set<std::string> seen_contents;
  for (std::size_t i = 0; i < a.contents.size(); ++i) {
    const std::string path = "contents[" + std::to_string(i) + "]";
    if (!seen_contents.insert(a.contents[i]).second) {
      out.push_back({qid, path,
                     "duplicate content element '" + a.contents[i] + "'"});
    }
    check_element(qid, path, a.contents[i], Module::content, vocabulary, out);
  }
  if (a.contents.empty()) {
    out.push_back({qid, "contents", "no content elements", Severity::warning});
  }

  if (a.thinking.empty()) {
    out.push_back({qid, "thinking", "missing thinking element"});
  } else {
    check_element(qid, "thinking", a.thinking, Module::thinking, vocabulary,
                  out);
  }

  if (a.correct_index.has_value() != a.num_options.has_value()) {
    out.push_back({qid, a.correct_index ? "num_options" : "correct_index",
                   "correct_index and num_options must be given together"});
  } else if (a.has_answer_key()) {
    if (*a.num_options < 1) {
      out.push_back({qid, "num_options", "num_options must be positive"});
    } else if (*a.correct_index < 0 || *a.correct_index >= *a.num_options) {
      out.push_back({qid, "correct_index",
                     "correct_index " + std::to_string(*a.correct_index) +
                         " out of range [0, " +
                         std::to_string(*a.num_options) + ")"});
    }
  }

  sort_violations(out);
  return {std::move(out)};
}

ValidationReport validate_dataset(std::span<const QuestionAnnotation> annotations,
                                  const ElementVocabulary& vocabulary) {
  std::vector<Violation> out;
  std::map<std::string, std::size_t> qid_counts;
  for (const auto& a : annotations) {
    auto report = validate_annotation(a, vocabulary);
    out.insert(out.end(), std::make_move_iterator(report.violations.begin()),
               std::make_move_iterator(report.violations.end()));
    ++qid_counts[a.qid];
  }
  for (const auto& [qid, count] : qid_counts) {
    if (count > 1) out.push_back({qid, "qid", "duplicate qid " + qid});
  }
  sort_violations(out);
  return {std::move(out)};
}

}  // namespace cogme
