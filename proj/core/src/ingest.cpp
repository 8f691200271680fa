#include "cogme/ingest.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cogme/errors.hpp"

namespace cogme {

ParseError::ParseError(const std::string& message, std::size_t line,
                       std::size_t byte_offset, std::string field)
    : Error(message), line_(line), byte_offset_(byte_offset), field_(std::move(field)) {}

namespace {

using json = nlohmann::json;

// Location context for one JSON Lines record.
struct LineContext {
  std::size_t line;
  std::size_t offset;
  ParseOptions options;

  [[noreturn]] void fail(const std::string& message,
                         const std::string& field = {}) const {
    throw ParseError("line " + std::to_string(line) + " (byte " +
                         std::to_string(offset) + "): " + message,
                     line, offset, field);
  }

  void check_fields(const json& object, std::initializer_list<std::string_view> known,
                    const std::string& where) const {
    if (!options.strict) return;
    for (const auto& [name, unused] : object.items()) {
      bool found = false;
      for (auto k : known) found = found || k == name;
      if (!found) fail("unknown field '" + where + name + "'", where + name);
    }
  }

  const json& required(const json& object, const std::string& field) const {
    auto it = object.find(field);
    if (it == object.end()) fail("missing required field '" + field + "'", field);
    return *it;
  }

  std::string string_field(const json& value, const std::string& field) const {
    if (!value.is_string()) fail("field '" + field + "' must be a string", field);
    return value.get<std::string>();
  }

  int int_field(const json& value, const std::string& field) const {
    if (!value.is_number_integer()) {
      fail("field '" + field + "' must be an integer", field);
    }
    const auto v = value.get<long long>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      fail("field '" + field + "' out of range", field);
    }
    return static_cast<int>(v);
  }

  bool bool_field(const json& value, const std::string& field) const {
    if (!value.is_boolean()) fail("field '" + field + "' must be a boolean", field);
    return value.get<bool>();
  }
};

// Calls `handle` for every non-blank line with its context and parsed object.
template <typename Handler>
void for_each_record(std::istream& in, ParseOptions options, Handler&& handle) {
  std::string line;
  std::size_t number = 0;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::size_t line_start = offset;
    offset += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    LineContext ctx{number, line_start, options};
    json object;
    try {
      object = json::parse(line);
    } catch (const json::parse_error& e) {
      ctx.offset = line_start + (e.byte > 0 ? e.byte - 1 : 0);
      ctx.fail(std::string("malformed JSON: ") + e.what());
    }
    if (!object.is_object()) ctx.fail("record is not a JSON object");
    handle(ctx, object);
  }
}

QuestionAnnotation annotation_from_json(const LineContext& ctx, const json& o) {
  ctx.check_fields(o, {"qid", "level", "question", "qtype", "targets", "contents",
                       "thinking", "correct_index", "num_options"},
                   "");
  QuestionAnnotation a;
  a.qid = ctx.string_field(ctx.required(o, "qid"), "qid");

  const std::string level = ctx.string_field(ctx.required(o, "level"), "level");
  const auto parsed_level = level_from_string(level);
  if (!parsed_level) ctx.fail("field 'level' must be \"shot\" or \"scene\", got \"" + level + "\"", "level");
  a.level = *parsed_level;

  if (auto it = o.find("question"); it != o.end()) {
    a.question = ctx.string_field(*it, "question");
  }
  if (auto it = o.find("qtype"); it != o.end() && !it->is_null()) {
    const std::string text = ctx.string_field(*it, "qtype");
    a.qtype = question_type_from_string(text);
    if (!a.qtype) ctx.fail("unknown qtype \"" + text + "\"", "qtype");
  }

  const json& targets = ctx.required(o, "targets");
  if (!targets.is_array()) ctx.fail("field 'targets' must be an array", "targets");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const std::string path = "targets[" + std::to_string(i) + "]";
    const json& t = targets[i];
    if (!t.is_object()) ctx.fail("'" + path + "' must be an object", path);
    ctx.check_fields(t, {"element", "key"}, path + ".");
    TargetTag tag;
    tag.element = ctx.string_field(ctx.required(t, "element"), path + ".element");
    if (auto it = t.find("key"); it != t.end()) tag.key = ctx.bool_field(*it, path + ".key");
    a.targets.push_back(std::move(tag));
  }

  if (auto it = o.find("contents"); it != o.end()) {
    if (!it->is_array()) ctx.fail("field 'contents' must be an array", "contents");
    for (std::size_t i = 0; i < it->size(); ++i) {
      a.contents.push_back(
          ctx.string_field((*it)[i], "contents[" + std::to_string(i) + "]"));
    }
  }

  a.thinking = ctx.string_field(ctx.required(o, "thinking"), "thinking");

  if (auto it = o.find("correct_index"); it != o.end() && !it->is_null()) {
    a.correct_index = ctx.int_field(*it, "correct_index");
  }
  if (auto it = o.find("num_options"); it != o.end() && !it->is_null()) {
    a.num_options = ctx.int_field(*it, "num_options");
  }
  return a;
}

PredictionRecord prediction_from_json(const LineContext& ctx, const json& o) {
  ctx.check_fields(o, {"qid", "correct", "predicted_index", "predicted_text"}, "");
  PredictionRecord r;
  r.qid = ctx.string_field(ctx.required(o, "qid"), "qid");
  if (r.qid.empty()) ctx.fail("field 'qid' must be non-empty", "qid");

  const bool has_correct = o.contains("correct");
  const bool has_index = o.contains("predicted_index");
  const bool has_text = o.contains("predicted_text");
  const int forms = int{has_correct} + int{has_index} + int{has_text};
  if (forms > 1) {
    ctx.fail("ambiguous outcome: give exactly one of correct, predicted_index, predicted_text");
  }
  if (forms == 0) {
    ctx.fail("missing outcome: one of correct, predicted_index, predicted_text is required");
  }
  if (has_correct) {
    r.outcome = CorrectFlag{ctx.bool_field(o.at("correct"), "correct")};
  } else if (has_index) {
    r.outcome = PredictedIndex{ctx.int_field(o.at("predicted_index"), "predicted_index")};
  } else {
    r.outcome = PredictedText{ctx.string_field(o.at("predicted_text"), "predicted_text")};
  }
  return r;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

// Converts a JSON number, or a string such as "8/3", to an exact rational.
Rational rational_value(const json& value, const std::string& field) {
  try {
    if (value.is_number_integer()) return Rational(value.get<long long>());
    if (value.is_number()) return rational_from_double(value.get<double>());
    if (value.is_string()) return parse_rational(value.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("field '" + field + "': " + e.what());
  }
  throw ConfigError("field '" + field + "' must be a number");
}

std::set<std::string> string_set(const json& value, const std::string& field) {
  if (!value.is_array()) throw ConfigError("field '" + field + "' must be an array");
  std::set<std::string> out;
  for (const auto& v : value) {
    if (!v.is_string()) throw ConfigError("field '" + field + "' must hold strings");
    out.insert(v.get<std::string>());
  }
  return out;
}

void reject_unknown(const json& object, std::initializer_list<std::string_view> known,
                    const std::string& where, ParseOptions options) {
  if (!options.strict) return;
  for (const auto& [name, unused] : object.items()) {
    bool found = false;
    for (auto k : known) found = found || k == name;
    if (!found) {
      throw ParseError("unknown config field '" + where + name + "'", 0, 0, where + name);
    }
  }
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return buffer.str();
}

std::vector<QuestionAnnotation> parse_annotations(std::istream& in, ParseOptions options) {
  std::vector<QuestionAnnotation> out;
  for_each_record(in, options, [&](const LineContext& ctx, const json& o) {
    out.push_back(annotation_from_json(ctx, o));
  });
  return out;
}

std::vector<QuestionAnnotation> parse_annotations(const std::filesystem::path& path,
                                                  ParseOptions options) {
  auto in = open_input(path);
  return parse_annotations(in, options);
}

std::vector<PredictionRecord> parse_predictions(std::istream& in, ParseOptions options) {
  std::vector<PredictionRecord> out;
  for_each_record(in, options, [&](const LineContext& ctx, const json& o) {
    out.push_back(prediction_from_json(ctx, o));
  });
  return out;
}

std::vector<PredictionRecord> parse_predictions(const std::filesystem::path& path,
                                                ParseOptions options) {
  auto in = open_input(path);
  return parse_predictions(in, options);
}

MetricConfig parse_config_text(std::string_view text, ParseOptions options) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    const std::size_t line = line_of_offset(text, offset);
    throw ParseError("line " + std::to_string(line) + " (byte " + std::to_string(offset) +
                         "): malformed JSON: " + e.what(),
                     line, offset);
  }
  if (!root.is_object()) throw ParseError("config must be a JSON object", 1, 0);
  reject_unknown(root,
                 {"thinking_weights", "key_target_weight", "content_attribution",
                  "excluded_elements", "accuracy_threshold_pct", "low_frequency_fraction",
                  "vocabulary"},
                 "", options);

  MetricConfig config;
  const ElementVocabulary defaults = config.vocabulary;

  std::optional<std::set<std::string>> excluded;
  if (auto it = root.find("excluded_elements"); it != root.end()) {
    excluded = string_set(*it, "excluded_elements");
  }

  if (auto it = root.find("vocabulary"); it != root.end()) {
    if (!it->is_object()) throw ConfigError("field 'vocabulary' must be an object");
    reject_unknown(*it, {"targets", "contents", "thinking", "excluded"}, "vocabulary.",
                   options);
    auto module_set = [&](const char* name, Module module) {
      auto f = it->find(name);
      return f == it->end() ? defaults.elements(module)
                            : string_set(*f, std::string("vocabulary.") + name);
    };
    auto targets = module_set("targets", Module::target);
    auto contents = module_set("contents", Module::content);
    auto thinking = module_set("thinking", Module::thinking);
    if (auto f = it->find("excluded"); f != it->end()) {
      auto listed = string_set(*f, "vocabulary.excluded");
      if (excluded && *excluded != listed) {
        throw ConfigError("conflicting exclusion lists in 'excluded_elements' and "
                          "'vocabulary.excluded'");
      }
      excluded = std::move(listed);
    }
    if (!excluded) {
      excluded.emplace();
      for (const auto& e : defaults.excluded()) {
        if (targets.contains(e) || contents.contains(e) || thinking.contains(e)) {
          excluded->insert(e);
        }
      }
    }
    std::erase_if(config.thinking_weights,
                  [&](const auto& kv) { return !thinking.contains(kv.first); });
    config.vocabulary = ElementVocabulary(std::move(targets), std::move(contents),
                                          std::move(thinking), std::move(*excluded));
  } else if (excluded) {
    config.vocabulary = ElementVocabulary(defaults.elements(Module::target),
                                          defaults.elements(Module::content),
                                          defaults.elements(Module::thinking),
                                          std::move(*excluded));
  }

  if (auto it = root.find("thinking_weights"); it != root.end()) {
    if (!it->is_object()) throw ConfigError("field 'thinking_weights' must be an object");
    for (const auto& [name, value] : it->items()) {
      config.thinking_weights[name] = rational_value(value, "thinking_weights." + name);
    }
  }
  if (auto it = root.find("key_target_weight"); it != root.end()) {
    config.key_target_weight = rational_value(*it, "key_target_weight");
  }
  if (auto it = root.find("content_attribution"); it != root.end()) {
    const std::string policy = it->is_string() ? it->get<std::string>() : "";
    if (policy == "full") {
      config.content_attribution = ContentAttribution::full;
    } else if (policy == "split") {
      config.content_attribution = ContentAttribution::split;
    } else {
      throw ConfigError("field 'content_attribution' must be \"full\" or \"split\"");
    }
  }
  if (auto it = root.find("accuracy_threshold_pct"); it != root.end()) {
    config.accuracy_threshold_pct = rational_value(*it, "accuracy_threshold_pct");
  }
  if (auto it = root.find("low_frequency_fraction"); it != root.end()) {
    config.low_frequency_fraction = rational_value(*it, "low_frequency_fraction");
  }
  config.check();
  return config;
}

MetricConfig parse_config(const std::filesystem::path& path, ParseOptions options) {
  return parse_config_text(read_file(path), options);
}

Taxonomy parse_taxonomy(std::istream& in) {
  std::vector<Taxonomy::Edge> edges;
  std::string line;
  std::size_t number = 0;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::size_t line_start = offset;
    offset += line.size() + 1;
    const std::string content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    const auto tab = content.find('\t');
    std::string child = tab == std::string::npos ? "" : trim(content.substr(0, tab));
    std::string parent = tab == std::string::npos ? "" : trim(content.substr(tab + 1));
    if (child.empty() || parent.empty() || parent.find('\t') != std::string::npos) {
      throw ParseError("line " + std::to_string(number) + " (byte " +
                           std::to_string(line_start) + "): expected \"child<TAB>parent\"",
                       number, line_start);
    }
    if (child == parent) {
      throw TaxonomyError("line " + std::to_string(number) + ": cycle: self-edge '" +
                          child + "' -> '" + parent + "'");
    }
    edges.emplace_back(std::move(child), std::move(parent));
  }
  return Taxonomy::from_edges(edges);
}

Taxonomy parse_taxonomy(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_taxonomy(in);
}

std::string serialize_annotation(const QuestionAnnotation& a) {
  nlohmann::ordered_json o;
  o["qid"] = a.qid;
  o["level"] = std::string(to_string(a.level));
  o["question"] = a.question;
  if (a.qtype) o["qtype"] = std::string(to_string(*a.qtype));
  o["targets"] = nlohmann::ordered_json::array();
  for (const auto& t : a.targets) {
    o["targets"].push_back({{"element", t.element}, {"key", t.key}});
  }
  o["contents"] = a.contents;
  o["thinking"] = a.thinking;
  if (a.correct_index) o["correct_index"] = *a.correct_index;
  if (a.num_options) o["num_options"] = *a.num_options;
  return o.dump();
}

std::string serialize_annotations(std::span<const QuestionAnnotation> annotations) {
  std::string out;
  for (const auto& a : annotations) {
    out += serialize_annotation(a);
    out += '\n';
  }
  return out;
}

}  // namespace cogme
