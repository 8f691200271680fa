#include "cogme/report.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cogme/errors.hpp"

namespace cogme {

namespace {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

ojson rational_json(const Rational& value) {
  return ojson{{"decimal", to_fixed(value)}, {"exact", to_exact(value)}};
}

ojson optional_json(const std::optional<Rational>& value) {
  if (!value) return ojson{{"decimal", "n/a"}, {"exact", nullptr}};
  return rational_json(*value);
}

std::string decimal_or_na(const std::optional<Rational>& value) {
  return value ? to_fixed(*value) : "n/a";
}

ojson config_json(const MetricConfig& config) {
  ojson weights = ojson::object();
  for (const auto& [element, weight] : config.thinking_weights) {
    weights[element] = rational_json(weight);
  }
  auto list = [](const auto& set) {
    ojson a = ojson::array();
    for (const auto& e : set) a.push_back(e);
    return a;
  };
  const auto& v = config.vocabulary;
  return ojson{
      {"thinking_weights", weights},
      {"key_target_weight", rational_json(config.key_target_weight)},
      {"content_attribution", std::string(to_string(config.content_attribution))},
      {"accuracy_threshold_pct", rational_json(config.accuracy_threshold_pct)},
      {"low_frequency_fraction", rational_json(config.low_frequency_fraction)},
      {"vocabulary",
       ojson{{"targets", list(v.elements(Module::target))},
             {"contents", list(v.elements(Module::content))},
             {"thinking", list(v.elements(Module::thinking))},
             {"excluded", list(v.excluded())}}}};
}

ojson diff_json(const ProfileDiff& diff) {
  ojson elements = ojson::array();
  for (const auto& d : diff.elements) {
    elements.push_back(ojson{{"module", std::string(to_string(d.module))},
                             {"element", d.element},
                             {"status", d.comparable() ? "comparable" : "incomparable"},
                             {"a_accuracy_pct", optional_json(d.a_pct)},
                             {"b_accuracy_pct", optional_json(d.b_pct)},
                             {"delta", optional_json(d.delta())}});
  }
  return ojson{{"overall",
                ojson{{"a_accuracy_pct", optional_json(diff.a_overall)},
                      {"b_accuracy_pct", optional_json(diff.b_overall)},
                      {"delta", optional_json(diff.overall_delta())}}},
               {"elements", elements}};
}

ojson metric_json(const MetricScore& score) {
  ojson o{{"metric", score.metric}, {"value", score.value}};
  o["exact"] = score.exact ? ojson(to_exact(*score.exact)) : ojson(nullptr);
  o["pairs"] = score.pairs;
  if (!score.exact_pairs.empty()) {
    ojson exact = ojson::array();
    for (const auto& r : score.exact_pairs) exact.push_back(to_exact(r));
    o["exact_pairs"] = exact;
  }
  return o;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string exact_or_empty(const std::optional<Rational>& value) {
  return value ? to_exact(*value) : "";
}

// Flag lookup for one element, or empty.
std::string flag_of(const ProfileReport& report, Module module, const std::string& element) {
  for (const auto& d : report.diagnostics) {
    if (d.module == module && d.element == element) return std::string(to_string(d.flag));
  }
  return {};
}

}  // namespace

std::string emit_json(const ReportBundle& bundle) {
  const ProfileReport& r = bundle.profile;
  ojson doc;
  doc["format"] = "cogme-profile";
  doc["version"] = 1;
  doc["config"] = config_json(r.config);
  doc["summary"] = ojson{{"question_total", r.question_total},
                         {"uncovered_total", r.uncovered_total},
                         {"allotted", rational_json(r.allotted_total)},
                         {"earned", rational_json(r.earned_total)},
                         {"overall_accuracy_pct", optional_json(r.overall_accuracy_pct())}};
  ojson modules = ojson::object();
  for (const auto& [module, rows] : r.modules) {
    ojson list = ojson::array();
    for (const auto& p : rows) {
      list.push_back(ojson{{"element", p.element},
                           {"question_count", p.question_count},
                           {"correct_count", p.correct_count},
                           {"allotted", rational_json(p.allotted)},
                           {"earned", rational_json(p.earned)},
                           {"accuracy_pct", optional_json(p.accuracy_pct())},
                           {"question_ratio_pct", optional_json(p.question_ratio_pct())}});
    }
    modules[std::string(to_string(module))] = list;
  }
  doc["modules"] = modules;
  ojson diagnostics = ojson::array();
  for (const auto& d : r.diagnostics) {
    diagnostics.push_back(ojson{{"module", std::string(to_string(d.module))},
                                {"element", d.element},
                                {"flag", std::string(to_string(d.flag))},
                                {"accuracy_pct", optional_json(d.accuracy_pct)},
                                {"frequency", rational_json(d.frequency)}});
  }
  doc["diagnostics"] = diagnostics;
  ojson slices = ojson::object();
  for (const auto& [qtype, s] : r.qtype_slices) {
    slices[qtype] = ojson{{"question_count", s.question_count},
                          {"correct_count", s.correct_count},
                          {"accuracy_pct", optional_json(s.accuracy_pct())}};
  }
  doc["qtype_slices"] = slices;
  if (bundle.diff) doc["diff"] = diff_json(*bundle.diff);
  if (!bundle.metrics.empty()) {
    ojson metrics = ojson::array();
    for (const auto& m : bundle.metrics) metrics.push_back(metric_json(m));
    doc["metrics"] = metrics;
  }
  return doc.dump(2) + "\n";
}

std::string emit_csv(const ReportBundle& bundle) {
  const ProfileReport& r = bundle.profile;
  std::ostringstream out;
  out << "module,element,question_count,correct_count,allotted,allotted_exact,earned,"
         "earned_exact,accuracy_pct,accuracy_pct_exact,question_ratio_pct,"
         "question_ratio_pct_exact,flag\n";
  for (const auto& [module, rows] : r.modules) {
    for (const auto& p : rows) {
      out << to_string(module) << ',' << csv_field(p.element) << ',' << p.question_count << ','
          << p.correct_count << ',' << to_fixed(p.allotted) << ',' << to_exact(p.allotted) << ','
          << to_fixed(p.earned) << ',' << to_exact(p.earned) << ','
          << decimal_or_na(p.accuracy_pct()) << ',' << exact_or_empty(p.accuracy_pct()) << ','
          << decimal_or_na(p.question_ratio_pct()) << ','
          << exact_or_empty(p.question_ratio_pct()) << ',' << flag_of(r, module, p.element)
          << '\n';
    }
  }
  const auto overall = r.overall_accuracy_pct();
  out << "overall,*," << r.question_total << ",," << to_fixed(r.allotted_total) << ','
      << to_exact(r.allotted_total) << ',' << to_fixed(r.earned_total) << ','
      << to_exact(r.earned_total) << ',' << decimal_or_na(overall) << ','
      << exact_or_empty(overall) << ",,,\n";
  return out.str();
}

std::string emit_structured(const ReportBundle& bundle, StructuredFormat format) {
  return format == StructuredFormat::json ? emit_json(bundle) : emit_csv(bundle);
}

std::string emit_markdown(const ReportBundle& bundle) {
  const ProfileReport& r = bundle.profile;
  std::ostringstream out;
  out << "# CogME profile\n\n";
  out << "- Questions profiled: " << r.question_total << "\n";
  out << "- Questions uncovered: " << r.uncovered_total << "\n";
  out << "- Allotted score: " << to_fixed(r.allotted_total) << " (" << to_exact(r.allotted_total)
      << ")\n";
  out << "- Earned score: " << to_fixed(r.earned_total) << " (" << to_exact(r.earned_total)
      << ")\n";
  out << "- Overall accuracy: " << decimal_or_na(r.overall_accuracy_pct()) << "%\n";
  out << "- Content attribution: " << to_string(r.config.content_attribution) << "\n\n";

  for (const auto& [module, rows] : r.modules) {
    out << "## " << to_string(module) << " module\n\n";
    out << "| Element | Questions | Correct | Allotted | Earned | Accuracy % | Question ratio % |\n";
    out << "|---|---:|---:|---:|---:|---:|---:|\n";
    for (const auto& p : rows) {
      out << "| " << p.element << " | " << p.question_count << " | " << p.correct_count << " | "
          << to_fixed(p.allotted) << " | " << to_fixed(p.earned) << " | "
          << decimal_or_na(p.accuracy_pct()) << " | " << decimal_or_na(p.question_ratio_pct())
          << " |\n";
    }
    out << "\n";
  }

  out << "## Diagnostics\n\n";
  if (r.diagnostics.empty()) {
    out << "No elements flagged.\n\n";
  } else {
    out << "| Module | Element | Flag | Accuracy % | Frequency |\n";
    out << "|---|---|---|---:|---:|\n";
    for (const auto& d : r.diagnostics) {
      out << "| " << to_string(d.module) << " | " << d.element << " | " << to_string(d.flag)
          << " | " << decimal_or_na(d.accuracy_pct) << " | " << to_fixed(d.frequency) << " |\n";
    }
    out << "\n";
  }

  if (!r.qtype_slices.empty()) {
    out << "## Question types\n\n";
    out << "| Type | Questions | Correct | Correct ratio % |\n";
    out << "|---|---:|---:|---:|\n";
    for (const auto& [qtype, s] : r.qtype_slices) {
      out << "| " << qtype << " | " << s.question_count << " | " << s.correct_count << " | "
          << decimal_or_na(s.accuracy_pct()) << " |\n";
    }
    out << "\n";
  }

  if (bundle.diff) out << emit_diff_markdown(*bundle.diff);

  if (!bundle.metrics.empty()) {
    out << "## Text metrics\n\n| Metric | Value |\n|---|---:|\n";
    for (const auto& m : bundle.metrics) {
      char buffer[32];
      std::snprintf(buffer, sizeof(buffer), "%.4f", m.value);
      out << "| " << m.metric << " | " << buffer << " |\n";
    }
    out << "\n";
  }
  return out.str();
}

std::string emit_diff_json(const ProfileDiff& diff) { return diff_json(diff).dump(2) + "\n"; }

std::string emit_diff_markdown(const ProfileDiff& diff) {
  std::ostringstream out;
  out << "## Comparison (B - A)\n\n";
  out << "| Module | Element | A accuracy % | B accuracy % | Delta |\n";
  out << "|---|---|---:|---:|---:|\n";
  for (const auto& d : diff.elements) {
    const auto delta = d.delta();
    out << "| " << to_string(d.module) << " | " << d.element << " | " << decimal_or_na(d.a_pct)
        << " | " << decimal_or_na(d.b_pct) << " | "
        << (delta ? (*delta >= 0 ? "+" : "") + to_fixed(*delta) : std::string("incomparable"))
        << " |\n";
  }
  const auto overall = diff.overall_delta();
  out << "| overall | * | " << decimal_or_na(diff.a_overall) << " | "
      << decimal_or_na(diff.b_overall) << " | "
      << (overall ? (*overall >= 0 ? "+" : "") + to_fixed(*overall) : std::string("incomparable"))
      << " |\n\n";
  return out.str();
}

std::string emit_scores_jsonl(std::span<const ScoreBreakdown> scores) {
  std::string out;
  for (const auto& b : scores) {
    ojson targets = ojson::object();
    for (const auto& [e, v] : b.target_scores) targets[e] = rational_json(v);
    ojson contents = ojson::object();
    for (const auto& [e, v] : b.content_attributions) contents[e] = rational_json(v);
    ojson o{{"qid", b.qid},
            {"sc", rational_json(b.sc)},
            {"nt", b.nt},
            {"w_r", rational_json(b.w_r)},
            {"t_sum", rational_json(b.t_sum)},
            {"target_scores", targets},
            {"content_attributions", contents},
            {"thinking_attribution",
             ojson{{"element", b.thinking_attribution.first},
                   {"score", rational_json(b.thinking_attribution.second)}}}};
    out += o.dump();
    out += '\n';
  }
  return out;
}

std::string emit_metric_json(const MetricScore& score) { return metric_json(score).dump(2) + "\n"; }

namespace {

[[noreturn]] void bad_profile(const std::string& message) {
  throw ParseError("profile: " + message, 0, 0);
}

const json& member(const json& object, const char* name) {
  if (!object.is_object()) bad_profile(std::string("expected an object holding '") + name + "'");
  auto it = object.find(name);
  if (it == object.end()) bad_profile(std::string("missing field '") + name + "'");
  return *it;
}

Rational read_rational(const json& value, const char* name) {
  const json& exact = member(value, "exact");
  if (!exact.is_string()) bad_profile(std::string("field '") + name + "' has no exact value");
  try {
    return parse_rational(exact.get<std::string>());
  } catch (const std::invalid_argument& e) {
    bad_profile(std::string("field '") + name + "': " + e.what());
  }
}

long long read_count(const json& value, const char* name) {
  if (!value.is_number_integer()) bad_profile(std::string("field '") + name + "' must be an integer");
  return value.get<long long>();
}

std::set<std::string> read_set(const json& value, const char* name) {
  if (!value.is_array()) bad_profile(std::string("field '") + name + "' must be an array");
  std::set<std::string> out;
  for (const auto& v : value) out.insert(v.get<std::string>());
  return out;
}

}  // namespace

ProfileReport parse_profile_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("profile: malformed JSON: ") + e.what(), 0,
                     e.byte > 0 ? e.byte - 1 : 0);
  }
  if (!doc.is_object() || doc.value("format", "") != "cogme-profile") {
    bad_profile("not a cogme-profile document");
  }
  try {
    ProfileReport r;
    const json& c = member(doc, "config");
    r.config.thinking_weights.clear();
    for (const auto& [name, value] : member(c, "thinking_weights").items()) {
      r.config.thinking_weights[name] = read_rational(value, "thinking_weights");
    }
    r.config.key_target_weight = read_rational(member(c, "key_target_weight"), "key_target_weight");
    const std::string policy = member(c, "content_attribution").get<std::string>();
    if (policy != "full" && policy != "split") bad_profile("unknown content_attribution");
    r.config.content_attribution =
        policy == "full" ? ContentAttribution::full : ContentAttribution::split;
    r.config.accuracy_threshold_pct =
        read_rational(member(c, "accuracy_threshold_pct"), "accuracy_threshold_pct");
    r.config.low_frequency_fraction =
        read_rational(member(c, "low_frequency_fraction"), "low_frequency_fraction");
    const json& v = member(c, "vocabulary");
    r.config.vocabulary = ElementVocabulary(
        read_set(member(v, "targets"), "targets"), read_set(member(v, "contents"), "contents"),
        read_set(member(v, "thinking"), "thinking"), read_set(member(v, "excluded"), "excluded"));
    r.config.check();

    const json& s = member(doc, "summary");
    r.question_total = read_count(member(s, "question_total"), "question_total");
    r.uncovered_total = read_count(member(s, "uncovered_total"), "uncovered_total");
    r.allotted_total = read_rational(member(s, "allotted"), "allotted");
    r.earned_total = read_rational(member(s, "earned"), "earned");

    for (Module m : kModules) r.modules[m];
    for (const auto& [name, rows] : member(doc, "modules").items()) {
      const auto module = module_from_string(name);
      if (!module) bad_profile("unknown module '" + name + "'");
      for (const auto& row : rows) {
        ElementProfile p;
        p.module = *module;
        p.element = member(row, "element").get<std::string>();
        p.question_count = read_count(member(row, "question_count"), "question_count");
        p.correct_count = read_count(member(row, "correct_count"), "correct_count");
        p.allotted = read_rational(member(row, "allotted"), "allotted");
        p.earned = read_rational(member(row, "earned"), "earned");
        r.modules[*module].push_back(std::move(p));
      }
    }
    if (auto it = doc.find("qtype_slices"); it != doc.end()) {
      for (const auto& [name, slice] : it->items()) {
        r.qtype_slices[name] =
            QtypeSlice{read_count(member(slice, "question_count"), "question_count"),
                       read_count(member(slice, "correct_count"), "correct_count")};
      }
    }
    r.diagnostics = diagnostics(r, r.config);
    return r;
  } catch (const json::exception& e) {
    bad_profile(e.what());
  } catch (const ConfigError& e) {
    bad_profile(e.what());
  }
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

}  // namespace cogme
