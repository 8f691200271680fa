#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "cogme/errors.hpp"
#include "cogme/ingest.hpp"
#include "cogme/profiler.hpp"
#include "cogme/report.hpp"
#include "cogme/scoring.hpp"
#include "cogme/textmetrics.hpp"

namespace cogme::cli {

namespace {

namespace fs = std::filesystem;

// Raised for bad flag combinations that CLI11 cannot express.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string annotations;
  std::string predictions;
  std::string config;
  std::string out;
  std::vector<std::string> formats;
  bool charts = false;
  bool lenient = false;
  unsigned jobs = 1;

  std::string a;
  std::string b;
  std::string diff_format = "md";

  std::string refs;
  std::string cands;
  std::string metric;
  std::string taxonomy;
  std::string threshold = "0.9";
  int max_n = 4;
  int rouge_n = 1;
  bool smooth = false;
};

ParseOptions parse_options(const Options& o) { return ParseOptions{!o.lenient}; }

MetricConfig load_config(const Options& o) {
  if (!o.config.empty()) return parse_config(o.config, parse_options(o));
  if (const char* env = std::getenv("COGME_CONFIG"); env != nullptr && *env != '\0') {
    return parse_config(env, parse_options(o));
  }
  return MetricConfig{};
}

void print_violations(const ValidationReport& report, std::ostream& err) {
  for (const auto& v : report.violations) {
    err << (v.severity == Severity::warning ? "warning: " : "error: ") << v.qid << ": "
        << v.path << ": " << v.message << "\n";
  }
}

std::string violation_summary(const ValidationReport& report) {
  std::string s = std::to_string(report.error_count()) + " violations";
  if (report.warning_count() > 0) s += ", " + std::to_string(report.warning_count()) + " warnings";
  return s;
}

// Loads and validates annotations. Returns nullopt (after printing) when the
// dataset has errors.
std::optional<std::vector<QuestionAnnotation>> load_valid_annotations(const Options& o,
                                                                      const MetricConfig& config,
                                                                      std::ostream& err) {
  auto annotations = parse_annotations(o.annotations, parse_options(o));
  const auto report = validate_dataset(annotations, config.vocabulary);
  if (!report.ok()) {
    print_violations(report, err);
    err << violation_summary(report) << "\n";
    return std::nullopt;
  }
  return annotations;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file(path, text);
  }
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  const MetricConfig config = load_config(o);
  const auto annotations = parse_annotations(o.annotations, parse_options(o));
  const auto report = validate_dataset(annotations, config.vocabulary);
  print_violations(report, err);
  out << violation_summary(report) << "\n";
  return report.ok() ? kOk : kDataError;
}

int cmd_score(const Options& o, std::ostream& out, std::ostream& err) {
  const MetricConfig config = load_config(o);
  const auto annotations = load_valid_annotations(o, config, err);
  if (!annotations) return kDataError;
  std::vector<ScoreBreakdown> scores;
  scores.reserve(annotations->size());
  for (const auto& a : *annotations) scores.push_back(score_breakdown(a, config));
  emit(emit_scores_jsonl(scores), o.out, out);
  return kOk;
}

int cmd_profile(const Options& o, std::ostream& out, std::ostream& err) {
  const MetricConfig config = load_config(o);
  const auto annotations = load_valid_annotations(o, config, err);
  if (!annotations) return kDataError;
  const auto predictions = parse_predictions(o.predictions, parse_options(o));
  const JoinResult join = join_outcomes(*annotations, predictions);
  for (const auto& e : join.errors) err << "error: " << e << "\n";
  if (!join.ok()) return kDataError;
  if (!join.uncovered.empty()) {
    err << join.uncovered.size() << " annotations without a usable outcome were left out\n";
  }

  ReportBundle bundle{aggregate_profile_parallel(*annotations, join.outcomes, config, o.jobs),
                      std::nullopt,
                      {}};

  const fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  std::vector<std::string> formats = o.formats;
  if (formats.empty()) formats = {"json", "csv", "md"};
  std::sort(formats.begin(), formats.end());
  formats.erase(std::unique(formats.begin(), formats.end()), formats.end());

  std::vector<fs::path> written;
  for (const auto& f : formats) {
    if (f == "json") {
      write_file(dir / "profile.json", emit_json(bundle));
      written.push_back(dir / "profile.json");
    } else if (f == "csv") {
      write_file(dir / "profile.csv", emit_csv(bundle));
      written.push_back(dir / "profile.csv");
    } else {
      write_file(dir / "report.md", emit_markdown(bundle));
      written.push_back(dir / "report.md");
    }
  }
  if (o.charts) {
    for (auto& p : emit_svg_charts(bundle, dir / "charts")) written.push_back(std::move(p));
  }
  for (const auto& p : written) out << p.string() << "\n";
  return kOk;
}

int cmd_diff(const Options& o, std::ostream& out, std::ostream&) {
  const ProfileReport a = parse_profile_json(read_file(o.a));
  const ProfileReport b = parse_profile_json(read_file(o.b));
  const ProfileDiff diff = diff_profiles(a, b);
  emit(o.diff_format == "json" ? emit_diff_json(diff) : emit_diff_markdown(diff), o.out, out);
  return kOk;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

int cmd_metrics(const Options& o, std::ostream& out, std::ostream&) {
  if (o.metric == "wups" && o.taxonomy.empty()) {
    throw UsageError("--taxonomy is required when --metric is wups");
  }
  Rational threshold;
  try {
    threshold = parse_rational(o.threshold);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--threshold: ") + e.what());
  }
  if (threshold < 0 || threshold > 1) throw UsageError("--threshold must lie in [0, 1]");

  const auto refs = normalize_all(read_lines(o.refs));
  const auto cands = normalize_all(read_lines(o.cands));
  std::optional<Taxonomy> taxonomy;
  if (!o.taxonomy.empty()) taxonomy = parse_taxonomy(o.taxonomy);

  MetricScore score;
  if (o.metric == "accuracy") {
    score = exact_accuracy(refs, cands);
  } else if (o.metric == "bleu") {
    score = bleu(refs, cands, BleuOptions{o.max_n, o.smooth});
  } else if (o.metric == "rouge-n") {
    score = rouge_n_corpus(refs, cands, o.rouge_n);
  } else if (o.metric == "rouge-l") {
    score = rouge_l_corpus(refs, cands);
  } else if (o.metric == "meteor") {
    score = meteor_corpus(refs, cands, taxonomy ? &*taxonomy : nullptr);
  } else {
    score = wups(refs, cands, *taxonomy, WupsOptions{threshold, Rational(1, 10)});
  }
  emit(emit_metric_json(score), o.out, out);
  return kOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Cognitive-module scoring and profiling of video QA answers", "cogme"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", "0.1.0");

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", o.config,
                    "Metric configuration JSON (falls back to $COGME_CONFIG, then defaults)");
    sub->add_flag("--lenient", o.lenient, "Ignore unknown fields instead of rejecting them");
  };

  auto* validate = app.add_subcommand("validate", "Check annotations against the vocabulary");
  validate->add_option("--annotations", o.annotations, "Annotation JSON Lines file")->required();
  add_config(validate);

  auto* score = app.add_subcommand("score", "Dump per-question score breakdowns as JSON Lines");
  score->add_option("--annotations", o.annotations, "Annotation JSON Lines file")->required();
  add_config(score);
  score->add_option("--out", o.out, "Output file ('-' for standard output)")->required();

  auto* profile = app.add_subcommand("profile", "Aggregate per-element accuracy profiles");
  profile->add_option("--annotations", o.annotations, "Annotation JSON Lines file")->required();
  profile->add_option("--predictions", o.predictions, "Prediction JSON Lines file")->required();
  add_config(profile);
  profile->add_option("--out", o.out, "Output directory")->required();
  profile
      ->add_option("--format", o.formats,
                   "Report format: json, csv or md; repeatable (default: all three)")
      ->check(CLI::IsMember({"json", "csv", "md"}));
  profile->add_flag("--charts", o.charts, "Also write SVG charts under <out>/charts");
  profile->add_option("--jobs", o.jobs, "Worker threads for aggregation")
      ->check(CLI::Range(1u, 1024u));

  auto* diff = app.add_subcommand("diff", "Compare two profile.json files (B - A)");
  diff->add_option("--a", o.a, "Baseline profile.json")->required();
  diff->add_option("--b", o.b, "Compared profile.json")->required();
  diff->add_option("--format", o.diff_format, "Output format: md or json")
      ->check(CLI::IsMember({"md", "json"}));
  diff->add_option("--out", o.out, "Output file (default: standard output)");

  auto* metrics = app.add_subcommand("metrics", "Automatic text metrics over answer pairs");
  metrics->add_option("--refs", o.refs, "Reference answers, one per line")->required();
  metrics->add_option("--cands", o.cands, "Candidate answers, one per line")->required();
  metrics->add_option("--metric", o.metric, "accuracy, bleu, rouge-n, rouge-l, meteor or wups")
      ->required()
      ->check(CLI::IsMember({"accuracy", "bleu", "rouge-n", "rouge-l", "meteor", "wups"}));
  metrics->add_option("--taxonomy", o.taxonomy,
                      "child<TAB>parent taxonomy (required for wups, optional for meteor)");
  metrics->add_option("--threshold", o.threshold, "WUPS threshold in [0, 1] (default 0.9)");
  metrics->add_option("--max-n", o.max_n, "Highest BLEU n-gram order (default 4)")
      ->check(CLI::PositiveNumber);
  metrics->add_flag("--smooth", o.smooth, "Add-one smoothing for BLEU orders above 1");
  metrics->add_option("--n", o.rouge_n, "n-gram order for rouge-n (default 1)")
      ->check(CLI::PositiveNumber);
  metrics->add_option("--out", o.out, "Output file (default: standard output)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  try {
    if (validate->parsed()) return cmd_validate(o, out, err);
    if (score->parsed()) return cmd_score(o, out, err);
    if (profile->parsed()) return cmd_profile(o, out, err);
    if (diff->parsed()) return cmd_diff(o, out, err);
    return cmd_metrics(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
}

}  // namespace cogme::cli
