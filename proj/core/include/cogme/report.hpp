#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cogme/profiler.hpp"
#include "cogme/scoring.hpp"
#include "cogme/textmetrics.hpp"

namespace cogme {

struct ReportBundle {
  ProfileReport profile;
  std::optional<ProfileDiff> diff;
  std::vector<MetricScore> metrics;
};

enum class StructuredFormat { json, csv };

// Canonically ordered, byte-stable output. Every rational is written as a
// 4-digit decimal together with its exact "num/den" form.
std::string emit_structured(const ReportBundle& bundle, StructuredFormat format);
std::string emit_json(const ReportBundle& bundle);
std::string emit_csv(const ReportBundle& bundle);

// Per-module tables, diagnostics, question-type slices, and a delta table
// when the bundle carries a diff.
std::string emit_markdown(const ReportBundle& bundle);

// Rebuilds a report from emit_json output. Throws ParseError on malformed
// input.
ProfileReport parse_profile_json(std::string_view text);

std::string emit_diff_json(const ProfileDiff& diff);
std::string emit_diff_markdown(const ProfileDiff& diff);

// One JSON object per line.
std::string emit_scores_jsonl(std::span<const ScoreBreakdown> scores);

std::string emit_metric_json(const MetricScore& score);

// Stacked correct (blue) / missed (orange) question counts for every element.
std::string render_frequency_svg(const ProfileReport& report);
// Accuracy bars for one module's elements.
std::string render_accuracy_svg(const ProfileReport& report, Module module);

// Writes frequency.svg and accuracy_<module>.svg into `out_dir`, creating it
// if needed. Throws IoError when the directory or files cannot be written.
std::vector<std::filesystem::path> emit_svg_charts(const ReportBundle& bundle,
                                                   const std::filesystem::path& out_dir);

// Writes `content` to `path` in binary mode. Throws IoError.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace cogme
