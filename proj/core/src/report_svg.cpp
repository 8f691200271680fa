#include <algorithm>
#include <cstdio>
#include <sstream>
#include <system_error>

#include "cogme/errors.hpp"
#include "cogme/report.hpp"

namespace cogme {

namespace {

constexpr const char* kCorrectColor = "#1f77b4";
constexpr const char* kMissedColor = "#ff7f0e";

constexpr double kPlotTop = 50;
constexpr double kPlotHeight = 300;
constexpr double kBaseline = kPlotTop + kPlotHeight;
constexpr double kLeft = 70;
constexpr double kSlot = 48;
constexpr double kBarWidth = 30;

std::string num(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double chart_width(std::size_t bars) {
  return kLeft + kSlot * static_cast<double>(std::max<std::size_t>(bars, 1)) + 30;
}

void open_svg(std::ostringstream& out, double width, const std::string& title) {
  const double height = kBaseline + 110;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
      << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" fill=\"#ffffff\"/>\n";
  out << "<text x=\"" << num(width / 2) << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">"
      << xml_escape(title) << "</text>\n";
}

// Horizontal grid with `ticks` intervals up to `top_value`.
void axis(std::ostringstream& out, double width, double top_value, int ticks,
          const std::string& unit) {
  for (int i = 0; i <= ticks; ++i) {
    const double value = top_value * i / ticks;
    const double y = kBaseline - kPlotHeight * i / ticks;
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(y) << "\" x2=\"" << num(width - 20)
        << "\" y2=\"" << num(y) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << num(value) << unit << "</text>\n";
  }
  out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kBaseline) << "\" x2=\""
      << num(width - 20) << "\" y2=\"" << num(kBaseline)
      << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
}

void label(std::ostringstream& out, double center, const std::string& text) {
  out << "<text x=\"" << num(center) << "\" y=\"" << num(kBaseline + 14)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" transform=\"rotate(-45 "
      << num(center) << ' ' << num(kBaseline + 14) << ")\">" << xml_escape(text) << "</text>\n";
}

void bar(std::ostringstream& out, double x, double y, double height, const char* color,
         const ElementProfile& p, const char* series, const std::string& value) {
  out << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(kBarWidth)
      << "\" height=\"" << num(height) << "\" fill=\"" << color << "\" data-module=\""
      << to_string(p.module) << "\" data-element=\"" << xml_escape(p.element)
      << "\" data-series=\"" << series << "\" data-value=\"" << value << "\"/>\n";
}

}  // namespace

std::string render_frequency_svg(const ProfileReport& report) {
  std::vector<const ElementProfile*> rows;
  for (const auto& [module, list] : report.modules) {
    for (const auto& p : list) rows.push_back(&p);
  }
  long long max_count = 1;
  for (const auto* p : rows) max_count = std::max(max_count, p->question_count);
  // One tick per question up to 10 ticks.
  const int ticks = static_cast<int>(std::min<long long>(max_count, 10));
  const double unit = kPlotHeight / static_cast<double>(max_count);

  const double width = chart_width(rows.size());
  std::ostringstream out;
  open_svg(out, width, "Questions per story element (correct / missed)");
  axis(out, width, static_cast<double>(max_count), ticks, "");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ElementProfile& p = *rows[i];
    const double x = kLeft + kSlot * static_cast<double>(i) + (kSlot - kBarWidth) / 2;
    const long long missed = p.question_count - p.correct_count;
    const double correct_h = unit * static_cast<double>(p.correct_count);
    const double missed_h = unit * static_cast<double>(missed);
    bar(out, x, kBaseline - correct_h, correct_h, kCorrectColor, p, "correct",
        std::to_string(p.correct_count));
    bar(out, x, kBaseline - correct_h - missed_h, missed_h, kMissedColor, p, "missed",
        std::to_string(missed));
    label(out, x + kBarWidth / 2, std::string(to_string(p.module)).substr(0, 1) + ":" + p.element);
  }
  const double legend_y = kPlotTop - 16;
  out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(legend_y - 9)
      << "\" width=\"10\" height=\"10\" fill=\"" << kCorrectColor << "\"/>\n";
  out << "<text x=\"" << num(kLeft + 14) << "\" y=\"" << num(legend_y)
      << "\" font-family=\"sans-serif\" font-size=\"11\">correct</text>\n";
  out << "<rect x=\"" << num(kLeft + 70) << "\" y=\"" << num(legend_y - 9)
      << "\" width=\"10\" height=\"10\" fill=\"" << kMissedColor << "\"/>\n";
  out << "<text x=\"" << num(kLeft + 84) << "\" y=\"" << num(legend_y)
      << "\" font-family=\"sans-serif\" font-size=\"11\">missed</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string render_accuracy_svg(const ProfileReport& report, Module module) {
  static const std::vector<ElementProfile> kNone;
  auto it = report.modules.find(module);
  const auto& rows = it == report.modules.end() ? kNone : it->second;

  const double width = chart_width(rows.size());
  std::ostringstream out;
  open_svg(out, width, "Accuracy by " + std::string(to_string(module)) + " element (%)");
  axis(out, width, 100, 10, "");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ElementProfile& p = rows[i];
    const double x = kLeft + kSlot * static_cast<double>(i) + (kSlot - kBarWidth) / 2;
    const auto accuracy = p.accuracy_pct();
    const double h = accuracy ? kPlotHeight * to_double(*accuracy) / 100 : 0;
    const std::string value = accuracy ? to_fixed(*accuracy) : "n/a";
    bar(out, x, kBaseline - h, h, kCorrectColor, p, "accuracy", value);
    out << "<text x=\"" << num(x + kBarWidth / 2) << "\" y=\"" << num(kBaseline - h - 4)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
        << (accuracy ? to_fixed(*accuracy, 1) : "n/a") << "</text>\n";
    label(out, x + kBarWidth / 2, p.element);
  }
  out << "</svg>\n";
  return out.str();
}

std::vector<std::filesystem::path> emit_svg_charts(const ReportBundle& bundle,
                                                   const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

  std::vector<std::filesystem::path> written;
  const auto frequency = out_dir / "frequency.svg";
  write_file(frequency, render_frequency_svg(bundle.profile));
  written.push_back(frequency);
  for (Module m : {Module::target, Module::content, Module::thinking}) {
    const auto path = out_dir / ("accuracy_" + std::string(to_string(m)) + ".svg");
    write_file(path, render_accuracy_svg(bundle.profile, m));
    written.push_back(path);
  }
  return written;
}

}  // namespace cogme
