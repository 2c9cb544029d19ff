#include <algorithm>
#include <array>
#include <cstdio>
#include <ostream>
#include <string>

#include "gmedyn/experiment.hpp"

namespace gmedyn::experiment {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 70, kRight = 190, kTop = 30, kBottom = 60;
constexpr double kEmax = 0.55;

// Solid, dotted, dashed, dash-dot.
constexpr std::array<const char*, 4> kDash{"", "2,3", "8,4", "8,3,2,3"};
constexpr std::array<const char*, 6> kColour{"#1f3b73", "#b2182b", "#1b7837", "#762a83", "#e08214", "#4d4d4d"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

} // namespace

void emit_svg(const ScanResult& result, std::ostream& out) {
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const double nu_max = result.nu.empty() ? 1.0 : std::max(result.nu.back(), 1e-12);
  auto sx = [&](double nu) { return kLeft + pw * nu / nu_max; };
  auto sy = [&](double e) { return kTop + ph * (1.0 - e / kEmax); };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<defs><clipPath id=\"plot\"><rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw
      << "\" height=\"" << ph << "\"/></clipPath></defs>\n";

  // Axes and ticks.
  out << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph << "\"/>\n";
  for (int i = 0; i <= 11; ++i) {
    const double y = sy(0.05 * i);
    out << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << num(y) << "\" x2=\"" << kLeft << "\" y2=\"" << num(y)
        << "\"/>\n";
  }
  for (int i = 0; i <= 10; ++i) {
    const double x = sx(nu_max * i / 10.0);
    out << "<line x1=\"" << num(x) << "\" y1=\"" << kTop + ph << "\" x2=\"" << num(x) << "\" y2=\""
        << kTop + ph + 4 << "\"/>\n";
  }
  out << "</g>\n<g fill=\"black\">\n";
  for (int i = 0; i <= 11; i += 1) {
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(sy(0.05 * i) + 4) << "\" text-anchor=\"end\">"
        << num(0.05 * i).substr(0, 4) << "</text>\n";
  }
  for (int i = 0; i <= 10; i += 2) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", nu_max * i / 10.0);
    out << "<text x=\"" << num(sx(nu_max * i / 10.0)) << "\" y=\"" << kTop + ph + 18
        << "\" text-anchor=\"middle\">" << buf << "</text>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">&#957;</text>\n";
  out << "<text x=\"20\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << kTop + ph / 2 << ")\">E</text>\n";
  out << "</g>\n";

  // Curves.
  out << "<g clip-path=\"url(#plot)\" fill=\"none\">\n";
  auto polyline = [&](const Series& s, const std::string& style) {
    out << "<polyline " << style << " points=\"";
    for (std::size_t k = 0; k < result.nu.size(); ++k)
      out << (k ? " " : "") << num(sx(result.nu[k])) << ',' << num(sy(s.values[k]));
    out << "\"><title>" << escape(s.name) << "</title></polyline>\n";
  };
  for (const auto& s : result.series)
    if (s.kind == SeriesKind::Member) polyline(s, "stroke=\"#c8c8c8\" stroke-width=\"0.5\"");

  std::vector<const Series*> legend;
  for (const auto& s : result.series) {
    if (s.kind == SeriesKind::Member || s.kind == SeriesKind::Std) continue;
    const std::size_t i = legend.size();
    std::string style = "stroke=\"" + std::string(kColour[i % kColour.size()]) + "\" stroke-width=\"1.8\"";
    if (*kDash[i % kDash.size()]) style += " stroke-dasharray=\"" + std::string(kDash[i % kDash.size()]) + "\"";
    polyline(s, style);
    legend.push_back(&s);
  }
  out << "</g>\n";

  // Legend.
  out << "<g font-size=\"11\">\n";
  for (std::size_t i = 0; i < legend.size(); ++i) {
    const double y = kTop + 12 + 18.0 * static_cast<double>(i);
    const double x = kLeft + pw + 12;
    out << "<line x1=\"" << x << "\" y1=\"" << y << "\" x2=\"" << x + 30 << "\" y2=\"" << y << "\" stroke=\""
        << kColour[i % kColour.size()] << "\" stroke-width=\"1.8\"";
    if (*kDash[i % kDash.size()]) out << " stroke-dasharray=\"" << kDash[i % kDash.size()] << "\"";
    out << "/>\n<text x=\"" << x + 36 << "\" y=\"" << y + 4 << "\">" << escape(legend[i]->name) << "</text>\n";
  }
  out << "</g>\n</svg>\n";
}

} // namespace gmedyn::experiment
