#include "wgqed/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace wgqed::svg {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

bool usable(const Trace& t, std::size_t i) {
  if (!std::isfinite(t.x[i]) || !std::isfinite(t.y[i])) return false;
  return t.mask.empty() || t.mask[i];
}

}  // namespace

std::string emit_svg(const Plot& plot) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& t : plot.traces) {
    if (t.x.size() != t.y.size()) throw PlotError("trace '" + t.label + "' has mismatched x/y lengths");
    if (!t.mask.empty() && t.mask.size() != t.x.size()) throw PlotError("trace '" + t.label + "' has a bad mask");
    for (std::size_t i = 0; i < t.x.size(); ++i) {
      if (!usable(t, i)) continue;
      x0 = std::min(x0, t.x[i]);
      x1 = std::max(x1, t.x[i]);
      y0 = std::min(y0, t.y[i]);
      y1 = std::max(y1, t.y[i]);
    }
  }
  if (!(x0 <= x1)) throw PlotError("nothing to plot: series is empty");
  if (plot.y_range) {
    y0 = plot.y_range->first;
    y1 = plot.y_range->second;
  }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return kTop + (1.0 - (std::clamp(y, y0, y1) - y0) / (y1 - y0)) * ph; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
       "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
       escape(plot.title) + "</text>\n";
  s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0;
    const double fy = y0 + (y1 - y0) * i / 4.0;
    s += "<text x=\"" + num(sx(fx)) + "\" y=\"" + num(kTop + ph + 16) + "\" text-anchor=\"middle\">" + tick(fx) +
         "</text>\n";
    s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(sy(fy) + 4) + "\" text-anchor=\"end\">" + tick(fy) +
         "</text>\n";
  }
  s += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 10) + "\" text-anchor=\"middle\">" +
       escape(plot.x_label) + "</text>\n";
  s += "<text transform=\"translate(16 " + num(kTop + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
       escape(plot.y_label) + "</text>\n";

  std::size_t index = 0;
  for (const auto& t : plot.traces) {
    const std::string color = kColors[index % std::size(kColors)];
    const std::string dash = t.dashed ? " stroke-dasharray=\"6 4\"" : "";
    std::string d;
    bool pen = false;
    for (std::size_t i = 0; i < t.x.size(); ++i) {
      if (!usable(t, i)) {
        pen = false;
        continue;
      }
      d += (pen ? "L" : "M") + num(sx(t.x[i])) + " " + num(sy(t.y[i])) + " ";
      pen = true;
    }
    if (!d.empty()) d.pop_back();
    s += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"" + dash + "/>\n";

    const double ly = kTop + 10 + 18.0 * static_cast<double>(index);
    const double lx = kWidth - kRight + 10;
    s += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(lx + 24) + "\" y2=\"" + num(ly) +
         "\" stroke=\"" + color + "\" stroke-width=\"1.5\"" + dash + "/>\n";
    s += "<text x=\"" + num(lx + 30) + "\" y=\"" + num(ly + 4) + "\">" + escape(t.label) + "</text>\n";
    ++index;
  }
  s += "</svg>\n";
  return s;
}

}  // namespace wgqed::svg
