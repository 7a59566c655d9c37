#include "slabtrans_app/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace slabtrans::app
{

namespace
{

std::string
num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string
tick_label(double v)
{
  char buf[32];
  if (v != 0.0 && (std::abs(v) < 1e-2 || std::abs(v) >= 1e4))
    std::snprintf(buf, sizeof buf, "%.0e", v);
  else
    std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string
escape(const std::string& s)
{
  std::string out;
  for (char c : s)
  {
    switch (c)
    {
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '&': out += "&amp;"; break;
    default: out += c;
    }
  }
  return out;
}

struct Box
{
  double left, top, width, height;
};

struct Axis
{
  double lo = 0.0, hi = 1.0;
  bool log = false;

  double map(double v) const
  {
    const double t = log ? std::log10(v) : v;
    const double a = log ? std::log10(lo) : lo;
    const double b = log ? std::log10(hi) : hi;
    return (t - a) / (b - a);
  }
};

Axis
fit_axis(std::vector<double> values, bool log)
{
  if (log)
    values.erase(std::remove_if(values.begin(), values.end(), [](double v) { return !(v > 0.0); }),
                 values.end());
  Axis a;
  a.log = log;
  if (values.empty())
  {
    a.lo = log ? 1e-3 : 0.0;
    a.hi = 1.0;
    return a;
  }
  auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  a.lo = *mn;
  a.hi = *mx;
  if (log)
  {
    a.lo = std::pow(10.0, std::floor(std::log10(a.lo) * 4.0) / 4.0);
    a.hi = std::pow(10.0, std::ceil(std::log10(a.hi) * 4.0) / 4.0);
    if (a.hi <= a.lo)
      a.hi = a.lo * 10.0;
  }
  else
  {
    const double pad = a.hi > a.lo ? 0.05 * (a.hi - a.lo) : std::max(1.0, std::abs(a.lo)) * 0.1;
    a.lo -= pad;
    a.hi += pad;
  }
  return a;
}

std::vector<double>
ticks(const Axis& a)
{
  std::vector<double> t;
  if (a.log)
  {
    const bool fine = std::log10(a.hi / a.lo) < 2.0;
    for (double e = std::floor(std::log10(a.lo)); e <= std::ceil(std::log10(a.hi)); e += 1.0)
      for (double m : {1.0, 2.0, 5.0})
      {
        const double v = m * std::pow(10.0, e);
        if ((m == 1.0 || fine) && v >= a.lo * (1 - 1e-9) && v <= a.hi * (1 + 1e-9))
          t.push_back(v);
      }
    if (t.size() < 2)
      t = {a.lo, a.hi};
    return t;
  }
  const double span = a.hi - a.lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw)
    {
      step = m * mag;
      break;
    }
  for (double v = std::ceil(a.lo / step) * step; v <= a.hi + 1e-12 * span; v += step)
    t.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
  return t;
}

void
draw_panel(std::ostringstream& os, const Box& box, const std::vector<Series>& series,
           const PlotStyle& style, std::optional<std::pair<double, double>> range,
           const std::string& title, bool legend)
{
  std::vector<double> xs, ys;
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.x.size(); ++k)
    {
      if (range && (s.x[k] < range->first || s.x[k] > range->second))
        continue;
      xs.push_back(s.x[k]);
      ys.push_back(s.y[k]);
    }
  Axis ax = fit_axis(xs, style.log_x);
  if (range && !style.log_x)
  {
    ax.lo = range->first;
    ax.hi = range->second;
  }
  const Axis ay = fit_axis(ys, style.log_y);
  auto px = [&](double v) { return box.left + ax.map(v) * box.width; };
  auto py = [&](double v) { return box.top + (1.0 - ay.map(v)) * box.height; };

  os << "<rect x=\"" << num(box.left) << "\" y=\"" << num(box.top) << "\" width=\""
     << num(box.width) << "\" height=\"" << num(box.height)
     << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (double t : ticks(ax))
  {
    if (t < ax.lo || t > ax.hi)
      continue;
    os << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(box.top) << "\" x2=\"" << num(px(t))
       << "\" y2=\"" << num(box.top + box.height) << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << num(px(t)) << "\" y=\"" << num(box.top + box.height + 16)
       << "\" font-size=\"11\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  for (double t : ticks(ay))
  {
    if (t < ay.lo || t > ay.hi)
      continue;
    os << "<line x1=\"" << num(box.left) << "\" y1=\"" << num(py(t)) << "\" x2=\""
       << num(box.left + box.width) << "\" y2=\"" << num(py(t)) << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << num(box.left - 6) << "\" y=\"" << num(py(t) + 4)
       << "\" font-size=\"11\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
  }
  os << "<text x=\"" << num(box.left + box.width / 2) << "\" y=\"" << num(box.top - 8)
     << "\" font-size=\"13\" text-anchor=\"middle\">" << escape(title) << "</text>\n";
  os << "<text x=\"" << num(box.left + box.width / 2) << "\" y=\""
     << num(box.top + box.height + 34) << "\" font-size=\"12\" text-anchor=\"middle\">"
     << escape(style.x_label) << "</text>\n";
  os << "<text transform=\"translate(" << num(box.left - 48) << "," << num(box.top + box.height / 2)
     << ") rotate(-90)\" font-size=\"12\" text-anchor=\"middle\">" << escape(style.y_label)
     << "</text>\n";

  os << "<clipPath id=\"clip" << num(box.left) << "\"><rect x=\"" << num(box.left) << "\" y=\""
     << num(box.top) << "\" width=\"" << num(box.width) << "\" height=\"" << num(box.height)
     << "\"/></clipPath>\n<g clip-path=\"url(#clip" << num(box.left) << ")\">\n";

  if (style.slope_guides && style.log_x && style.log_y && !series.empty() &&
      !series.front().x.empty())
  {
    // Anchored at the first point of the first series.
    const double x0 = series.front().x.front();
    const double y0 = series.front().y.front();
    const double guides[] = {0.4, 0.5, 1.0};
    const char* colors[] = {"#999999", "#666666", "#333333"};
    for (int g = 0; g < 3; ++g)
    {
      const double s = guides[g];
      const double ya = y0 * std::pow(ax.lo / x0, s);
      const double yb = y0 * std::pow(ax.hi / x0, s);
      os << "<line x1=\"" << num(px(ax.lo)) << "\" y1=\"" << num(py(ya)) << "\" x2=\""
         << num(px(ax.hi)) << "\" y2=\"" << num(py(yb)) << "\" stroke=\"" << colors[g]
         << "\" stroke-dasharray=\"2,3\"/>\n";
    }
  }

  for (const auto& s : series)
  {
    std::ostringstream pts;
    int count = 0;
    for (std::size_t k = 0; k < s.x.size(); ++k)
    {
      if (range && (s.x[k] < range->first || s.x[k] > range->second))
        continue;
      if ((style.log_x && !(s.x[k] > 0.0)) || (style.log_y && !(s.y[k] > 0.0)))
        continue;
      pts << (count++ ? " " : "") << num(px(s.x[k])) << "," << num(py(s.y[k]));
    }
    if (count == 0)
      continue;
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
       << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"" << pts.str() << "\"/>\n";
    if (s.markers)
    {
      for (std::size_t k = 0; k < s.x.size(); ++k)
        if ((!style.log_x || s.x[k] > 0.0) && (!style.log_y || s.y[k] > 0.0))
          os << "<circle cx=\"" << num(px(s.x[k])) << "\" cy=\"" << num(py(s.y[k]))
             << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
    }
  }
  os << "</g>\n";

  if (!legend)
    return;
  double ly = box.top + 14;
  for (const auto& s : series)
  {
    if (s.label.empty())
      continue;
    const double lx = box.left + box.width - 150;
    os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 22)
       << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
       << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
    os << "<text x=\"" << num(lx + 28) << "\" y=\"" << num(ly) << "\" font-size=\"11\">"
       << escape(s.label) << "</text>\n";
    ly += 15;
  }
  if (style.slope_guides && style.log_x && style.log_y)
    os << "<text x=\"" << num(box.left + 6) << "\" y=\"" << num(box.top + box.height - 8)
       << "\" font-size=\"10\" fill=\"#555\">guides: slope 0.4, 0.5, 1.0</text>\n";
}

} // namespace

std::string
palette(std::size_t index)
{
  static const char* colors[] = {"#d62728", "#2ca02c", "#1f77b4", "#000000",
                                 "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
  return colors[index % (sizeof colors / sizeof *colors)];
}

std::string
render_svg(const std::vector<Series>& series, const PlotStyle& style)
{
  bool any = false;
  for (const auto& s : series)
  {
    if (s.x.size() != s.y.size())
      throw std::invalid_argument("render_svg: series '" + s.label + "' has mismatched x and y");
    any = any || !s.x.empty();
  }
  if (!any)
    throw std::invalid_argument("render_svg: nothing to plot");

  std::ostringstream os;
  const double w = style.width;
  const double h = style.height;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\""
     << style.height << "\" viewBox=\"0 0 " << style.width << " " << style.height
     << "\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const double top = 36.0;
  const double bottom = 52.0;
  if (style.zoom)
  {
    const double left = 70.0;
    const double gap = 80.0;
    const double pw = (w - left - gap - 20.0) * 0.5;
    draw_panel(os, {left, top, pw, h - top - bottom}, series, style, std::nullopt, style.title,
               true);
    draw_panel(os, {left + pw + gap, top, pw, h - top - bottom}, series, style, style.zoom,
               "zoom near x = " + tick_label(style.zoom->first), false);
  }
  else
  {
    draw_panel(os, {70.0, top, w - 90.0, h - top - bottom}, series, style, std::nullopt,
               style.title, true);
  }
  os << "</svg>\n";
  return os.str();
}

void
emit_svg(const std::vector<Series>& series, const PlotStyle& style, const std::string& path)
{
  const std::string doc = render_svg(series, style);
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("emit_svg: cannot write " + path);
  out << doc;
}

} // namespace slabtrans::app
