#include "qlag/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qlag/core.hpp"

namespace qlag {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string num(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
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

struct Range {
  double lo = 0, hi = 1;
  void widen() {
    if (!(hi > lo)) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

}  // namespace

std::string emit_svg(const PlotSpec& spec) {
  const bool log = spec.kind == PlotKind::kLogLog;
  // Points in plot space, per series.
  std::vector<std::vector<std::pair<double, double>>> pts;
  for (const auto& s : spec.series) {
    std::vector<std::pair<double, double>> p;
    const std::size_t m = std::min(s.xs.size(), s.ys.size());
    for (std::size_t i = 0; i < m; ++i) {
      double x = s.xs[i], y = s.ys[i];
      if (log) {
        if (!(x > 0) || !(y > 0)) continue;
        x = std::log10(x);
        y = std::log10(y);
      }
      if (std::isfinite(x) && std::isfinite(y)) p.emplace_back(x, y);
    }
    pts.push_back(std::move(p));
  }
  const bool any = std::any_of(pts.begin(), pts.end(), [](const auto& p) { return !p.empty(); });
  if (!any) throw InvalidArgument("cannot plot an empty series");

  Range rx{1e300, -1e300}, ry{1e300, -1e300};
  for (const auto& p : pts)
    for (const auto& [x, y] : p) {
      rx.lo = std::min(rx.lo, x);
      rx.hi = std::max(rx.hi, x);
      ry.lo = std::min(ry.lo, y);
      ry.hi = std::max(ry.hi, y);
    }
  rx.widen();
  ry.widen();
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto sy = [&](double y) { return kTop + ph - (y - ry.lo) / (ry.hi - ry.lo) * ph; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
     << escape(spec.title) << "</text>\n";

  // Axes and ticks.
  os << "<g stroke=\"black\" stroke-width=\"1\">\n"
     << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\""
     << kTop + ph << "\"/>\n"
     << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
     << kTop + ph << "\"/>\n</g>\n";
  os << "<g font-size=\"11\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = rx.lo + (rx.hi - rx.lo) * i / 4.0;
    const double fy = ry.lo + (ry.hi - ry.lo) * i / 4.0;
    const std::string lx = log ? "1e" + num(fx, 1) : num(fx, 3);
    const std::string ly = log ? "1e" + num(fy, 1) : num(fy, 3);
    os << "<text x=\"" << num(sx(fx)) << "\" y=\"" << num(kTop + ph + 16)
       << "\" text-anchor=\"middle\">" << lx << "</text>\n"
       << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(sy(fy) + 4)
       << "\" text-anchor=\"end\">" << ly << "</text>\n";
  }
  os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 10)
     << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n"
     << "<text x=\"16\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << num(kTop + ph / 2) << ")\">" << escape(spec.y_label) << "</text>\n</g>\n";

  for (std::size_t k = 0; k < pts.size(); ++k) {
    const char* color = kColors[k % std::size(kColors)];
    const auto& p = pts[k];
    if (p.empty()) continue;
    if (spec.kind == PlotKind::kSpectrum) {
      for (const auto& [x, y] : p)
        os << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y)) << "\" r=\"3\" fill=\""
           << color << "\"/>\n";
    } else {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < p.size(); ++i)
        os << (i ? " " : "") << num(sx(p[i].first)) << ',' << num(sy(p[i].second));
      os << "\"/>\n";
    }
    os << "<text x=\"" << num(kLeft + pw - 4) << "\" y=\"" << num(kTop + 14 + 14 * k)
       << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << color << "\">"
       << escape(spec.series[k].label) << "</text>\n";
  }
  if (spec.slope) {
    os << "<text x=\"" << num(kLeft + 8) << "\" y=\"" << num(kTop + 14)
       << "\" font-size=\"12\">fitted slope = " << num(*spec.slope, 3) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace qlag
