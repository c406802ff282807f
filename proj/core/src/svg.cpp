#include "ealab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace ea::svg {

namespace {

constexpr const char* kPalette[] = {"#1f6fb2", "#c2403a", "#3a9651",
                                    "#8256a8", "#b07d2b", "#3aa0a6",
                                    "#9d4f82", "#6b6b6b"};
constexpr int kColors = 8;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  int width, height;
  double x0, x1, y0, y1;  // data range, transformed space
  bool logx, logy;
  static constexpr double ml = 72, mr = 18, mt = 42, mb = 56;

  double px(double x) const {
    const double t = logx ? std::log10(x) : x;
    return ml + (t - x0) / (x1 - x0) * (width - ml - mr);
  }
  double py(double y) const {
    const double t = logy ? std::log10(y) : y;
    return height - mb - (t - y0) / (y1 - y0) * (height - mt - mb);
  }
  double back_x(double t) const { return logx ? std::pow(10.0, t) : t; }
  double back_y(double t) const { return logy ? std::pow(10.0, t) : t; }
};

void pad_range(double& lo, double& hi) {
  if (lo > hi) std::swap(lo, hi);
  if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
    const double pad = std::max(0.5, std::abs(hi) * 0.1);
    lo -= pad;
    hi += pad;
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
}

void open_svg(std::string& out, int w, int h) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" "
                "height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                w, h, w, h);
  out += buf;
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void draw_frame(std::string& out, const Frame& f, const std::string& title,
                const std::string& xlabel, const std::string& ylabel) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" "
                "fill=\"none\" stroke=\"#444\"/>\n",
                f.ml, f.mt, f.width - f.ml - f.mr, f.height - f.mt - f.mb);
  out += buf;
  // five ticks per axis, evenly spaced in transformed coordinates
  for (int i = 0; i <= 4; ++i) {
    const double tx = f.x0 + (f.x1 - f.x0) * i / 4.0;
    const double ty = f.y0 + (f.y1 - f.y0) * i / 4.0;
    const double px = f.px(f.back_x(tx));
    const double py = f.py(f.back_y(ty));
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%s\" y1=\"%g\" x2=\"%s\" y2=\"%g\" "
                  "stroke=\"#444\"/>\n",
                  num(px).c_str(), double(f.height) - f.mb,
                  num(px).c_str(), double(f.height) - f.mb + 5);
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%s\" y=\"%g\" font-size=\"11\" "
                  "text-anchor=\"middle\" font-family=\"sans-serif\">%s"
                  "</text>\n",
                  num(px).c_str(), double(f.height) - f.mb + 18,
                  num(f.back_x(tx)).c_str());
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%g\" y1=\"%s\" x2=\"%g\" y2=\"%s\" "
                  "stroke=\"#444\"/>\n",
                  f.ml - 5, num(py).c_str(), f.ml, num(py).c_str());
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%s\" font-size=\"11\" "
                  "text-anchor=\"end\" font-family=\"sans-serif\">%s</text>\n",
                  f.ml - 8, num(py + 4).c_str(), num(f.back_y(ty)).c_str());
    out += buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%g\" y=\"24\" font-size=\"15\" "
                "text-anchor=\"middle\" font-family=\"sans-serif\">%s"
                "</text>\n",
                f.ml + (f.width - f.ml - f.mr) / 2.0, esc(title).c_str());
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%g\" y=\"%g\" font-size=\"12\" "
                "text-anchor=\"middle\" font-family=\"sans-serif\">%s"
                "</text>\n",
                f.ml + (f.width - f.ml - f.mr) / 2.0, f.height - 14.0,
                esc(xlabel).c_str());
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"18\" y=\"%g\" font-size=\"12\" "
                "text-anchor=\"middle\" font-family=\"sans-serif\" "
                "transform=\"rotate(-90 18 %g)\">%s</text>\n",
                f.mt + (f.height - f.mt - f.mb) / 2.0,
                f.mt + (f.height - f.mt - f.mb) / 2.0, esc(ylabel).c_str());
  out += buf;
}

}  // namespace

std::string LinePlot::render(int width, int height) const {
  if (series.empty()) throw std::invalid_argument("plot has no series");
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (const Series& s : series) {
    if (s.x.size() != s.y.size())
      throw std::invalid_argument("series x/y length mismatch");
    if (!s.yerr.empty() && s.yerr.size() != s.y.size())
      throw std::invalid_argument("series yerr length mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (logx && !(s.x[i] > 0.0)) continue;
      if (logy && !(s.y[i] > 0.0)) continue;
      const double tx = logx ? std::log10(s.x[i]) : s.x[i];
      const double ty = logy ? std::log10(s.y[i]) : s.y[i];
      xlo = std::min(xlo, tx);
      xhi = std::max(xhi, tx);
      ylo = std::min(ylo, ty);
      yhi = std::max(yhi, ty);
    }
  }
  if (!(xlo <= xhi))
    throw std::invalid_argument("plot has no drawable points");
  pad_range(xlo, xhi);
  pad_range(ylo, yhi);

  Frame f{width, height, xlo, xhi, ylo, yhi, logx, logy};
  std::string out;
  open_svg(out, width, height);
  draw_frame(out, f, title, xlabel, ylabel);

  char buf[256];
  for (std::size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    const char* color = kPalette[si % kColors];
    std::string poly;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (logx && !(s.x[i] > 0.0)) continue;
      if (logy && !(s.y[i] > 0.0)) continue;
      const double px = f.px(s.x[i]), py = f.py(s.y[i]);
      poly += num(px) + "," + num(py) + " ";
      if (!s.yerr.empty() && s.yerr[i] > 0.0) {
        double lo = s.y[i] - s.yerr[i], hi = s.y[i] + s.yerr[i];
        if (logy) lo = std::max(lo, std::pow(10.0, f.y0));
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" "
                      "stroke=\"%s\" stroke-width=\"1\"/>\n",
                      num(px).c_str(), num(f.py(lo)).c_str(), num(px).c_str(),
                      num(f.py(hi)).c_str(), color);
        out += buf;
      }
      std::snprintf(buf, sizeof buf,
                    "<circle cx=\"%s\" cy=\"%s\" r=\"2.5\" fill=\"%s\"/>\n",
                    num(px).c_str(), num(py).c_str(), color);
      out += buf;
    }
    if (!poly.empty()) poly.pop_back();
    out += "<polyline points=\"" + poly + "\" fill=\"none\" stroke=\"" +
           color + "\" stroke-width=\"1.5\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" font-size=\"12\" fill=\"%s\" "
                  "font-family=\"sans-serif\">%s</text>\n",
                  width - Frame::mr - 150.0, Frame::mt + 16.0 + 16.0 * si,
                  color, esc(s.label).c_str());
    out += buf;
  }
  out += "</svg>\n";
  return out;
}

std::string Histogram::render(int width, int height) const {
  if (bars.empty()) throw std::invalid_argument("histogram has no bars");
  std::vector<std::pair<double, double>> sorted(bars);
  std::sort(sorted.begin(), sorted.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sorted.size(); ++i)
    gap = std::min(gap, sorted[i].first - sorted[i - 1].first);
  if (!std::isfinite(gap) || gap <= 0.0) gap = 1.0;

  double xlo = sorted.front().first - gap, xhi = sorted.back().first + gap;
  double ylo = 0.0, yhi = 0.0;
  for (const auto& [v, w] : sorted) yhi = std::max(yhi, w);
  if (yhi <= 0.0) yhi = 1.0;
  yhi *= 1.08;

  Frame f{width, height, xlo, xhi, ylo, yhi, false, false};
  std::string out;
  open_svg(out, width, height);
  draw_frame(out, f, title, xlabel, ylabel);

  char buf[256];
  const double half = 0.4 * gap;
  for (const auto& [v, w] : sorted) {
    const double x = f.px(v - half);
    const double y = f.py(w);
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%s\" y=\"%s\" width=\"%s\" height=\"%s\" "
                  "fill=\"%s\" stroke=\"#333\"/>\n",
                  num(x).c_str(), num(y).c_str(),
                  num(f.px(v + half) - x).c_str(),
                  num(f.py(0.0) - y).c_str(), kPalette[0]);
    out += buf;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace ea::svg
