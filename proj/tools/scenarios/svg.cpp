#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace chiraldecay::cli {

namespace {

constexpr double kW = 720, kH = 480;
constexpr double kLeft = 64, kRight = 20, kTop = 36, kBottom = 48;

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[48];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

void write_line_plot(const std::filesystem::path& path, const SvgOptions& opts,
                     const std::vector<SvgSeries>& series) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (double v : s.x) {
      xmin = std::min(xmin, v);
      xmax = std::max(xmax, v);
    }
    for (double v : s.y) {
      if (opts.log_y && v <= 0.0) continue;
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  if (opts.log_y) {
    if (!(ymin > 0.0)) ymin = 1e-12;
    ymin = std::log10(ymin);
    ymax = std::log10(ymax);
    if (!(ymax > ymin)) ymax = ymin + 1.0;
  } else {
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
  }

  const double plot_w = kW - kLeft - kRight, plot_h = kH - kTop - kBottom;
  auto sx = [&](double v) { return kLeft + (v - xmin) / (xmax - xmin) * plot_w; };
  auto sy = [&](double v) {
    const double t = opts.log_y ? std::log10(std::max(v, 1e-300)) : v;
    return kTop + (ymax - t) / (ymax - ymin) * plot_h;
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kW) + "\" height=\"" +
         fmt(kH) + "\" viewBox=\"0 0 " + fmt(kW) + " " + fmt(kH) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fmt(kW / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" "
         "font-family=\"sans-serif\">" + opts.title + "</text>\n";

  // frame
  out += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(plot_w) +
         "\" height=\"" + fmt(plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";

  // ticks
  for (int i = 0; i <= 4; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 4.0;
    const double px = sx(fx);
    out += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(kTop + plot_h) + "\" x2=\"" + fmt(px) +
           "\" y2=\"" + fmt(kTop + plot_h + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fmt(px) + "\" y=\"" + fmt(kTop + plot_h + 20) +
           "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" + fmt(fx, "%.4g") +
           "</text>\n";
    const double ty = ymin + (ymax - ymin) * i / 4.0;
    const double py = kTop + plot_h - plot_h * i / 4.0;
    const double label = opts.log_y ? std::pow(10.0, ty) : ty;
    out += "<line x1=\"" + fmt(kLeft - 5) + "\" y1=\"" + fmt(py) + "\" x2=\"" + fmt(kLeft) +
           "\" y2=\"" + fmt(py) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(py + 4) +
           "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" +
           fmt(label, "%.3g") + "</text>\n";
  }
  out += "<text x=\"" + fmt(kLeft + plot_w / 2) + "\" y=\"" + fmt(kH - 10) +
         "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" + opts.x_label +
         "</text>\n";
  out += "<text x=\"16\" y=\"" + fmt(kTop + plot_h / 2) +
         "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\" transform=\"rotate(-90 16 " +
         fmt(kTop + plot_h / 2) + ")\">" + opts.y_label + "</text>\n";

  int legend_row = 0;
  for (const auto& s : series) {
    std::string pts;
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (opts.log_y && s.y[i] <= 0.0) continue;
      pts += fmt(sx(s.x[i]), "%.2f");
      pts += ',';
      pts += fmt(sy(s.y[i]), "%.2f");
      pts += ' ';
    }
    if (!pts.empty())
      out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"" +
             pts + "\"/>\n";
    if (s.markers) {
      for (size_t i = 0; i < s.x.size(); ++i) {
        if (opts.log_y && s.y[i] <= 0.0) continue;
        out += "<circle cx=\"" + fmt(sx(s.x[i]), "%.2f") + "\" cy=\"" + fmt(sy(s.y[i]), "%.2f") +
               "\" r=\"2.5\" fill=\"" + s.color + "\"/>\n";
      }
    }
    if (!s.label.empty()) {
      const double ly = kTop + 14 + 16 * legend_row++;
      out += "<line x1=\"" + fmt(kLeft + plot_w - 130) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" +
             fmt(kLeft + plot_w - 110) + "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + s.color +
             "\" stroke-width=\"2\"/>\n";
      out += "<text x=\"" + fmt(kLeft + plot_w - 104) + "\" y=\"" + fmt(ly) +
             "\" font-size=\"11\" font-family=\"sans-serif\">" + s.label + "</text>\n";
    }
  }
  out += "</svg>\n";

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

}  // namespace chiraldecay::cli
