#include "snsim/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>

#include "snsim/errors.hpp"
#include "snsim/io.hpp"

namespace snsim {

namespace {

constexpr double kWidth = 860, kHeight = 520;
constexpr double kLeft = 80, kRight = 30, kTop = 30, kBottom = 60;
constexpr double kPlotW = kWidth - kLeft - kRight;
constexpr double kPlotH = kHeight - kTop - kBottom;

const char* kPalette[6] = {"#1f77b4", "#d62728", "#2ca02c",
                           "#ff7f0e", "#9467bd", "#8c564b"};

void appendf(std::string& s, const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  s += buf;
}

std::string tick_text(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// linear tick positions with a 1/2/5 mantissa step, about six intervals
std::vector<double> nice_ticks(double lo, double hi) {
  std::vector<double> out;
  const double span = hi - lo;
  if (!(span > 0)) return out;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  if (raw / mag > 5.0) step = 10.0 * mag;
  else if (raw / mag > 2.0) step = 5.0 * mag;
  else if (raw / mag > 1.0) step = 2.0 * mag;
  double t = std::ceil(lo / step) * step;
  for (; t <= hi + 0.5 * step; t += step) out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  return out;
}

std::vector<double> decade_ticks(double lo_log, double hi_log) {
  std::vector<double> out;
  for (double d = std::ceil(lo_log - 1e-9); d <= hi_log + 1e-9; d += 1.0)
    out.push_back(d);
  return out;
}

struct Frame {
  double x0, x1, y0, y1;  // data ranges (already log-transformed when needed)
  double px(double v) const { return kLeft + (v - x0) / (x1 - x0) * kPlotW; }
  double py(double v) const { return kTop + kPlotH - (v - y0) / (y1 - y0) * kPlotH; }
};

void open_svg(std::string& s) {
  appendf(s,
          "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
          "viewBox=\"0 0 %g %g\">\n",
          kWidth, kHeight, kWidth, kHeight);
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void axes_box(std::string& s) {
  appendf(s,
          "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
          "fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n",
          kLeft, kTop, kPlotW, kPlotH);
}

void x_tick(std::string& s, const Frame& fr, double v, const std::string& label) {
  const double x = fr.px(v);
  appendf(s,
          "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#ccc\" "
          "stroke-width=\"0.5\"/>\n",
          x, kTop, x, kTop + kPlotH);
  appendf(s,
          "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"12\" "
          "fill=\"#333\" text-anchor=\"middle\">%s</text>\n",
          x, kTop + kPlotH + 18.0, label.c_str());
}

void y_tick(std::string& s, const Frame& fr, double v, const std::string& label) {
  const double y = fr.py(v);
  appendf(s,
          "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#ccc\" "
          "stroke-width=\"0.5\"/>\n",
          kLeft, y, kLeft + kPlotW, y);
  appendf(s,
          "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"12\" "
          "fill=\"#333\" text-anchor=\"end\">%s</text>\n",
          kLeft - 8.0, y + 4.0, label.c_str());
}

void axis_labels(std::string& s, const std::string& x_label, const std::string& y_label) {
  appendf(s,
          "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"14\" "
          "fill=\"#111\" text-anchor=\"middle\">%s</text>\n",
          kLeft + kPlotW / 2.0, kHeight - 16.0, x_label.c_str());
  appendf(s,
          "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"14\" "
          "fill=\"#111\" text-anchor=\"middle\" transform=\"rotate(-90 %.2f %.2f)\">%s</text>\n",
          22.0, kTop + kPlotH / 2.0, 22.0, kTop + kPlotH / 2.0, y_label.c_str());
}

}  // namespace

void write_spectrum_svg(const std::string& path, const std::vector<SpectrumRecord>& specs,
                        const std::vector<std::string>& labels, bool log_y) {
  if (specs.empty()) throw ConfigError("no spectra to plot", path);
  if (!labels.empty() && labels.size() != specs.size())
    throw ConfigError("label count does not match spectrum count", path);

  double fmax = 0.0, pmax = 0.0;
  for (const SpectrumRecord& sp : specs) {
    if (sp.freq_hz.size() < 2) throw ConfigError("spectrum too short to plot", path);
    fmax = std::max(fmax, sp.freq_hz.back());
    for (const double p : sp.psd) pmax = std::max(pmax, p);
  }
  if (pmax <= 0.0) pmax = 1.0;
  const double floor = pmax * 1e-8;

  Frame fr;
  fr.x0 = 0.0;
  fr.x1 = fmax / 1e6;
  if (log_y) {
    fr.y0 = std::log10(floor);
    fr.y1 = std::log10(pmax) + 0.05 * (std::log10(pmax) - std::log10(floor));
  } else {
    fr.y0 = 0.0;
    fr.y1 = 1.05 * pmax;
  }

  std::string s;
  open_svg(s);
  for (const double t : nice_ticks(fr.x0, fr.x1)) x_tick(s, fr, t, tick_text(t));
  if (log_y) {
    for (const double d : decade_ticks(fr.y0, fr.y1))
      y_tick(s, fr, d, tick_text(std::pow(10.0, d)));
  } else {
    for (const double t : nice_ticks(fr.y0, fr.y1)) y_tick(s, fr, t, tick_text(t));
  }
  axes_box(s);

  for (size_t i = 0; i < specs.size(); ++i) {
    const SpectrumRecord& sp = specs[i];
    appendf(s, "<polyline fill=\"none\" stroke=\"%s\" stroke-width=\"1.3\" points=\"",
            kPalette[i % 6]);
    for (size_t k = 0; k < sp.freq_hz.size(); ++k) {
      double v = sp.psd[k];
      if (log_y) v = std::log10(std::max(v, floor));
      appendf(s, "%.2f,%.2f ", fr.px(sp.freq_hz[k] / 1e6), fr.py(v));
    }
    s += "\"/>\n";
  }

  if (!labels.empty()) {
    for (size_t i = 0; i < labels.size(); ++i) {
      const double ly = kTop + 16.0 + 18.0 * static_cast<double>(i);
      appendf(s,
              "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" "
              "stroke-width=\"2\"/>\n",
              kLeft + kPlotW - 150.0, ly, kLeft + kPlotW - 122.0, ly, kPalette[i % 6]);
      appendf(s,
              "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"12\" "
              "fill=\"#111\">%s</text>\n",
              kLeft + kPlotW - 114.0, ly + 4.0, labels[i].c_str());
    }
  }

  axis_labels(s, "Frequency (MHz)", "PSD (arb. units)");
  s += "</svg>\n";
  write_text_file(path, s);
}

void write_summary_svg(const std::string& path, const std::vector<SweepRow>& rows,
                       double gamma_t_hz, const std::string& x_label, bool log_x) {
  if (rows.empty()) throw ConfigError("no sweep rows to plot", path);

  bool can_log = log_x;
  for (const SweepRow& r : rows)
    if (r.axis_value <= 0.0) can_log = false;

  double xlo = rows.front().axis_value, xhi = rows.front().axis_value;
  double ymax = gamma_t_hz / 1e3;
  for (const SweepRow& r : rows) {
    xlo = std::min(xlo, r.axis_value);
    xhi = std::max(xhi, r.axis_value);
    ymax = std::max(ymax, (r.hwhm_hz + r.hwhm_err_hz) / 1e3);
  }
  if (xhi <= xlo) {
    xlo -= 0.5;
    xhi += 0.5;
  }

  Frame fr;
  if (can_log) {
    fr.x0 = std::log10(xlo) - 0.05;
    fr.x1 = std::log10(xhi) + 0.05;
  } else {
    const double pad = 0.05 * (xhi - xlo);
    fr.x0 = xlo - pad;
    fr.x1 = xhi + pad;
  }
  fr.y0 = 0.0;
  fr.y1 = 1.1 * std::max(ymax, 1e-12);

  auto xmap = [&](double v) { return can_log ? std::log10(v) : v; };

  std::string s;
  open_svg(s);
  if (can_log) {
    for (const double d : decade_ticks(fr.x0, fr.x1))
      x_tick(s, fr, d, tick_text(std::pow(10.0, d)));
  } else {
    for (const double t : nice_ticks(fr.x0, fr.x1)) x_tick(s, fr, t, tick_text(t));
  }
  for (const double t : nice_ticks(fr.y0, fr.y1)) y_tick(s, fr, t, tick_text(t));
  axes_box(s);

  const double yref = fr.py(gamma_t_hz / 1e3);
  appendf(s,
          "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#888\" "
          "stroke-width=\"1.2\" stroke-dasharray=\"6,4\"/>\n",
          kLeft, yref, kLeft + kPlotW, yref);
  appendf(s,
          "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"11\" "
          "fill=\"#666\" text-anchor=\"end\">transit rate</text>\n",
          kLeft + kPlotW - 6.0, yref - 6.0);

  for (const SweepRow& r : rows) {
    const double x = fr.px(xmap(r.axis_value));
    const double y = fr.py(r.hwhm_hz / 1e3);
    if (r.hwhm_err_hz > 0.0) {
      const double ylo = fr.py((r.hwhm_hz - r.hwhm_err_hz) / 1e3);
      const double yhi = fr.py((r.hwhm_hz + r.hwhm_err_hz) / 1e3);
      appendf(s,
              "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#1f77b4\" "
              "stroke-width=\"1\"/>\n",
              x, ylo, x, yhi);
      appendf(s, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#1f77b4\" stroke-width=\"1\"/>\n",
              x - 4.0, ylo, x + 4.0, ylo);
      appendf(s, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#1f77b4\" stroke-width=\"1\"/>\n",
              x - 4.0, yhi, x + 4.0, yhi);
    }
    appendf(s,
            "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3.5\" fill=\"%s\" stroke=\"none\"/>\n",
            x, y, r.fit_converged ? "#1f77b4" : "#d62728");
  }

  axis_labels(s, x_label, "HWHM (kHz)");
  s += "</svg>\n";
  write_text_file(path, s);
}

}  // namespace snsim
