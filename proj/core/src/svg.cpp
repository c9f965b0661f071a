// Copyright 2026 The ganlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ganlab/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "ganlab/csv.hpp"
#include "ganlab/error.hpp"
#include "ganlab/format.hpp"

namespace ganlab {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(std::string_view s) {
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
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  // Empty or degenerate ranges widen to a unit interval around their value.
  void settle() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    } else if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  const double nice = frac < 1.5 ? 1.0 : frac < 3.0 ? 2.0 : frac < 7.0 ? 5.0 : 10.0;
  return nice * mag;
}

std::vector<double> linear_ticks(const Range& r) {
  const double step = nice_step(r.hi - r.lo, 5);
  std::vector<double> ticks;
  for (double t = std::ceil(r.lo / step) * step; t <= r.hi + step * 1e-9; t += step) {
    ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return ticks;
}

}  // namespace

std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
  const auto y_of = [&](double v) {
    if (!std::isfinite(v)) return std::numeric_limits<double>::quiet_NaN();
    if (spec.log_y) return v > 0.0 ? std::log10(v) : std::numeric_limits<double>::quiet_NaN();
    return v;
  };

  Range xr;
  Range yr;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw UsageError("series '" + s.name + "' has x/y size mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = y_of(s.y[i]);
      if (!std::isfinite(s.x[i]) || std::isnan(y)) continue;
      xr.add(s.x[i]);
      yr.add(y);
    }
  }
  xr.settle();
  yr.settle();
  if (spec.log_y) {
    yr.lo = std::floor(yr.lo);
    yr.hi = std::ceil(yr.hi);
    if (yr.lo == yr.hi) yr.hi += 1.0;
  }

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  const auto py = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << fixed(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
    << escape(spec.title) << "</text>\n";
  o << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
  o << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(kTop + ph) << "\" x2=\"" << fixed(kLeft + pw)
    << "\" y2=\"" << fixed(kTop + ph) << "\"/>\n";
  o << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(kTop) << "\" x2=\"" << fixed(kLeft)
    << "\" y2=\"" << fixed(kTop + ph) << "\"/>\n";
  o << "</g>\n<g class=\"ticks\" font-size=\"11\">\n";
  for (double t : linear_ticks(xr)) {
    o << "<line x1=\"" << fixed(px(t)) << "\" y1=\"" << fixed(kTop + ph) << "\" x2=\"" << fixed(px(t))
      << "\" y2=\"" << fixed(kTop + ph + 5) << "\" stroke=\"black\"/>";
    o << "<text x=\"" << fixed(px(t)) << "\" y=\"" << fixed(kTop + ph + 18)
      << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  std::vector<double> yticks;
  if (spec.log_y) {
    const double stride = std::max(1.0, std::ceil((yr.hi - yr.lo) / 8.0));
    for (double t = yr.lo; t <= yr.hi; t += stride) yticks.push_back(t);
  } else {
    yticks = linear_ticks(yr);
  }
  for (double t : yticks) {
    o << "<line x1=\"" << fixed(kLeft - 5) << "\" y1=\"" << fixed(py(t)) << "\" x2=\"" << fixed(kLeft)
      << "\" y2=\"" << fixed(py(t)) << "\" stroke=\"black\"/>";
    o << "<text x=\"" << fixed(kLeft - 8) << "\" y=\"" << fixed(py(t) + 4) << "\" text-anchor=\"end\">"
      << (spec.log_y ? "1e" + tick_label(t) : tick_label(t)) << "</text>\n";
  }
  o << "</g>\n";
  o << "<text x=\"" << fixed(kLeft + pw / 2) << "\" y=\"" << fixed(kHeight - 12)
    << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(spec.x_label) << "</text>\n";
  o << "<text x=\"18\" y=\"" << fixed(kTop + ph / 2) << "\" text-anchor=\"middle\" font-size=\"13\""
    << " transform=\"rotate(-90 18 " << fixed(kTop + ph / 2) << ")\">" << escape(spec.y_label)
    << (spec.log_y ? " (log)" : "") << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kPalette[k % kPalette.size()];
    o << "<path class=\"series\" data-name=\"" << escape(s.name) << "\" fill=\"none\" stroke=\""
      << colour << "\" stroke-width=\"1.5\" d=\"";
    bool pen_down = false;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = y_of(s.y[i]);
      if (!std::isfinite(s.x[i]) || std::isnan(y)) {
        pen_down = false;
        continue;
      }
      o << (pen_down ? 'L' : 'M') << fixed(px(s.x[i])) << ',' << fixed(py(y)) << ' ';
      pen_down = true;
    }
    o << "\"/>\n";
    const double ly = kTop + 10 + 18.0 * static_cast<double>(k);
    o << "<line x1=\"" << fixed(kLeft + pw + 12) << "\" y1=\"" << fixed(ly) << "\" x2=\""
      << fixed(kLeft + pw + 32) << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << colour
      << "\" stroke-width=\"2\"/>";
    o << "<text x=\"" << fixed(kLeft + pw + 36) << "\" y=\"" << fixed(ly + 4) << "\" font-size=\"11\">"
      << escape(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::vector<std::string_view> plot_kinds() {
  return {"minimax",      "divergence_sweep",   "parallel_lines", "densities", "em_demo",
          "optimal_d",    "vanishing_gradient", "mode_collapse",  "metrics",   "oracle"};
}

namespace {

double cell_number(const std::string& text) {
  try {
    return parse_double(text);
  } catch (const UsageError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

void require(const CsvTable& t, std::string_view kind, std::initializer_list<const char*> cols) {
  for (const char* c : cols) {
    if (!t.has_column(c)) {
      throw UsageError("CSV does not match plot kind '" + std::string(kind) + "': missing column '" +
                       c + "'");
    }
  }
}

PlotSeries column_series(const CsvTable& t, const std::string& x, const std::string& y,
                         std::string name) {
  PlotSeries s{std::move(name), {}, {}};
  const std::size_t xi = t.column(x);
  const std::size_t yi = t.column(y);
  for (const auto& row : t.rows) {
    s.x.push_back(cell_number(row[xi]));
    s.y.push_back(cell_number(row[yi]));
  }
  return s;
}

// One series per distinct value of the group columns, in sorted key order.
std::vector<PlotSeries> grouped_series(const CsvTable& t, const std::string& x, const std::string& y,
                                       const std::vector<std::string>& group) {
  std::map<std::string, PlotSeries> by_key;
  const std::size_t xi = t.column(x);
  const std::size_t yi = t.column(y);
  for (const auto& row : t.rows) {
    std::string key;
    for (const auto& g : group) {
      if (!key.empty()) key += " ";
      key += g + "=" + row[t.column(g)];
    }
    auto& s = by_key[key];
    s.name = key;
    s.x.push_back(cell_number(row[xi]));
    s.y.push_back(cell_number(row[yi]));
  }
  std::vector<PlotSeries> out;
  for (auto& [key, s] : by_key) out.push_back(std::move(s));
  return out;
}

}  // namespace

std::string plot(const std::filesystem::path& csv, std::string_view kind) {
  const CsvTable t = read_csv(csv);
  if (kind == "minimax") {
    require(t, kind, {"step", "x", "y"});
    return render_svg({"Simultaneous gradient play on xy", "step", "value", false},
                      {column_series(t, "step", "x", "x(t)"), column_series(t, "step", "y", "y(t)")});
  }
  if (kind == "divergence_sweep" || kind == "parallel_lines") {
    require(t, kind, {"theta_or_param", "kl_pq", "kl_qp", "js_nats", "w"});
    std::vector<PlotSeries> s = {column_series(t, "theta_or_param", "kl_pq", "KL(p||q)"),
                                 column_series(t, "theta_or_param", "kl_qp", "KL(q||p)"),
                                 column_series(t, "theta_or_param", "js_nats", "JS(p,q)")};
    if (kind == "parallel_lines") s.push_back(column_series(t, "theta_or_param", "w", "W(p,q)"));
    return render_svg({kind == "parallel_lines" ? "Parallel lines" : "Divergence sweep",
                       kind == "parallel_lines" ? "theta" : "parameter", "nats", false},
                      s);
  }
  if (kind == "densities") {
    require(t, kind, {"x", "p", "q", "m"});
    return render_svg({"Densities", "x", "density", false},
                      {column_series(t, "x", "p", "p"), column_series(t, "x", "q", "q"),
                       column_series(t, "x", "m", "m=(p+q)/2")});
  }
  if (kind == "em_demo") {
    require(t, kind, {"i", "p", "q", "w"});
    return render_svg({"Discrete earth mover's distance", "bin", "mass", false},
                      {column_series(t, "i", "p", "P"), column_series(t, "i", "q", "Q"),
                       column_series(t, "i", "w", "cumulative W")});
  }
  if (kind == "optimal_d") {
    require(t, kind, {"x", "d_trained", "d_star"});
    return render_svg({"Trained vs optimal discriminator", "x", "D(x)", false},
                      {column_series(t, "x", "d_trained", "trained D"),
                       column_series(t, "x", "d_star", "optimal D*")});
  }
  if (kind == "vanishing_gradient") {
    require(t, kind, {"step", "mode", "seed", "g_grad_norm"});
    return render_svg({"Generator gradient norm", "discriminator steps", "||grad G||", true},
                      grouped_series(t, "step", "g_grad_norm", {"mode", "seed"}));
  }
  if (kind == "mode_collapse") {
    require(t, kind, {"step", "mode", "seed", "modes_covered"});
    return render_svg({"Modes covered", "step", "modes", false},
                      grouped_series(t, "step", "modes_covered", {"mode", "seed"}));
  }
  if (kind == "metrics") {
    require(t, kind, {"step", "d_loss", "g_loss", "w_estimate"});
    return render_svg({"Training metrics", "step", "value", false},
                      {column_series(t, "step", "d_loss", "d_loss"),
                       column_series(t, "step", "g_loss", "g_loss"),
                       column_series(t, "step", "w_estimate", "w_estimate")});
  }
  if (kind == "oracle") {
    require(t, kind, {"step", "w_estimate", "w_oracle"});
    return render_svg({"Critic estimate vs sampled W1", "step", "distance", false},
                      {column_series(t, "step", "w_estimate", "critic estimate"),
                       column_series(t, "step", "w_oracle", "W1 oracle")});
  }
  throw UsageError("unknown plot kind '" + std::string(kind) + "'");
}

}  // namespace ganlab
