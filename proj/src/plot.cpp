#include "gpcbo/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gpcbo/csv.hpp"
#include "gpcbo/errors.hpp"

namespace gpcbo {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '&')
      out += "&amp;";
    else if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else
      out += c;
  }
  return out;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("short write to " + path.string());
}

std::vector<double> linear_ticks(double lo, double hi) {
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double step =
      mag * (norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0);
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9;
       t += step)
    ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  return ticks;
}

std::vector<double> decade_ticks(double lo_log10, double hi_log10) {
  const int first = static_cast<int>(std::ceil(lo_log10 - 1e-9));
  const int last = static_cast<int>(std::floor(hi_log10 + 1e-9));
  int stride = 1;
  while ((last - first) / stride > 8) ++stride;
  std::vector<double> ticks;
  for (int d = first; d <= last; d += stride)
    ticks.push_back(static_cast<double>(d));
  return ticks;
}

struct Series {
  std::string label;
  std::vector<double> x, y;
};

/// Line plot with optional log10 y axis; points that are non-finite (or
/// non-positive on a log axis) split the polyline.
std::string line_plot(const std::string& title, const std::string& xlabel,
                      const std::string& ylabel,
                      const std::vector<Series>& series, bool log_y) {
  const double W = 640, H = 420, ml = 76, mr = 18, mt = 36, mb = 50;
  const double aw = W - ml - mr, ah = H - mt - mb;

  const auto usable = [&](double y) {
    return std::isfinite(y) && (!log_y || y > 0.0);
  };
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  bool any = false;
  for (const Series& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !usable(s.y[i])) continue;
      const double yv = log_y ? std::log10(s.y[i]) : s.y[i];
      if (!any) {
        x0 = x1 = s.x[i];
        y0 = y1 = yv;
        any = true;
      } else {
        x0 = std::min(x0, s.x[i]);
        x1 = std::max(x1, s.x[i]);
        y0 = std::min(y0, yv);
        y1 = std::max(y1, yv);
      }
    }

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' ' << H
      << "\" font-family=\"monospace\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" "
         "font-size=\"14\">"
      << xml_escape(title) << "</text>\n";
  if (!any) {
    svg << "<text x=\"" << W / 2 << "\" y=\"" << H / 2
        << "\" text-anchor=\"middle\" fill=\"#888\">no plottable data</text>\n"
        << "</svg>\n";
    return svg.str();
  }

  if (x1 == x0) {
    x0 -= 0.5;
    x1 += 0.5;
  } else {
    const double pad = 0.02 * (x1 - x0);
    x0 -= pad;
    x1 += pad;
  }
  if (y1 == y0) {
    y0 -= 0.5;
    y1 += 0.5;
  } else {
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
  }

  const auto X = [&](double x) { return ml + (x - x0) / (x1 - x0) * aw; };
  const auto Y = [&](double y) {
    const double yv = log_y ? std::log10(y) : y;
    return mt + ah - (yv - y0) / (y1 - y0) * ah;
  };

  svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << aw
      << "\" height=\"" << ah << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (double t : linear_ticks(x0, x1)) {
    const double px = X(t);
    svg << "<line x1=\"" << px << "\" y1=\"" << mt + ah << "\" x2=\"" << px
        << "\" y2=\"" << mt + ah + 5 << "\" stroke=\"#333\"/>\n"
        << "<text x=\"" << px << "\" y=\"" << mt + ah + 18
        << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
  }
  const std::vector<double> yticks =
      log_y ? decade_ticks(y0, y1) : linear_ticks(y0, y1);
  for (double t : yticks) {
    const double py = mt + ah - (t - y0) / (y1 - y0) * ah;
    char label[32];
    if (log_y)
      std::snprintf(label, sizeof(label), "1e%d", static_cast<int>(t));
    else
      std::snprintf(label, sizeof(label), "%.6g", t);
    svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << py << "\" x2=\"" << ml
        << "\" y2=\"" << py << "\" stroke=\"#333\"/>\n"
        << "<line x1=\"" << ml << "\" y1=\"" << py << "\" x2=\"" << ml + aw
        << "\" y2=\"" << py << "\" stroke=\"#eee\"/>\n"
        << "<text x=\"" << ml - 8 << "\" y=\"" << py + 4
        << "\" text-anchor=\"end\">" << label << "</text>\n";
  }
  svg << "<text x=\"" << ml + aw / 2 << "\" y=\"" << H - 10
      << "\" text-anchor=\"middle\">" << xml_escape(xlabel) << "</text>\n"
      << "<text x=\"16\" y=\"" << mt + ah / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << mt + ah / 2
      << ")\">" << xml_escape(ylabel) << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    const char* color = kPalette[si % std::size(kPalette)];
    std::ostringstream seg;
    int seg_points = 0;
    const auto flush = [&]() {
      if (seg_points >= 2)
        svg << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"" << seg.str() << "\"/>\n";
      seg.str("");
      seg_points = 0;
    };
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !usable(s.y[i])) {
        flush();
        continue;
      }
      seg << X(s.x[i]) << ',' << Y(s.y[i]) << ' ';
      ++seg_points;
    }
    flush();
    const double ly = mt + 14 + 16 * static_cast<double>(si);
    svg << "<line x1=\"" << ml + aw - 150 << "\" y1=\"" << ly << "\" x2=\""
        << ml + aw - 126 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << ml + aw - 120 << "\" y=\"" << ly + 4 << "\">"
        << xml_escape(s.label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string rgb(double r, double g, double b) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<int>(std::clamp(r, 0.0, 1.0) * 255.0 + 0.5),
                static_cast<int>(std::clamp(g, 0.0, 1.0) * 255.0 + 0.5),
                static_cast<int>(std::clamp(b, 0.0, 1.0) * 255.0 + 0.5));
  return buf;
}

/// t in [0, 1]: blue, through white at 0.5, to red.
std::string diverging_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  if (t < 0.5) {
    const double u = t / 0.5;
    return rgb(0.13 + u * (0.97 - 0.13), 0.40 + u * (0.97 - 0.40),
               0.67 + u * (0.97 - 0.67));
  }
  const double u = (t - 0.5) / 0.5;
  return rgb(0.97 - u * (0.97 - 0.70), 0.97 - u * (0.97 - 0.09),
             0.97 - u * (0.97 - 0.17));
}

/// t in [0, 1]: near-white to dark red.
std::string sequential_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return rgb(1.0 - t * (1.0 - 0.40), 0.96 - t * 0.96, 0.94 - t * 0.90);
}

/// values[p] with p = ix * ny + iy, x varying slowest, iy = 0 at the bottom.
std::string heatmap(const std::string& title, int nx, int ny,
                    const std::vector<double>& values, double lo, double hi,
                    bool diverging) {
  const double W = 560, H = 470, ml = 52, mt = 40;
  const double aw = 380, ah = 380;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' ' << H
      << "\" font-family=\"monospace\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << ml + aw / 2
      << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << xml_escape(title) << "</text>\n";

  const double span = hi > lo ? hi - lo : 1.0;
  const double cw = aw / nx, ch = ah / ny;
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy) {
      const double v = values[static_cast<std::size_t>(ix) * ny + iy];
      const double t = (v - lo) / span;
      const std::string color =
          diverging ? diverging_color(t) : sequential_color(t);
      svg << "<rect x=\"" << ml + ix * cw << "\" y=\""
          << mt + ah - (iy + 1) * ch << "\" width=\"" << cw + 0.5
          << "\" height=\"" << ch + 0.5 << "\" fill=\"" << color << "\"/>\n";
    }
  svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << aw
      << "\" height=\"" << ah << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (double t : {0.0, 0.5, 1.0}) {
    svg << "<text x=\"" << ml + t * aw << "\" y=\"" << mt + ah + 16
        << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n"
        << "<text x=\"" << ml - 8 << "\" y=\"" << mt + ah - t * ah + 4
        << "\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
  }
  svg << "<text x=\"" << ml + aw / 2 << "\" y=\"" << mt + ah + 34
      << "\" text-anchor=\"middle\">x</text>\n"
      << "<text x=\"" << ml - 34 << "\" y=\"" << mt + ah / 2
      << "\" text-anchor=\"middle\">y</text>\n";

  // color bar with the shared scale spelled out
  const double bx = ml + aw + 24, bw = 18;
  const int strips = 64;
  for (int i = 0; i < strips; ++i) {
    const double t = (i + 0.5) / strips;
    const std::string color =
        diverging ? diverging_color(t) : sequential_color(t);
    svg << "<rect x=\"" << bx << "\" y=\"" << mt + ah - (i + 1) * (ah / strips)
        << "\" width=\"" << bw << "\" height=\"" << ah / strips + 0.5
        << "\" fill=\"" << color << "\"/>\n";
  }
  svg << "<rect x=\"" << bx << "\" y=\"" << mt << "\" width=\"" << bw
      << "\" height=\"" << ah << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (double t : {0.0, 0.5, 1.0})
    svg << "<text x=\"" << bx + bw + 6 << "\" y=\"" << mt + ah - t * ah + 4
        << "\">" << fmt(lo + t * (hi - lo)) << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

struct Frame {
  double time = 0.0;
  std::vector<double> sheep;  // flat x y pairs
  std::vector<double> dogs;
};

std::string snapshot_grid(const std::string& title,
                          const std::vector<Frame>& frames, double dest_x,
                          double dest_y, double rms_radius) {
  const int cols = 4, rows = 2;
  const double panel = 200, gap = 14, ml = 16, mt = 40;
  const double W = ml * 2 + cols * panel + (cols - 1) * gap;
  const double H = mt + rows * (panel + 26) + 10;

  double x0 = dest_x - rms_radius, x1 = dest_x + rms_radius;
  double y0 = dest_y - rms_radius, y1 = dest_y + rms_radius;
  for (const Frame& f : frames) {
    for (std::size_t i = 0; i + 1 < f.sheep.size(); i += 2) {
      x0 = std::min(x0, f.sheep[i]);
      x1 = std::max(x1, f.sheep[i]);
      y0 = std::min(y0, f.sheep[i + 1]);
      y1 = std::max(y1, f.sheep[i + 1]);
    }
    for (std::size_t i = 0; i + 1 < f.dogs.size(); i += 2) {
      x0 = std::min(x0, f.dogs[i]);
      x1 = std::max(x1, f.dogs[i]);
      y0 = std::min(y0, f.dogs[i + 1]);
      y1 = std::max(y1, f.dogs[i + 1]);
    }
  }
  // equal aspect: square data window centered on the bounds
  const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
  const double half = 0.55 * std::max({x1 - x0, y1 - y0, 1e-3});
  x0 = cx - half;
  x1 = cx + half;
  y0 = cy - half;
  y1 = cy + half;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' ' << H
      << "\" font-family=\"monospace\" font-size=\"11\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << W / 2
      << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << xml_escape(title) << "</text>\n";

  for (std::size_t fi = 0; fi < frames.size(); ++fi) {
    const double px = ml + static_cast<double>(fi % cols) * (panel + gap);
    const double py =
        mt + static_cast<double>(fi / cols) * (panel + 26);
    const auto X = [&](double x) {
      return px + (x - x0) / (x1 - x0) * panel;
    };
    const auto Y = [&](double y) {
      return py + panel - (y - y0) / (y1 - y0) * panel;
    };
    const Frame& f = frames[fi];
    svg << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << panel
        << "\" height=\"" << panel << "\" fill=\"none\" stroke=\"#999\"/>\n"
        << "<text x=\"" << px + panel / 2 << "\" y=\"" << py + panel + 16
        << "\" text-anchor=\"middle\">t = " << fmt(f.time) << "</text>\n";
    const double rr = rms_radius / (x1 - x0) * panel;
    svg << "<circle cx=\"" << X(dest_x) << "\" cy=\"" << Y(dest_y)
        << "\" r=\"" << rr
        << "\" fill=\"none\" stroke=\"#2ca02c\" stroke-dasharray=\"4 3\"/>\n";
    // destination star
    std::ostringstream star;
    for (int k = 0; k < 10; ++k) {
      const double ang = -std::numbers::pi / 2 + k * std::numbers::pi / 5;
      const double rad = k % 2 ? 2.6 : 6.5;
      star << X(dest_x) + rad * std::cos(ang) << ','
           << Y(dest_y) + rad * std::sin(ang) << ' ';
    }
    svg << "<polygon points=\"" << star.str() << "\" fill=\"#2ca02c\"/>\n";
    for (std::size_t i = 0; i + 1 < f.sheep.size(); i += 2)
      svg << "<circle cx=\"" << X(f.sheep[i]) << "\" cy=\""
          << Y(f.sheep[i + 1])
          << "\" r=\"2.4\" fill=\"#1f77b4\" fill-opacity=\"0.85\"/>\n";
    for (std::size_t i = 0; i + 1 < f.dogs.size(); i += 2) {
      const double dx = X(f.dogs[i]), dy = Y(f.dogs[i + 1]);
      svg << "<polygon points=\"" << dx << ',' << dy - 5.5 << ' ' << dx - 4.8
          << ',' << dy + 4 << ' ' << dx + 4.8 << ',' << dy + 4
          << "\" fill=\"#d62728\"/>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<double> column_values(const CsvTable& table,
                                  const std::string& name) {
  const std::size_t col = table.column(name);
  std::vector<double> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r)
    out.push_back(table.number(r, col));
  return out;
}

bool has_column(const CsvTable& table, const std::string& name) {
  return std::find(table.header.begin(), table.header.end(), name) !=
         table.header.end();
}

enum class Family { OneD, TwoD, Herd };

Family detect_family(const fs::path& rep) {
  if (fs::exists(rep / "trajectory.csv")) return Family::Herd;
  const CsvTable sol = read_csv(rep / "solution.csv");
  return has_column(sol, "y") ? Family::TwoD : Family::OneD;
}

std::vector<fs::path> repeat_dirs(const fs::path& run_dir) {
  if (fs::exists(run_dir / "history.csv")) return {run_dir};
  std::vector<fs::path> reps;
  if (fs::is_directory(run_dir))
    for (const auto& entry : fs::directory_iterator(run_dir))
      if (entry.is_directory() &&
          entry.path().filename().string().rfind("rep", 0) == 0)
        reps.push_back(entry.path());
  if (reps.empty())
    throw IoError("no repeat directories under " + run_dir.string());
  std::sort(reps.begin(), reps.end());
  return reps;
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(path.string() + " is not valid JSON: " + e.what());
  }
}

/// Grid dimensions from a solution table written in node order (x slowest).
std::pair<int, int> grid_shape(const CsvTable& sol) {
  const std::size_t xcol = sol.column("x");
  const double first_x = sol.number(0, xcol);
  int ny = 0;
  while (static_cast<std::size_t>(ny) < sol.rows.size() &&
         sol.number(ny, xcol) == first_x)
    ++ny;
  if (ny < 2 || sol.rows.size() % ny != 0)
    throw IoError("solution grid is not rectangular");
  return {static_cast<int>(sol.rows.size()) / ny, ny};
}

void plot_history(const fs::path& rep) {
  const CsvTable hist = read_csv(rep / "history.csv");
  const std::vector<double> iter = column_values(hist, "iteration");
  write_text_file(
      rep / "cost.svg",
      line_plot("consensus optimization", "iteration", "cost",
                {{"best agent", iter, column_values(hist, "best_cost")},
                 {"consensus", iter, column_values(hist, "consensus_cost")},
                 {"spread", iter, column_values(hist, "spread")}},
                true));
  const std::vector<double> err_l2 = column_values(hist, "err_l2");
  const bool has_errors = std::any_of(err_l2.begin(), err_l2.end(),
                                      [](double v) { return std::isfinite(v); });
  if (has_errors)
    write_text_file(
        rep / "error_norms.svg",
        line_plot("error against exact solution", "iteration", "error",
                  {{"L2", iter, err_l2},
                   {"max", iter, column_values(hist, "err_linf")}},
                  true));
}

void plot_one_d(const fs::path& rep) {
  const CsvTable sol = read_csv(rep / "solution.csv");
  const std::vector<double> x = column_values(sol, "x");
  write_text_file(rep / "solution.svg",
                  line_plot("final consensus", "x", "u(x)",
                            {{"consensus", x, column_values(sol, "value")},
                             {"exact", x, column_values(sol, "exact")}},
                            false));
}

void plot_two_d(const fs::path& rep, double heat_max) {
  const CsvTable sol = read_csv(rep / "solution.csv");
  const auto [nx, ny] = grid_shape(sol);
  const std::vector<double> value = column_values(sol, "value");
  const std::vector<double> exact = column_values(sol, "exact");
  std::vector<double> signed_diff(value.size()), abs_diff(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    signed_diff[i] = value[i] - exact[i];
    abs_diff[i] = std::abs(signed_diff[i]);
  }
  write_text_file(rep / "abs_diff.svg",
                  heatmap("|consensus - exact|", nx, ny, abs_diff, 0.0,
                          heat_max, false));
  write_text_file(rep / "signed_diff.svg",
                  heatmap("consensus - exact", nx, ny, signed_diff, -heat_max,
                          heat_max, true));
}

void plot_herd(const fs::path& rep, const json& echo) {
  const CsvTable control = read_csv(rep / "solution.csv");
  const std::vector<double> t = column_values(control, "t");
  std::vector<Series> channels;
  for (std::size_t c = 0; c < control.header.size(); ++c)
    if (control.header[c] != "t")
      channels.push_back(
          {control.header[c], t, column_values(control, control.header[c])});
  write_text_file(rep / "control.svg",
                  line_plot("consensus control", "t", "u", channels, false));

  const CsvTable traj = read_csv(rep / "trajectory.csv");
  int dogs = 0, sheep = 0;
  for (const std::string& name : traj.header) {
    if (name.rfind("dog", 0) == 0 && name.substr(name.size() - 2) == "_x")
      ++dogs;
    if (name.rfind("sheep", 0) == 0 && name.substr(name.size() - 2) == "_x")
      ++sheep;
  }
  const std::size_t tcol = traj.column("t");
  std::vector<Frame> frames;
  const std::size_t last = traj.rows.size() - 1;
  for (int k = 0; k < 8; ++k) {
    const std::size_t row = static_cast<std::size_t>(
        std::llround(static_cast<double>(last) * k / 7.0));
    Frame frame;
    frame.time = traj.number(row, tcol);
    for (int i = 0; i < sheep; ++i) {
      frame.sheep.push_back(
          traj.number(row, traj.column("sheep" + std::to_string(i) + "_x")));
      frame.sheep.push_back(
          traj.number(row, traj.column("sheep" + std::to_string(i) + "_y")));
    }
    for (int k2 = 0; k2 < dogs; ++k2) {
      frame.dogs.push_back(
          traj.number(row, traj.column("dog" + std::to_string(k2) + "_x")));
      frame.dogs.push_back(
          traj.number(row, traj.column("dog" + std::to_string(k2) + "_y")));
    }
    frames.push_back(std::move(frame));
  }
  const auto& herd = echo.at("shepherd");
  const double dest_x = herd.at("destination")[0].get<double>();
  const double dest_y = herd.at("destination")[1].get<double>();
  const double rms = std::sqrt(herd.at("target_variance").get<double>());
  write_text_file(rep / "snapshots.svg",
                  snapshot_grid("flock under consensus control", frames,
                                dest_x, dest_y, rms));
}

json load_echo(const fs::path& rep) {
  for (const fs::path dir : {rep, rep.parent_path()}) {
    const fs::path candidate = dir / "config_echo.json";
    if (fs::exists(candidate)) return read_json_file(candidate);
  }
  throw IoError("cannot read " + (rep / "config_echo.json").string());
}

}  // namespace

void emit_plots(const std::vector<fs::path>& run_dirs) {
  // first pass fixes one color range for every 2D difference map
  double heat_max = 0.0;
  for (const fs::path& run_dir : run_dirs)
    for (const fs::path& rep : repeat_dirs(run_dir)) {
      if (detect_family(rep) != Family::TwoD) continue;
      const CsvTable sol = read_csv(rep / "solution.csv");
      const std::vector<double> value = column_values(sol, "value");
      const std::vector<double> exact = column_values(sol, "exact");
      for (std::size_t i = 0; i < value.size(); ++i)
        if (std::isfinite(value[i]) && std::isfinite(exact[i]))
          heat_max = std::max(heat_max, std::abs(value[i] - exact[i]));
    }
  if (heat_max == 0.0) heat_max = 1e-16;

  for (const fs::path& run_dir : run_dirs)
    for (const fs::path& rep : repeat_dirs(run_dir)) {
      plot_history(rep);
      switch (detect_family(rep)) {
        case Family::OneD:
          plot_one_d(rep);
          break;
        case Family::TwoD:
          plot_two_d(rep, heat_max);
          break;
        case Family::Herd:
          plot_herd(rep, load_echo(rep));
          break;
      }
    }
}

}  // namespace gpcbo
