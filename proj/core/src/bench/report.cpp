#include "abmc/bench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace abmc::bench {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v, const char* spec = "%.3g") {
  char buf[48];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

void draw_panel(std::ostringstream& svg, const MetricsTable& table, bool top,
                double x0, double y0, double width, double height,
                const std::string& title, double (*pick)(const MetricsRow&)) {
  const size_t n = table.rows.size();
  double vmax = 1.0;
  for (const auto& row : table.rows) vmax = std::max(vmax, pick(row));
  vmax *= 1.15;

  const double plot_h = height - 40.0;
  const double plot_w = width - 60.0;
  const double px = x0 + 50.0;
  const double py = y0 + 25.0;
  auto yscale = [&](double v) { return py + plot_h - (v / vmax) * plot_h; };

  svg << "<text x='" << x0 + width / 2 << "' y='" << y0 + 14
      << "' text-anchor='middle' font-size='13' font-family='sans-serif'>" << title
      << "</text>\n";
  svg << "<line x1='" << px << "' y1='" << py << "' x2='" << px << "' y2='"
      << py + plot_h << "' stroke='black' stroke-width='1'/>\n";
  svg << "<line x1='" << px << "' y1='" << py + plot_h << "' x2='" << px + plot_w
      << "' y2='" << py + plot_h << "' stroke='black' stroke-width='1'/>\n";

  // axis ticks at 0, max/2, max
  for (const double v : {0.0, vmax / 2.0, vmax}) {
    svg << "<text x='" << px - 6 << "' y='" << yscale(v) + 4
        << "' text-anchor='end' font-size='9' font-family='sans-serif'>" << fmt(v)
        << "</text>\n";
  }

  const double slot = plot_w / static_cast<double>(n);
  const double bar_w = slot * 0.6;
  for (size_t i = 0; i < n; ++i) {
    const double v = pick(table.rows[i]);
    const double bx = px + slot * (static_cast<double>(i) + 0.2);
    const double by = yscale(v);
    svg << "<rect x='" << bx << "' y='" << by << "' width='" << bar_w << "' height='"
        << (py + plot_h - by) << "' fill='" << (i == 0 ? "#888888" : "#4477aa")
        << "'/>\n";
    svg << "<text x='" << bx + bar_w / 2 << "' y='" << by - 3
        << "' text-anchor='middle' font-size='9' font-family='sans-serif'>" << fmt(v)
        << "</text>\n";
    if (top) {
      svg << "<text x='" << bx + bar_w / 2 << "' y='" << py + plot_h + 12
          << "' text-anchor='middle' font-size='8' font-family='sans-serif'>"
          << table.rows[i].method << "</text>\n";
    } else {
      svg << "<text x='" << bx + bar_w / 2 << "' y='" << py + plot_h + 12
          << "' text-anchor='middle' font-size='8' font-family='sans-serif'>"
          << table.rows[i].method << "</text>\n";
    }
  }

  // dashed reference line at 1
  svg << "<line x1='" << px << "' y1='" << yscale(1.0) << "' x2='" << px + plot_w
      << "' y2='" << yscale(1.0)
      << "' stroke='black' stroke-width='1' stroke-dasharray='5,4'/>\n";
}

}  // namespace

void write_relative_figure(const MetricsTable& table, const std::string& path) {
  if (table.rows.empty()) throw std::invalid_argument("write_relative_figure: empty table");
  const double width = std::max<double>(420.0, 90.0 * static_cast<double>(table.rows.size()));
  const double panel_h = 220.0;
  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='"
      << 2 * panel_h << "' viewBox='0 0 " << width << " " << 2 * panel_h << "'>\n";
  svg << "<rect width='100%' height='100%' fill='white'/>\n";
  draw_panel(svg, table, true, 0.0, 0.0, width, panel_h, "Relative RMSE",
             [](const MetricsRow& r) { return r.rel_rmse; });
  draw_panel(svg, table, false, 0.0, panel_h, width, panel_h, "Relative ESS/cpu",
             [](const MetricsRow& r) { return r.rel_ess_per_cpu; });
  svg << "</svg>\n";

  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_relative_figure: cannot open " + path);
  out << svg.str();
}

MetricsTable merge_reports(const std::string& dir) {
  std::vector<std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().filename() == "metrics.csv" &&
        entry.path().parent_path().filename() != "report") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw std::runtime_error("merge_reports: no metrics.csv under " + dir);
  }

  MetricsTable merged;
  std::set<std::string> seen;
  for (const auto& f : files) {
    const MetricsTable t = MetricsTable::read_csv(f);
    for (const auto& row : t.rows) {
      if (seen.count(row.method)) continue;
      seen.insert(row.method);
      merged.rows.push_back(row);
    }
  }

  const std::string out_dir = dir + "/report";
  fs::create_directories(out_dir);
  merged.write_csv(out_dir + "/metrics.csv");
  write_relative_figure(merged, out_dir + "/relative.svg");
  return merged;
}

}  // namespace abmc::bench
