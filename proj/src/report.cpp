#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <vector>

#include "corelit/csv.hpp"
#include "corelit/errors.hpp"
#include "corelit/pipeline.hpp"

namespace corelit {

namespace fs = std::filesystem;

namespace {

struct SvgCanvas {
  // Fixed-size plot area with margins for axis labels.
  static constexpr double kWidth = 640, kHeight = 480;
  static constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

  std::ofstream out;

  explicit SvgCanvas(const fs::path& path) : out(path, std::ios::binary) {
    if (!out) throw io_error("cannot open " + path.string() + " for writing");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }

  double x_of(double t) const { return kLeft + t * (kWidth - kLeft - kRight); }
  double y_of(double t) const { return kHeight - kBottom - t * (kHeight - kTop - kBottom); }

  void title(const std::string& text) {
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << text << "</text>\n";
  }

  void axes(const std::string& x_label, const std::string& y_label, double x_min, double x_max,
            double y_min, double y_max) {
    out << "<line x1=\"" << x_of(0) << "\" y1=\"" << y_of(0) << "\" x2=\"" << x_of(1)
        << "\" y2=\"" << y_of(0) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << x_of(0) << "\" y1=\"" << y_of(0) << "\" x2=\"" << x_of(0)
        << "\" y2=\"" << y_of(1) << "\" stroke=\"black\"/>\n";
    auto tick_text = [&](double px, double py, const std::string& anchor, const std::string& t) {
      out << "<text x=\"" << px << "\" y=\"" << py << "\" text-anchor=\"" << anchor
          << "\" font-family=\"sans-serif\" font-size=\"11\">" << t << "</text>\n";
    };
    for (double f : {0.0, 0.5, 1.0}) {
      tick_text(x_of(f), y_of(0) + 16, "middle", format_double(x_min + f * (x_max - x_min)));
      tick_text(x_of(0) - 6, y_of(f) + 4, "end", format_double(y_min + f * (y_max - y_min)));
    }
    tick_text(kWidth / 2, kHeight - 12, "middle", x_label);
    out << "<text x=\"16\" y=\"" << kHeight / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" "
        << "transform=\"rotate(-90 16 " << kHeight / 2 << ")\">" << y_label << "</text>\n";
  }

  void close(const fs::path& path) {
    out << "</svg>\n";
    out.close();
    if (out.fail()) throw io_error("write to " + path.string() + " failed");
  }
};

struct Range {
  double lo = 0.0, hi = 1.0;
};

Range padded_range(double lo, double hi) {
  if (!(hi > lo)) {
    // Degenerate: widen around the single value.
    lo -= 0.5;
    hi += 0.5;
  }
  return {lo, hi};
}

std::vector<std::vector<std::string>> read_csv_file(const fs::path& path) {
  CsvReader reader(path.string());
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> fields;
  while (reader.next(fields)) rows.push_back(fields);
  return rows;
}

void require_artifact(const fs::path& run_dir, const std::string& name,
                      const std::vector<std::string>& expected) {
  if (fs::exists(run_dir / name)) return;
  std::string msg = "run directory " + run_dir.string() + " is missing " + name +
                    "; expected artifacts:";
  for (const auto& e : expected) msg += " " + e;
  throw io_error(msg);
}

const std::vector<std::string> kExpectedArtifacts = {
    "manifest.json", "summary.json",     "indicators.csv",
    "correlations.csv", "distributions.csv",
};

struct Histogram {
  std::vector<double> lo, hi;
  std::vector<std::size_t> count;
};

Histogram bin_values(const std::vector<double>& values, std::size_t bins) {
  Histogram h;
  if (values.empty()) return h;
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  if (lo == hi) {
    h.lo = {lo};
    h.hi = {hi};
    h.count = {values.size()};
    return h;
  }
  h.lo.resize(bins);
  h.hi.resize(bins);
  h.count.assign(bins, 0);
  double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    h.lo[b] = lo + width * static_cast<double>(b);
    h.hi[b] = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
  }
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    if (b >= bins) b = bins - 1;  // max value lands in the last (closed) bin
    ++h.count[b];
  }
  return h;
}

void render_histogram(const fs::path& svg_path, const fs::path& bins_path,
                      const std::string& indicator, const std::vector<double>& values,
                      std::size_t bins) {
  Histogram h = bin_values(values, bins);

  CsvWriter csv(bins_path.string());
  csv.row({"bin_lo", "bin_hi", "count"});
  for (std::size_t b = 0; b < h.count.size(); ++b) {
    csv.row({format_double(h.lo[b]), format_double(h.hi[b]), std::to_string(h.count[b])});
  }
  csv.close();

  SvgCanvas canvas(svg_path);
  canvas.title(indicator + " distribution (n=" + std::to_string(values.size()) + ")");
  if (!h.count.empty()) {
    double x_min = h.lo.front(), x_max = h.hi.back();
    std::size_t max_count = *std::max_element(h.count.begin(), h.count.end());
    Range xr = padded_range(x_min, x_max);
    canvas.axes(indicator, "count", xr.lo, xr.hi, 0.0, static_cast<double>(max_count));
    for (std::size_t b = 0; b < h.count.size(); ++b) {
      double x0 = (h.lo[b] - xr.lo) / (xr.hi - xr.lo);
      double x1 = (h.hi[b] - xr.lo) / (xr.hi - xr.lo);
      double frac = max_count == 0 ? 0.0 : static_cast<double>(h.count[b]) / max_count;
      double top = canvas.y_of(frac);
      canvas.out << "<rect x=\"" << canvas.x_of(x0) << "\" y=\"" << top << "\" width=\""
                 << std::max(1.0, canvas.x_of(x1) - canvas.x_of(x0)) << "\" height=\""
                 << canvas.y_of(0) - top << "\" fill=\"steelblue\" stroke=\"black\" "
                 << "stroke-width=\"0.5\"/>\n";
    }
  }
  canvas.close(svg_path);
}

}  // namespace

std::vector<std::string> run_report(const ReportOptions& options) {
  fs::path run_dir(options.run_dir);
  if (!fs::exists(run_dir)) throw io_error("run directory " + run_dir.string() + " does not exist");
  for (const auto& name : kExpectedArtifacts) require_artifact(run_dir, name, kExpectedArtifacts);
  if (options.bins < 1) throw config_error("bins must be >= 1");

  std::vector<std::string> written;
  auto track = [&](const fs::path& p) { written.push_back(fs::relative(p, run_dir).string()); };

  // Scatter: topicality (x) vs between (y), one point per core source with
  // both ensemble means defined.
  {
    auto rows = read_csv_file(run_dir / "indicators.csv");
    std::vector<std::pair<double, double>> points;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& row = rows[r];
      if (row.size() < 8) continue;
      const std::string& topicality = row[4];
      const std::string& between = row[3];
      if (topicality.empty() || between.empty()) continue;
      points.emplace_back(std::stod(topicality), std::stod(between));
    }
    fs::path svg_path = run_dir / "scatter_topicality_between.svg";
    SvgCanvas canvas(svg_path);
    canvas.title("topicality vs between (n=" + std::to_string(points.size()) + ")");
    double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
    if (!points.empty()) {
      x_lo = x_hi = points[0].first;
      y_lo = y_hi = points[0].second;
      for (const auto& [x, y] : points) {
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
      }
    }
    Range xr = padded_range(x_lo, x_hi), yr = padded_range(y_lo, y_hi);
    canvas.axes("topicality", "between", xr.lo, xr.hi, yr.lo, yr.hi);
    for (const auto& [x, y] : points) {
      canvas.out << "<circle cx=\"" << canvas.x_of((x - xr.lo) / (xr.hi - xr.lo)) << "\" cy=\""
                 << canvas.y_of((y - yr.lo) / (yr.hi - yr.lo))
                 << "\" r=\"3\" fill=\"steelblue\" fill-opacity=\"0.7\"/>\n";
    }
    canvas.close(svg_path);
    track(svg_path);
  }

  // Histograms from the long-format distribution export.
  {
    auto rows = read_csv_file(run_dir / "distributions.csv");
    std::map<std::string, std::vector<double>> by_indicator;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (rows[r].size() < 3) continue;
      by_indicator[rows[r][1]].push_back(std::stod(rows[r][2]));
    }
    for (const char* name : {"within", "between", "topicality", "bridging"}) {
      fs::path svg_path = run_dir / ("hist_" + std::string(name) + ".svg");
      fs::path bins_path = run_dir / ("hist_" + std::string(name) + "_bins.csv");
      auto it = by_indicator.find(name);
      render_histogram(svg_path, bins_path, name,
                       it == by_indicator.end() ? std::vector<double>{} : it->second,
                       options.bins);
      track(svg_path);
      track(bins_path);
    }
  }

  // Community sizes across partitions, optionally filtered by minimum size.
  if (fs::exists(run_dir / "partitions")) {
    std::vector<fs::path> partition_files;
    for (const auto& entry : fs::directory_iterator(run_dir / "partitions")) {
      if (entry.path().extension() == ".csv") partition_files.push_back(entry.path());
    }
    std::sort(partition_files.begin(), partition_files.end());
    fs::path sizes_path = run_dir / "community_sizes.csv";
    CsvWriter out(sizes_path.string());
    out.row({"partition_index", "community_label", "size"});
    for (const auto& file : partition_files) {
      auto rows = read_csv_file(file);
      std::map<std::pair<std::string, std::string>, std::size_t> sizes;
      for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() < 3) continue;
        ++sizes[{rows[r][1], rows[r][2]}];
      }
      std::vector<std::pair<std::pair<std::string, std::string>, std::size_t>> ordered(
          sizes.begin(), sizes.end());
      std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        if (a.first.first != b.first.first) return std::stoul(a.first.first) < std::stoul(b.first.first);
        return std::stoul(a.first.second) < std::stoul(b.first.second);
      });
      for (const auto& [key, size] : ordered) {
        if (options.min_community_size && size <= *options.min_community_size) continue;
        out.row({key.first, key.second, std::to_string(size)});
      }
    }
    out.close();
    track(sizes_path);
  }

  // Plot-data trim of the exported coupling network (when it was exported).
  if (options.trim_weight && fs::exists(run_dir / "coupling.csv")) {
    auto rows = read_csv_file(run_dir / "coupling.csv");
    fs::path trimmed_path = run_dir / "coupling_trimmed.csv";
    CsvWriter out(trimmed_path.string());
    out.row({"source_i", "source_j", "weight"});
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (rows[r].size() < 3) continue;
      if (std::stod(rows[r][2]) >= *options.trim_weight) {
        out.row({rows[r][0], rows[r][1], rows[r][2]});
      }
    }
    out.close();
    track(trimmed_path);
  }

  return written;
}

}  // namespace corelit
