#include "noncross/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "noncross/errors.hpp"

namespace ncx {

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("missing artifact: " + p.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(field);
  return out;
}

// fixed-precision decimal for svg coordinates; identical inputs give
// identical bytes
std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Bounds {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;

  void grow(double x, double y) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  void pad() {
    const double dx = std::max(1e-6, (xmax - xmin) * 0.05);
    const double dy = std::max(1e-6, (ymax - ymin) * 0.05);
    xmin -= dx;
    xmax += dx;
    ymin -= dy;
    ymax += dy;
  }
};

constexpr double kW = 440.0, kH = 440.0, kM = 30.0;

double sx(const Bounds& b, double x) { return kM + (x - b.xmin) / (b.xmax - b.xmin) * (kW - 2 * kM); }
double sy(const Bounds& b, double y) { return kH - kM - (y - b.ymin) / (b.ymax - b.ymin) * (kH - 2 * kM); }

const char* method_color(const std::string& method, size_t rank) {
  if (method == "baseline") return "#888888";
  static const char* palette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"};
  return palette[rank % 5];
}

std::string svg_open(const std::string& title) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n"
    << "<text x=\"" << kM << "\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">" << title
    << "</text>\n";
  return s.str();
}

void frame(std::ostringstream& s, const Bounds& b) {
  s << "<rect x=\"" << px(kM) << "\" y=\"" << px(kM) << "\" width=\"" << px(kW - 2 * kM) << "\" height=\""
    << px(kH - 2 * kM) << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
  char label[64];
  std::snprintf(label, sizeof label, "[%.2f, %.2f] x [%.2f, %.2f]", b.xmin, b.xmax, b.ymin, b.ymax);
  s << "<text x=\"" << px(kM) << "\" y=\"" << px(kH - 8) << "\" font-family=\"sans-serif\" font-size=\"10\" "
    << "fill=\"#666666\">" << label << "</text>\n";
}

struct SampleRow {
  std::string method;
  int n_steps;
  std::vector<double> coords;
};

struct MetricRow {
  int n_steps;
  std::string method;
  double ifc, ood_rate, fidelity;
};

}  // namespace

void export_plots(const std::string& out_dir) {
  const fs::path out(out_dir);

  // gather and validate every input before writing anything
  const std::string metrics_text = slurp(out / "metrics.csv");
  const std::string samples_text = slurp(out / "samples.csv");

  std::vector<MetricRow> metric_rows;
  {
    std::istringstream in(metrics_text);
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"N_steps", "method", "ifc",
                                                                                    "ood_rate", "fidelity"})
      throw IoError("metrics.csv has an unexpected header");
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto f = split_csv_line(line);
      if (f.size() != 5) throw IoError("metrics.csv has a malformed row");
      metric_rows.push_back({std::stoi(f[0]), f[1], std::stod(f[2]), std::stod(f[3]), std::stod(f[4])});
    }
  }
  if (metric_rows.empty()) throw ContractError("export_plots: no metric rows");

  std::vector<SampleRow> sample_rows;
  {
    std::istringstream in(samples_text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("samples.csv is empty");
    const auto header = split_csv_line(line);
    if (header.size() < 5 || header[0] != "method" || header[1] != "N_steps" || header[2] != "sample")
      throw IoError("samples.csv has an unexpected header");
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto f = split_csv_line(line);
      if (f.size() != header.size()) throw IoError("samples.csv has a malformed row");
      SampleRow r{f[0], std::stoi(f[1]), {}};
      for (size_t i = 3; i < f.size(); ++i) r.coords.push_back(std::stod(f[i]));
      sample_rows.push_back(std::move(r));
    }
  }
  if (sample_rows.empty()) throw ContractError("export_plots: empty sample set");

  // exemplar trajectories, one file per metric row's (method, N)
  std::map<std::pair<std::string, int>, nlohmann::json> trajectories;
  for (const MetricRow& m : metric_rows) {
    std::string token = m.method;
    for (char& c : token)
      if (c == ':') c = '_';
    const fs::path p = out / "trajectories" / (token + "_N" + std::to_string(m.n_steps) + ".json");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(slurp(p));
    } catch (const nlohmann::json::exception& e) {
      throw IoError("unreadable trajectory file " + p.string() + ": " + e.what());
    }
    trajectories[{m.method, m.n_steps}] = std::move(j);
  }

  // method order as first seen in metrics.csv; step counts ascending
  std::vector<std::string> methods;
  std::vector<int> counts;
  for (const MetricRow& m : metric_rows) {
    if (std::find(methods.begin(), methods.end(), m.method) == methods.end()) methods.push_back(m.method);
    if (std::find(counts.begin(), counts.end(), m.n_steps) == counts.end()) counts.push_back(m.n_steps);
  }
  std::sort(counts.begin(), counts.end());

  const fs::path plot_dir = out / "plots";
  std::error_code ec;
  fs::create_directories(plot_dir, ec);
  if (ec) throw IoError("cannot create " + plot_dir.string());

  // one scatter per (method, N)
  for (const std::string& method : methods) {
    const size_t rank = std::find(methods.begin(), methods.end(), method) - methods.begin();
    for (int n : counts) {
      Bounds b;
      bool first = true;
      for (const SampleRow& r : sample_rows) {
        if (r.method != method || r.n_steps != n || r.coords.size() < 2) continue;
        if (first) {
          b = Bounds{r.coords[0], r.coords[0], r.coords[1], r.coords[1]};
          first = false;
        } else {
          b.grow(r.coords[0], r.coords[1]);
        }
      }
      if (first) continue;  // no samples for this cell
      b.pad();
      std::string token = method;
      for (char& c : token)
        if (c == ':') c = '_';
      std::ostringstream s;
      s << svg_open("finals " + method + " N=" + std::to_string(n));
      frame(s, b);
      for (const SampleRow& r : sample_rows) {
        if (r.method != method || r.n_steps != n) continue;
        s << "<circle cx=\"" << px(sx(b, r.coords[0])) << "\" cy=\"" << px(sy(b, r.coords[1]))
          << "\" r=\"1.5\" fill=\"" << method_color(method, rank) << "\" fill-opacity=\"0.5\"/>\n";
      }
      s << "</svg>\n";
      std::ofstream f(plot_dir / ("scatter_" + token + "_N" + std::to_string(n) + ".svg"), std::ios::binary);
      if (!f) throw IoError("cannot write scatter svg");
      f << s.str();
    }
  }

  // trajectory polylines per N, methods overlaid
  for (int n : counts) {
    Bounds b;
    bool first = true;
    for (const std::string& method : methods) {
      auto it = trajectories.find({method, n});
      if (it == trajectories.end()) continue;
      for (const auto& chain : it->second) {
        for (const auto& st : chain.at("states")) {
          if (st.size() < 2) continue;
          const double x = st[0].get<double>(), y = st[1].get<double>();
          if (first) {
            b = Bounds{x, x, y, y};
            first = false;
          } else {
            b.grow(x, y);
          }
        }
      }
    }
    if (first) continue;
    b.pad();
    std::ostringstream s;
    s << svg_open("trajectories N=" + std::to_string(n));
    frame(s, b);
    for (const std::string& method : methods) {
      const size_t rank = std::find(methods.begin(), methods.end(), method) - methods.begin();
      auto it = trajectories.find({method, n});
      if (it == trajectories.end()) continue;
      for (const auto& chain : it->second) {
        s << "<polyline fill=\"none\" stroke=\"" << method_color(method, rank)
          << "\" stroke-width=\"1\" stroke-opacity=\"0.7\" points=\"";
        bool head = true;
        for (const auto& st : chain.at("states")) {
          if (!head) s << " ";
          head = false;
          s << px(sx(b, st[0].get<double>())) << "," << px(sy(b, st[1].get<double>()));
        }
        const auto& fin = chain.at("final");
        s << " " << px(sx(b, fin[0].get<double>())) << "," << px(sy(b, fin[1].get<double>()));
        s << "\"/>\n";
      }
    }
    s << "</svg>\n";
    std::ofstream f(plot_dir / ("trajectories_N" + std::to_string(n) + ".svg"), std::ios::binary);
    if (!f) throw IoError("cannot write trajectory svg");
    f << s.str();
  }

  // ifc against step count, one line per method
  {
    Bounds b{0.0, static_cast<double>(counts.size()) - 1.0, 0.0, 1.0};
    bool first = true;
    for (const MetricRow& m : metric_rows) {
      if (first) {
        b.ymin = b.ymax = m.ifc;
        first = false;
      } else {
        b.ymin = std::min(b.ymin, m.ifc);
        b.ymax = std::max(b.ymax, m.ifc);
      }
    }
    if (b.xmax <= b.xmin) b.xmax = b.xmin + 1;
    b.pad();
    std::ostringstream s;
    s << svg_open("ifc by step count");
    frame(s, b);
    for (const std::string& method : methods) {
      const size_t rank = std::find(methods.begin(), methods.end(), method) - methods.begin();
      std::ostringstream pts;
      bool head = true;
      for (size_t ci = 0; ci < counts.size(); ++ci) {
        for (const MetricRow& m : metric_rows) {
          if (m.method != method || m.n_steps != counts[ci]) continue;
          if (!head) pts << " ";
          head = false;
          pts << px(sx(b, static_cast<double>(ci))) << "," << px(sy(b, m.ifc));
        }
      }
      s << "<polyline fill=\"none\" stroke=\"" << method_color(method, rank) << "\" stroke-width=\"1.5\" points=\""
        << pts.str() << "\"/>\n";
    }
    for (size_t ci = 0; ci < counts.size(); ++ci) {
      s << "<text x=\"" << px(sx(b, static_cast<double>(ci))) << "\" y=\"" << px(kH - kM + 14)
        << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" << counts[ci] << "</text>\n";
    }
    s << "</svg>\n";
    std::ofstream f(plot_dir / "ifc_vs_n.svg", std::ios::binary);
    if (!f) throw IoError("cannot write ifc svg");
    f << s.str();
  }
}

}  // namespace ncx
