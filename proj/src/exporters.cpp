#include "stlplan/exporters.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace stlplan {

namespace {

std::string format_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  if (std::strtod(buf, nullptr) != v) std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  return out;
}

constexpr const char* kCsvHeader = "t,agent,px,py,pz,vx,vy,vz,ax,ay,az";

double parse_field(const std::string& field, const std::string& path, std::size_t line) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw Error("'" + path + "' line " + std::to_string(line) + ": '" + field +
                "' is not a number");
  }
  return v;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

void write_csv(const Trace& trace, const std::string& path) {
  trace.validate();
  for (const auto& name : trace.agent_names) {
    if (name.find_first_of(",\r\n") != std::string::npos) {
      throw Error("agent name '" + name + "' cannot be written to csv");
    }
  }
  std::ofstream out = open_out(path);
  out << kCsvHeader << "\n";
  for (std::size_t a = 0; a < trace.agents.size(); ++a) {
    for (std::size_t i = 0; i < trace.agents[a].size(); ++i) {
      const KnotState& s = trace.agents[a][i];
      out << format_full(static_cast<double>(i) * trace.sampling_period) << ','
          << trace.agent_names[a];
      for (int c = 0; c < 3; ++c) out << ',' << format_full(s.p[c]);
      for (int c = 0; c < 3; ++c) out << ',' << format_full(s.v[c]);
      for (int c = 0; c < 3; ++c) out << ',' << format_full(s.a[c]);
      out << '\n';
    }
  }
  if (!out) throw Error("cannot write '" + path + "'");
}

Trace read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error("'" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) {
    throw Error("'" + path + "' does not start with the expected header");
  }

  Trace tr;
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<double>> times;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_row(line);
    if (fields.size() != 11) {
      throw Error("'" + path + "' line " + std::to_string(line_no) + ": expected 11 fields, got " +
                  std::to_string(fields.size()));
    }
    const std::string& agent = fields[1];
    auto [it, inserted] = index.emplace(agent, tr.agents.size());
    if (inserted) {
      tr.agent_names.push_back(agent);
      tr.agents.emplace_back();
      times.emplace_back();
    }
    KnotState s;
    for (int c = 0; c < 3; ++c) s.p[c] = parse_field(fields[2 + c], path, line_no);
    for (int c = 0; c < 3; ++c) s.v[c] = parse_field(fields[5 + c], path, line_no);
    for (int c = 0; c < 3; ++c) s.a[c] = parse_field(fields[8 + c], path, line_no);
    tr.agents[it->second].push_back(s);
    times[it->second].push_back(parse_field(fields[0], path, line_no));
  }
  if (tr.agents.empty()) throw Error("'" + path + "' has no data rows");

  if (times[0].size() >= 2) tr.sampling_period = times[0][1] - times[0][0];
  for (std::size_t a = 0; a < times.size(); ++a) {
    for (std::size_t i = 0; i < times[a].size(); ++i) {
      if (std::abs(times[a][i] - static_cast<double>(i) * tr.sampling_period) > 1e-6) {
        throw Error("'" + path + "' sample times are not on a uniform grid");
      }
    }
  }
  tr.validate();
  return tr;
}

void write_svg(const Trace& trace, const Environment& environment, const std::string& path) {
  trace.validate();
  environment.validate();
  const Box& ws = environment.workspace;
  const double extent = std::max(ws.hi.x() - ws.lo.x(), ws.hi.y() - ws.lo.y());
  const double pad = 0.05 * extent;
  const double flip = ws.lo.y() + ws.hi.y();  // svg y grows downward
  const double min_x = ws.lo.x() - pad;
  const double min_y = ws.lo.y() - pad;
  const double width = ws.hi.x() - ws.lo.x() + 2.0 * pad;
  const double height = ws.hi.y() - ws.lo.y() + 2.0 * pad;
  const double stroke = extent / 200.0;

  std::ofstream out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\""
      << format_short(800.0 * height / width) << "\" viewBox=\"" << format_short(min_x) << ' '
      << format_short(min_y) << ' ' << format_short(width) << ' ' << format_short(height)
      << "\">\n";

  auto rect = [&](const Box& b, const char* fill, const char* fill_opacity, const char* outline) {
    out << "  <rect x=\"" << format_short(b.lo.x()) << "\" y=\"" << format_short(flip - b.hi.y())
        << "\" width=\"" << format_short(b.hi.x() - b.lo.x()) << "\" height=\""
        << format_short(b.hi.y() - b.lo.y()) << "\" fill=\"" << fill << "\" fill-opacity=\""
        << fill_opacity << "\" stroke=\"" << outline << "\" stroke-width=\""
        << format_short(stroke * 0.5) << "\"/>\n";
  };
  auto label = [&](const Box& b, const std::string& text) {
    out << "  <text x=\"" << format_short(0.5 * (b.lo.x() + b.hi.x())) << "\" y=\""
        << format_short(flip - 0.5 * (b.lo.y() + b.hi.y())) << "\" font-size=\""
        << format_short(extent / 40.0) << "\" text-anchor=\"middle\" fill=\"#444\">" << text
        << "</text>\n";
  };

  rect(ws, "none", "0", "#333");
  for (const auto& [name, box] : environment.goals) {
    rect(box, "#58a858", "0.35", "#2f6b2f");
    label(box, name);
  }
  for (const auto& [name, box] : environment.obstacles) {
    rect(box, "#c0504d", "0.45", "#7a2d2b");
    label(box, name);
  }
  for (std::size_t i = 0; i < environment.poles.size(); ++i) {
    rect(environment.poles[i], "#d8a13a", "0.4", "#8a6420");
    label(environment.poles[i], "pole" + std::to_string(i + 1));
  }

  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#9467bd", "#ff7f0e", "#17becf"};
  for (std::size_t a = 0; a < trace.agents.size(); ++a) {
    const char* color = kPalette[a % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out << "  <path fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
        << format_short(stroke) << "\" d=\"";
    for (std::size_t i = 0; i < trace.agents[a].size(); ++i) {
      const Eigen::Vector3d& p = trace.agents[a][i].p;
      out << (i == 0 ? 'M' : 'L') << format_short(p.x()) << ' ' << format_short(flip - p.y());
    }
    out << "\"><title>" << trace.agent_names[a] << "</title></path>\n";
    const Eigen::Vector3d& first = trace.agents[a].front().p;
    const Eigen::Vector3d& last = trace.agents[a].back().p;
    out << "  <circle cx=\"" << format_short(first.x()) << "\" cy=\""
        << format_short(flip - first.y()) << "\" r=\"" << format_short(stroke * 2.0)
        << "\" fill=\"" << color << "\"/>\n";
    out << "  <circle cx=\"" << format_short(last.x()) << "\" cy=\""
        << format_short(flip - last.y()) << "\" r=\"" << format_short(stroke * 2.0)
        << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
        << format_short(stroke) << "\"/>\n";
  }
  out << "</svg>\n";
  if (!out) throw Error("cannot write '" + path + "'");
}

void write_report(const PlanResult& result, const ValidationReport& validation,
                  const std::string& path) {
  nlohmann::ordered_json doc;
  doc["status"] = to_string(result.status);
  doc["exact_robustness"] = result.exact_robustness;
  doc["smooth_robustness"] = result.smooth_robustness;
  doc["wall_time_s"] = result.wall_time_s;
  doc["restarts_used"] = result.restarts_used;
  doc["accepted_steps"] = result.iterations;
  nlohmann::ordered_json v;
  v["exact_robustness"] = validation.exact_robustness;
  v["boolean_satisfied"] = validation.boolean_satisfied;
  v["feasible"] = validation.feasible;
  if (std::isfinite(validation.min_pairwise_distance)) {
    v["min_pairwise_distance"] = validation.min_pairwise_distance;
  } else {
    v["min_pairwise_distance"] = nullptr;
  }
  v["consistent"] = validation.consistent;
  doc["validation"] = std::move(v);
  std::ofstream out = open_out(path);
  out << doc.dump(2) << "\n";
  if (!out) throw Error("cannot write '" + path + "'");
}

void export_trajectories(const PlanResult& r, ExportFormat format, const std::string& path,
                         const Environment* environment) {
  switch (format) {
    case ExportFormat::Csv:
      write_csv(r.trace, path);
      return;
    case ExportFormat::Svg:
      if (!environment) throw Error("svg export needs the environment");
      write_svg(r.trace, *environment, path);
      return;
  }
  throw Error("unknown export format");
}

}  // namespace stlplan
