#include "fuseplan/svg_plot.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "fuseplan/error.hpp"

namespace fuseplan {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 56.0;

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

struct Axes {
  double lat_min, lat_max, cost_min, cost_max;

  double x(double cost) const {
    const double n = cost_max > cost_min ? (cost - cost_min) / (cost_max - cost_min) : 0.0;
    return kMargin + n * (kWidth - 2 * kMargin);
  }
  double y(double latency) const {
    const double n = lat_max > lat_min ? (latency - lat_min) / (lat_max - lat_min) : 0.0;
    return kHeight - kMargin - n * (kHeight - 2 * kMargin);
  }
};

}  // namespace

std::string render_scatter_svg(std::span<const SetupMetrics> metrics, std::string_view title, const PlotPath* path) {
  if (metrics.empty()) throw ValidationError("no data");

  Axes axes{metrics[0].latency_ms, metrics[0].latency_ms, metrics[0].cost_pmi_usd, metrics[0].cost_pmi_usd};
  auto widen = [&](const SetupMetrics& m) {
    axes.lat_min = std::min(axes.lat_min, m.latency_ms);
    axes.lat_max = std::max(axes.lat_max, m.latency_ms);
    axes.cost_min = std::min(axes.cost_min, m.cost_pmi_usd);
    axes.cost_max = std::max(axes.cost_max, m.cost_pmi_usd);
  };
  for (const auto& m : metrics) widen(m);
  if (path) {
    for (const auto& m : path->vertices) widen(m);
  }

  std::string svg;
  svg += R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" + fixed(kWidth) + R"(" height=")" + fixed(kHeight) +
         R"(" viewBox="0 0 )" + fixed(kWidth) + " " + fixed(kHeight) + "\">\n";
  svg += "<title>" + escape(title) + "</title>\n";
  svg += "<style>.setup{fill:#4a6fa5;fill-opacity:0.45}.opt-path{fill:none;stroke:#222;stroke-width:1}"
         ".step-fusion{stroke:#c0392b;stroke-width:2.5}"
         ".step-resource{stroke:#27ae60;stroke-width:2.5;stroke-dasharray:5,3}"
         "text{font-family:sans-serif;font-size:12px}</style>\n";
  svg += R"(<rect x="0" y="0" width="100%" height="100%" fill="white"/>)"
         "\n";

  const double left = kMargin, right = kWidth - kMargin, top = kMargin, bottom = kHeight - kMargin;
  svg += "<g class=\"axes\" stroke=\"#000\">\n";
  svg += "<line x1=\"" + fixed(left) + "\" y1=\"" + fixed(bottom) + "\" x2=\"" + fixed(right) + "\" y2=\"" +
         fixed(bottom) + "\"/>\n";
  svg += "<line x1=\"" + fixed(left) + "\" y1=\"" + fixed(bottom) + "\" x2=\"" + fixed(left) + "\" y2=\"" +
         fixed(top) + "\"/>\n";
  svg += "</g>\n";
  for (double tick : {0.0, 0.5, 1.0}) {
    const double tx = left + tick * (right - left);
    const double ty = bottom - tick * (bottom - top);
    svg += "<text x=\"" + fixed(tx) + "\" y=\"" + fixed(bottom + 16) + "\" text-anchor=\"middle\">" + fixed(tick) +
           "</text>\n";
    svg += "<text x=\"" + fixed(left - 8) + "\" y=\"" + fixed(ty + 4) + "\" text-anchor=\"end\">" + fixed(tick) +
           "</text>\n";
  }
  svg += "<text x=\"" + fixed((left + right) / 2) + "\" y=\"" + fixed(kHeight - 14) +
         "\" text-anchor=\"middle\">normalized cost</text>\n";
  svg += "<text x=\"16\" y=\"" + fixed((top + bottom) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         fixed((top + bottom) / 2) + ")\">normalized latency</text>\n";
  svg += "<text x=\"" + fixed((left + right) / 2) + "\" y=\"24\" text-anchor=\"middle\">" + escape(title) +
         "</text>\n";

  svg += "<g class=\"points\">\n";
  for (const auto& m : metrics) {
    svg += "<circle class=\"setup\" cx=\"" + fixed(axes.x(m.cost_pmi_usd)) + "\" cy=\"" + fixed(axes.y(m.latency_ms)) +
           "\" r=\"2.5\"><title>" + escape(m.setup_name) + "</title></circle>\n";
  }
  svg += "</g>\n";

  if (path && !path->steps.empty()) {
    std::map<std::string, const SetupMetrics*> lookup;
    for (const auto& m : path->vertices) lookup[m.setup_name] = &m;
    auto point_of = [&](const std::string& name) {
      auto it = lookup.find(name);
      if (it == lookup.end()) throw ValidationError("path vertex '" + name + "' has no metrics");
      return std::pair{axes.x(it->second->cost_pmi_usd), axes.y(it->second->latency_ms)};
    };

    std::string points;
    auto append = [&](const std::string& name) {
      const auto [x, y] = point_of(name);
      if (!points.empty()) points += ' ';
      points += fixed(x) + "," + fixed(y);
    };
    append(path->steps.front().from_setup);
    for (const auto& step : path->steps) append(step.to_setup);

    svg += "<g class=\"optimization-path\">\n";
    svg += "<polyline class=\"opt-path\" data-start=\"" + escape(path->steps.front().from_setup) + "\" data-end=\"" +
           escape(path->steps.back().to_setup) + "\" points=\"" + points + "\"/>\n";
    for (const auto& step : path->steps) {
      const auto [x1, y1] = point_of(step.from_setup);
      const auto [x2, y2] = point_of(step.to_setup);
      svg += "<line class=\"step-" + std::string(to_string(step.kind)) + "\" x1=\"" + fixed(x1) + "\" y1=\"" +
             fixed(y1) + "\" x2=\"" + fixed(x2) + "\" y2=\"" + fixed(y2) + "\"><title>" +
             escape(step.from_setup + " -> " + step.to_setup) + "</title></line>\n";
    }
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace fuseplan
