#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fuseplan/analysis.hpp"
#include "fuseplan/pricing.hpp"

namespace fuseplan {

struct PlotPath {
  std::vector<OptimizationStep> steps;
  // Metrics of every setup named in `steps`.
  std::vector<SetupMetrics> vertices;
};

// Self-contained SVG scatter: x = normalized cost, y = normalized latency,
// one <circle class="setup"> per entry. An optional greedy path is drawn as
// a polyline plus one styled segment per step.
std::string render_scatter_svg(std::span<const SetupMetrics> metrics, std::string_view title,
                               const PlotPath* path = nullptr);

}  // namespace fuseplan
