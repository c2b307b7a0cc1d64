#include "fuseplan/analysis.hpp"

#include <algorithm>
#include <numeric>
#include <thread>
#include <tuple>

#include "fuseplan/error.hpp"

namespace fuseplan {

namespace {

struct Bounds {
  double min = 0.0;
  double max = 0.0;
  double scale(double v) const { return max > min ? (v - min) / (max - min) : 0.0; }
};

Bounds bounds_of(std::span<const double> values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {*lo, *hi};
}

// Strict weak order used for every argmin over setups.
bool ranks_before(double score_a, const SetupMetrics& a, double score_b, const SetupMetrics& b) {
  return std::tie(score_a, a.cost_pmi_usd, a.latency_ms, a.setup_name) <
         std::tie(score_b, b.cost_pmi_usd, b.latency_ms, b.setup_name);
}

}  // namespace

std::vector<double> normalize_metrics(std::span<const double> values) {
  if (values.empty()) return {};
  const Bounds b = bounds_of(values);
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(b.scale(v));
  return out;
}

double score(double latency_norm, double cost_norm, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in [0, 1]");
  return alpha * latency_norm + (1.0 - alpha) * cost_norm;
}

AlphaGrid::AlphaGrid(std::size_t steps) : steps_(steps) {
  if (steps < 2) throw ValidationError("alpha grid needs at least 2 steps");
}

double SweepReport::coverage_pct(const std::string& setup) const {
  auto it = coverage_counts.find(setup);
  return it == coverage_counts.end() ? 0.0 : 100.0 * static_cast<double>(it->second) / static_cast<double>(steps);
}

double SweepReport::partition_coverage_pct(const std::string& partition) const {
  auto it = partition_counts.find(partition);
  return it == partition_counts.end() ? 0.0 : 100.0 * static_cast<double>(it->second) / static_cast<double>(steps);
}

std::vector<SetupMetrics> pareto_front(std::span<const SetupMetrics> metrics) {
  std::vector<const SetupMetrics*> order;
  for (const auto& m : metrics) order.push_back(&m);
  std::sort(order.begin(), order.end(), [](const SetupMetrics* a, const SetupMetrics* b) {
    return std::tie(a->cost_pmi_usd, a->latency_ms, a->setup_name) <
           std::tie(b->cost_pmi_usd, b->latency_ms, b->setup_name);
  });
  std::vector<SetupMetrics> front;
  for (const SetupMetrics* m : order) {
    // Sorted by cost, a point survives if it is strictly faster than all
    // cheaper-or-equal points, or exactly duplicates the last survivor.
    if (front.empty() || m->latency_ms < front.back().latency_ms ||
        (m->latency_ms == front.back().latency_ms && m->cost_pmi_usd == front.back().cost_pmi_usd)) {
      front.push_back(*m);
    }
  }
  return front;
}

SweepReport alpha_sweep(std::span<const SetupMetrics> metrics, const AlphaGrid& grid,
                        std::string_view pricing_model_id, unsigned jobs) {
  if (metrics.empty()) throw ValidationError("no data");

  std::vector<double> latency, cost;
  for (const auto& m : metrics) {
    latency.push_back(m.latency_ms);
    cost.push_back(m.cost_pmi_usd);
  }
  const std::vector<double> latency_norm = normalize_metrics(latency);
  const std::vector<double> cost_norm = normalize_metrics(cost);

  // Candidates: indices of Pareto members.
  std::vector<std::size_t> candidates(metrics.size());
  std::iota(candidates.begin(), candidates.end(), std::size_t{0});
  std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(cost[a], latency[a], metrics[a].setup_name) < std::tie(cost[b], latency[b], metrics[b].setup_name);
  });
  {
    std::vector<std::size_t> kept;
    for (std::size_t i : candidates) {
      if (kept.empty() || latency[i] < latency[kept.back()] ||
          (latency[i] == latency[kept.back()] && cost[i] == cost[kept.back()])) {
        kept.push_back(i);
      }
    }
    candidates = std::move(kept);
  }

  SweepReport report;
  report.pricing_model_id = std::string(pricing_model_id);
  report.steps = grid.steps();
  report.winners.assign(grid.steps(), 0);

  auto sweep_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t g = begin; g < end; ++g) {
      const double alpha = grid.at(g);
      std::size_t best = candidates.front();
      double best_score = score(latency_norm[best], cost_norm[best], alpha);
      for (std::size_t i : candidates) {
        const double s = score(latency_norm[i], cost_norm[i], alpha);
        if (ranks_before(s, metrics[i], best_score, metrics[best])) {
          best = i;
          best_score = s;
        }
      }
      report.winners[g] = best;
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, grid.steps());
  if (workers == 1) {
    sweep_range(0, grid.steps());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (grid.steps() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(grid.steps(), begin + chunk);
      if (begin < end) pool.emplace_back(sweep_range, begin, end);
    }
  }

  for (std::size_t g = 0; g < grid.steps(); ++g) {
    const std::string& name = metrics[report.winners[g]].setup_name;
    ++report.coverage_counts[name];
    ++report.partition_counts[std::string(partition_part(name))];
    if (report.breakpoints.empty() || report.breakpoints.back().winner != name) {
      report.breakpoints.push_back({grid.at(g), grid.at(g), name});
    } else {
      report.breakpoints.back().to_alpha = grid.at(g);
    }
  }
  report.pareto = pareto_front(metrics);
  return report;
}

FusionPartition sync_fuse_heuristic(const AppGraph& app) {
  std::vector<std::size_t> component(app.task_count());
  std::iota(component.begin(), component.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (component[x] != x) x = component[x] = component[component[x]];
    return x;
  };
  for (const CallEdge& e : sync_skeleton(app)) component[find(e.caller)] = find(e.callee);

  std::map<std::size_t, std::vector<TaskId>> groups;
  for (TaskId t = 0; t < app.task_count(); ++t) groups[find(t)].push_back(t);
  std::vector<std::vector<TaskId>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return FusionPartition::from_groups(app, std::move(out));
}

BaselineComparison baseline_comparison(std::span<const SetupMetrics> metrics, std::string_view baseline_setup) {
  const auto base = std::find_if(metrics.begin(), metrics.end(),
                                 [&](const SetupMetrics& m) { return m.setup_name == baseline_setup; });
  if (base == metrics.end()) throw ValidationError("baseline '" + std::string(baseline_setup) + "' missing");

  const auto fastest = std::min_element(metrics.begin(), metrics.end(), [](const auto& a, const auto& b) {
    return std::tie(a.latency_ms, a.cost_pmi_usd, a.setup_name) < std::tie(b.latency_ms, b.cost_pmi_usd, b.setup_name);
  });
  const auto cheapest = std::min_element(metrics.begin(), metrics.end(), [](const auto& a, const auto& b) {
    return std::tie(a.cost_pmi_usd, a.latency_ms, a.setup_name) < std::tie(b.cost_pmi_usd, b.latency_ms, b.setup_name);
  });
  auto reduction = [](double base_value, double best) {
    return base_value > 0.0 ? 100.0 * (base_value - best) / base_value : 0.0;
  };
  return {reduction(base->latency_ms, fastest->latency_ms), reduction(base->cost_pmi_usd, cheapest->cost_pmi_usd),
          fastest->setup_name, cheapest->setup_name};
}

std::string baseline_setup_string(const AppGraph& app) {
  std::vector<std::vector<TaskId>> singletons;
  for (TaskId t = 0; t < app.task_count(); ++t) singletons.push_back({t});
  FusionPartition p = FusionPartition::from_groups(app, std::move(singletons));
  std::vector<std::size_t> zeros(p.group_count(), 0);
  std::string out = p.name() + "@";
  for (std::size_t g = 0; g < zeros.size(); ++g) out += g == 0 ? "0" : ",0";
  return out;
}

}  // namespace fuseplan
