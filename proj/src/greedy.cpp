#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "fuseplan/analysis.hpp"
#include "fuseplan/error.hpp"

namespace fuseplan {

namespace {

// Builds a setup from groups that each carry a level index; the partition
// reorders groups canonically, so levels are re-attached via a member task.
FusionSetup setup_from_groups(const AppGraph& app, const std::vector<std::pair<std::vector<TaskId>, std::size_t>>& groups,
                              const std::vector<ResourceConfig>& levels) {
  std::vector<std::vector<TaskId>> members;
  for (const auto& [tasks, level] : groups) members.push_back(tasks);
  FusionPartition partition = FusionPartition::from_groups(app, std::move(members));
  std::vector<std::size_t> indices(partition.group_count());
  for (const auto& [tasks, level] : groups) indices[partition.group_of(tasks.front())] = level;
  return make_setup(std::move(partition), std::move(indices), levels);
}

std::vector<std::pair<std::vector<TaskId>, std::size_t>> groups_with_levels(const FusionSetup& setup) {
  std::vector<std::pair<std::vector<TaskId>, std::size_t>> out;
  for (std::size_t g = 0; g < setup.partition.group_count(); ++g) {
    out.emplace_back(setup.partition.group(g), setup.level_indices[g]);
  }
  return out;
}

// Components of `group` once edge `cut` is removed.
std::vector<std::vector<TaskId>> split_along(const AppGraph& app, const std::vector<TaskId>& group, std::size_t cut) {
  std::vector<std::size_t> label(app.task_count(), SIZE_MAX);
  std::vector<bool> in_group(app.task_count(), false);
  for (TaskId t : group) in_group[t] = true;
  std::vector<std::vector<TaskId>> parts;
  for (TaskId seed : group) {
    if (label[seed] != SIZE_MAX) continue;
    parts.emplace_back();
    std::vector<TaskId> frontier{seed};
    label[seed] = parts.size() - 1;
    while (!frontier.empty()) {
      const TaskId node = frontier.back();
      frontier.pop_back();
      parts.back().push_back(node);
      for (std::size_t e = 0; e < app.edges().size(); ++e) {
        if (e == cut) continue;
        const CallEdge& edge = app.edges()[e];
        TaskId other;
        if (edge.caller == node) {
          other = edge.callee;
        } else if (edge.callee == node) {
          other = edge.caller;
        } else {
          continue;
        }
        if (in_group[other] && label[other] == SIZE_MAX) {
          label[other] = label[seed];
          frontier.push_back(other);
        }
      }
    }
  }
  return parts;
}

}  // namespace

std::string_view to_string(StepKind kind) { return kind == StepKind::kFusion ? "fusion" : "resource"; }

std::vector<std::pair<FusionSetup, StepKind>> neighbor_setups(const AppGraph& app, const FusionSetup& setup,
                                                              const std::vector<ResourceConfig>& levels) {
  std::vector<std::pair<FusionSetup, StepKind>> out;
  const FusionPartition& p = setup.partition;
  const auto base = groups_with_levels(setup);

  for (std::size_t e = 0; e < app.edges().size(); ++e) {
    const CallEdge& edge = app.edges()[e];
    const std::size_t gc = p.group_of(edge.caller);
    const std::size_t gd = p.group_of(edge.callee);
    auto groups = base;
    if (gc != gd) {
      groups[gc].first.insert(groups[gc].first.end(), groups[gd].first.begin(), groups[gd].first.end());
      groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(gd));
    } else {
      auto parts = split_along(app, groups[gc].first, e);
      if (parts.size() != 2) continue;  // edge is not a bridge of the group
      const std::size_t level = groups[gc].second;
      groups[gc].first = std::move(parts[0]);
      groups.emplace_back(std::move(parts[1]), level);
    }
    out.emplace_back(setup_from_groups(app, groups, levels), StepKind::kFusion);
  }

  for (std::size_t g = 0; g < p.group_count(); ++g) {
    for (int delta : {-1, 1}) {
      const auto level = static_cast<std::ptrdiff_t>(setup.level_indices[g]) + delta;
      if (level < 0 || level >= static_cast<std::ptrdiff_t>(levels.size())) continue;
      auto indices = setup.level_indices;
      indices[g] = static_cast<std::size_t>(level);
      out.emplace_back(make_setup(p, std::move(indices), levels), StepKind::kResource);
    }
  }
  return out;
}

std::vector<OptimizationStep> greedy_optimize_path(const AppGraph& app, const PlatformModel& platform,
                                                   const PricingModel& pricing,
                                                   const std::vector<ResourceConfig>& levels,
                                                   const FusionSetup& start, const GreedyOptions& options) {
  if (!(options.alpha >= 0.0 && options.alpha <= 1.0)) throw ValidationError("alpha must lie in [0, 1]");
  if (start.partition.group_count() != start.level_indices.size()) throw ValidationError("invalid start setup");

  std::map<std::string, SetupMetrics> visited;
  auto evaluate = [&](const FusionSetup& s) -> const SetupMetrics& {
    const std::string key = setup_string(s);
    auto it = visited.find(key);
    if (it == visited.end()) it = visited.emplace(key, metrics_for(app, s, pricing, platform)).first;
    return it->second;
  };

  double lat_min = 0.0, lat_max = 0.0, cost_min = 0.0, cost_max = 0.0;
  bool have_bounds = false;
  auto widen = [&](const SetupMetrics& m) {
    if (!have_bounds) {
      lat_min = lat_max = m.latency_ms;
      cost_min = cost_max = m.cost_pmi_usd;
      have_bounds = true;
      return;
    }
    lat_min = std::min(lat_min, m.latency_ms);
    lat_max = std::max(lat_max, m.latency_ms);
    cost_min = std::min(cost_min, m.cost_pmi_usd);
    cost_max = std::max(cost_max, m.cost_pmi_usd);
  };
  for (const auto& m : options.full_set) widen(m);

  auto score_of = [&](const SetupMetrics& m) {
    const double l = lat_max > lat_min ? (m.latency_ms - lat_min) / (lat_max - lat_min) : 0.0;
    const double c = cost_max > cost_min ? (m.cost_pmi_usd - cost_min) / (cost_max - cost_min) : 0.0;
    return score(l, c, options.alpha);
  };

  std::vector<OptimizationStep> path;
  std::set<std::string> on_path{setup_string(start)};
  FusionSetup current = start;
  while (path.size() < options.max_steps) {
    const SetupMetrics here = evaluate(current);
    widen(here);
    auto neighbors = neighbor_setups(app, current, levels);
    std::vector<SetupMetrics> neighbor_metrics;
    for (const auto& [setup, kind] : neighbors) {
      neighbor_metrics.push_back(evaluate(setup));
      widen(neighbor_metrics.back());
    }

    const double here_score = score_of(here);
    std::size_t best = neighbors.size();
    double best_score = here_score;
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
      if (on_path.count(neighbor_metrics[i].setup_name)) continue;
      const double s = score_of(neighbor_metrics[i]);
      if (s >= here_score) continue;
      if (best == neighbors.size() ||
          std::tie(s, neighbor_metrics[i].cost_pmi_usd, neighbor_metrics[i].latency_ms, neighbor_metrics[i].setup_name) <
              std::tie(best_score, neighbor_metrics[best].cost_pmi_usd, neighbor_metrics[best].latency_ms,
                       neighbor_metrics[best].setup_name)) {
        best = i;
        best_score = s;
      }
    }
    if (best == neighbors.size()) break;

    path.push_back({neighbors[best].second, here.setup_name, neighbor_metrics[best].setup_name, here_score, best_score});
    on_path.insert(neighbor_metrics[best].setup_name);
    current = std::move(neighbors[best].first);
  }
  return path;
}

}  // namespace fuseplan
