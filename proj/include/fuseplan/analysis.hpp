#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fuseplan/app_model.hpp"
#include "fuseplan/fusion.hpp"
#include "fuseplan/platform_sim.hpp"
#include "fuseplan/pricing.hpp"

namespace fuseplan {

// Min-max scaling to [0, 1]; a constant input maps to all zeros.
std::vector<double> normalize_metrics(std::span<const double> values);

// alpha * latency + (1 - alpha) * cost. alpha = 0 ranks by cost only,
// alpha = 1 by latency only.
double score(double latency_norm, double cost_norm, double alpha);

// alpha_i = i / (steps - 1), i = 0 .. steps - 1.
class AlphaGrid {
 public:
  explicit AlphaGrid(std::size_t steps = 10001);
  std::size_t steps() const { return steps_; }
  double at(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(steps_ - 1); }

 private:
  std::size_t steps_;
};

struct AlphaBreakpoint {
  double from_alpha = 0.0;
  double to_alpha = 0.0;
  std::string winner;
};

struct SweepReport {
  std::string pricing_model_id;
  std::size_t steps = 0;
  // Winning setup per grid point, as an index into the swept metric list.
  std::vector<std::size_t> winners;
  std::map<std::string, std::size_t> coverage_counts;
  std::map<std::string, std::size_t> partition_counts;
  std::vector<AlphaBreakpoint> breakpoints;
  std::vector<SetupMetrics> pareto;

  double coverage_pct(const std::string& setup) const;
  double partition_coverage_pct(const std::string& partition) const;
};

/// Scores every setup at every alpha of the grid and records the argmin.
///
/// Latency and cost are min-max normalized across `metrics`. Ties resolve by
/// lower raw cost, then lower raw latency, then setup name. Only Pareto
/// members can win under this order, so the scan is restricted to the
/// front. `jobs` > 1 splits the grid across threads; the result is identical.
SweepReport alpha_sweep(std::span<const SetupMetrics> metrics, const AlphaGrid& grid,
                        std::string_view pricing_model_id = {}, unsigned jobs = 1);

// Setups not dominated in (latency, cost), sorted by cost then latency.
std::vector<SetupMetrics> pareto_front(std::span<const SetupMetrics> metrics);

// Connected components of the sync-edge skeleton.
FusionPartition sync_fuse_heuristic(const AppGraph& app);

enum class StepKind { kFusion, kResource };
std::string_view to_string(StepKind kind);

struct OptimizationStep {
  StepKind kind = StepKind::kFusion;
  std::string from_setup;
  std::string to_setup;
  double score_before = 0.0;
  double score_after = 0.0;
};

struct GreedyOptions {
  double alpha = 0.5;
  // When non-empty, normalization bounds also cover this set (typically the
  // full brute-force results); otherwise only setups visited so far count.
  std::span<const SetupMetrics> full_set;
  std::size_t max_steps = 10000;
};

/// Hill climb from `start`: each step moves to the best strictly improving
/// neighbor, where neighbors fuse one cross-group edge (the merged group
/// keeps the caller's level), split one group along one internal edge, or
/// move one group's level by one. Ends at a local optimum.
std::vector<OptimizationStep> greedy_optimize_path(const AppGraph& app, const PlatformModel& platform,
                                                   const PricingModel& pricing,
                                                   const std::vector<ResourceConfig>& levels,
                                                   const FusionSetup& start, const GreedyOptions& options);

// Neighborhood used by greedy_optimize_path, paired with the step kind.
std::vector<std::pair<FusionSetup, StepKind>> neighbor_setups(const AppGraph& app, const FusionSetup& setup,
                                                              const std::vector<ResourceConfig>& levels);

struct BaselineComparison {
  double latency_reduction_pct = 0.0;
  double cost_reduction_pct = 0.0;
  std::string best_latency_setup;
  std::string best_cost_setup;
};

// Reductions of the per-dimension best setup relative to `baseline_setup`.
BaselineComparison baseline_comparison(std::span<const SetupMetrics> metrics, std::string_view baseline_setup);

// Singleton partition at the first (smallest) level.
std::string baseline_setup_string(const AppGraph& app);

}  // namespace fuseplan
