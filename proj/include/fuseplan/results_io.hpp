#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fuseplan/analysis.hpp"
#include "fuseplan/app_model.hpp"
#include "fuseplan/fusion.hpp"
#include "fuseplan/platform_sim.hpp"
#include "fuseplan/pricing.hpp"

namespace fuseplan {

// One row of the results CSV:
// app,setup,latency_ms,cost_traditional_pmi,cost_instance_pmi,invocations,cold_starts
struct ResultRow {
  std::string app;
  std::string setup;
  double latency_ms = 0.0;
  double cost_traditional_pmi = 0.0;
  double cost_instance_pmi = 0.0;
  std::size_t invocations = 0;
  std::size_t cold_starts = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

// Simulates every setup of the space and prices it under both models.
// Rows come back in enumeration order for any `jobs`.
std::vector<ResultRow> evaluate_space(const AppGraph& app, const SetupSpace& space, const PlatformModel& platform,
                                      const PricingConfig& pricing, unsigned jobs = 1);

std::string format_results_csv(std::span<const ResultRow> rows);
std::vector<ResultRow> parse_results_csv(std::string_view text);

std::vector<SetupMetrics> metrics_from_rows(std::span<const ResultRow> rows, PricingKind kind);

std::string sweep_report_json(const SweepReport& report);

// Shortest decimal form that round-trips; stable across runs and platforms.
std::string format_double(double value);

}  // namespace fuseplan
