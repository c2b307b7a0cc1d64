#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "fuseplan/app_model.hpp"
#include "fuseplan/fusion.hpp"
#include "fuseplan/platform_sim.hpp"

namespace fuseplan {

// Per-request fee plus GB-seconds of billed duration (AWS Lambda style).
// Defaults are public list prices, configurable.
struct TraditionalPricing {
  double request_fee_usd = 2.0e-7;
  double gb_second_rate_usd = 1.66667e-5;
};

// vCPU-seconds plus GiB-seconds of billed duration, no request fee
// (Cloud Run Functions style).
struct InstanceBasedPricing {
  double vcpu_second_rate_usd = 1.8e-5;
  double gib_second_rate_usd = 2.0e-6;
};

using PricingModel = std::variant<TraditionalPricing, InstanceBasedPricing>;

enum class PricingKind { kTraditional, kInstanceBased };

std::string_view pricing_id(PricingKind kind);
std::string_view pricing_id(const PricingModel& model);
PricingKind pricing_kind(const PricingModel& model);
PricingKind parse_pricing_kind(std::string_view id);

// All rates of both variants plus the selected variant, as read from a
// pricing JSON config: {"model", "request_fee_usd", "gb_second_rate_usd",
// "vcpu_second_rate_usd", "gib_second_rate_usd"}. Missing rates keep defaults.
struct PricingConfig {
  PricingKind kind = PricingKind::kTraditional;
  TraditionalPricing traditional;
  InstanceBasedPricing instance_based;

  PricingModel model() const;
};

PricingConfig parse_pricing_config(std::string_view json_text);
void validate(const PricingModel& model);

// Dollars per one million application invocations.
double cost_of(const SimResult& result, const FusionSetup& setup, const PricingModel& model);

struct SetupMetrics {
  std::string setup_name;  // canonical setup string
  double latency_ms = 0.0;
  double cost_pmi_usd = 0.0;

  friend bool operator==(const SetupMetrics&, const SetupMetrics&) = default;
};

SetupMetrics metrics_for(const AppGraph& app, const FusionSetup& setup, const PricingModel& pricing,
                         const PlatformModel& platform);

}  // namespace fuseplan
