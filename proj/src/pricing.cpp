#include "fuseplan/pricing.hpp"

#include <cmath>
#include <map>

#include <json.hpp>

#include "fuseplan/error.hpp"

namespace fuseplan {

namespace {

constexpr double kPerMillion = 1e6;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_rate(double rate, const char* name) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw ValidationError(std::string(name) + " must be non-negative");
}

}  // namespace

std::string_view pricing_id(PricingKind kind) {
  return kind == PricingKind::kTraditional ? "traditional" : "instance_based";
}

PricingKind pricing_kind(const PricingModel& model) {
  return std::holds_alternative<TraditionalPricing>(model) ? PricingKind::kTraditional : PricingKind::kInstanceBased;
}

std::string_view pricing_id(const PricingModel& model) { return pricing_id(pricing_kind(model)); }

PricingKind parse_pricing_kind(std::string_view id) {
  if (id == "traditional") return PricingKind::kTraditional;
  if (id == "instance_based") return PricingKind::kInstanceBased;
  throw ValidationError("unknown pricing model '" + std::string(id) + "'");
}

PricingModel PricingConfig::model() const {
  if (kind == PricingKind::kTraditional) return traditional;
  return instance_based;
}

PricingConfig parse_pricing_config(std::string_view json_text) {
  PricingConfig config;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    config.kind = parse_pricing_kind(doc.value("model", std::string("traditional")));
    auto& t = config.traditional;
    auto& i = config.instance_based;
    t.request_fee_usd = doc.value("request_fee_usd", t.request_fee_usd);
    t.gb_second_rate_usd = doc.value("gb_second_rate_usd", t.gb_second_rate_usd);
    i.vcpu_second_rate_usd = doc.value("vcpu_second_rate_usd", i.vcpu_second_rate_usd);
    i.gib_second_rate_usd = doc.value("gib_second_rate_usd", i.gib_second_rate_usd);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed pricing config: ") + e.what());
  }
  validate(PricingModel{config.traditional});
  validate(PricingModel{config.instance_based});
  return config;
}

void validate(const PricingModel& model) {
  std::visit(Overloaded{[](const TraditionalPricing& p) {
                          check_rate(p.request_fee_usd, "request_fee_usd");
                          check_rate(p.gb_second_rate_usd, "gb_second_rate_usd");
                        },
                        [](const InstanceBasedPricing& p) {
                          check_rate(p.vcpu_second_rate_usd, "vcpu_second_rate_usd");
                          check_rate(p.gib_second_rate_usd, "gib_second_rate_usd");
                        }},
             model);
}

double cost_of(const SimResult& result, const FusionSetup& setup, const PricingModel& model) {
  // Billed time is summed per resource level before pricing. Sums of whole
  // quanta are exact, so setups with equal billed time per level cost
  // exactly the same regardless of how that time splits across instances.
  std::map<ResourceConfig, double> billed_by_level;
  for (const InvocationRecord& inv : result.invocations) {
    if (inv.group >= setup.partition.group_count() || setup.partition.group_label(inv.group) != inv.group_name) {
      throw ValidationError("invocation references group '" + inv.group_name + "' absent from setup");
    }
    billed_by_level[setup.resource_of_group(inv.group)] += inv.billed_ms;
  }
  const auto invocations = static_cast<double>(result.invocations.size());

  return std::visit(Overloaded{[&](const TraditionalPricing& p) {
                                 double cost = invocations * p.request_fee_usd;
                                 for (const auto& [level, billed] : billed_by_level) {
                                   const double gb = static_cast<double>(level.memory_mb) / 1024.0;
                                   cost += billed / 1000.0 * gb * p.gb_second_rate_usd;
                                 }
                                 return cost * kPerMillion;
                               },
                               [&](const InstanceBasedPricing& p) {
                                 double cost = 0.0;
                                 for (const auto& [level, billed] : billed_by_level) {
                                   const double gib = static_cast<double>(level.memory_mb) / 1024.0;
                                   cost += billed / 1000.0 *
                                           (level.cpu * p.vcpu_second_rate_usd + gib * p.gib_second_rate_usd);
                                 }
                                 return cost * kPerMillion;
                               }},
                    model);
}

SetupMetrics metrics_for(const AppGraph& app, const FusionSetup& setup, const PricingModel& pricing,
                         const PlatformModel& platform) {
  const SimResult result = simulate(app, setup, platform);
  return {setup_string(setup), result.latency_ms, cost_of(result, setup, pricing)};
}

}  // namespace fuseplan
