#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fuseplan/app_model.hpp"
#include "fuseplan/fusion.hpp"

namespace fuseplan {

enum class ColdPolicy { kAlwaysCold, kAlwaysWarm };

// Parameters of the simulated FaaS platform. Task duration scales linearly:
// base_work_ms / cpu.
struct PlatformModel {
  double net_oneway_ms = 5.0;
  double cold_start_ms = 100.0;
  ColdPolicy cold_policy = ColdPolicy::kAlwaysCold;
  double billing_quantum_ms = 1.0;

  // Start-up delay actually applied to a fresh instance.
  double effective_cold_ms() const { return cold_policy == ColdPolicy::kAlwaysCold ? cold_start_ms : 0.0; }
};

void validate(const PlatformModel& model);

// {"net_oneway_ms", "cold_start_ms", "cold_policy": "always_cold"|"always_warm",
//  "billing_quantum_ms"}; missing keys keep their defaults.
PlatformModel parse_platform(std::string_view json_text);
std::string serialize_platform(const PlatformModel& model);

struct InvocationRecord {
  std::size_t group = 0;  // index into the setup's canonical group order
  std::string group_name;
  std::size_t instance_id = 0;
  double start_ms = 0.0;  // execution start, after any cold start
  double end_ms = 0.0;    // chain and local queue drained
  double billed_ms = 0.0;
  bool cold = false;
};

enum class EventKind {
  kArrive,        // invocation reaches its fresh instance
  kExecStart,     // instance begins executing (post cold start)
  kTaskStart,
  kTaskEnd,
  kCallLocalSync,
  kCallLocalAsync,  // enqueued on the caller's instance
  kCallRemoteSync,
  kCallRemoteAsync,
  kReply,          // sync reply delivered to the waiting caller
  kInstanceDone,
};

std::string_view to_string(EventKind kind);

struct TraceEvent {
  double time_ms = 0.0;
  std::size_t seq = 0;
  EventKind kind = EventKind::kArrive;
  std::size_t instance_id = 0;
  TaskId task = 0;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct SimResult {
  double latency_ms = 0.0;  // client dispatch at t=0 until the last task completes
  std::vector<InvocationRecord> invocations;
  std::size_t remote_calls = 0;
  std::vector<TraceEvent> trace;

  std::size_t cold_starts() const;
  double total_billed_ms() const;
};

double task_duration(const Task& task, double cpu);

// Rounds a busy interval up to whole billing quanta.
double round_up_billing(double duration_ms, double quantum_ms);

/// Runs one application request under `setup`.
///
/// The client dispatches the root invocation at t=0. Every remote invocation
/// gets a fresh instance and pays net_oneway_ms in transit plus the cold
/// start (unbilled). A task computes first, then issues its calls in edge
/// order. Sync calls inside a group run inline; sync calls across groups
/// block the caller for the round trip, the callee's cold start and its busy
/// time, all billed to the caller. Async calls across groups are fire and
/// forget. Async calls inside a group are queued FIFO on the caller's
/// instance and run once its current call chain finishes. A sync callee
/// replies when its chain finishes; its queue drains afterwards.
///
/// Ties in the event queue resolve by (time, insertion sequence), so
/// identical inputs yield bit-identical results.
SimResult simulate(const AppGraph& app, const FusionSetup& setup, const PlatformModel& model);

std::string format_trace(const AppGraph& app, const SimResult& result);

}  // namespace fuseplan
