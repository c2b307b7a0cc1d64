#include "fuseplan/platform_sim.hpp"

#include <cmath>
#include <deque>
#include <optional>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "fuseplan/error.hpp"

namespace fuseplan {

namespace {

using json = nlohmann::ordered_json;

struct Frame {
  TaskId task;
  std::size_t next_call;
};

struct Instance {
  std::size_t group = 0;
  double cpu = 1.0;
  TaskId entry = 0;
  std::optional<std::size_t> reply_to;
  bool replied = false;
  bool cold = false;
  double start = 0.0;
  double end = 0.0;
  std::vector<Frame> stack;
  std::deque<TaskId> queue;
};

struct Pending {
  double time;
  std::size_t seq;
  EventKind kind;
  std::size_t instance;
  TaskId task;
};

struct Later {
  bool operator()(const Pending& a, const Pending& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

void check_setup_matches(const AppGraph& app, const FusionSetup& setup) {
  const FusionPartition& p = setup.partition;
  std::size_t covered = 0;
  const char* joiner = app.has_multichar_names() ? "+" : "";
  for (std::size_t g = 0; g < p.group_count(); ++g) {
    std::string label;
    for (TaskId t : p.group(g)) {
      if (t >= app.task_count()) throw ValidationError("partition mismatch with application");
      if (!label.empty()) label += joiner;
      label += app.task(t).name;
      ++covered;
    }
    if (label != p.group_label(g)) throw ValidationError("partition mismatch with application");
  }
  if (covered != app.task_count()) throw ValidationError("partition mismatch with application");
  if (setup.resources.size() != p.group_count()) throw ValidationError("setup lacks a resource per group");
}

class Engine {
 public:
  Engine(const AppGraph& app, const FusionSetup& setup, const PlatformModel& model)
      : app_(app), setup_(setup), model_(model) {}

  SimResult run() {
    spawn(app_.root(), std::nullopt, 0.0);
    while (!pending_.empty()) {
      const Pending ev = pending_.top();
      pending_.pop();
      dispatch(ev);
    }
    SimResult result;
    for (std::size_t id = 0; id < instances_.size(); ++id) {
      const Instance& inst = instances_[id];
      result.invocations.push_back({inst.group, setup_.partition.group_label(inst.group), id, inst.start, inst.end,
                                    round_up_billing(inst.end - inst.start, model_.billing_quantum_ms), inst.cold});
      result.latency_ms = std::max(result.latency_ms, inst.end);
    }
    result.remote_calls = instances_.size();
    result.trace = std::move(trace_);
    return result;
  }

 private:
  void schedule(double time, EventKind kind, std::size_t instance, TaskId task = 0) {
    pending_.push({time, next_seq_++, kind, instance, task});
  }

  void record(double time, EventKind kind, std::size_t instance, TaskId task) {
    trace_.push_back({time, trace_.size(), kind, instance, task});
  }

  void spawn(TaskId entry, std::optional<std::size_t> reply_to, double sent_at) {
    Instance inst;
    inst.group = setup_.partition.group_of(entry);
    inst.cpu = setup_.resource_of_group(inst.group).cpu;
    inst.entry = entry;
    inst.reply_to = reply_to;
    inst.cold = model_.cold_policy == ColdPolicy::kAlwaysCold;
    instances_.push_back(std::move(inst));
    schedule(sent_at + model_.net_oneway_ms, EventKind::kArrive, instances_.size() - 1, entry);
  }

  void begin_task(std::size_t id, TaskId task, double now) {
    Instance& inst = instances_[id];
    inst.stack.push_back({task, 0});
    record(now, EventKind::kTaskStart, id, task);
    schedule(now + task_duration(app_.task(task), inst.cpu), EventKind::kTaskEnd, id, task);
  }

  void dispatch(const Pending& ev) {
    switch (ev.kind) {
      case EventKind::kArrive:
        record(ev.time, ev.kind, ev.instance, ev.task);
        schedule(ev.time + model_.effective_cold_ms(), EventKind::kExecStart, ev.instance, ev.task);
        break;
      case EventKind::kExecStart:
        record(ev.time, ev.kind, ev.instance, ev.task);
        instances_[ev.instance].start = ev.time;
        begin_task(ev.instance, instances_[ev.instance].entry, ev.time);
        break;
      case EventKind::kTaskEnd:
        record(ev.time, ev.kind, ev.instance, ev.task);
        advance(ev.instance, ev.time);
        break;
      case EventKind::kReply:
        record(ev.time, ev.kind, ev.instance, ev.task);
        advance(ev.instance, ev.time);
        break;
      default:
        break;
    }
  }

  // Continues the instance's current chain until it blocks, starts a
  // compute step, or finishes.
  void advance(std::size_t id, double now) {
    while (true) {
      Instance& inst = instances_[id];
      if (inst.stack.empty()) {
        if (inst.reply_to && !inst.replied) {
          inst.replied = true;
          schedule(now + model_.net_oneway_ms, EventKind::kReply, *inst.reply_to, inst.entry);
        }
        if (!inst.queue.empty()) {
          const TaskId next = inst.queue.front();
          inst.queue.pop_front();
          begin_task(id, next, now);
          return;
        }
        inst.end = now;
        record(now, EventKind::kInstanceDone, id, inst.entry);
        return;
      }

      Frame& frame = inst.stack.back();
      const auto calls = app_.outgoing(frame.task);
      if (frame.next_call == calls.size()) {
        inst.stack.pop_back();
        continue;
      }
      const CallEdge& edge = app_.edges()[calls[frame.next_call++]];
      const bool local = setup_.partition.group_of(edge.callee) == inst.group;
      if (local && edge.mode == CallMode::kSync) {
        record(now, EventKind::kCallLocalSync, id, edge.callee);
        begin_task(id, edge.callee, now);
        return;
      }
      if (local) {
        record(now, EventKind::kCallLocalAsync, id, edge.callee);
        inst.queue.push_back(edge.callee);
        continue;
      }
      if (edge.mode == CallMode::kSync) {
        record(now, EventKind::kCallRemoteSync, id, edge.callee);
        spawn(edge.callee, id, now);
        return;
      }
      record(now, EventKind::kCallRemoteAsync, id, edge.callee);
      spawn(edge.callee, std::nullopt, now);
    }
  }

  const AppGraph& app_;
  const FusionSetup& setup_;
  const PlatformModel& model_;
  std::vector<Instance> instances_;
  std::priority_queue<Pending, std::vector<Pending>, Later> pending_;
  std::vector<TraceEvent> trace_;
  std::size_t next_seq_ = 0;
};

}  // namespace

void validate(const PlatformModel& model) {
  auto non_negative = [](double v) { return v >= 0.0 && std::isfinite(v); };
  if (!non_negative(model.net_oneway_ms)) throw ValidationError("net_oneway_ms must be non-negative");
  if (!non_negative(model.cold_start_ms)) throw ValidationError("cold_start_ms must be non-negative");
  if (!(model.billing_quantum_ms > 0.0) || !std::isfinite(model.billing_quantum_ms)) {
    throw ValidationError("billing_quantum_ms must be positive");
  }
}

PlatformModel parse_platform(std::string_view json_text) {
  PlatformModel model;
  try {
    const json doc = json::parse(json_text);
    model.net_oneway_ms = doc.value("net_oneway_ms", model.net_oneway_ms);
    model.cold_start_ms = doc.value("cold_start_ms", model.cold_start_ms);
    model.billing_quantum_ms = doc.value("billing_quantum_ms", model.billing_quantum_ms);
    const std::string policy = doc.value("cold_policy", std::string("always_cold"));
    if (policy == "always_cold") {
      model.cold_policy = ColdPolicy::kAlwaysCold;
    } else if (policy == "always_warm") {
      model.cold_policy = ColdPolicy::kAlwaysWarm;
    } else {
      throw ValidationError("unknown cold_policy '" + policy + "'");
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed platform model: ") + e.what());
  }
  validate(model);
  return model;
}

std::string serialize_platform(const PlatformModel& model) {
  json doc;
  doc["net_oneway_ms"] = model.net_oneway_ms;
  doc["cold_start_ms"] = model.cold_start_ms;
  doc["cold_policy"] = model.cold_policy == ColdPolicy::kAlwaysCold ? "always_cold" : "always_warm";
  doc["billing_quantum_ms"] = model.billing_quantum_ms;
  return doc.dump(2);
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kArrive:
      return "arrive";
    case EventKind::kExecStart:
      return "exec_start";
    case EventKind::kTaskStart:
      return "task_start";
    case EventKind::kTaskEnd:
      return "task_end";
    case EventKind::kCallLocalSync:
      return "call_local_sync";
    case EventKind::kCallLocalAsync:
      return "call_local_async";
    case EventKind::kCallRemoteSync:
      return "call_remote_sync";
    case EventKind::kCallRemoteAsync:
      return "call_remote_async";
    case EventKind::kReply:
      return "reply";
    case EventKind::kInstanceDone:
      return "instance_done";
  }
  return "";
}

std::size_t SimResult::cold_starts() const {
  std::size_t n = 0;
  for (const auto& inv : invocations) n += inv.cold ? 1 : 0;
  return n;
}

double SimResult::total_billed_ms() const {
  double total = 0.0;
  for (const auto& inv : invocations) total += inv.billed_ms;
  return total;
}

double task_duration(const Task& task, double cpu) {
  if (!(cpu > 0.0)) throw ValidationError("cpu allocation must be positive");
  return task.base_work_ms / cpu;
}

double round_up_billing(double duration_ms, double quantum_ms) {
  if (duration_ms <= 0.0) return 0.0;
  // Tolerance absorbs representation noise from work / cpu divisions.
  return std::ceil(duration_ms / quantum_ms - 1e-9) * quantum_ms;
}

SimResult simulate(const AppGraph& app, const FusionSetup& setup, const PlatformModel& model) {
  validate(model);
  check_setup_matches(app, setup);
  return Engine(app, setup, model).run();
}

std::string format_trace(const AppGraph& app, const SimResult& result) {
  std::ostringstream out;
  for (const TraceEvent& ev : result.trace) {
    out << ev.time_ms << '\t' << to_string(ev.kind) << "\tinstance=" << ev.instance_id
        << "\ttask=" << app.task(ev.task).name << '\n';
  }
  return out.str();
}

}  // namespace fuseplan
