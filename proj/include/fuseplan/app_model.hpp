#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fuseplan {

using TaskId = std::size_t;

enum class CallMode { kSync, kAsync };

std::string_view to_string(CallMode mode);
CallMode parse_call_mode(std::string_view text);

struct Task {
  std::string name;
  // Wall-clock compute time at a CPU allocation of 1.0.
  double base_work_ms = 0.0;

  friend bool operator==(const Task&, const Task&) = default;
};

struct CallEdge {
  TaskId caller = 0;
  TaskId callee = 0;
  CallMode mode = CallMode::kSync;
  // Position among the caller's outgoing calls; calls are issued in this order.
  std::size_t order = 0;

  friend bool operator==(const CallEdge&, const CallEdge&) = default;
};

// Name-based input form of an application, as found in a JSON descriptor.
struct AppDescriptor {
  struct Edge {
    std::string caller;
    std::string callee;
    CallMode mode = CallMode::kSync;
  };

  std::string name;
  std::string root;
  std::vector<Task> tasks;
  std::vector<Edge> edges;
};

struct ValidationOptions {
  // Call trees only by default. Setting this admits general DAGs where a
  // task may have several callers; enumeration still works, but setup
  // counts no longer follow the tree closed form.
  bool allow_shared_callees = false;
};

enum class BuiltinApp { kLinear, kParallelLinear, kTree, kAsync };

/// Immutable, validated application call graph.
///
/// Tasks are addressed by dense TaskId (their position in the descriptor's
/// task list). Every invariant is checked once at construction, so holders
/// of an AppGraph never see a cyclic, disconnected or ill-named graph.
class AppGraph {
 public:
  static AppGraph from_descriptor(const AppDescriptor& descriptor, ValidationOptions options = {});

  const std::string& name() const { return name_; }
  TaskId root() const { return root_; }
  std::size_t task_count() const { return tasks_.size(); }
  const std::vector<Task>& tasks() const { return tasks_; }
  const Task& task(TaskId id) const { return tasks_.at(id); }
  const std::vector<CallEdge>& edges() const { return edges_; }

  // Edge indices leaving `id`, in call order.
  std::span<const std::size_t> outgoing(TaskId id) const { return outgoing_.at(id); }

  std::optional<TaskId> find(std::string_view task_name) const;
  // Throws ValidationError("unknown task ...") when absent.
  TaskId id_of(std::string_view task_name) const;

  // True when any task name is longer than one character; canonical names
  // then join tasks inside a group with '+'.
  bool has_multichar_names() const { return multichar_names_; }

  // Copy with per-task base work replaced. Entries must be positive.
  AppGraph with_base_work(std::span<const double> base_work_ms) const;

  friend bool operator==(const AppGraph&, const AppGraph&) = default;

 private:
  AppGraph() = default;

  std::string name_;
  TaskId root_ = 0;
  std::vector<Task> tasks_;
  std::vector<CallEdge> edges_;
  std::vector<std::vector<std::size_t>> outgoing_;
  bool multichar_names_ = false;
};

// JSON descriptor: {"name", "root", "tasks": [{"name", "base_work_ms"}],
// "edges": [{"caller", "callee", "mode": "sync"|"async"}]}.
AppGraph parse_app(std::string_view descriptor_text, ValidationOptions options = {});
std::string serialize_app(const AppGraph& app);

AppGraph builtin_app(BuiltinApp which);
BuiltinApp parse_builtin_name(std::string_view name);
std::string_view builtin_name(BuiltinApp which);
std::vector<BuiltinApp> all_builtins();

// Exactly the edges with mode == sync, in edge order.
std::vector<CallEdge> sync_skeleton(const AppGraph& app);

}  // namespace fuseplan
