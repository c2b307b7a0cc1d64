#include "fuseplan/app_model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "fuseplan/error.hpp"

namespace fuseplan {

namespace {

using json = nlohmann::ordered_json;

void check_task_name(const std::string& name) {
  if (name.empty()) throw ValidationError("task name must not be empty");
  if (name.find_first_of(",+") != std::string::npos) {
    throw ValidationError("task name '" + name + "' must not contain ',' or '+'");
  }
}

// Iterative three-color DFS; reports the first back edge found.
void check_acyclic(std::size_t task_count, const std::vector<CallEdge>& edges,
                   const std::vector<std::vector<std::size_t>>& outgoing, const std::vector<Task>& tasks) {
  enum class Color { kWhite, kGrey, kBlack };
  std::vector<Color> color(task_count, Color::kWhite);
  for (TaskId start = 0; start < task_count; ++start) {
    if (color[start] != Color::kWhite) continue;
    std::vector<std::pair<TaskId, std::size_t>> stack{{start, 0}};
    color[start] = Color::kGrey;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next == outgoing[node].size()) {
        color[node] = Color::kBlack;
        stack.pop_back();
        continue;
      }
      const TaskId callee = edges[outgoing[node][next++]].callee;
      if (color[callee] == Color::kGrey) {
        throw ValidationError("directed cycle through task '" + tasks[callee].name + "'");
      }
      if (color[callee] == Color::kWhite) {
        color[callee] = Color::kGrey;
        stack.emplace_back(callee, 0);
      }
    }
  }
}

}  // namespace

std::string_view to_string(CallMode mode) { return mode == CallMode::kSync ? "sync" : "async"; }

CallMode parse_call_mode(std::string_view text) {
  if (text == "sync") return CallMode::kSync;
  if (text == "async") return CallMode::kAsync;
  throw ValidationError("unknown mode '" + std::string(text) + "'");
}

AppGraph AppGraph::from_descriptor(const AppDescriptor& descriptor, ValidationOptions options) {
  AppGraph app;
  app.name_ = descriptor.name;
  app.tasks_ = descriptor.tasks;
  if (app.tasks_.empty()) throw ValidationError("application has no tasks");

  std::unordered_map<std::string, TaskId> ids;
  for (TaskId id = 0; id < app.tasks_.size(); ++id) {
    const Task& task = app.tasks_[id];
    check_task_name(task.name);
    if (!(task.base_work_ms > 0.0) || !std::isfinite(task.base_work_ms)) {
      throw ValidationError("task '" + task.name + "' needs a positive finite base_work_ms");
    }
    if (!ids.emplace(task.name, id).second) throw ValidationError("duplicate task name '" + task.name + "'");
    app.multichar_names_ = app.multichar_names_ || task.name.size() > 1;
  }
  auto lookup = [&](const std::string& name) {
    auto it = ids.find(name);
    if (it == ids.end()) throw ValidationError("unknown task '" + name + "' referenced by an edge");
    return it->second;
  };

  auto root = ids.find(descriptor.root);
  if (root == ids.end()) throw ValidationError("unknown root task '" + descriptor.root + "'");
  app.root_ = root->second;

  app.outgoing_.resize(app.tasks_.size());
  std::vector<std::size_t> indegree(app.tasks_.size(), 0);
  for (const auto& named : descriptor.edges) {
    CallEdge edge{lookup(named.caller), lookup(named.callee), named.mode, 0};
    if (edge.caller == edge.callee) throw ValidationError("directed cycle: task '" + named.caller + "' calls itself");
    edge.order = app.outgoing_[edge.caller].size();
    app.outgoing_[edge.caller].push_back(app.edges_.size());
    app.edges_.push_back(edge);
    ++indegree[edge.callee];
  }

  check_acyclic(app.tasks_.size(), app.edges_, app.outgoing_, app.tasks_);

  std::vector<bool> seen(app.tasks_.size(), false);
  std::vector<TaskId> frontier{app.root_};
  seen[app.root_] = true;
  while (!frontier.empty()) {
    const TaskId node = frontier.back();
    frontier.pop_back();
    for (std::size_t e : app.outgoing_[node]) {
      const TaskId callee = app.edges_[e].callee;
      if (!seen[callee]) {
        seen[callee] = true;
        frontier.push_back(callee);
      }
    }
  }
  for (TaskId id = 0; id < app.tasks_.size(); ++id) {
    if (!seen[id]) throw ValidationError("unreachable task '" + app.tasks_[id].name + "'");
    if (!options.allow_shared_callees && id != app.root_ && indegree[id] != 1) {
      throw ValidationError("task '" + app.tasks_[id].name + "' has " + std::to_string(indegree[id]) +
                            " callers; call trees require exactly one");
    }
  }
  return app;
}

std::optional<TaskId> AppGraph::find(std::string_view task_name) const {
  for (TaskId id = 0; id < tasks_.size(); ++id) {
    if (tasks_[id].name == task_name) return id;
  }
  return std::nullopt;
}

TaskId AppGraph::id_of(std::string_view task_name) const {
  if (auto id = find(task_name)) return *id;
  throw ValidationError("unknown task '" + std::string(task_name) + "'");
}

AppGraph AppGraph::with_base_work(std::span<const double> base_work_ms) const {
  if (base_work_ms.size() != tasks_.size()) throw ValidationError("base work override must cover every task");
  AppGraph copy = *this;
  for (TaskId id = 0; id < tasks_.size(); ++id) {
    if (!(base_work_ms[id] > 0.0) || !std::isfinite(base_work_ms[id])) {
      throw ValidationError("non-positive duration for task '" + tasks_[id].name + "'");
    }
    copy.tasks_[id].base_work_ms = base_work_ms[id];
  }
  return copy;
}

AppGraph parse_app(std::string_view descriptor_text, ValidationOptions options) {
  AppDescriptor descriptor;
  try {
    const json doc = json::parse(descriptor_text);
    descriptor.name = doc.at("name").get<std::string>();
    descriptor.root = doc.at("root").get<std::string>();
    for (const auto& task : doc.at("tasks")) {
      descriptor.tasks.push_back({task.at("name").get<std::string>(), task.at("base_work_ms").get<double>()});
    }
    for (const auto& edge : doc.at("edges")) {
      descriptor.edges.push_back({edge.at("caller").get<std::string>(), edge.at("callee").get<std::string>(),
                                  parse_call_mode(edge.at("mode").get<std::string>())});
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed application descriptor: ") + e.what());
  }
  return AppGraph::from_descriptor(descriptor, options);
}

std::string serialize_app(const AppGraph& app) {
  json doc;
  doc["name"] = app.name();
  doc["root"] = app.task(app.root()).name;
  doc["tasks"] = json::array();
  for (const Task& task : app.tasks()) doc["tasks"].push_back({{"name", task.name}, {"base_work_ms", task.base_work_ms}});
  doc["edges"] = json::array();
  for (const CallEdge& edge : app.edges()) {
    doc["edges"].push_back({{"caller", app.task(edge.caller).name},
                            {"callee", app.task(edge.callee).name},
                            {"mode", std::string(to_string(edge.mode))}});
  }
  return doc.dump(2);
}

AppGraph builtin_app(BuiltinApp which) {
  constexpr auto kSync = CallMode::kSync;
  constexpr auto kAsync = CallMode::kAsync;
  auto tasks = [](std::string_view names) {
    std::vector<Task> out;
    for (char c : names) out.push_back({std::string(1, c), 100.0});
    return out;
  };

  AppDescriptor d;
  d.name = std::string(builtin_name(which));
  d.root = "A";
  switch (which) {
    case BuiltinApp::kLinear:
      d.tasks = tasks("ABCDE");
      d.edges = {{"A", "B", kSync}, {"B", "C", kSync}, {"C", "D", kSync}, {"D", "E", kSync}};
      break;
    case BuiltinApp::kParallelLinear:
      d.tasks = tasks("ABCDE");
      d.edges = {{"A", "B", kAsync}, {"A", "D", kAsync}, {"B", "C", kSync}, {"D", "E", kSync}};
      break;
    case BuiltinApp::kTree:
      // A fires the heavy async branch before blocking on the sync chain, so
      // both branches run in parallel after A computes.
      d.tasks = tasks("ABCDEFG");
      for (auto& task : d.tasks) {
        if (task.name == "E" || task.name == "F" || task.name == "G") task.base_work_ms = 400.0;
      }
      d.edges = {{"A", "C", kAsync}, {"A", "B", kSync},  {"B", "D", kSync},
                 {"D", "E", kSync},  {"C", "F", kAsync}, {"C", "G", kAsync}};
      break;
    case BuiltinApp::kAsync:
      d.tasks = tasks("ABCDE");
      d.edges = {{"A", "B", kAsync}, {"B", "C", kAsync}, {"A", "D", kAsync}, {"D", "E", kAsync}};
      break;
  }
  return AppGraph::from_descriptor(d);
}

BuiltinApp parse_builtin_name(std::string_view name) {
  for (BuiltinApp app : all_builtins()) {
    if (builtin_name(app) == name) return app;
  }
  if (name == "PARALLEL-LINEAR") return BuiltinApp::kParallelLinear;
  throw ValidationError("unknown built-in application '" + std::string(name) + "'");
}

std::string_view builtin_name(BuiltinApp which) {
  switch (which) {
    case BuiltinApp::kLinear:
      return "LINEAR";
    case BuiltinApp::kParallelLinear:
      return "PARALLEL_LINEAR";
    case BuiltinApp::kTree:
      return "TREE";
    case BuiltinApp::kAsync:
      return "ASYNC";
  }
  return "";
}

std::vector<BuiltinApp> all_builtins() {
  return {BuiltinApp::kLinear, BuiltinApp::kParallelLinear, BuiltinApp::kTree, BuiltinApp::kAsync};
}

std::vector<CallEdge> sync_skeleton(const AppGraph& app) {
  std::vector<CallEdge> out;
  std::copy_if(app.edges().begin(), app.edges().end(), std::back_inserter(out),
               [](const CallEdge& e) { return e.mode == CallMode::kSync; });
  return out;
}

}  // namespace fuseplan
