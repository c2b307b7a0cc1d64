#include <gtest/gtest.h>

#include <random>

#include "fuseplan/app_model.hpp"
#include "test_support.hpp"

namespace fuseplan {
namespace {

using testing::expect_validation_error;

constexpr const char* kMinimal = R"({"name": "S2", "root": "A",
  "tasks": [{"name": "A", "base_work_ms": 100}, {"name": "B", "base_work_ms": 100}],
  "edges": [{"caller": "A", "callee": "B", "mode": "sync"}]})";

TEST(ParseApp, MinimalDescriptor) {
  const AppGraph app = parse_app(kMinimal);
  EXPECT_EQ(app.name(), "S2");
  EXPECT_EQ(app.task_count(), 2u);
  ASSERT_EQ(app.edges().size(), 1u);
  EXPECT_EQ(app.edges()[0].mode, CallMode::kSync);
  EXPECT_EQ(app.task(app.root()).name, "A");
}

TEST(ParseApp, RejectsCycle) {
  expect_validation_error(
      [] {
        parse_app(R"({"name": "C", "root": "A",
          "tasks": [{"name": "A", "base_work_ms": 1}, {"name": "B", "base_work_ms": 1}],
          "edges": [{"caller": "A", "callee": "B", "mode": "sync"}, {"caller": "B", "callee": "A", "mode": "sync"}]})");
      },
      "directed cycle");
  expect_validation_error(
      [] {
        parse_app(R"({"name": "C", "root": "A", "tasks": [{"name": "A", "base_work_ms": 1}],
          "edges": [{"caller": "A", "callee": "A", "mode": "async"}]})");
      },
      "directed cycle");
}

TEST(ParseApp, RejectsBadInput) {
  expect_validation_error([] { parse_app("{not json"); }, "malformed");
  expect_validation_error(
      [] {
        parse_app(R"({"name": "X", "root": "A",
          "tasks": [{"name": "A", "base_work_ms": 1}, {"name": "A", "base_work_ms": 1}], "edges": []})");
      },
      "duplicate task name");
  expect_validation_error(
      [] {
        parse_app(R"({"name": "X", "root": "A", "tasks": [{"name": "A", "base_work_ms": 1}],
          "edges": [{"caller": "A", "callee": "Z", "mode": "sync"}]})");
      },
      "unknown task 'Z'");
  expect_validation_error(
      [] {
        parse_app(R"({"name": "X", "root": "A",
          "tasks": [{"name": "A", "base_work_ms": 1}, {"name": "B", "base_work_ms": 1}],
          "edges": [{"caller": "A", "callee": "B", "mode": "later"}]})");
      },
      "unknown mode");
  expect_validation_error(
      [] {
        parse_app(R"({"name": "X", "root": "A",
          "tasks": [{"name": "A", "base_work_ms": 1}, {"name": "B", "base_work_ms": 1}], "edges": []})");
      },
      "unreachable task 'B'");
  expect_validation_error(
      [] { parse_app(R"({"name": "X", "root": "A", "tasks": [{"name": "A", "base_work_ms": 0}], "edges": []})"); },
      "positive");
  expect_validation_error(
      [] { parse_app(R"({"name": "X", "root": "A", "tasks": [{"name": "A,B", "base_work_ms": 1}], "edges": []})"); },
      "must not contain");
}

TEST(ParseApp, SharedCalleeNeedsOptIn) {
  constexpr const char* kDiamond = R"({"name": "D", "root": "A",
    "tasks": [{"name": "A", "base_work_ms": 1}, {"name": "B", "base_work_ms": 1},
              {"name": "C", "base_work_ms": 1}, {"name": "D", "base_work_ms": 1}],
    "edges": [{"caller": "A", "callee": "B", "mode": "sync"}, {"caller": "A", "callee": "C", "mode": "sync"},
              {"caller": "B", "callee": "D", "mode": "sync"}, {"caller": "C", "callee": "D", "mode": "async"}]})";
  expect_validation_error([&] { parse_app(kDiamond); }, "D");
  EXPECT_EQ(parse_app(kDiamond, {.allow_shared_callees = true}).edges().size(), 4u);
}

TEST(ParseApp, EdgeOrderFollowsDescriptor) {
  const AppGraph app = parse_app(R"({"name": "X", "root": "A",
    "tasks": [{"name": "A", "base_work_ms": 1}, {"name": "B", "base_work_ms": 1}, {"name": "C", "base_work_ms": 1}],
    "edges": [{"caller": "A", "callee": "C", "mode": "async"}, {"caller": "A", "callee": "B", "mode": "sync"}]})");
  const auto out = app.outgoing(app.id_of("A"));
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(app.task(app.edges()[out[0]].callee).name, "C");
  EXPECT_EQ(app.task(app.edges()[out[1]].callee).name, "B");
}

std::size_t count_mode(const AppGraph& app, CallMode mode) {
  return static_cast<std::size_t>(
      std::count_if(app.edges().begin(), app.edges().end(), [&](const CallEdge& e) { return e.mode == mode; }));
}

TEST(Builtins, Shapes) {
  const AppGraph linear = builtin_app(BuiltinApp::kLinear);
  EXPECT_EQ(linear.task_count(), 5u);
  EXPECT_EQ(count_mode(linear, CallMode::kSync), 4u);

  const AppGraph async = builtin_app(BuiltinApp::kAsync);
  EXPECT_EQ(async.task_count(), 5u);
  EXPECT_EQ(count_mode(async, CallMode::kAsync), 4u);

  const AppGraph tree = builtin_app(BuiltinApp::kTree);
  EXPECT_EQ(tree.task_count(), 7u);
  EXPECT_EQ(count_mode(tree, CallMode::kSync), 3u);
  EXPECT_EQ(count_mode(tree, CallMode::kAsync), 3u);
  for (const char* heavy : {"E", "F", "G"}) EXPECT_EQ(tree.task(tree.id_of(heavy)).base_work_ms, 400.0);
  EXPECT_EQ(tree.task(tree.id_of("A")).base_work_ms, 100.0);

  const AppGraph pl = builtin_app(BuiltinApp::kParallelLinear);
  EXPECT_EQ(pl.task_count(), 5u);
  EXPECT_EQ(count_mode(pl, CallMode::kSync), 2u);
}

TEST(Builtins, PureAndNamed) {
  for (BuiltinApp which : all_builtins()) {
    EXPECT_EQ(builtin_app(which), builtin_app(which));
    EXPECT_EQ(parse_builtin_name(builtin_name(which)), which);
    EXPECT_EQ(parse_app(serialize_app(builtin_app(which))), builtin_app(which));
  }
  EXPECT_EQ(parse_builtin_name("PARALLEL-LINEAR"), BuiltinApp::kParallelLinear);
  expect_validation_error([] { parse_builtin_name("CHAIN"); }, "unknown built-in");
}

std::vector<std::string> skeleton_names(const AppGraph& app) {
  std::vector<std::string> out;
  for (const CallEdge& e : sync_skeleton(app)) out.push_back(app.task(e.caller).name + app.task(e.callee).name);
  return out;
}

TEST(SyncSkeleton, Examples) {
  EXPECT_EQ(sync_skeleton(builtin_app(BuiltinApp::kLinear)).size(), 4u);
  EXPECT_TRUE(sync_skeleton(builtin_app(BuiltinApp::kAsync)).empty());
  EXPECT_EQ(skeleton_names(builtin_app(BuiltinApp::kTree)), (std::vector<std::string>{"AB", "BD", "DE"}));
}

TEST(AppGraph, WithBaseWork) {
  const AppGraph app = testing::two_task_app(CallMode::kSync);
  const std::vector<double> work{7.0, 9.0};
  const AppGraph changed = app.with_base_work(work);
  EXPECT_EQ(changed.task(1).base_work_ms, 9.0);
  EXPECT_EQ(changed.edges(), app.edges());
  const std::vector<double> bad{7.0, -1.0};
  expect_validation_error([&] { app.with_base_work(bad); }, "non-positive");
}

TEST(AppGraphProperty, SerializeRoundTripOnRandomTrees) {
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 300; ++i) {
    const AppGraph app = testing::random_tree(rng, {.min_tasks = 1, .max_tasks = 12});
    const AppGraph again = parse_app(serialize_app(app));
    ASSERT_EQ(again, app) << serialize_app(app);
  }
}

TEST(AppGraphProperty, MulticharNamesFlagged) {
  AppDescriptor d{"M", "root", {{"root", 1.0}, {"leaf", 1.0}}, {{"root", "leaf", CallMode::kSync}}};
  EXPECT_TRUE(AppGraph::from_descriptor(d).has_multichar_names());
  EXPECT_FALSE(builtin_app(BuiltinApp::kTree).has_multichar_names());
}

}  // namespace
}  // namespace fuseplan
