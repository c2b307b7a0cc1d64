#pragma once

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "fuseplan/app_model.hpp"
#include "fuseplan/error.hpp"
#include "fuseplan/fusion.hpp"

namespace fuseplan::testing {

// Asserts that `fn` throws ValidationError whose message contains `needle`.
template <typename Fn>
void expect_validation_error(Fn&& fn, const std::string& needle) {
  try {
    fn();
    ADD_FAILURE() << "expected ValidationError containing '" << needle << "'";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << "message: " << e.what();
  }
}

inline std::string letter(std::size_t i) { return std::string(1, static_cast<char>('A' + i)); }

// A(100) -> B(100) with the given call mode.
inline AppGraph two_task_app(CallMode mode) {
  AppDescriptor d;
  d.name = "S2";
  d.root = "A";
  d.tasks = {{"A", 100.0}, {"B", 100.0}};
  d.edges = {{"A", "B", mode}};
  return AppGraph::from_descriptor(d);
}

inline AppGraph single_task_app() {
  AppDescriptor d;
  d.name = "ONE";
  d.root = "A";
  d.tasks = {{"A", 100.0}};
  return AppGraph::from_descriptor(d);
}

struct TreeGenOptions {
  std::size_t min_tasks = 1;
  std::size_t max_tasks = 7;
  double async_probability = 0.5;
  // Integer work keeps simulated times exact at cpu 1.0.
  int min_work = 10;
  int max_work = 500;
};

// Random call tree: task i > 0 gets a uniformly drawn parent among 0..i-1,
// edge list order is shuffled so call order varies too.
inline AppGraph random_tree(std::mt19937_64& rng, const TreeGenOptions& opt = {}) {
  std::uniform_int_distribution<std::size_t> size_dist(opt.min_tasks, opt.max_tasks);
  std::uniform_int_distribution<int> work_dist(opt.min_work, opt.max_work);
  std::bernoulli_distribution async_dist(opt.async_probability);
  const std::size_t n = size_dist(rng);
  AppDescriptor d;
  d.name = "RANDOM";
  d.root = "A";
  for (std::size_t i = 0; i < n; ++i) d.tasks.push_back({letter(i), static_cast<double>(work_dist(rng))});
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> parent(0, i - 1);
    d.edges.push_back({letter(parent(rng)), letter(i), async_dist(rng) ? CallMode::kAsync : CallMode::kSync});
  }
  std::shuffle(d.edges.begin(), d.edges.end(), rng);
  return AppGraph::from_descriptor(d);
}

// Partition with the two groups joined by edge `edge` merged.
inline FusionPartition fuse_edge(const AppGraph& app, const FusionPartition& p, std::size_t edge) {
  const std::size_t a = p.group_of(app.edges()[edge].caller);
  const std::size_t b = p.group_of(app.edges()[edge].callee);
  std::vector<std::vector<TaskId>> groups;
  for (std::size_t g = 0; g < p.group_count(); ++g) {
    if (g == b) continue;
    groups.push_back(p.group(g));
    if (g == a) groups.back().insert(groups.back().end(), p.group(b).begin(), p.group(b).end());
  }
  return FusionPartition::from_groups(app, std::move(groups));
}

// Setup with every group at level 0 of `levels`.
inline FusionSetup uniform_setup(const FusionPartition& p, const std::vector<ResourceConfig>& levels) {
  return make_setup(p, std::vector<std::size_t>(p.group_count(), 0), levels);
}

inline std::vector<ResourceConfig> full_cpu_level() { return {ResourceConfig{1.0, 1769}}; }

}  // namespace fuseplan::testing
