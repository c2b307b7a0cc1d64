#include "fuseplan/fusion.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <numeric>

#include "fuseplan/error.hpp"

namespace fuseplan {

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t begin = 0;
  while (true) {
    const std::size_t end = text.find(sep, begin);
    parts.push_back(text.substr(begin, end - begin));
    if (end == std::string_view::npos) break;
    begin = end + 1;
  }
  return parts;
}

bool group_connected(const AppGraph& app, const std::vector<TaskId>& group) {
  std::vector<bool> in_group(app.task_count(), false);
  for (TaskId t : group) in_group[t] = true;
  DisjointSets sets(app.task_count());
  for (const CallEdge& e : app.edges()) {
    if (in_group[e.caller] && in_group[e.callee]) sets.unite(e.caller, e.callee);
  }
  const std::size_t root = sets.find(group.front());
  return std::all_of(group.begin(), group.end(), [&](TaskId t) { return sets.find(t) == root; });
}

}  // namespace

std::vector<ResourceConfig> default_levels() { return {{0.1, 128}, {0.5, 832}, {1.0, 1769}}; }

FusionPartition FusionPartition::from_groups(const AppGraph& app, std::vector<std::vector<TaskId>> groups) {
  FusionPartition p;
  p.group_of_.assign(app.task_count(), std::numeric_limits<std::size_t>::max());
  std::size_t covered = 0;
  for (const auto& group : groups) {
    if (group.empty()) throw ValidationError("empty fusion group");
    for (TaskId t : group) {
      if (t >= app.task_count()) throw ValidationError("unknown task id " + std::to_string(t));
      if (p.group_of_[t] != std::numeric_limits<std::size_t>::max()) {
        throw ValidationError("task '" + app.task(t).name + "' appears twice");
      }
      p.group_of_[t] = 0;
      ++covered;
    }
  }
  if (covered != app.task_count()) {
    for (TaskId t = 0; t < app.task_count(); ++t) {
      if (p.group_of_[t] == std::numeric_limits<std::size_t>::max()) {
        throw ValidationError("task '" + app.task(t).name + "' is not assigned to a group");
      }
    }
  }

  const char* joiner = app.has_multichar_names() ? "+" : "";
  std::vector<std::pair<std::string, std::vector<TaskId>>> labelled;
  for (auto& group : groups) {
    std::sort(group.begin(), group.end(),
              [&](TaskId a, TaskId b) { return app.task(a).name < app.task(b).name; });
    std::string label;
    for (TaskId t : group) {
      if (!label.empty()) label += joiner;
      label += app.task(t).name;
    }
    if (!group_connected(app, group)) throw ValidationError("group '" + label + "' not connected");
    labelled.emplace_back(std::move(label), std::move(group));
  }
  std::sort(labelled.begin(), labelled.end());

  for (std::size_t g = 0; g < labelled.size(); ++g) {
    if (g > 0) p.name_ += ',';
    p.name_ += labelled[g].first;
    for (TaskId t : labelled[g].second) p.group_of_[t] = g;
    p.labels_.push_back(std::move(labelled[g].first));
    p.groups_.push_back(std::move(labelled[g].second));
  }
  return p;
}

FusionSetup make_setup(FusionPartition partition, std::vector<std::size_t> level_indices,
                       const std::vector<ResourceConfig>& levels) {
  if (level_indices.size() != partition.group_count()) {
    throw ValidationError("setup needs one level per group (" + std::to_string(partition.group_count()) + ")");
  }
  FusionSetup setup{std::move(partition), std::move(level_indices), {}};
  for (std::size_t idx : setup.level_indices) {
    if (idx >= levels.size()) throw ValidationError("level index " + std::to_string(idx) + " out of range");
    setup.resources.push_back(levels[idx]);
  }
  return setup;
}

std::vector<FusionPartition> enumerate_partitions(const AppGraph& app) {
  const std::size_t m = app.edges().size();
  if (m > 30) throw ValidationError("too many edges for exhaustive enumeration (" + std::to_string(m) + ")");

  std::map<std::string, FusionPartition> unique;
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << m); ++subset) {
    DisjointSets sets(app.task_count());
    for (std::size_t e = 0; e < m; ++e) {
      if (subset >> e & 1U) sets.unite(app.edges()[e].caller, app.edges()[e].callee);
    }
    std::vector<std::vector<TaskId>> groups;
    std::vector<std::size_t> slot(app.task_count(), std::numeric_limits<std::size_t>::max());
    for (TaskId t = 0; t < app.task_count(); ++t) {
      const std::size_t root = sets.find(t);
      if (slot[root] == std::numeric_limits<std::size_t>::max()) {
        slot[root] = groups.size();
        groups.emplace_back();
      }
      groups[slot[root]].push_back(t);
    }
    FusionPartition p = FusionPartition::from_groups(app, std::move(groups));
    const std::string key = p.name();
    unique.try_emplace(key, std::move(p));
  }

  std::vector<FusionPartition> out;
  out.reserve(unique.size());
  for (auto& [name, p] : unique) out.push_back(std::move(p));
  return out;
}

SetupSpace::SetupSpace(const AppGraph& app, std::vector<ResourceConfig> levels)
    : partitions_(enumerate_partitions(app)), levels_(std::move(levels)) {
  if (levels_.empty()) throw ValidationError("empty level list");
  offsets_.push_back(0);
  for (const auto& p : partitions_) {
    std::size_t count = 1;
    for (std::size_t g = 0; g < p.group_count(); ++g) {
      if (count > std::numeric_limits<std::size_t>::max() / levels_.size()) {
        throw ValidationError("setup space too large");
      }
      count *= levels_.size();
    }
    offsets_.push_back(offsets_.back() + count);
  }
}

FusionSetup SetupSpace::at(std::size_t index) const {
  if (index >= size()) throw ValidationError("setup index out of range");
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
  const auto p = static_cast<std::size_t>(it - offsets_.begin()) - 1;
  std::size_t local = index - offsets_[p];
  std::vector<std::size_t> digits(partitions_[p].group_count());
  for (std::size_t g = digits.size(); g-- > 0;) {
    digits[g] = local % levels_.size();
    local /= levels_.size();
  }
  return make_setup(partitions_[p], std::move(digits), levels_);
}

std::vector<FusionSetup> enumerate_setups(const AppGraph& app, const std::vector<ResourceConfig>& levels) {
  const SetupSpace space(app, levels);
  std::vector<FusionSetup> out;
  out.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) out.push_back(space.at(i));
  return out;
}

std::uint64_t count_setups_tree(std::uint64_t task_count, std::uint64_t level_count) {
  if (task_count == 0 || level_count == 0) throw ValidationError("task and level counts must be positive");
  std::uint64_t total = level_count;
  for (std::uint64_t i = 1; i < task_count; ++i) {
    if (total > std::numeric_limits<std::uint64_t>::max() / (level_count + 1)) {
      throw ValidationError("setup count overflows 64 bits");
    }
    total *= level_count + 1;
  }
  return total;
}

FusionPartition parse_setup_name(const AppGraph& app, std::string_view name) {
  std::vector<std::vector<TaskId>> groups;
  for (std::string_view token : split(name, ',')) {
    if (token.empty()) throw ValidationError("empty group in '" + std::string(name) + "'");
    std::vector<TaskId> group;
    if (app.has_multichar_names()) {
      for (std::string_view task : split(token, '+')) group.push_back(app.id_of(task));
    } else {
      for (char c : token) group.push_back(app.id_of(std::string_view(&c, 1)));
    }
    groups.push_back(std::move(group));
  }
  return FusionPartition::from_groups(app, std::move(groups));
}

std::string setup_string(const FusionSetup& setup) {
  std::string out = setup.partition.name();
  out += '@';
  for (std::size_t g = 0; g < setup.level_indices.size(); ++g) {
    if (g > 0) out += ',';
    out += std::to_string(setup.level_indices[g]);
  }
  return out;
}

std::string_view partition_part(std::string_view setup_string) {
  return setup_string.substr(0, setup_string.rfind('@'));
}

FusionSetup parse_setup_string(const AppGraph& app, std::string_view text, const std::vector<ResourceConfig>& levels) {
  const std::size_t at = text.rfind('@');
  if (at == std::string_view::npos) throw ValidationError("setup string '" + std::string(text) + "' lacks '@'");
  FusionPartition partition = parse_setup_name(app, text.substr(0, at));
  // Level indices are positional, so the group order must already be canonical.
  if (partition.name() != text.substr(0, at)) {
    throw ValidationError("setup '" + std::string(text) + "' is not in canonical order (expected '" +
                          partition.name() + "')");
  }
  std::vector<std::size_t> indices;
  for (std::string_view digit : split(text.substr(at + 1), ',')) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(digit.data(), digit.data() + digit.size(), value);
    if (ec != std::errc() || ptr != digit.data() + digit.size() || digit.empty()) {
      throw ValidationError("bad level index '" + std::string(digit) + "'");
    }
    indices.push_back(value);
  }
  return make_setup(std::move(partition), std::move(indices), levels);
}

}  // namespace fuseplan
