#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fuseplan/app_model.hpp"

namespace fuseplan {

struct ResourceConfig {
  double cpu = 1.0;  // fraction of one vCPU
  std::int64_t memory_mb = 1769;

  friend bool operator==(const ResourceConfig&, const ResourceConfig&) = default;
  friend auto operator<=>(const ResourceConfig&, const ResourceConfig&) = default;
};

// The three AWS-Lambda-derived allocation points: (0.1, 128), (0.5, 832), (1.0, 1769).
std::vector<ResourceConfig> default_levels();

/// A partition of an application's tasks into groups that are each
/// connected along call edges (ignoring direction).
///
/// Groups are stored in canonical order: tasks inside a group sorted by
/// name, groups sorted by their joined label. Group index i is therefore
/// stable and matches the i-th level index of a setup string.
class FusionPartition {
 public:
  // Validates coverage, disjointness and connectivity; throws ValidationError.
  static FusionPartition from_groups(const AppGraph& app, std::vector<std::vector<TaskId>> groups);

  std::size_t group_count() const { return groups_.size(); }
  const std::vector<std::vector<TaskId>>& groups() const { return groups_; }
  const std::vector<TaskId>& group(std::size_t index) const { return groups_.at(index); }
  const std::string& group_label(std::size_t index) const { return labels_.at(index); }
  std::size_t group_of(TaskId task) const { return group_of_.at(task); }
  const std::string& name() const { return name_; }

  friend bool operator==(const FusionPartition& a, const FusionPartition& b) { return a.name_ == b.name_; }

 private:
  std::vector<std::vector<TaskId>> groups_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> group_of_;
  std::string name_;
};

struct FusionSetup {
  FusionPartition partition;
  // Per group, in canonical group order.
  std::vector<std::size_t> level_indices;
  std::vector<ResourceConfig> resources;

  const ResourceConfig& resource_of_group(std::size_t group) const { return resources.at(group); }
};

FusionSetup make_setup(FusionPartition partition, std::vector<std::size_t> level_indices,
                       const std::vector<ResourceConfig>& levels);

// Every connected partition exactly once, sorted by canonical name.
std::vector<FusionPartition> enumerate_partitions(const AppGraph& app);

/// Random-access view over partition x per-group level choices.
///
/// Setups are ordered by partition, then by the mixed-radix level tuple with
/// the first group as most significant digit. Only the partition list is
/// materialized; setups are built on demand.
class SetupSpace {
 public:
  SetupSpace(const AppGraph& app, std::vector<ResourceConfig> levels);

  std::size_t size() const { return offsets_.back(); }
  FusionSetup at(std::size_t index) const;

  const std::vector<FusionPartition>& partitions() const { return partitions_; }
  const std::vector<ResourceConfig>& levels() const { return levels_; }

 private:
  std::vector<FusionPartition> partitions_;
  std::vector<ResourceConfig> levels_;
  std::vector<std::size_t> offsets_;  // offsets_[p] = index of partition p's first setup
};

std::vector<FusionSetup> enumerate_setups(const AppGraph& app, const std::vector<ResourceConfig>& levels);

// R * (R + 1)^(n - 1): the number of setups of any call tree with n tasks.
std::uint64_t count_setups_tree(std::uint64_t task_count, std::uint64_t level_count);

inline const std::string& canonical_name(const FusionPartition& partition) { return partition.name(); }

FusionPartition parse_setup_name(const AppGraph& app, std::string_view name);

// "<partition>@<idx>[,<idx>...]", e.g. "ABDE,C,F,G@2,0,0,0".
std::string setup_string(const FusionSetup& setup);
FusionSetup parse_setup_string(const AppGraph& app, std::string_view text, const std::vector<ResourceConfig>& levels);

// The part of a setup string before '@'.
std::string_view partition_part(std::string_view setup_string);

}  // namespace fuseplan
