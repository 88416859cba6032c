#ifndef FAIRTAIL_FAIRNESS_HPP_
#define FAIRTAIL_FAIRNESS_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "fairtail/dataset.hpp"
#include "fairtail/popularity.hpp"
#include "fairtail/recommenders.hpp"

namespace fairtail {

/// Group Average Popularity: the arithmetic mean of the members' shares.
/// Throws Error{EmptyGroup}.
double gap(std::span<const std::uint32_t> group, const PopularityTable& table);

/// Relative change of a group's GAP between training data and
/// recommendations. Positive values mean over-promotion, negative values
/// under-representation; -1 means the group never appears in any list.
/// Throws Error{ZeroBaseGap} when gap_data is zero.
double delta_gap(double gap_rec, double gap_data);

enum class ProviderMode { identity, mapped };

struct AuditConfig {
  std::vector<RecommenderConfig> algorithms;
  double beta1 = 0.3;
  double beta2 = 0.7;
  ScalingScheme scaling = ScalingScheme::raw;
  ProviderMode provider_mode = ProviderMode::identity;
  std::uint64_t master_seed = 0;
  int n = 10;

  void validate() const;  // throws Error{InvalidArgument}
};

struct GroupGap {
  double gap_data = 0.0;
  double gap_rec = 0.0;
  double delta_gap = 0.0;
};

struct AlgorithmAudit {
  RecommenderConfig config;              // effective per-algorithm settings
  std::array<GroupGap, 3> groups;        // indexed by Group
  double coverage = 0.0;                 // fraction of providers recommended at all
};

struct GapReport {
  AuditConfig config;
  GroupPartition partition;
  PopularityTable data_popularity;
  std::vector<AlgorithmAudit> algorithms;
  // dataset diagnostics
  std::uint32_t num_users = 0;
  std::uint32_t num_items = 0;
  std::uint32_t num_providers = 0;
  std::size_t num_interactions = 0;
  double total_events = 0.0;
};

/// Full audit: data-side popularity and partition are computed once from
/// the raw counts; each algorithm is fitted on the scaled matrix, its
/// recommendation-side popularity measured and GAP/delta-GAP reported per
/// group. Deterministic given the config, including across thread counts.
GapReport audit(const InteractionMatrix& matrix, const ItemProviderMap& map,
                const AuditConfig& config);

}  // namespace fairtail

#endif  // FAIRTAIL_FAIRNESS_HPP_
