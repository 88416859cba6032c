#ifndef FAIRTAIL_POPULARITY_HPP_
#define FAIRTAIL_POPULARITY_HPP_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fairtail/dataset.hpp"
#include "fairtail/recommenders.hpp"

namespace fairtail {

enum class PopularitySide { data, recommendations };

/// Per-provider event (or recommendation-slot) counts and normalized
/// shares phi = count / total. Shares sum to 1 within 1e-12.
struct PopularityTable {
  PopularitySide side = PopularitySide::data;
  std::vector<double> counts;
  std::vector<double> shares;
  double total = 0.0;

  std::uint32_t num_providers() const { return static_cast<std::uint32_t>(counts.size()); }
};

/// Data-side popularity: a provider's count is the total number of events
/// over its items.
PopularityTable compute_popularity(const InteractionMatrix& matrix, const ItemProviderMap& map);

/// Recommendation-side popularity: a provider's count is the number of
/// list slots its items occupy across all users. Providers that are never
/// recommended keep count 0.
PopularityTable recommendation_popularity(const RecommendationSet& recs,
                                          const ItemProviderMap& map);

enum class Group : std::uint8_t { head = 0, mid = 1, tail = 2 };

/// Output group labels match the conventional High-P/Mid-P/Low-P naming.
const char* group_name(Group group);

/// Disjoint head/mid/tail provider sets (stored in popularity rank order)
/// cut at cumulative shares beta1 < beta2.
struct GroupPartition {
  std::vector<std::uint32_t> head;
  std::vector<std::uint32_t> mid;
  std::vector<std::uint32_t> tail;
  std::vector<Group> group_of;  // indexed by provider
  double beta1 = 0.0;
  double beta2 = 0.0;

  const std::vector<std::uint32_t>& members(Group group) const;
};

/// Sorts providers by descending count (ascending index on ties); head is
/// the shortest prefix reaching cumulative share beta1, mid the shortest
/// following segment reaching beta2, tail the rest. Throws
/// Error{DegeneratePartition} when any group comes out empty.
GroupPartition partition_long_tail(const PopularityTable& table, double beta1, double beta2);

/// Rank/provider/count/share/cumulative_share CSV, descending by count;
/// the per-rank data behind a long-tail popularity plot.
void write_popularity_csv(std::ostream& out, const PopularityTable& table,
                          const std::vector<std::string>& provider_names);

/// provider,group CSV in provider-index order.
void write_partition_csv(std::ostream& out, const GroupPartition& partition,
                         const std::vector<std::string>& provider_names);

}  // namespace fairtail

#endif  // FAIRTAIL_POPULARITY_HPP_
