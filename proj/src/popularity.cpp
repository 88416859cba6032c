#include "fairtail/popularity.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "fairtail/error.hpp"
#include "fairtail/format.hpp"

namespace fairtail {

namespace {

void normalize(PopularityTable& table) {
  table.total = 0.0;
  for (double c : table.counts) table.total += c;
  if (!(table.total > 0.0))
    throw Error(ErrorCode::InvalidArgument, "popularity total must be positive");
  table.shares.resize(table.counts.size());
  for (std::size_t p = 0; p < table.counts.size(); ++p)
    table.shares[p] = table.counts[p] / table.total;
}

// Providers in descending-count order, ascending index on ties.
std::vector<std::uint32_t> popularity_order(const PopularityTable& table) {
  std::vector<std::uint32_t> order(table.num_providers());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (table.counts[a] != table.counts[b]) return table.counts[a] > table.counts[b];
    return a < b;
  });
  return order;
}

}  // namespace

PopularityTable compute_popularity(const InteractionMatrix& matrix, const ItemProviderMap& map) {
  if (map.provider_of_item.size() != matrix.num_items())
    throw Error(ErrorCode::InvalidArgument, "provider map does not cover the matrix items");
  PopularityTable table;
  table.side = PopularitySide::data;
  table.counts.assign(map.num_providers(), 0.0);
  for (std::uint32_t u = 0; u < matrix.num_users(); ++u)
    for (const auto& e : matrix.row(u)) table.counts[map.provider_of_item[e.item]] += e.value;
  normalize(table);
  return table;
}

PopularityTable recommendation_popularity(const RecommendationSet& recs,
                                          const ItemProviderMap& map) {
  PopularityTable table;
  table.side = PopularitySide::recommendations;
  table.counts.assign(map.num_providers(), 0.0);
  for (const auto& list : recs.lists)
    for (const auto& slot : list) table.counts[map.provider_of_item[slot.item]] += 1.0;
  normalize(table);
  return table;
}

const char* group_name(Group group) {
  switch (group) {
    case Group::head: return "High-P";
    case Group::mid: return "Mid-P";
    case Group::tail: return "Low-P";
  }
  return "unknown";
}

const std::vector<std::uint32_t>& GroupPartition::members(Group group) const {
  switch (group) {
    case Group::head: return head;
    case Group::mid: return mid;
    default: return tail;
  }
}

GroupPartition partition_long_tail(const PopularityTable& table, double beta1, double beta2) {
  if (!(0.0 < beta1 && beta1 < beta2 && beta2 < 1.0))
    throw Error(ErrorCode::InvalidArgument, "cutting points must satisfy 0 < beta1 < beta2 < 1");
  if (table.side != PopularitySide::data)
    throw Error(ErrorCode::InvalidArgument, "partition is defined on data-side popularity");

  auto order = popularity_order(table);
  GroupPartition partition;
  partition.beta1 = beta1;
  partition.beta2 = beta2;
  partition.group_of.assign(table.num_providers(), Group::tail);

  double cumulative = 0.0;
  std::size_t rank = 0;
  for (; rank < order.size(); ++rank) {
    partition.head.push_back(order[rank]);
    cumulative += table.shares[order[rank]];
    if (cumulative >= beta1) {
      ++rank;
      break;
    }
  }
  for (; rank < order.size() && cumulative < beta2; ++rank) {
    partition.mid.push_back(order[rank]);
    cumulative += table.shares[order[rank]];
  }
  for (; rank < order.size(); ++rank) partition.tail.push_back(order[rank]);

  if (partition.head.empty() || partition.mid.empty() || partition.tail.empty())
    throw Error(ErrorCode::DegeneratePartition,
                "group sizes " + std::to_string(partition.head.size()) + "/" +
                    std::to_string(partition.mid.size()) + "/" +
                    std::to_string(partition.tail.size()));

  for (std::uint32_t p : partition.head) partition.group_of[p] = Group::head;
  for (std::uint32_t p : partition.mid) partition.group_of[p] = Group::mid;
  return partition;
}

void write_popularity_csv(std::ostream& out, const PopularityTable& table,
                          const std::vector<std::string>& provider_names) {
  out << "rank,provider,count,share,cumulative_share\n";
  auto order = popularity_order(table);
  double cumulative = 0.0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    std::uint32_t p = order[rank];
    cumulative += table.shares[p];
    out << (rank + 1) << ',' << provider_names[p] << ',' << format_count(table.counts[p]) << ','
        << format_double(table.shares[p]) << ',' << format_double(cumulative) << '\n';
  }
}

void write_partition_csv(std::ostream& out, const GroupPartition& partition,
                         const std::vector<std::string>& provider_names) {
  out << "provider,group\n";
  for (std::size_t p = 0; p < partition.group_of.size(); ++p)
    out << provider_names[p] << ',' << group_name(partition.group_of[p]) << '\n';
}

}  // namespace fairtail
