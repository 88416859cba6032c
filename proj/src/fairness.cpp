#include "fairtail/fairness.hpp"

#include <string>

#include "fairtail/error.hpp"
#include "fairtail/rng.hpp"

namespace fairtail {

double gap(std::span<const std::uint32_t> group, const PopularityTable& table) {
  if (group.empty()) throw Error(ErrorCode::EmptyGroup, "GAP of an empty group is undefined");
  double sum = 0.0;
  for (std::uint32_t p : group) {
    if (p >= table.num_providers())
      throw Error(ErrorCode::IndexOutOfRange, "provider " + std::to_string(p) + " not in table");
    sum += table.shares[p];
  }
  return sum / static_cast<double>(group.size());
}

double delta_gap(double gap_rec, double gap_data) {
  if (gap_data == 0.0)
    throw Error(ErrorCode::ZeroBaseGap, "data-side GAP is zero");
  return (gap_rec - gap_data) / gap_data;
}

void AuditConfig::validate() const {
  if (algorithms.empty())
    throw Error(ErrorCode::InvalidArgument, "audit needs at least one algorithm");
  if (!(0.0 < beta1 && beta1 < beta2 && beta2 < 1.0))
    throw Error(ErrorCode::InvalidArgument, "cutting points must satisfy 0 < beta1 < beta2 < 1");
  for (const auto& rec : algorithms) rec.validate();
}

GapReport audit(const InteractionMatrix& matrix, const ItemProviderMap& map,
                const AuditConfig& config) {
  config.validate();

  GapReport report;
  report.config = config;
  report.num_users = matrix.num_users();
  report.num_items = matrix.num_items();
  report.num_providers = map.num_providers();
  report.num_interactions = matrix.num_entries();
  report.total_events = matrix.total_value();

  // Popularity is always measured on the raw counts; scaling only changes
  // what the recommenders train on.
  report.data_popularity = compute_popularity(matrix, map);
  report.partition = partition_long_tail(report.data_popularity, config.beta1, config.beta2);

  InteractionMatrix scaled = scale_ratings(matrix, config.scaling);

  for (std::size_t slot = 0; slot < config.algorithms.size(); ++slot) {
    RecommenderConfig rec_config = config.algorithms[slot];
    rec_config.n = config.n;
    // one master seed drives every algorithm through a fixed per-slot mix
    rec_config.seed = derive_seed(config.master_seed, slot);

    FittedModel model = fit(rec_config, scaled);
    RecommendationSet recs = recommend_all(model, rec_config);
    PopularityTable rec_popularity = recommendation_popularity(recs, map);

    AlgorithmAudit entry;
    entry.config = rec_config;
    for (Group g : {Group::head, Group::mid, Group::tail}) {
      const auto& members = report.partition.members(g);
      GroupGap cell;
      cell.gap_data = gap(members, report.data_popularity);
      cell.gap_rec = gap(members, rec_popularity);
      cell.delta_gap = delta_gap(cell.gap_rec, cell.gap_data);
      entry.groups[static_cast<std::size_t>(g)] = cell;
    }
    std::uint32_t touched = 0;
    for (double c : rec_popularity.counts)
      if (c > 0.0) ++touched;
    entry.coverage = static_cast<double>(touched) / static_cast<double>(map.num_providers());
    report.algorithms.push_back(std::move(entry));
  }
  return report;
}

}  // namespace fairtail
