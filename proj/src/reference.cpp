#include "fairtail/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairtail/error.hpp"

namespace fairtail::reference {

namespace {

std::vector<double> dense_row(const InteractionMatrix& matrix, std::uint32_t u) {
  std::vector<double> dense(matrix.num_items(), 0.0);
  for (const auto& e : matrix.row(u)) dense[e.item] = e.value;
  return dense;
}

struct DenseStats {
  double global_mean = 0.0;
  std::vector<double> item_means;
};

DenseStats dense_means(const InteractionMatrix& matrix) {
  DenseStats stats;
  std::vector<double> sums(matrix.num_items(), 0.0);
  std::vector<std::uint32_t> counts(matrix.num_items(), 0);
  double total = 0.0;
  std::size_t entries = 0;
  for (std::uint32_t u = 0; u < matrix.num_users(); ++u) {
    for (const auto& e : matrix.row(u)) {
      sums[e.item] += e.value;
      ++counts[e.item];
      total += e.value;
      ++entries;
    }
  }
  stats.global_mean = entries == 0 ? 0.0 : total / static_cast<double>(entries);
  stats.item_means.resize(matrix.num_items());
  for (std::uint32_t i = 0; i < matrix.num_items(); ++i)
    stats.item_means[i] =
        counts[i] == 0 ? stats.global_mean : sums[i] / static_cast<double>(counts[i]);
  return stats;
}

std::vector<Neighbor> top_k_neighbors(const InteractionMatrix& matrix, std::uint32_t u, int k) {
  std::vector<Neighbor> all;
  for (std::uint32_t v = 0; v < matrix.num_users(); ++v) {
    if (v == u) continue;
    if (matrix.row(u).empty() || matrix.row(v).empty()) continue;
    double sim = similarity_dense(matrix, u, v);
    if (sim > 0.0) all.push_back({v, sim});
  }
  std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.user < b.user;
  });
  if (all.size() > static_cast<std::size_t>(k)) all.resize(static_cast<std::size_t>(k));
  return all;
}

double neighbor_score(const InteractionMatrix& matrix, const std::vector<Neighbor>& neighbors,
                      const DenseStats& stats, std::uint32_t item) {
  double num = 0.0, den = 0.0;
  for (const auto& nb : neighbors) {
    double rating = matrix.value_at(nb.user, item);
    if (rating > 0.0) {
      num += nb.similarity * rating;
      den += nb.similarity;
    }
  }
  if (den > 0.0) return num / den;
  return stats.item_means[item];
}

}  // namespace

double similarity_dense(const InteractionMatrix& matrix, std::uint32_t u, std::uint32_t v) {
  auto a = dense_row(matrix, u);
  auto b = dense_row(matrix, v);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0)
    throw Error(ErrorCode::ZeroVector, "user with no interactions has no direction");
  double sim = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::min(sim, 1.0);
}

RecommendationSet user_knn_top_n(const InteractionMatrix& matrix,
                                 const RecommenderConfig& config) {
  DenseStats stats = dense_means(matrix);
  RecommendationSet recs;
  recs.lists.resize(matrix.num_users());
  for (std::uint32_t u = 0; u < matrix.num_users(); ++u) {
    auto neighbors = top_k_neighbors(matrix, u, config.k);
    std::vector<ScoredItem> scored;
    for (std::uint32_t i = 0; i < matrix.num_items(); ++i) {
      if (config.exclude_seen && matrix.has(u, i)) continue;
      scored.push_back({i, neighbor_score(matrix, neighbors, stats, i)});
    }
    std::sort(scored.begin(), scored.end(), [](const ScoredItem& a, const ScoredItem& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.item < b.item;
    });
    if (scored.size() > static_cast<std::size_t>(config.n))
      scored.resize(static_cast<std::size_t>(config.n));
    recs.lists[u] = std::move(scored);
  }
  return recs;
}

double user_knn_score(const InteractionMatrix& matrix, const RecommenderConfig& config,
                      std::uint32_t user, std::uint32_t item) {
  DenseStats stats = dense_means(matrix);
  auto neighbors = top_k_neighbors(matrix, user, config.k);
  return neighbor_score(matrix, neighbors, stats, item);
}

RecommendationSet recommend_all_serial(const FittedModel& model,
                                       const RecommenderConfig& config) {
  RecommendationSet recs;
  recs.lists.resize(model.matrix->num_users());
  for (std::uint32_t u = 0; u < model.matrix->num_users(); ++u)
    recs.lists[u] = recommend(model, u, config);
  return recs;
}

GroupPartition partition_all_prefixes(const PopularityTable& table, double beta1, double beta2) {
  if (!(0.0 < beta1 && beta1 < beta2 && beta2 < 1.0))
    throw Error(ErrorCode::InvalidArgument, "cutting points must satisfy 0 < beta1 < beta2 < 1");

  std::vector<std::uint32_t> order(table.num_providers());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (table.counts[a] != table.counts[b]) return table.counts[a] > table.counts[b];
    return a < b;
  });

  std::vector<double> prefix(order.size());
  double cumulative = 0.0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    cumulative += table.shares[order[r]];
    prefix[r] = cumulative;
  }

  std::size_t head_end = order.size();
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (prefix[r] >= beta1) {
      head_end = r + 1;
      break;
    }
  }
  std::size_t mid_end = order.size();
  if (head_end < order.size() && prefix[head_end - 1] >= beta2) {
    mid_end = head_end;  // empty mid, reported as degenerate below
  } else {
    for (std::size_t r = head_end; r < order.size(); ++r) {
      if (prefix[r] >= beta2) {
        mid_end = r + 1;
        break;
      }
    }
  }

  GroupPartition partition;
  partition.beta1 = beta1;
  partition.beta2 = beta2;
  partition.group_of.assign(table.num_providers(), Group::tail);
  partition.head.assign(order.begin(), order.begin() + head_end);
  partition.mid.assign(order.begin() + head_end, order.begin() + mid_end);
  partition.tail.assign(order.begin() + mid_end, order.end());

  if (partition.head.empty() || partition.mid.empty() || partition.tail.empty())
    throw Error(ErrorCode::DegeneratePartition,
                "group sizes " + std::to_string(partition.head.size()) + "/" +
                    std::to_string(partition.mid.size()) + "/" +
                    std::to_string(partition.tail.size()));
  for (std::uint32_t p : partition.head) partition.group_of[p] = Group::head;
  for (std::uint32_t p : partition.mid) partition.group_of[p] = Group::mid;
  return partition;
}

}  // namespace fairtail::reference
