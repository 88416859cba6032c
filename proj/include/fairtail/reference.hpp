#ifndef FAIRTAIL_REFERENCE_HPP_
#define FAIRTAIL_REFERENCE_HPP_

#include <cstdint>
#include <vector>

#include "fairtail/popularity.hpp"
#include "fairtail/recommenders.hpp"

// Slow, obviously-correct serial implementations. The test suites compare
// the parallel kernels against these, and the benchmark target measures
// the gap. None of this is on any production path.
namespace fairtail::reference {

/// Cosine over dense copies of the two user vectors.
double similarity_dense(const InteractionMatrix& matrix, std::uint32_t u, std::uint32_t v);

/// UserKNN top-N for every user by the O(U^2 * I) route: dense similarity
/// to every other user, full top-k scan, then per-item neighbor scans.
RecommendationSet user_knn_top_n(const InteractionMatrix& matrix,
                                 const RecommenderConfig& config);

/// Predicted UserKNN score along the same brute-force route.
double user_knn_score(const InteractionMatrix& matrix, const RecommenderConfig& config,
                      std::uint32_t user, std::uint32_t item);

/// recommend() applied user by user on one thread.
RecommendationSet recommend_all_serial(const FittedModel& model,
                                       const RecommenderConfig& config);

/// Long-tail partition found by scanning every prefix of the popularity
/// ranking instead of cutting incrementally.
GroupPartition partition_all_prefixes(const PopularityTable& table, double beta1, double beta2);

}  // namespace fairtail::reference

#endif  // FAIRTAIL_REFERENCE_HPP_
