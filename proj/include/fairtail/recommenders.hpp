#ifndef FAIRTAIL_RECOMMENDERS_HPP_
#define FAIRTAIL_RECOMMENDERS_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fairtail/dataset.hpp"

namespace fairtail {

enum class Algorithm { UserKnn, Nmf, UserItemAvg, MostPop, Random };

const char* algorithm_name(Algorithm algorithm);
/// Parses a lowercase tag ("userknn", "nmf", "useritemavg", "mostpop",
/// "random"). Throws Error{InvalidArgument} on anything else.
Algorithm parse_algorithm(const std::string& name);

struct RecommenderConfig {
  Algorithm algorithm = Algorithm::MostPop;
  int k = 40;          // UserKNN neighborhood size
  int factors = 15;    // NMF latent dimension
  int epochs = 50;     // NMF multiplicative-update passes
  double reg = 0.06;   // NMF L2 regularization weight
  std::uint64_t seed = 0;
  int n = 10;          // recommendation list length
  bool exclude_seen = true;
  // MostPop hands everyone the same global top-n list and ignores
  // exclude_seen unless this override is set.
  bool mostpop_respect_exclude_seen = false;

  void validate() const;  // throws Error{InvalidArgument}
};

struct Neighbor {
  std::uint32_t user = 0;
  double similarity = 0.0;
};

/// State learned by fit(). Only the fields of the fitted algorithm are
/// populated. Immutable after fit; score/recommend are read-only and safe
/// to call concurrently.
struct FittedModel {
  Algorithm algorithm = Algorithm::MostPop;
  RecommenderConfig config;
  std::shared_ptr<const InteractionMatrix> matrix;

  // UserKNN: per user, neighbors with positive similarity, strongest first.
  std::vector<std::vector<Neighbor>> neighbors;

  // NMF: row-major factors, user_factors is U x F, item_factors is I x F.
  std::vector<double> user_factors;
  std::vector<double> item_factors;
  double initial_objective = 0.0;
  double final_objective = 0.0;

  // UserItemAvg (+ fallbacks for UserKNN)
  double global_mean = 0.0;
  std::vector<double> user_means;
  std::vector<double> item_means;

  // MostPop: item indices by descending total play value, plus the totals.
  std::vector<std::uint32_t> popularity_ranking;
  std::vector<double> item_play_totals;

  // Random
  std::uint64_t master_seed = 0;
};

struct ScoredItem {
  std::uint32_t item = 0;
  double score = 0.0;
};

/// Per-user ranked top-N lists. Lists hold min(n, candidates) items with
/// non-increasing scores and no duplicates.
struct RecommendationSet {
  std::vector<std::vector<ScoredItem>> lists;

  std::size_t total_slots() const;
};

/// Cosine of two users' sparse rating vectors (missing entries are zero).
/// Symmetric, and within [0,1] for positive-valued matrices. Throws
/// Error{ZeroVector} when either user has no interactions.
double similarity(const InteractionMatrix& matrix, std::uint32_t u, std::uint32_t v);

/// Trains the configured algorithm. Deterministic for a given config and
/// matrix, including across thread counts. Throws Error{InsufficientData}
/// for UserKNN on fewer than two users.
FittedModel fit(const RecommenderConfig& config, const InteractionMatrix& matrix);

/// Predicted preference of `user` for `item`. Not defined for Random
/// (throws Error{ScoreUndefined}).
double score(const FittedModel& model, std::uint32_t user, std::uint32_t item);

/// Ranked list for one user: the config.n highest-scoring candidates, ties
/// broken by ascending item index. Candidates are the user's unseen items
/// when config.exclude_seen is set (MostPop ignores that by default);
/// Random samples uniformly without replacement using a per-user sub-seed.
std::vector<ScoredItem> recommend(const FittedModel& model, std::uint32_t user,
                                  const RecommenderConfig& config);

/// recommend() for every user. Parallelized over users; output is
/// independent of the schedule.
RecommendationSet recommend_all(const FittedModel& model, const RecommenderConfig& config);

/// Tab-separated "user rank item score" lines, rank 1-based, using the
/// original identifiers.
void write_recommendations(std::ostream& out, const RecommendationSet& recs,
                           const InteractionMatrix& matrix);

}  // namespace fairtail

#endif  // FAIRTAIL_RECOMMENDERS_HPP_
