#include "fairtail/recommenders.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fairtail/error.hpp"
#include "fairtail/format.hpp"
#include "fairtail/rng.hpp"

namespace fairtail {

const char* algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::UserKnn: return "userknn";
    case Algorithm::Nmf: return "nmf";
    case Algorithm::UserItemAvg: return "useritemavg";
    case Algorithm::MostPop: return "mostpop";
    case Algorithm::Random: return "random";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "userknn") return Algorithm::UserKnn;
  if (name == "nmf") return Algorithm::Nmf;
  if (name == "useritemavg") return Algorithm::UserItemAvg;
  if (name == "mostpop") return Algorithm::MostPop;
  if (name == "random") return Algorithm::Random;
  throw Error(ErrorCode::InvalidArgument, "unknown algorithm '" + name + "'");
}

void RecommenderConfig::validate() const {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (factors < 1) throw Error(ErrorCode::InvalidArgument, "factors must be >= 1");
  if (epochs < 1) throw Error(ErrorCode::InvalidArgument, "epochs must be >= 1");
  if (reg < 0.0) throw Error(ErrorCode::InvalidArgument, "reg must be >= 0");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
}

std::size_t RecommendationSet::total_slots() const {
  std::size_t slots = 0;
  for (const auto& list : lists) slots += list.size();
  return slots;
}

namespace {

double row_norm(const std::vector<MatrixEntry>& row) {
  double sum = 0.0;
  for (const auto& e : row) sum += e.value * e.value;
  return std::sqrt(sum);
}

// Sorted-merge dot product of two sparse rows. Accumulation order is the
// shared item order, so the result is exactly symmetric in its arguments.
double sparse_dot(const std::vector<MatrixEntry>& a, const std::vector<MatrixEntry>& b) {
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].item == b[j].item) {
      sum += a[i].value * b[j].value;
      ++i;
      ++j;
    } else if (a[i].item < b[j].item) {
      ++i;
    } else {
      ++j;
    }
  }
  return sum;
}

struct MeanStats {
  double global_mean = 0.0;
  std::vector<double> user_means;
  std::vector<double> item_means;
};

MeanStats compute_means(const InteractionMatrix& matrix) {
  MeanStats stats;
  double total = 0.0;
  std::size_t entries = 0;
  std::vector<double> item_sums(matrix.num_items(), 0.0);
  std::vector<std::uint32_t> item_counts(matrix.num_items(), 0);

  stats.user_means.resize(matrix.num_users(), 0.0);
  for (std::uint32_t u = 0; u < matrix.num_users(); ++u) {
    const auto& row = matrix.row(u);
    double row_sum = 0.0;
    for (const auto& e : row) {
      row_sum += e.value;
      item_sums[e.item] += e.value;
      ++item_counts[e.item];
    }
    total += row_sum;
    entries += row.size();
    stats.user_means[u] = row.empty() ? 0.0 : row_sum / static_cast<double>(row.size());
  }
  stats.global_mean = entries == 0 ? 0.0 : total / static_cast<double>(entries);
  for (std::uint32_t u = 0; u < matrix.num_users(); ++u)
    if (matrix.row(u).empty()) stats.user_means[u] = stats.global_mean;

  stats.item_means.resize(matrix.num_items(), 0.0);
  for (std::uint32_t i = 0; i < matrix.num_items(); ++i)
    stats.item_means[i] = item_counts[i] == 0 ? stats.global_mean
                                              : item_sums[i] / static_cast<double>(item_counts[i]);
  return stats;
}

void fit_user_knn(FittedModel& model, const InteractionMatrix& matrix, int k) {
  const std::uint32_t num_users = matrix.num_users();
  if (num_users < 2)
    throw Error(ErrorCode::InsufficientData, "UserKNN needs at least 2 users");

  std::vector<double> norms(num_users);
  for (std::uint32_t u = 0; u < num_users; ++u) norms[u] = row_norm(matrix.row(u));

  model.neighbors.resize(num_users);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t u = 0; u < static_cast<std::int64_t>(num_users); ++u) {
    std::vector<Neighbor> candidates;
    candidates.reserve(num_users - 1);
    for (std::uint32_t v = 0; v < num_users; ++v) {
      if (v == static_cast<std::uint32_t>(u)) continue;
      if (norms[u] == 0.0 || norms[v] == 0.0) continue;
      double sim = sparse_dot(matrix.row(static_cast<std::uint32_t>(u)), matrix.row(v)) /
                   (norms[u] * norms[v]);
      if (sim > 1.0) sim = 1.0;
      if (sim > 0.0) candidates.push_back({v, sim});
    }
    auto keep = std::min<std::size_t>(static_cast<std::size_t>(k), candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + keep, candidates.end(),
                      [](const Neighbor& a, const Neighbor& b) {
                        if (a.similarity != b.similarity) return a.similarity > b.similarity;
                        return a.user < b.user;
                      });
    candidates.resize(keep);
    candidates.shrink_to_fit();
    model.neighbors[u] = std::move(candidates);
  }
}

double nmf_objective(const InteractionMatrix& matrix, const std::vector<double>& P,
                     const std::vector<double>& Q, int factors, double reg) {
  const auto F = static_cast<std::size_t>(factors);
  double loss = 0.0;
  for (std::uint32_t u = 0; u < matrix.num_users(); ++u) {
    const double* pu = P.data() + static_cast<std::size_t>(u) * F;
    for (const auto& e : matrix.row(u)) {
      const double* qi = Q.data() + static_cast<std::size_t>(e.item) * F;
      double pred = 0.0;
      for (std::size_t f = 0; f < F; ++f) pred += pu[f] * qi[f];
      double diff = e.value - pred;
      loss += diff * diff;
    }
  }
  double penalty = 0.0;
  for (double p : P) penalty += p * p;
  for (double q : Q) penalty += q * q;
  return loss + reg * penalty;
}

void fit_nmf(FittedModel& model, const InteractionMatrix& matrix, const RecommenderConfig& config) {
  const auto F = static_cast<std::size_t>(config.factors);
  const std::uint32_t num_users = matrix.num_users();
  const std::uint32_t num_items = matrix.num_items();
  const double reg = config.reg;
  constexpr double kEps = 1e-12;  // keeps denominators away from zero

  auto& P = model.user_factors;
  auto& Q = model.item_factors;
  P.resize(static_cast<std::size_t>(num_users) * F);
  Q.resize(static_cast<std::size_t>(num_items) * F);

  // Uniform (0,1) init scaled by 1/sqrt(F), P then Q in row-major order.
  std::mt19937_64 engine(config.seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(F));
  for (auto& p : P) p = uniform_open_unit(engine) * scale;
  for (auto& q : Q) q = uniform_open_unit(engine) * scale;

  // Column-wise view of the observed entries for the item-factor pass.
  std::vector<std::vector<MatrixEntry>> columns(num_items);
  for (std::uint32_t u = 0; u < num_users; ++u)
    for (const auto& e : matrix.row(u)) columns[e.item].push_back({u, e.value});

  model.initial_objective = nmf_objective(matrix, P, Q, config.factors, reg);

  std::vector<double> num(F), den(F);
  // Multiplicative updates over observed entries only. Each pass updates
  // every user row from the current item factors, then every item column
  // from the fresh user rows. Rows are independent, so the parallel loops
  // are deterministic for any thread count.
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
#pragma omp parallel for schedule(dynamic, 32) firstprivate(num, den)
    for (std::int64_t u = 0; u < static_cast<std::int64_t>(num_users); ++u) {
      const auto& row = matrix.row(static_cast<std::uint32_t>(u));
      if (row.empty()) continue;
      double* pu = P.data() + static_cast<std::size_t>(u) * F;
      std::fill(num.begin(), num.end(), 0.0);
      std::fill(den.begin(), den.end(), 0.0);
      for (const auto& e : row) {
        const double* qi = Q.data() + static_cast<std::size_t>(e.item) * F;
        double pred = 0.0;
        for (std::size_t f = 0; f < F; ++f) pred += pu[f] * qi[f];
        for (std::size_t f = 0; f < F; ++f) {
          num[f] += e.value * qi[f];
          den[f] += pred * qi[f];
        }
      }
      for (std::size_t f = 0; f < F; ++f) pu[f] *= num[f] / (den[f] + reg * pu[f] + kEps);
    }

#pragma omp parallel for schedule(dynamic, 32) firstprivate(num, den)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(num_items); ++i) {
      const auto& column = columns[i];
      if (column.empty()) continue;
      double* qi = Q.data() + static_cast<std::size_t>(i) * F;
      std::fill(num.begin(), num.end(), 0.0);
      std::fill(den.begin(), den.end(), 0.0);
      for (const auto& e : column) {
        const double* pu = P.data() + static_cast<std::size_t>(e.item) * F;
        double pred = 0.0;
        for (std::size_t f = 0; f < F; ++f) pred += pu[f] * qi[f];
        for (std::size_t f = 0; f < F; ++f) {
          num[f] += e.value * pu[f];
          den[f] += pred * pu[f];
        }
      }
      for (std::size_t f = 0; f < F; ++f) qi[f] *= num[f] / (den[f] + reg * qi[f] + kEps);
    }
  }

  model.final_objective = nmf_objective(matrix, P, Q, config.factors, reg);
}

void fit_most_pop(FittedModel& model, const InteractionMatrix& matrix) {
  model.item_play_totals = matrix.item_totals();
  model.popularity_ranking.resize(matrix.num_items());
  std::iota(model.popularity_ranking.begin(), model.popularity_ranking.end(), 0u);
  std::sort(model.popularity_ranking.begin(), model.popularity_ranking.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              if (model.item_play_totals[a] != model.item_play_totals[b])
                return model.item_play_totals[a] > model.item_play_totals[b];
              return a < b;
            });
}

// Top-n by (score desc, item index asc); `scored` is consumed.
std::vector<ScoredItem> select_top_n(std::vector<ScoredItem>& scored, int n) {
  auto keep = std::min<std::size_t>(static_cast<std::size_t>(n), scored.size());
  std::partial_sort(scored.begin(), scored.begin() + keep, scored.end(),
                    [](const ScoredItem& a, const ScoredItem& b) {
                      if (a.score != b.score) return a.score > b.score;
                      return a.item < b.item;
                    });
  scored.resize(keep);
  return std::move(scored);
}

std::vector<std::uint32_t> candidate_items(const InteractionMatrix& matrix, std::uint32_t user,
                                           bool exclude_seen) {
  std::vector<std::uint32_t> candidates;
  const std::uint32_t num_items = matrix.num_items();
  if (!exclude_seen) {
    candidates.resize(num_items);
    std::iota(candidates.begin(), candidates.end(), 0u);
    return candidates;
  }
  const auto& row = matrix.row(user);
  candidates.reserve(num_items - row.size());
  std::size_t next = 0;
  for (std::uint32_t i = 0; i < num_items; ++i) {
    if (next < row.size() && row[next].item == i) {
      ++next;
      continue;
    }
    candidates.push_back(i);
  }
  return candidates;
}

}  // namespace

double similarity(const InteractionMatrix& matrix, std::uint32_t u, std::uint32_t v) {
  if (u >= matrix.num_users() || v >= matrix.num_users())
    throw Error(ErrorCode::IndexOutOfRange, "user index out of range");
  const auto& a = matrix.row(u);
  const auto& b = matrix.row(v);
  if (a.empty() || b.empty())
    throw Error(ErrorCode::ZeroVector, "user with no interactions has no direction");
  double sim = sparse_dot(a, b) / (row_norm(a) * row_norm(b));
  return std::min(sim, 1.0);
}

FittedModel fit(const RecommenderConfig& config, const InteractionMatrix& matrix) {
  config.validate();
  if (matrix.num_users() == 0 || matrix.num_items() == 0)
    throw Error(ErrorCode::EmptyDataset, "cannot fit on an empty matrix");

  FittedModel model;
  model.algorithm = config.algorithm;
  model.config = config;
  model.matrix = std::make_shared<InteractionMatrix>(matrix);

  switch (config.algorithm) {
    case Algorithm::UserKnn: {
      auto stats = compute_means(matrix);
      model.global_mean = stats.global_mean;
      model.user_means = std::move(stats.user_means);
      model.item_means = std::move(stats.item_means);
      fit_user_knn(model, *model.matrix, config.k);
      break;
    }
    case Algorithm::Nmf:
      fit_nmf(model, *model.matrix, config);
      break;
    case Algorithm::UserItemAvg: {
      auto stats = compute_means(matrix);
      model.global_mean = stats.global_mean;
      model.user_means = std::move(stats.user_means);
      model.item_means = std::move(stats.item_means);
      break;
    }
    case Algorithm::MostPop:
      fit_most_pop(model, *model.matrix);
      break;
    case Algorithm::Random:
      model.master_seed = config.seed;
      break;
  }
  return model;
}

double score(const FittedModel& model, std::uint32_t user, std::uint32_t item) {
  const InteractionMatrix& matrix = *model.matrix;
  if (user >= matrix.num_users() || item >= matrix.num_items())
    throw Error(ErrorCode::IndexOutOfRange, "score index out of range");

  switch (model.algorithm) {
    case Algorithm::UserKnn: {
      double num = 0.0, den = 0.0;
      for (const auto& nb : model.neighbors[user]) {
        double rating = matrix.value_at(nb.user, item);
        if (rating > 0.0) {
          num += nb.similarity * rating;
          den += nb.similarity;
        }
      }
      if (den > 0.0) return num / den;
      return model.item_means[item];  // item mean falls back to the global
                                      // mean for never-rated items
    }
    case Algorithm::Nmf: {
      const auto F = static_cast<std::size_t>(model.config.factors);
      const double* pu = model.user_factors.data() + static_cast<std::size_t>(user) * F;
      const double* qi = model.item_factors.data() + static_cast<std::size_t>(item) * F;
      double pred = 0.0;
      for (std::size_t f = 0; f < F; ++f) pred += pu[f] * qi[f];
      return pred;
    }
    case Algorithm::UserItemAvg:
      return model.user_means[user] + model.item_means[item] - model.global_mean;
    case Algorithm::MostPop:
      return model.item_play_totals[item];
    case Algorithm::Random:
      throw Error(ErrorCode::ScoreUndefined, "Random assigns no scores");
  }
  throw Error(ErrorCode::InvalidArgument, "unknown algorithm tag");
}

std::vector<ScoredItem> recommend(const FittedModel& model, std::uint32_t user,
                                  const RecommenderConfig& config) {
  const InteractionMatrix& matrix = *model.matrix;
  if (user >= matrix.num_users())
    throw Error(ErrorCode::IndexOutOfRange, "user index out of range");
  const int n = config.n;

  switch (model.algorithm) {
    case Algorithm::MostPop: {
      bool exclude = config.exclude_seen && config.mostpop_respect_exclude_seen;
      std::vector<ScoredItem> list;
      list.reserve(static_cast<std::size_t>(n));
      for (std::uint32_t item : model.popularity_ranking) {
        if (static_cast<int>(list.size()) == n) break;
        if (exclude && matrix.has(user, item)) continue;
        list.push_back({item, model.item_play_totals[item]});
      }
      return list;
    }
    case Algorithm::Random: {
      auto candidates = candidate_items(matrix, user, config.exclude_seen);
      std::mt19937_64 engine(derive_seed(model.master_seed, user));
      auto take = std::min<std::size_t>(static_cast<std::size_t>(n), candidates.size());
      std::vector<ScoredItem> list(take);
      // partial Fisher-Yates: each prefix is a uniform sample without
      // replacement
      for (std::size_t j = 0; j < take; ++j) {
        std::size_t r = j + static_cast<std::size_t>(bounded_rand(engine, candidates.size() - j));
        std::swap(candidates[j], candidates[r]);
        list[j] = {candidates[j], static_cast<double>(take - j)};
      }
      return list;
    }
    case Algorithm::UserKnn: {
      auto candidates = candidate_items(matrix, user, config.exclude_seen);
      // Accumulate neighbor ratings item-wise; visiting neighbors in list
      // order keeps the arithmetic identical to score().
      std::vector<double> num(matrix.num_items(), 0.0), den(matrix.num_items(), 0.0);
      for (const auto& nb : model.neighbors[user]) {
        for (const auto& e : matrix.row(nb.user)) {
          num[e.item] += nb.similarity * e.value;
          den[e.item] += nb.similarity;
        }
      }
      std::vector<ScoredItem> scored;
      scored.reserve(candidates.size());
      for (std::uint32_t item : candidates) {
        double value = den[item] > 0.0 ? num[item] / den[item] : model.item_means[item];
        scored.push_back({item, value});
      }
      return select_top_n(scored, n);
    }
    case Algorithm::Nmf:
    case Algorithm::UserItemAvg: {
      auto candidates = candidate_items(matrix, user, config.exclude_seen);
      std::vector<ScoredItem> scored;
      scored.reserve(candidates.size());
      for (std::uint32_t item : candidates) scored.push_back({item, score(model, user, item)});
      return select_top_n(scored, n);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown algorithm tag");
}

RecommendationSet recommend_all(const FittedModel& model, const RecommenderConfig& config) {
  RecommendationSet recs;
  recs.lists.resize(model.matrix->num_users());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t u = 0; u < static_cast<std::int64_t>(recs.lists.size()); ++u)
    recs.lists[u] = recommend(model, static_cast<std::uint32_t>(u), config);
  return recs;
}

void write_recommendations(std::ostream& out, const RecommendationSet& recs,
                           const InteractionMatrix& matrix) {
  for (std::size_t u = 0; u < recs.lists.size(); ++u) {
    const auto& list = recs.lists[u];
    for (std::size_t r = 0; r < list.size(); ++r) {
      out << matrix.users()[u] << '\t' << (r + 1) << '\t' << matrix.items()[list[r].item] << '\t'
          << format_double(list[r].score) << '\n';
    }
  }
}

}  // namespace fairtail
