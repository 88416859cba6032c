#ifndef FAIRTAIL_DATASET_HPP_
#define FAIRTAIL_DATASET_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fairtail {

/// One (user, item) pair with the number of recorded events. Duplicate
/// pairs in an input file are summed before a matrix is built.
struct InteractionRecord {
  std::string user;
  std::string item;
  std::int64_t count = 0;
};

struct MatrixEntry {
  std::uint32_t item = 0;
  double value = 0.0;
};

/// Sparse user x item matrix of positive interaction values. Identifiers
/// are interned in first-appearance order; rows are sorted by item index
/// with no duplicates. Immutable once built, so instances can be shared
/// read-only across threads.
class InteractionMatrix {
 public:
  InteractionMatrix() = default;
  InteractionMatrix(std::vector<std::string> users, std::vector<std::string> items,
                    std::vector<std::vector<MatrixEntry>> rows);

  std::uint32_t num_users() const { return static_cast<std::uint32_t>(users_.size()); }
  std::uint32_t num_items() const { return static_cast<std::uint32_t>(items_.size()); }

  const std::vector<std::string>& users() const { return users_; }
  const std::vector<std::string>& items() const { return items_; }
  const std::vector<MatrixEntry>& row(std::uint32_t user) const { return rows_[user]; }

  /// Stored value at (user, item), or 0 when the pair is unobserved.
  double value_at(std::uint32_t user, std::uint32_t item) const;
  bool has(std::uint32_t user, std::uint32_t item) const;

  std::size_t num_entries() const;
  double total_value() const;

  /// Per-item sums of stored values (play counts under raw scaling).
  std::vector<double> item_totals() const;

  /// Throws Error when a structural invariant is violated. Used by fuzz
  /// tests; construction paths always produce valid matrices.
  void validate() const;

 private:
  std::vector<std::string> users_;
  std::vector<std::string> items_;
  std::vector<std::vector<MatrixEntry>> rows_;
};

/// Column layout and delimiter of a line-oriented interactions file.
struct ParseDialect {
  char delimiter = '\t';
  int user_column = 0;
  int item_column = 1;
  int count_column = 2;

  int num_columns() const;
};

/// Parses "user item count" lines. '#' lines are comments, blank lines are
/// skipped, CRLF is tolerated. Duplicate (user, item) pairs are summed.
/// Throws Error{MalformedLine, NonPositiveCount} with a 1-based line number.
std::vector<InteractionRecord> parse_interactions(std::istream& source,
                                                  const ParseDialect& dialect = {});
std::vector<InteractionRecord> parse_interactions_text(const std::string& text,
                                                       const ParseDialect& dialect = {});

/// Interns users and items in first-appearance order and assembles sorted
/// sparse rows. Duplicate pairs are summed. Throws Error{EmptyDataset}.
InteractionMatrix build_matrix(const std::vector<InteractionRecord>& records);

enum class ScalingScheme {
  raw,             // keep counts as-is
  log,             // ln(1 + count)
  per_user_minmax  // affine map of each user's counts onto [1, 1000]
};

const char* scaling_name(ScalingScheme scheme);
/// Parses "raw", "log" or "minmax". Throws Error{InvalidArgument}.
ScalingScheme parse_scaling(const std::string& name);

/// Returns a matrix with the same sparsity pattern and rescaled values.
/// Users whose counts are all equal map every entry to 1000 under minmax.
InteractionMatrix scale_ratings(const InteractionMatrix& matrix, ScalingScheme scheme);

/// Total map item index -> provider index. The identity map (every item is
/// its own provider) covers the case where recommended units are artists.
struct ItemProviderMap {
  std::vector<std::uint32_t> provider_of_item;
  std::vector<std::string> providers;

  std::uint32_t num_providers() const { return static_cast<std::uint32_t>(providers.size()); }
};

/// Parses two-column "item provider" lines and resolves every matrix item.
/// Lines for items outside the matrix are ignored. Providers are interned
/// in file order. Throws Error{UnmappedItem, ConflictingMapping}.
ItemProviderMap load_provider_map(std::istream& source, const InteractionMatrix& matrix);
ItemProviderMap load_provider_map_text(const std::string& text, const InteractionMatrix& matrix);

ItemProviderMap identity_provider_map(const InteractionMatrix& matrix);

/// Draws `events_per_user` items per user from a Zipf distribution over
/// item ranks (P(rank j) proportional to j^-exponent, rank 1 = item "i0")
/// and aggregates the draws into counts. Sampling is inverse-CDF over a
/// precomputed normalized rank table, bit-reproducible for a given seed.
std::vector<InteractionRecord> generate_synthetic(std::uint32_t num_users,
                                                  std::uint32_t num_items,
                                                  std::uint32_t events_per_user,
                                                  double zipf_exponent,
                                                  std::uint64_t seed);

/// Writes records in the standard interactions format (round-trips through
/// parse_interactions).
void write_interactions(std::ostream& out, const std::vector<InteractionRecord>& records);

}  // namespace fairtail

#endif  // FAIRTAIL_DATASET_HPP_
