#include "fairtail/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "fairtail/error.hpp"
#include "fairtail/rng.hpp"

namespace fairtail {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::NonPositiveCount: return "NonPositiveCount";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::UnmappedItem: return "UnmappedItem";
    case ErrorCode::ConflictingMapping: return "ConflictingMapping";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ScoreUndefined: return "ScoreUndefined";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DegeneratePartition: return "DegeneratePartition";
    case ErrorCode::EmptyGroup: return "EmptyGroup";
    case ErrorCode::ZeroBaseGap: return "ZeroBaseGap";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

const char* scaling_name(ScalingScheme scheme) {
  switch (scheme) {
    case ScalingScheme::raw: return "raw";
    case ScalingScheme::log: return "log";
    case ScalingScheme::per_user_minmax: return "minmax";
  }
  return "unknown";
}

ScalingScheme parse_scaling(const std::string& name) {
  if (name == "raw") return ScalingScheme::raw;
  if (name == "log") return ScalingScheme::log;
  if (name == "minmax") return ScalingScheme::per_user_minmax;
  throw Error(ErrorCode::InvalidArgument, "unknown scaling scheme '" + name + "'");
}

InteractionMatrix::InteractionMatrix(std::vector<std::string> users,
                                     std::vector<std::string> items,
                                     std::vector<std::vector<MatrixEntry>> rows)
    : users_(std::move(users)), items_(std::move(items)), rows_(std::move(rows)) {}

double InteractionMatrix::value_at(std::uint32_t user, std::uint32_t item) const {
  const auto& entries = rows_[user];
  auto it = std::lower_bound(entries.begin(), entries.end(), item,
                             [](const MatrixEntry& e, std::uint32_t i) { return e.item < i; });
  if (it != entries.end() && it->item == item) return it->value;
  return 0.0;
}

bool InteractionMatrix::has(std::uint32_t user, std::uint32_t item) const {
  const auto& entries = rows_[user];
  auto it = std::lower_bound(entries.begin(), entries.end(), item,
                             [](const MatrixEntry& e, std::uint32_t i) { return e.item < i; });
  return it != entries.end() && it->item == item;
}

std::size_t InteractionMatrix::num_entries() const {
  std::size_t n = 0;
  for (const auto& row : rows_) n += row.size();
  return n;
}

double InteractionMatrix::total_value() const {
  double total = 0.0;
  for (const auto& row : rows_)
    for (const auto& e : row) total += e.value;
  return total;
}

std::vector<double> InteractionMatrix::item_totals() const {
  std::vector<double> totals(num_items(), 0.0);
  for (const auto& row : rows_)
    for (const auto& e : row) totals[e.item] += e.value;
  return totals;
}

void InteractionMatrix::validate() const {
  if (rows_.size() != users_.size())
    throw Error(ErrorCode::InvalidArgument, "row count does not match user count");
  for (std::size_t u = 0; u < rows_.size(); ++u) {
    const auto& row = rows_[u];
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j].item >= items_.size())
        throw Error(ErrorCode::IndexOutOfRange, "item index out of range in row " + std::to_string(u));
      if (!(row[j].value > 0.0) || !std::isfinite(row[j].value))
        throw Error(ErrorCode::InvalidArgument, "non-positive or non-finite value in row " + std::to_string(u));
      if (j > 0 && row[j - 1].item >= row[j].item)
        throw Error(ErrorCode::InvalidArgument, "item indices not strictly increasing in row " + std::to_string(u));
    }
  }
}

int ParseDialect::num_columns() const {
  return std::max({user_column, item_column, count_column}) + 1;
}

namespace {

// Strips one trailing '\r' so CRLF files parse like LF files.
void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t") == std::string::npos;
}

std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(delimiter, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

Error line_error(ErrorCode code, std::size_t line_number, const std::string& what) {
  return Error(code, "line " + std::to_string(line_number) + ": " + what);
}

}  // namespace

std::vector<InteractionRecord> parse_interactions(std::istream& source,
                                                  const ParseDialect& dialect) {
  std::vector<InteractionRecord> records;
  std::unordered_map<std::string, std::size_t> index;  // "user\titem" -> slot
  const int want = dialect.num_columns();

  std::string line;
  std::size_t line_number = 0;
  while (std::getline(source, line)) {
    ++line_number;
    strip_cr(line);
    if (line.empty() || is_blank(line)) continue;
    if (line.front() == '#') continue;

    auto fields = split(line, dialect.delimiter);
    if (static_cast<int>(fields.size()) != want)
      throw line_error(ErrorCode::MalformedLine, line_number,
                       "expected " + std::to_string(want) + " columns, got " +
                           std::to_string(fields.size()));

    const std::string& user = fields[dialect.user_column];
    const std::string& item = fields[dialect.item_column];
    const std::string& count_text = fields[dialect.count_column];
    if (user.empty() || item.empty())
      throw line_error(ErrorCode::MalformedLine, line_number, "empty user or item identifier");

    std::int64_t count = 0;
    auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
    if (ec != std::errc() || ptr != count_text.data() + count_text.size())
      throw line_error(ErrorCode::MalformedLine, line_number,
                       "count is not an integer: '" + count_text + "'");
    if (count <= 0)
      throw line_error(ErrorCode::NonPositiveCount, line_number,
                       "count must be positive, got " + count_text);

    std::string key = user + '\t' + item;
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(std::move(key), records.size());
      records.push_back({user, item, count});
    } else {
      records[it->second].count += count;
    }
  }
  return records;
}

std::vector<InteractionRecord> parse_interactions_text(const std::string& text,
                                                       const ParseDialect& dialect) {
  std::istringstream stream(text);
  return parse_interactions(stream, dialect);
}

InteractionMatrix build_matrix(const std::vector<InteractionRecord>& records) {
  if (records.empty()) throw Error(ErrorCode::EmptyDataset, "no interaction records");

  std::vector<std::string> users, items;
  std::unordered_map<std::string, std::uint32_t> user_index, item_index;
  auto intern = [](const std::string& id, std::unordered_map<std::string, std::uint32_t>& map,
                   std::vector<std::string>& list) {
    auto it = map.find(id);
    if (it != map.end()) return it->second;
    auto idx = static_cast<std::uint32_t>(list.size());
    map.emplace(id, idx);
    list.push_back(id);
    return idx;
  };

  std::vector<std::vector<MatrixEntry>> rows;
  for (const auto& rec : records) {
    std::uint32_t u = intern(rec.user, user_index, users);
    std::uint32_t i = intern(rec.item, item_index, items);
    if (u == rows.size()) rows.emplace_back();
    rows[u].push_back({i, static_cast<double>(rec.count)});
  }

  for (auto& row : rows) {
    std::sort(row.begin(), row.end(),
              [](const MatrixEntry& a, const MatrixEntry& b) { return a.item < b.item; });
    // merge duplicate pairs by summing, matching the parser's policy
    std::size_t out = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (out > 0 && row[out - 1].item == row[j].item) {
        row[out - 1].value += row[j].value;
      } else {
        row[out++] = row[j];
      }
    }
    row.resize(out);
  }
  return InteractionMatrix(std::move(users), std::move(items), std::move(rows));
}

InteractionMatrix scale_ratings(const InteractionMatrix& matrix, ScalingScheme scheme) {
  std::vector<std::vector<MatrixEntry>> rows;
  rows.reserve(matrix.num_users());
  for (std::uint32_t u = 0; u < matrix.num_users(); ++u) rows.push_back(matrix.row(u));

  switch (scheme) {
    case ScalingScheme::raw:
      break;
    case ScalingScheme::log:
      for (auto& row : rows)
        for (auto& e : row) e.value = std::log1p(e.value);
      break;
    case ScalingScheme::per_user_minmax:
      for (auto& row : rows) {
        if (row.empty()) continue;
        double lo = row.front().value, hi = row.front().value;
        for (const auto& e : row) {
          lo = std::min(lo, e.value);
          hi = std::max(hi, e.value);
        }
        if (hi == lo) {
          for (auto& e : row) e.value = 1000.0;
        } else {
          double span = hi - lo;
          for (auto& e : row) e.value = 1.0 + (e.value - lo) * 999.0 / span;
        }
      }
      break;
  }
  return InteractionMatrix(matrix.users(), matrix.items(), std::move(rows));
}

ItemProviderMap load_provider_map(std::istream& source, const InteractionMatrix& matrix) {
  std::unordered_map<std::string, std::uint32_t> item_index;
  for (std::uint32_t i = 0; i < matrix.num_items(); ++i) item_index.emplace(matrix.items()[i], i);

  ItemProviderMap map;
  constexpr std::uint32_t kUnmapped = 0xffffffffu;
  map.provider_of_item.assign(matrix.num_items(), kUnmapped);
  std::unordered_map<std::string, std::uint32_t> provider_index;

  std::string line;
  std::size_t line_number = 0;
  while (std::getline(source, line)) {
    ++line_number;
    strip_cr(line);
    if (line.empty() || is_blank(line)) continue;
    if (line.front() == '#') continue;

    auto fields = split(line, '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
      throw line_error(ErrorCode::MalformedLine, line_number, "expected 'item<TAB>provider'");

    auto item_it = item_index.find(fields[0]);
    if (item_it == item_index.end()) continue;  // map may cover a superset of the catalog

    auto prov_it = provider_index.find(fields[1]);
    std::uint32_t provider;
    if (prov_it == provider_index.end()) {
      provider = static_cast<std::uint32_t>(map.providers.size());
      provider_index.emplace(fields[1], provider);
      map.providers.push_back(fields[1]);
    } else {
      provider = prov_it->second;
    }

    std::uint32_t& slot = map.provider_of_item[item_it->second];
    if (slot != kUnmapped && slot != provider)
      throw line_error(ErrorCode::ConflictingMapping, line_number,
                       "item '" + fields[0] + "' mapped to both '" +
                           map.providers[slot] + "' and '" + fields[1] + "'");
    slot = provider;
  }

  for (std::uint32_t i = 0; i < matrix.num_items(); ++i) {
    if (map.provider_of_item[i] == kUnmapped)
      throw Error(ErrorCode::UnmappedItem, "item '" + matrix.items()[i] + "' has no provider");
  }
  return map;
}

ItemProviderMap load_provider_map_text(const std::string& text, const InteractionMatrix& matrix) {
  std::istringstream stream(text);
  return load_provider_map(stream, matrix);
}

ItemProviderMap identity_provider_map(const InteractionMatrix& matrix) {
  ItemProviderMap map;
  map.providers = matrix.items();
  map.provider_of_item.resize(matrix.num_items());
  std::iota(map.provider_of_item.begin(), map.provider_of_item.end(), 0u);
  return map;
}

std::vector<InteractionRecord> generate_synthetic(std::uint32_t num_users,
                                                  std::uint32_t num_items,
                                                  std::uint32_t events_per_user,
                                                  double zipf_exponent,
                                                  std::uint64_t seed) {
  if (num_users == 0 || num_items == 0 || events_per_user == 0)
    throw Error(ErrorCode::InvalidArgument, "synthetic dimensions must be positive");
  if (!(zipf_exponent > 0.0))
    throw Error(ErrorCode::InvalidArgument, "zipf exponent must be positive");

  // Normalized cumulative mass over ranks 1..num_items.
  std::vector<double> cumulative(num_items);
  double total = 0.0;
  for (std::uint32_t j = 0; j < num_items; ++j) {
    total += std::pow(static_cast<double>(j + 1), -zipf_exponent);
    cumulative[j] = total;
  }
  for (auto& c : cumulative) c /= total;

  std::mt19937_64 engine(seed);
  std::vector<InteractionRecord> records;
  std::vector<std::uint32_t> counts(num_items);
  for (std::uint32_t u = 0; u < num_users; ++u) {
    std::fill(counts.begin(), counts.end(), 0u);
    for (std::uint32_t e = 0; e < events_per_user; ++e) {
      double z = uniform_unit(engine);
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), z);
      auto rank = static_cast<std::uint32_t>(it - cumulative.begin());
      if (rank >= num_items) rank = num_items - 1;
      ++counts[rank];
    }
    std::string user = "u" + std::to_string(u);
    for (std::uint32_t j = 0; j < num_items; ++j) {
      if (counts[j] > 0)
        records.push_back({user, "i" + std::to_string(j), static_cast<std::int64_t>(counts[j])});
    }
  }
  return records;
}

void write_interactions(std::ostream& out, const std::vector<InteractionRecord>& records) {
  for (const auto& rec : records)
    out << rec.user << '\t' << rec.item << '\t' << rec.count << '\n';
}

}  // namespace fairtail
