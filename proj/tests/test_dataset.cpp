#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "fairtail/dataset.hpp"
#include "fairtail/error.hpp"
#include "support.hpp"

using namespace fairtail;
using test_support::capture_error;

TEST_CASE("parse maps one line to one record") {
  auto records = parse_interactions_text("u1\ti1\t5\n");
  REQUIRE(records.size() == 1);
  CHECK(records[0].user == "u1");
  CHECK(records[0].item == "i1");
  CHECK(records[0].count == 5);
}

TEST_CASE("duplicate pairs are summed") {
  auto records = parse_interactions_text("u1\ti1\t2\nu1\ti1\t3\n");
  REQUIRE(records.size() == 1);
  CHECK(records[0].count == 5);
}

TEST_CASE("non-positive counts are rejected with the line number") {
  auto zero = capture_error([] { parse_interactions_text("u1\ti1\t0\n"); });
  CHECK(zero.threw);
  CHECK(zero.code == ErrorCode::NonPositiveCount);
  CHECK(zero.message.find("line 1") != std::string::npos);

  auto negative = capture_error([] { parse_interactions_text("u1\ti1\t3\nu2\ti1\t-2\n"); });
  CHECK(negative.threw);
  CHECK(negative.code == ErrorCode::NonPositiveCount);
  CHECK(negative.message.find("line 2") != std::string::npos);
}

TEST_CASE("malformed lines are rejected with the line number") {
  auto columns = capture_error([] { parse_interactions_text("u1\ti1\n"); });
  CHECK(columns.threw);
  CHECK(columns.code == ErrorCode::MalformedLine);
  CHECK(columns.message.find("line 1") != std::string::npos);

  auto extra = capture_error([] { parse_interactions_text("u1\ti1\t5\tx\n"); });
  CHECK(extra.threw);
  CHECK(extra.code == ErrorCode::MalformedLine);

  auto not_a_number = capture_error([] { parse_interactions_text("u1\ti1\tfive\n"); });
  CHECK(not_a_number.threw);
  CHECK(not_a_number.code == ErrorCode::MalformedLine);

  auto fractional = capture_error([] { parse_interactions_text("u1\ti1\t2.5\n"); });
  CHECK(fractional.threw);
  CHECK(fractional.code == ErrorCode::MalformedLine);

  auto empty_field = capture_error([] { parse_interactions_text("\ti1\t5\n"); });
  CHECK(empty_field.threw);
  CHECK(empty_field.code == ErrorCode::MalformedLine);
}

TEST_CASE("comments, blank lines and CRLF are tolerated") {
  auto records = parse_interactions_text("# header comment\r\n\n  \nu1\ti1\t4\r\nu2\ti1\t1\n");
  REQUIRE(records.size() == 2);
  CHECK(records[0].count == 4);
  CHECK(records[1].user == "u2");
}

TEST_CASE("dialect can reorder columns and change the delimiter") {
  ParseDialect dialect;
  dialect.delimiter = ',';
  dialect.count_column = 0;
  dialect.user_column = 1;
  dialect.item_column = 2;
  auto records = parse_interactions_text("7,u1,i1\n", dialect);
  REQUIRE(records.size() == 1);
  CHECK(records[0].user == "u1");
  CHECK(records[0].item == "i1");
  CHECK(records[0].count == 7);
}

TEST_CASE("build_matrix interns identifiers in first-appearance order") {
  auto matrix = build_matrix({{"u1", "i2", 1}, {"u1", "i1", 2}});
  REQUIRE(matrix.num_users() == 1);
  REQUIRE(matrix.num_items() == 2);
  CHECK(matrix.items()[0] == "i2");
  CHECK(matrix.items()[1] == "i1");
  REQUIRE(matrix.row(0).size() == 2);
  CHECK(matrix.row(0)[0].item == 0);
  CHECK(matrix.row(0)[0].value == 1.0);
  CHECK(matrix.row(0)[1].item == 1);
  CHECK(matrix.row(0)[1].value == 2.0);
}

TEST_CASE("build_matrix handles the 1x1 case and rejects empty input") {
  auto matrix = build_matrix({{"u1", "i1", 5}});
  CHECK(matrix.num_users() == 1);
  CHECK(matrix.num_items() == 1);
  CHECK(matrix.value_at(0, 0) == 5.0);

  auto empty = capture_error([] { build_matrix({}); });
  CHECK(empty.threw);
  CHECK(empty.code == ErrorCode::EmptyDataset);
}

TEST_CASE("build_matrix merges duplicate pairs from programmatic input") {
  auto matrix = build_matrix({{"u1", "i1", 2}, {"u1", "i1", 3}, {"u1", "i2", 1}});
  CHECK(matrix.num_entries() == 2);
  CHECK(matrix.value_at(0, 0) == 5.0);
}

TEST_CASE("parse then build preserves the total event count") {
  std::string text = "u1\ti1\t5\nu2\ti1\t2\nu2\ti2\t7\nu1\ti1\t1\n";
  auto matrix = build_matrix(parse_interactions_text(text));
  CHECK(matrix.total_value() == 15.0);
}

TEST_CASE("build_matrix output satisfies the matrix invariants on random input") {
  std::mt19937_64 rng(1234);
  for (int round = 0; round < 50; ++round) {
    auto records = test_support::random_records(rng, 1 + rng() % 20, 1 + rng() % 30, 0.2);
    auto matrix = build_matrix(records);
    CHECK_NOTHROW(matrix.validate());

    // stored entries = distinct pairs
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& r : records) pairs.emplace(r.user, r.item);
    CHECK(matrix.num_entries() == pairs.size());
  }
}

TEST_CASE("raw scaling is the identity") {
  auto matrix = build_matrix({{"u1", "i1", 3}, {"u1", "i2", 9}});
  auto scaled = scale_ratings(matrix, ScalingScheme::raw);
  CHECK(scaled.value_at(0, 0) == 3.0);
  CHECK(scaled.value_at(0, 1) == 9.0);
}

TEST_CASE("log scaling stores ln(1+count)") {
  auto matrix = build_matrix({{"u1", "i1", 1}});
  auto scaled = scale_ratings(matrix, ScalingScheme::log);
  CHECK(scaled.value_at(0, 0) == doctest::Approx(0.6931).epsilon(1e-4));
  CHECK(scaled.value_at(0, 0) == std::log1p(1.0));
}

TEST_CASE("per-user minmax maps onto [1,1000] with constant rows at 1000") {
  auto matrix = build_matrix({{"u1", "i1", 1}, {"u1", "i2", 5}, {"u2", "i1", 7}, {"u2", "i2", 7}});
  auto scaled = scale_ratings(matrix, ScalingScheme::per_user_minmax);
  CHECK(scaled.value_at(0, 0) == 1.0);
  CHECK(scaled.value_at(0, 1) == 1000.0);
  CHECK(scaled.value_at(1, 0) == 1000.0);
  CHECK(scaled.value_at(1, 1) == 1000.0);
}

TEST_CASE("scaling preserves the sparsity pattern and minmax stays in range") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 20; ++round) {
    auto matrix = build_matrix(test_support::random_records(rng, 10, 15, 0.3, 50));
    for (auto scheme : {ScalingScheme::raw, ScalingScheme::log, ScalingScheme::per_user_minmax}) {
      auto scaled = scale_ratings(matrix, scheme);
      REQUIRE(scaled.num_users() == matrix.num_users());
      for (std::uint32_t u = 0; u < matrix.num_users(); ++u) {
        const auto& before = matrix.row(u);
        const auto& after = scaled.row(u);
        REQUIRE(before.size() == after.size());
        for (std::size_t j = 0; j < before.size(); ++j) {
          CHECK(before[j].item == after[j].item);
          CHECK(after[j].value > 0.0);
          if (scheme == ScalingScheme::per_user_minmax) {
            CHECK(after[j].value >= 1.0);
            CHECK(after[j].value <= 1000.0);
          }
        }
      }
    }
  }
}

TEST_CASE("provider map resolves every item") {
  auto matrix = build_matrix({{"u1", "i1", 1}, {"u1", "i2", 1}});
  auto map = load_provider_map_text("i1\ta1\ni2\ta1\n", matrix);
  CHECK(map.num_providers() == 1);
  CHECK(map.provider_of_item[0] == 0);
  CHECK(map.provider_of_item[1] == 0);
  CHECK(map.providers[0] == "a1");
}

TEST_CASE("provider map errors: unmapped item and conflicting mapping") {
  auto matrix = build_matrix({{"u1", "i1", 1}, {"u1", "i2", 1}});

  auto unmapped = capture_error([&] { load_provider_map_text("i1\ta1\n", matrix); });
  CHECK(unmapped.threw);
  CHECK(unmapped.code == ErrorCode::UnmappedItem);
  CHECK(unmapped.message.find("i2") != std::string::npos);

  auto conflict =
      capture_error([&] { load_provider_map_text("i1\ta1\ni2\ta1\ni1\ta2\n", matrix); });
  CHECK(conflict.threw);
  CHECK(conflict.code == ErrorCode::ConflictingMapping);

  // same mapping twice is not a conflict; unknown items are ignored
  CHECK_NOTHROW(load_provider_map_text("i1\ta1\ni1\ta1\ni2\ta2\nix\ta9\n", matrix));
}

TEST_CASE("identity provider map makes every item its own provider") {
  auto matrix = build_matrix({{"u1", "i1", 1}, {"u1", "i2", 1}});
  auto map = identity_provider_map(matrix);
  CHECK(map.num_providers() == 2);
  CHECK(map.providers == matrix.items());
  CHECK(map.provider_of_item[0] == 0);
  CHECK(map.provider_of_item[1] == 1);
}

TEST_CASE("synthetic generation is deterministic for a fixed seed") {
  auto a = generate_synthetic(10, 20, 50, 1.0, 7);
  auto b = generate_synthetic(10, 20, 50, 1.0, 7);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].user == b[i].user);
    CHECK(a[i].item == b[i].item);
    CHECK(a[i].count == b[i].count);
  }
  auto c = generate_synthetic(10, 20, 50, 1.0, 8);
  bool identical = a.size() == c.size();
  if (identical)
    for (std::size_t i = 0; i < a.size(); ++i)
      identical = identical && a[i].item == c[i].item && a[i].count == c[i].count;
  CHECK_FALSE(identical);
}

TEST_CASE("single-item catalog aggregates all draws") {
  auto records = generate_synthetic(1, 1, 5, 1.0, 3);
  REQUIRE(records.size() == 1);
  CHECK(records[0].user == "u0");
  CHECK(records[0].item == "i0");
  CHECK(records[0].count == 5);
}

TEST_CASE("synthetic rank-frequency slope tracks the Zipf exponent") {
  // regression on the top ranks of the empirical rank/count curve
  auto records = generate_synthetic(100, 1000, 10000, 1.2, 2024);
  auto matrix = build_matrix(records);
  std::vector<double> counts = matrix.item_totals();
  std::sort(counts.begin(), counts.end(), std::greater<>());

  std::vector<double> log_rank, log_count;
  for (std::size_t rank = 0; rank < 100 && rank < counts.size(); ++rank) {
    if (counts[rank] <= 0.0) break;
    log_rank.push_back(std::log(static_cast<double>(rank + 1)));
    log_count.push_back(std::log(counts[rank]));
  }
  REQUIRE(log_rank.size() >= 50);
  double slope = test_support::regression_slope(log_rank, log_count);
  CHECK(slope == doctest::Approx(-1.2).epsilon(0.2 / 1.2));
}

TEST_CASE("synthetic records round-trip through the interactions format") {
  auto records = generate_synthetic(5, 10, 20, 1.0, 11);
  std::ostringstream out;
  write_interactions(out, records);
  auto parsed = parse_interactions_text(out.str());
  REQUIRE(parsed.size() == records.size());
  std::int64_t total_in = 0, total_out = 0;
  for (const auto& r : records) total_in += r.count;
  for (const auto& r : parsed) total_out += r.count;
  CHECK(total_in == total_out);
  CHECK(build_matrix(parsed).num_users() == 5);
}

TEST_CASE("synthetic parameter validation") {
  auto bad = capture_error([] { generate_synthetic(0, 10, 5, 1.0, 1); });
  CHECK(bad.threw);
  CHECK(bad.code == ErrorCode::InvalidArgument);
  auto bad_exp = capture_error([] { generate_synthetic(1, 10, 5, 0.0, 1); });
  CHECK(bad_exp.threw);
}
