#ifndef FAIRTAIL_TESTS_SUPPORT_HPP_
#define FAIRTAIL_TESTS_SUPPORT_HPP_

// Shared helpers for the unit and acceptance suites. Everything here is
// independent of the library internals it is used to check.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fairtail/dataset.hpp"
#include "fairtail/error.hpp"
#include "fairtail/popularity.hpp"

namespace test_support {

// --- statistics ----------------------------------------------------------

/// Regularized upper incomplete gamma Q(a, x) by series / continued
/// fraction (Numerical Recipes style).
inline double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) return std::nan("");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 1000; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    double log_p = std::log(sum) - x + a * std::log(x) - std::lgamma(a);
    return 1.0 - std::exp(log_p);
  }
  double b = x + 1.0 - a, c = 1e308, d = 1.0 / b, h = d;
  for (int i = 1; i <= 1000; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

/// Upper-tail p-value of a chi-square statistic.
inline double chi_square_p_value(double statistic, int dof) {
  return gamma_q(static_cast<double>(dof) / 2.0, statistic / 2.0);
}

/// Least-squares slope of y on x.
inline double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// --- fixtures ------------------------------------------------------------

/// Random interaction records over num_users x num_items with the given
/// expected row fill; counts are 1..max_count. May contain duplicates.
inline std::vector<fairtail::InteractionRecord> random_records(std::mt19937_64& rng,
                                                               std::uint32_t num_users,
                                                               std::uint32_t num_items,
                                                               double fill,
                                                               std::int64_t max_count = 5) {
  std::vector<fairtail::InteractionRecord> records;
  for (std::uint32_t u = 0; u < num_users; ++u) {
    bool any = false;
    for (std::uint32_t i = 0; i < num_items; ++i) {
      double coin = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (coin < fill) {
        auto count = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(max_count)) + 1;
        records.push_back({"u" + std::to_string(u), "i" + std::to_string(i), count});
        any = true;
      }
    }
    if (!any)  // keep every user non-empty
      records.push_back({"u" + std::to_string(u), "i" + std::to_string(rng() % num_items), 1});
  }
  return records;
}

/// Random data-side popularity table with positive integer counts.
inline fairtail::PopularityTable random_table(std::mt19937_64& rng, std::uint32_t num_providers,
                                              std::uint64_t max_count = 1000) {
  fairtail::PopularityTable table;
  table.side = fairtail::PopularitySide::data;
  table.counts.resize(num_providers);
  table.total = 0.0;
  for (auto& c : table.counts) {
    c = static_cast<double>(rng() % max_count + 1);
    table.total += c;
  }
  table.shares.resize(num_providers);
  for (std::uint32_t p = 0; p < num_providers; ++p) table.shares[p] = table.counts[p] / table.total;
  return table;
}

// --- error capture -------------------------------------------------------

struct Thrown {
  bool threw = false;
  fairtail::ErrorCode code{};
  std::string message;
};

template <typename Fn>
Thrown capture_error(Fn&& fn) {
  try {
    fn();
  } catch (const fairtail::Error& e) {
    return {true, e.code(), e.what()};
  }
  return {};
}

// --- filesystem ----------------------------------------------------------

class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    std::random_device rd;
    for (int attempt = 0; attempt < 64; ++attempt) {
      auto candidate = base / ("fairtail_test_" + std::to_string(rd()));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("cannot create temp directory");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void spit(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

}  // namespace test_support

#endif  // FAIRTAIL_TESTS_SUPPORT_HPP_
