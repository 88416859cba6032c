#include "fairtail/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "fairtail/error.hpp"
#include "fairtail/format.hpp"

namespace fairtail {

const char* provider_mode_name(ProviderMode mode) {
  return mode == ProviderMode::identity ? "identity" : "mapped";
}

void write_report_csv(std::ostream& out, const GapReport& report) {
  out << "algorithm,group,gap_data,gap_rec,delta_gap\n";
  for (const auto& entry : report.algorithms) {
    for (Group g : {Group::head, Group::mid, Group::tail}) {
      const GroupGap& cell = entry.groups[static_cast<std::size_t>(g)];
      out << algorithm_name(entry.config.algorithm) << ',' << group_name(g) << ','
          << format_double(cell.gap_data) << ',' << format_double(cell.gap_rec) << ','
          << format_double(cell.delta_gap) << '\n';
    }
  }
}

std::string render_report_json(const GapReport& report) {
  using json = nlohmann::ordered_json;

  const AuditConfig& config = report.config;
  json doc;
  json algorithms = json::array();
  for (const auto& entry : report.algorithms)
    algorithms.push_back(algorithm_name(entry.config.algorithm));

  // Uniform CLI-level settings; per-algorithm derived seeds live with the
  // results.
  const RecommenderConfig& first = config.algorithms.front();
  doc["config"] = {{"algorithms", algorithms},
                   {"n", config.n},
                   {"seed", config.master_seed},
                   {"beta1", config.beta1},
                   {"beta2", config.beta2},
                   {"scaling", scaling_name(config.scaling)},
                   {"provider_mode", provider_mode_name(config.provider_mode)},
                   {"exclude_seen", first.exclude_seen},
                   {"k", first.k},
                   {"factors", first.factors},
                   {"epochs", first.epochs},
                   {"reg", first.reg}};

  doc["dataset"] = {{"users", report.num_users},
                    {"items", report.num_items},
                    {"providers", report.num_providers},
                    {"interactions", report.num_interactions},
                    {"events", static_cast<std::int64_t>(report.total_events)}};

  json sizes, shares;
  for (Group g : {Group::head, Group::mid, Group::tail}) {
    const auto& members = report.partition.members(g);
    double share = 0.0;
    for (std::uint32_t p : members) share += report.data_popularity.shares[p];
    sizes[group_name(g)] = members.size();
    shares[group_name(g)] = share;
  }
  doc["partition"] = {{"beta1", report.partition.beta1},
                      {"beta2", report.partition.beta2},
                      {"sizes", sizes},
                      {"data_shares", shares}};

  json results = json::array();
  for (const auto& entry : report.algorithms) {
    json groups;
    for (Group g : {Group::head, Group::mid, Group::tail}) {
      const GroupGap& cell = entry.groups[static_cast<std::size_t>(g)];
      groups[group_name(g)] = {{"gap_data", cell.gap_data},
                               {"gap_rec", cell.gap_rec},
                               {"delta_gap", cell.delta_gap}};
    }
    results.push_back({{"algorithm", algorithm_name(entry.config.algorithm)},
                       {"groups", groups},
                       {"diagnostics",
                        {{"coverage", entry.coverage},
                         {"n", entry.config.n},
                         {"seed", entry.config.seed},
                         {"beta1", report.partition.beta1},
                         {"beta2", report.partition.beta2}}}});
  }
  doc["results"] = results;

  return doc.dump(2) + "\n";
}

void print_report_summary(std::ostream& out, const GapReport& report) {
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %8s %12s %12s %12s %10s", "algorithm", "group",
                "gap_data", "gap_rec", "delta_gap", "coverage");
  out << line << '\n';
  for (const auto& entry : report.algorithms) {
    for (Group g : {Group::head, Group::mid, Group::tail}) {
      const GroupGap& cell = entry.groups[static_cast<std::size_t>(g)];
      std::snprintf(line, sizeof(line), "%-12s %8s %12.6f %12.6f %+12.4f %10.4f",
                    algorithm_name(entry.config.algorithm), group_name(g), cell.gap_data,
                    cell.gap_rec, cell.delta_gap, entry.coverage);
      out << line << '\n';
    }
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorCode::IoError, "cannot rename '" + tmp.string() + "': " + ec.message());
  }
}

}  // namespace fairtail
