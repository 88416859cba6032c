#ifndef FAIRTAIL_REPORT_IO_HPP_
#define FAIRTAIL_REPORT_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>

#include "fairtail/fairness.hpp"

namespace fairtail {

const char* provider_mode_name(ProviderMode mode);

/// algorithm,group,gap_data,gap_rec,delta_gap rows, groups in
/// High-P/Mid-P/Low-P order.
void write_report_csv(std::ostream& out, const GapReport& report);

/// JSON document with the effective config echo, dataset and partition
/// diagnostics, and one result object per algorithm. Field order is fixed
/// and numbers use shortest round-trip form, so equal reports serialize to
/// identical bytes.
std::string render_report_json(const GapReport& report);

/// Plain-text per-group delta-GAP summary for the terminal.
void print_report_summary(std::ostream& out, const GapReport& report);

/// Writes to "<path>.tmp" and renames onto path, so failures never leave a
/// partial file behind. Throws Error{IoError}.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace fairtail

#endif  // FAIRTAIL_REPORT_IO_HPP_
