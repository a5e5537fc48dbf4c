#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

#include "hicarbon/floorplan.hpp"
#include "hicarbon/system.hpp"

namespace hicarbon {

enum class ReportFormat { csv, json };

ReportFormat report_format_from_string(std::string_view text);

/// Fixed columns:
///   config_label, architecture, nc, status, c_mfg_<chiplet>..., c_mfg_total,
///   c_package, c_comm, c_hi, c_des, c_total, package_area_mm2,
///   whitespace_mm2, bridge_count, message
/// Chiplet columns are the union over all rows in first-seen order. Numbers
/// use shortest round-trip formatting; infeasible rows leave numerics empty.
std::string format_csv(std::span<const SweepEntry> entries);

/// Long form for a single evaluation: one row per carbon term
/// (term, component, carbon_g), c_total last.
std::string format_breakdown_csv(const CarbonReport& report);

nlohmann::json to_json(const CarbonReport& report);
nlohmann::json to_json(const FloorplanResult& floorplan);
nlohmann::json to_json(std::span<const SweepEntry> entries);

/// Writes through a temporary file in the same directory and renames it
/// into place. Empty path or "-" writes to stdout.
void write_atomic(const std::filesystem::path& path, const std::string& content);

void write_report(std::span<const SweepEntry> entries, ReportFormat format,
                  const std::filesystem::path& path);

}  // namespace hicarbon
