#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hicarbon/design.hpp"
#include "hicarbon/floorplan.hpp"
#include "hicarbon/manufacturing.hpp"
#include "hicarbon/packaging.hpp"
#include "hicarbon/params.hpp"
#include "hicarbon/techdb.hpp"

namespace hicarbon {

struct SystemSpec {
  std::string name;
  std::vector<Chiplet> chiplets;
  Connectivity connectivity;
  std::optional<std::string> logic_block;  // chiplet split by split_logic
  PackagingParams package;
  DesignParams design;
};

struct ChipletCarbon {
  std::string name;
  std::string node;
  DesignType type = DesignType::logic;
  MfgResult mfg;
};

struct CarbonReport {
  std::string system;
  Architecture architecture = Architecture::rdl_fanout;
  std::vector<ChipletCarbon> chiplets;  // manufacturing, in input order
  double c_package = 0;
  double c_comm = 0;
  double c_des = 0;  // amortized per part
  double c_total = 0;
  double package_area = 0;  // mm²
  double whitespace = 0;    // mm²
  std::optional<int> bridge_count;
  DesignResult design;
  FloorplanResult floorplan;

  double c_mfg() const;
  double c_hi() const { return c_package + c_comm; }
};

/// Checks names, node resolution, connectivity references and parameter
/// ranges. Throws ValidationError / UnknownNodeError.
void validate_system(const SystemSpec& spec, const TechDatabase& db,
                     std::vector<std::string>* warnings = nullptr);

SystemSpec parse_system(const nlohmann::json& doc, const TechDatabase& db);
SystemSpec load_system(const std::filesystem::path& path, const TechDatabase& db);
nlohmann::json to_json(const SystemSpec& spec);

/// Merges all dies into one die at the logic block's node (or the most
/// advanced node present), each block keeping the density of its type.
SystemSpec to_monolithic(const SystemSpec& spec, const TechDatabase& db);

/// Total embodied carbon: die manufacturing + amortized design + package
/// and communication overhead. Monolithic architecture merges the dies
/// first. Errors carry the failing stage in their message.
CarbonReport evaluate(const SystemSpec& spec, const TechDatabase& db);

/// Replaces the logic block by `n` equal chiplets "<name>0".."<name>{n-1}".
/// Explicit links of the old block attach to the first piece and the
/// pieces are chained.
SystemSpec split_logic(const SystemSpec& spec, int n);

/// "(logic,analog,memory)" node tuple, e.g. "(7,14,10)"; "-" for a design
/// type the system does not contain.
std::string config_label(const SystemSpec& spec, const TechDatabase& db);

struct SweepSpec {
  std::map<DesignType, std::vector<std::string>> node_choices;
  std::vector<int> nc_range{1};
  std::vector<Architecture> architectures{Architecture::rdl_fanout};
};

struct SweepEntry {
  std::string label;
  Architecture architecture = Architecture::rdl_fanout;
  int nc = 1;
  std::string status = "ok";  // "ok", "infeasible" or "error"
  std::optional<CarbonReport> report;  // empty unless status is "ok"
  std::string error;
};

/// Evaluates node assignments × logic splits × architectures. Order is
/// node tuples (logic slowest, then analog, then memory, each in the
/// listed order), then nc, then architecture. Per-point failures are
/// recorded, not thrown. `threads` = 0 uses hardware concurrency.
std::vector<SweepEntry> sweep(const SystemSpec& spec, const SweepSpec& grid,
                              const TechDatabase& db, unsigned threads = 0);

}  // namespace hicarbon
