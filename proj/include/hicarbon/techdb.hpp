#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hicarbon/params.hpp"

namespace hicarbon {

enum class DesignType { logic, memory, analog };

inline constexpr DesignType kDesignTypes[] = {DesignType::logic, DesignType::memory,
                                              DesignType::analog};

std::string_view to_string(DesignType type);
DesignType design_type_from_string(std::string_view text);

struct TechnologyNode {
  std::string name;       // e.g. "7nm"
  double feature_nm = 0;  // numeric feature size used for ordering and labels
  int feature_index = 0;  // rank, 0 = most advanced
};

/// Per-node manufacturing and design inputs.
struct ProcessParams {
  double d0 = 0.1;     // defects / cm²
  double alpha = 3.0;  // clustering parameter
  std::map<DesignType, double> dt;  // Mtransistors / mm²
  double eta_eq = 1.0;
  double epa = 2.0;          // kWh / cm²
  double c_gas = 300.0;      // g CO2 / cm²
  double c_material = 500.0; // g CO2 / cm²
  double eta_eda = 1.0;

  /// Transistor density for `type`; throws ValidationError if absent.
  double density(DesignType type) const;

  friend bool operator==(const ProcessParams&, const ProcessParams&) = default;
};

/// Carbon intensities of the three energy sources, g CO2 / kWh.
struct FabProfile {
  double c_mfg_src = 700.0;
  double c_pkg_src = 700.0;
  double c_des_src = 700.0;

  friend bool operator==(const FabProfile&, const FabProfile&) = default;
};

struct NodeEntry {
  TechnologyNode node;
  ProcessParams params;
};

/// Immutable-after-load parameter set. Safe to share across threads by
/// const reference.
struct TechDatabase {
  std::map<std::string, NodeEntry, std::less<>> nodes;
  FabProfile fab;
  PackagingParams packaging_defaults;
  DesignParams design_defaults;
  bool allow_out_of_range = false;
  std::vector<std::string> warnings;

  bool contains(std::string_view node) const { return nodes.find(node) != nodes.end(); }
  const NodeEntry& entry(std::string_view node) const;
  const TechnologyNode& node(std::string_view name) const { return entry(name).node; }

  /// Resolves "7nm" exactly, or a bare "7" to "7nm".
  std::string resolve_name(std::string_view text) const;

  /// Nodes ordered from most to least advanced.
  std::vector<TechnologyNode> ordered_nodes() const;
};

/// The exact stored parameters for `node`. Throws UnknownNodeError.
const ProcessParams& lookup(const TechDatabase& db, std::string_view node);

struct LoadOptions {
  /// Turns range violations into warnings.
  bool allow_out_of_range = false;
};

TechDatabase parse_database(const nlohmann::json& doc, LoadOptions options = {});
TechDatabase load_database(const std::filesystem::path& path, LoadOptions options = {});
nlohmann::json to_json(const TechDatabase& db);

/// Checks every range invariant. Out-of-range values throw ValidationError
/// unless `db.allow_out_of_range`, in which case they are appended to
/// `db.warnings`. Also records ordering warnings (d0 vs. node age).
void validate(TechDatabase& db);

/// Range checks on configuration overrides, shared with system loading.
void validate_packaging(const PackagingParams& pp, const TechDatabase& db,
                        bool allow_out_of_range, std::vector<std::string>& warnings);
void validate_design(const DesignParams& dp, bool allow_out_of_range,
                     std::vector<std::string>& warnings);

// JSON <-> parameter structs. Missing keys keep the values already in
// `out`, so these double as override appliers.
void read_packaging(const nlohmann::json& j, PackagingParams& out);
void read_design(const nlohmann::json& j, DesignParams& out);
nlohmann::json to_json(const PackagingParams& pp);
nlohmann::json to_json(const DesignParams& dp);

}  // namespace hicarbon
