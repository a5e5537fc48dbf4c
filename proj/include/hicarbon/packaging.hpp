#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hicarbon/floorplan.hpp"
#include "hicarbon/manufacturing.hpp"
#include "hicarbon/params.hpp"
#include "hicarbon/techdb.hpp"

namespace hicarbon {

/// Which die pairs need a die-to-die link. With `all_adjacent` every pair
/// sharing an edge in the floorplan is linked; otherwise only `pairs`.
struct Connectivity {
  bool all_adjacent = true;
  std::vector<std::pair<std::string, std::string>> pairs;
};

struct CommResult {
  double c_comm = 0;  // g CO2 charged directly to the package
  std::map<std::string, double> area_deltas;  // mm² added to each die
  double router_area_total = 0;  // mm² of router logic (all dies / interposer)
  std::vector<std::string> router_nodes;  // distinct nodes a router is designed in
};

struct PackageResult {
  double c_package = 0;  // g CO2
  double c_comm = 0;     // g CO2
  std::map<std::string, double> chiplet_area_deltas;
  double package_area = 0;  // mm²
  std::optional<int> bridge_count;

  double c_hi() const { return c_package + c_comm; }
};

/// RDL fan-out layers over the whole package, yield from the packaging node.
double rdl_cfp(double package_area, const PackagingParams& pp, const TechDatabase& db);

/// Bridges for the required links: ceil(overlap / range), at least one per
/// linked pair. Throws InfeasibleError if a required pair shares no edge.
int bridge_count(const FloorplanResult& floorplan, const Connectivity& connectivity,
                 double range);

double bridge_cfp(int n_bridges, const PackagingParams& pp, const TechDatabase& db);

/// Area of one NoC router built at `node`, mm²:
/// ports × flit width × transistors per bit-port / logic density.
double router_area(const PackagingParams& pp, std::string_view node, const TechDatabase& db);

/// Inter-die communication overhead. Passive interposers put a router on
/// every die (at the die's node); active interposers host them in the
/// interposer and are charged CFPA × router area directly; RDL and bridge
/// packages add a PHY slice to each die.
CommResult comm_cfp(Architecture arch, std::span<const Chiplet> chiplets,
                    const PackagingParams& pp, const TechDatabase& db);

/// Passive interposer: BEOL layers only, costed per layer and area.
double passive_interposer_cfp(double package_area, const PackagingParams& pp,
                              const TechDatabase& db);

/// Active interposer: a large die with BEOL everywhere and FEOL only over
/// the router area, in the interposer node.
double active_interposer_cfp(double package_area, double active_area,
                             const PackagingParams& pp, const TechDatabase& db);

/// Dispatches on pp.architecture. `floorplan` must already include the
/// dies' communication area deltas.
PackageResult package_cfp(std::span<const Chiplet> chiplets, const FloorplanResult& floorplan,
                          const Connectivity& connectivity, const PackagingParams& pp,
                          const TechDatabase& db);

}  // namespace hicarbon
