#include "hicarbon/packaging.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hicarbon/error.hpp"
#include "hicarbon/format.hpp"

namespace hicarbon {

namespace {

// Guards ceil() against overlaps like 10.000000000001 mm from sqrt round-off.
constexpr double kCountEps = 1e-9;

double per_layer_cfp(int layers, double epla, double c_src, double area_mm2, double yield) {
  return layers * epla * c_src * (area_mm2 / kMm2PerCm2) / yield;
}

}  // namespace

double rdl_cfp(double package_area, const PackagingParams& pp, const TechDatabase& db) {
  const ProcessParams& node = lookup(db, pp.node);
  return per_layer_cfp(pp.l_rdl, pp.epla_rdl, db.fab.c_pkg_src, package_area,
                       die_yield(package_area, node));
}

int bridge_count(const FloorplanResult& floorplan, const Connectivity& connectivity,
                 double range) {
  if (!(range > 0)) throw ValidationError("bridge range must be positive");
  auto bridges_for = [range](double overlap) {
    return std::max(1, static_cast<int>(std::ceil(overlap / range - kCountEps)));
  };

  int total = 0;
  if (connectivity.all_adjacent) {
    for (const auto& adj : floorplan.adjacencies) total += bridges_for(adj.overlap);
    return total;
  }

  auto index_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < floorplan.items.size(); ++i)
      if (floorplan.items[i].name == name) return i;
    throw ValidationError("connectivity references unknown chiplet '" + name + "'");
  };
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& [first, second] : connectivity.pairs) {
    std::size_t a = index_of(first);
    std::size_t b = index_of(second);
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) continue;
    auto it = std::find_if(floorplan.adjacencies.begin(), floorplan.adjacencies.end(),
                           [&](const Adjacency& adj) { return adj.a == a && adj.b == b; });
    if (it == floorplan.adjacencies.end())
      throw InfeasibleError("chiplets '" + first + "' and '" + second +
                            "' require a bridge but share no edge in the floorplan");
    total += bridges_for(it->overlap);
  }
  return total;
}

double bridge_cfp(int n_bridges, const PackagingParams& pp, const TechDatabase& db) {
  if (n_bridges < 0) throw ValidationError("bridge count must be non-negative");
  const ProcessParams& node = lookup(db, pp.node);
  return n_bridges * per_layer_cfp(pp.l_bridge, pp.epla_bridge, db.fab.c_pkg_src,
                                   pp.bridge_area, die_yield(pp.bridge_area, node));
}

double router_area(const PackagingParams& pp, std::string_view node, const TechDatabase& db) {
  const ProcessParams& params = lookup(db, node);
  double transistors = static_cast<double>(pp.noc_ports) * pp.noc_flit_width * pp.k_router;
  return transistors / (params.density(DesignType::logic) * 1e6);
}

CommResult comm_cfp(Architecture arch, std::span<const Chiplet> chiplets,
                    const PackagingParams& pp, const TechDatabase& db) {
  CommResult r;
  switch (arch) {
    case Architecture::monolithic:
      break;
    case Architecture::rdl_fanout:
    case Architecture::silicon_bridge:
      for (const auto& c : chiplets)
        r.area_deltas[c.name] = pp.phy_area_frac * core_area(c, lookup(db, c.node));
      break;
    case Architecture::passive_interposer: {
      std::set<std::string> nodes;
      for (const auto& c : chiplets) {
        double a = router_area(pp, c.node, db);
        r.area_deltas[c.name] = a;
        r.router_area_total += a;
        nodes.insert(c.node);
      }
      r.router_nodes.assign(nodes.begin(), nodes.end());
      break;
    }
    case Architecture::active_interposer: {
      const ProcessParams& node = lookup(db, pp.node);
      r.router_area_total = static_cast<double>(chiplets.size()) * router_area(pp, pp.node, db);
      double yield = die_yield(r.router_area_total, node);
      r.c_comm = cfpa(yield, node, db.fab) * (r.router_area_total / kMm2PerCm2);
      r.router_nodes = {pp.node};
      break;
    }
  }
  return r;
}

double passive_interposer_cfp(double package_area, const PackagingParams& pp,
                              const TechDatabase& db) {
  const ProcessParams& node = lookup(db, pp.node);
  return per_layer_cfp(pp.interposer_layers(), pp.epla_int, db.fab.c_pkg_src, package_area,
                       die_yield(package_area, node));
}

double active_interposer_cfp(double package_area, double active_area,
                             const PackagingParams& pp, const TechDatabase& db) {
  const ProcessParams& node = lookup(db, pp.node);
  double a_int = package_area / kMm2PerCm2;
  double a_active = active_area / kMm2PerCm2;
  double energy = node.eta_eq * db.fab.c_pkg_src *
                  (node.epa * (1.0 - pp.f_feol) * a_int + node.epa * pp.f_feol * a_active);
  double gas_material = (node.c_gas + node.c_material) * a_int;
  return (energy + gas_material) / die_yield(package_area, node);
}

PackageResult package_cfp(std::span<const Chiplet> chiplets, const FloorplanResult& floorplan,
                          const Connectivity& connectivity, const PackagingParams& pp,
                          const TechDatabase& db) {
  CommResult comm = comm_cfp(pp.architecture, chiplets, pp, db);
  PackageResult r;
  r.c_comm = comm.c_comm;
  r.chiplet_area_deltas = std::move(comm.area_deltas);
  r.package_area = floorplan.package_area;
  switch (pp.architecture) {
    case Architecture::rdl_fanout:
      r.c_package = rdl_cfp(r.package_area, pp, db);
      break;
    case Architecture::silicon_bridge: {
      int n = bridge_count(floorplan, connectivity, pp.bridge_range);
      r.bridge_count = n;
      r.c_package = bridge_cfp(n, pp, db);
      break;
    }
    case Architecture::passive_interposer:
      r.c_package = passive_interposer_cfp(r.package_area, pp, db);
      break;
    case Architecture::active_interposer:
      r.c_package = active_interposer_cfp(r.package_area, comm.router_area_total, pp, db);
      break;
    case Architecture::monolithic:
      r.c_package = pp.c_pkg_fixed;
      break;
  }
  return r;
}

}  // namespace hicarbon
