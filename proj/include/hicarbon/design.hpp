#pragma once

#include <map>
#include <span>
#include <string>

#include "hicarbon/manufacturing.hpp"
#include "hicarbon/params.hpp"
#include "hicarbon/techdb.hpp"

namespace hicarbon {

struct DesignResult {
  std::map<std::string, double> per_chiplet_carbon;  // g CO2, not amortized
  double comm_carbon = 0;                            // router / NIC design, g CO2
  double total_unamortized = 0;
  double amortized_per_part = 0;
};

double gate_count(double mtransistors, const DesignParams& dp);

/// CPU-hours of one SP&R run: t_spr_ref × (gates / ref_gates)^spr_exponent.
double spr_time(double gates, const DesignParams& dp);

/// Total design CPU-hours for a block of `gates` at a node with EDA
/// productivity `eta_eda`:
///   (t_verif + (t_spr + t_analyze) × n_des) / eta_eda.
/// With verif_share instead of t_verif, verification is that share of the
/// undivided total.
double design_time(double gates, const DesignParams& dp, double eta_eda);
double design_time(const Chiplet& chiplet, const DesignParams& dp, const ProcessParams& params);

/// g CO2 for `cpu_hours` of design compute.
double design_carbon(double cpu_hours, const DesignParams& dp, const FabProfile& fab);

/// Unamortized design carbon of one chiplet; zero if it is reused.
double chiplet_design_cfp(const Chiplet& chiplet, const DesignParams& dp,
                          const TechDatabase& db);

/// Sums chiplet design carbon plus one router design per entry of
/// `router_nodes` (transistors = ports × flit × k_router), then amortizes
/// over dp.n_parts.
DesignResult system_design_cfp(std::span<const Chiplet> chiplets, const DesignParams& dp,
                               const TechDatabase& db,
                               std::span<const std::string> router_nodes = {},
                               double router_mtransistors = 0);

}  // namespace hicarbon
