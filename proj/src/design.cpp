#include "hicarbon/design.hpp"

#include <cmath>

namespace hicarbon {

double gate_count(double mtransistors, const DesignParams& dp) {
  return mtransistors * 1e6 / dp.transistors_per_gate;
}

double spr_time(double gates, const DesignParams& dp) {
  return dp.t_spr_ref * std::pow(gates / dp.ref_gates, dp.spr_exponent);
}

double design_time(double gates, const DesignParams& dp, double eta_eda) {
  double t_spr = spr_time(gates, dp);
  double iterations = (t_spr + dp.t_analyze_frac * t_spr) * dp.n_des;
  double t_verif = dp.t_verif ? *dp.t_verif
                              : iterations * *dp.verif_share / (1.0 - *dp.verif_share);
  return (t_verif + iterations) / eta_eda;
}

double design_time(const Chiplet& chiplet, const DesignParams& dp, const ProcessParams& params) {
  return design_time(gate_count(chiplet.mtransistors, dp), dp, params.eta_eda);
}

double design_carbon(double cpu_hours, const DesignParams& dp, const FabProfile& fab) {
  return cpu_hours * (dp.p_des / 1000.0) * fab.c_des_src;
}

double chiplet_design_cfp(const Chiplet& chiplet, const DesignParams& dp,
                          const TechDatabase& db) {
  if (dp.reuse.contains(chiplet.name)) return 0.0;
  return design_carbon(design_time(chiplet, dp, lookup(db, chiplet.node)), dp, db.fab);
}

DesignResult system_design_cfp(std::span<const Chiplet> chiplets, const DesignParams& dp,
                               const TechDatabase& db, std::span<const std::string> router_nodes,
                               double router_mtransistors) {
  DesignResult r;
  for (const auto& c : chiplets) {
    double g = chiplet_design_cfp(c, dp, db);
    r.per_chiplet_carbon[c.name] = g;
    r.total_unamortized += g;
  }
  for (const auto& node : router_nodes) {
    double hours =
        design_time(gate_count(router_mtransistors, dp), dp, lookup(db, node).eta_eda);
    r.comm_carbon += design_carbon(hours, dp, db.fab);
  }
  r.total_unamortized += r.comm_carbon;
  r.amortized_per_part = r.total_unamortized / dp.n_parts;
  return r;
}

}  // namespace hicarbon
