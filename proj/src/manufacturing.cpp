#include "hicarbon/manufacturing.hpp"

#include <cmath>

#include "hicarbon/error.hpp"

namespace hicarbon {

double core_area(const Chiplet& chiplet, const ProcessParams& params) {
  if (chiplet.width && chiplet.height) return *chiplet.width * *chiplet.height;
  return chiplet.mtransistors / params.density(chiplet.type);
}

double die_area(const Chiplet& chiplet, const ProcessParams& params) {
  return core_area(chiplet, params) + chiplet.extra_area;
}

double die_yield(double area_mm2, double d0, double alpha) {
  return std::pow(1.0 + (area_mm2 / kMm2PerCm2) * d0 / alpha, -alpha);
}

double cfpa(double yield, const ProcessParams& params, double c_src) {
  return (params.eta_eq * c_src * params.epa + params.c_gas + params.c_material) / yield;
}

MfgResult chiplet_mfg_cfp(const Chiplet& chiplet, const TechDatabase& db) {
  const ProcessParams& params = lookup(db, chiplet.node);
  MfgResult r;
  r.area = die_area(chiplet, params);
  r.yield = die_yield(r.area, params);
  r.cfpa = cfpa(r.yield, params, db.fab);
  r.carbon = r.cfpa * (r.area / kMm2PerCm2);
  return r;
}

}  // namespace hicarbon
