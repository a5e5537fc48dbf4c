#pragma once

#include <optional>
#include <string>

#include "hicarbon/techdb.hpp"

namespace hicarbon {

inline constexpr double kMm2PerCm2 = 100.0;

/// One die of the system.
struct Chiplet {
  std::string name;
  DesignType type = DesignType::logic;
  double mtransistors = 0;     // millions of transistors
  std::string node;
  double extra_area = 0;       // mm², routers / PHY added on top of the core
  std::optional<double> width;   // mm
  std::optional<double> height;  // mm
};

struct MfgResult {
  double area = 0;     // mm²
  double yield = 1;
  double cfpa = 0;     // g CO2 / cm²
  double carbon = 0;   // g CO2
};

/// Silicon area of the chiplet's own content: width × height when given,
/// otherwise transistor count over the density for its design type.
double core_area(const Chiplet& chiplet, const ProcessParams& params);

/// core_area + extra_area, in mm².
double die_area(const Chiplet& chiplet, const ProcessParams& params);

/// Negative binomial yield, area in mm².
double die_yield(double area_mm2, double d0, double alpha);
inline double die_yield(double area_mm2, const ProcessParams& params) {
  return die_yield(area_mm2, params.d0, params.alpha);
}

/// Carbon per unit good area, g CO2 / cm², for a fab powered at `c_src`
/// g CO2 / kWh. Only the energy term is derated by eta_eq.
double cfpa(double yield, const ProcessParams& params, double c_src);
inline double cfpa(double yield, const ProcessParams& params, const FabProfile& fab) {
  return cfpa(yield, params, fab.c_mfg_src);
}

/// area -> yield -> CFPA -> carbon for one die.
MfgResult chiplet_mfg_cfp(const Chiplet& chiplet, const TechDatabase& db);

}  // namespace hicarbon
