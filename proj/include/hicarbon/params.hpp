#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace hicarbon {

enum class Architecture {
  rdl_fanout,
  silicon_bridge,
  passive_interposer,
  active_interposer,
  monolithic,
};

/// Canonical names: "rdl_fanout", "silicon_bridge", ...
std::string_view to_string(Architecture arch);

/// Accepts canonical names and the CLI short forms
/// rdl, emib, bridge, passive, active, mono.
Architecture architecture_from_string(std::string_view text);

/// Short CLI form ("rdl", "emib", "passive", "active", "mono").
std::string_view short_name(Architecture arch);

/// Packaging configuration. Energies are per cm² per metal layer, areas in
/// mm², lengths in mm.
struct PackagingParams {
  Architecture architecture = Architecture::rdl_fanout;
  std::string node = "65nm";  // RDL / bridge / interposer technology

  int l_rdl = 3;
  double epla_rdl = 0.05;  // kWh/cm²/layer

  int l_bridge = 4;
  double epla_bridge = 0.35;  // kWh/cm²/layer
  double bridge_range = 2.0;  // mm of die edge served by one bridge
  double bridge_area = 4.0;   // mm² per bridge

  // Passive interposer BEOL stack. Unset layer count falls back to l_rdl.
  std::optional<int> l_int;
  double epla_int = 0.08;  // kWh/cm²/layer

  double f_feol = 0.5;  // share of EPA spent on FEOL for active interposers

  int noc_ports = 5;
  int noc_flit_width = 512;  // bits
  double k_router = 40.0;    // transistors per bit-port

  double phy_area_frac = 0.01;
  double c_pkg_fixed = 150.0;  // g CO2, monolithic package
  double spacing = 0.5;        // chiplet-to-chiplet spacing, mm
  // Width/height ratios a die without explicit dimensions may take in the
  // floorplan; empty = square.
  std::vector<double> aspect_ratios;

  int interposer_layers() const { return l_int.value_or(l_rdl); }
};

/// Design-phase configuration. Times are CPU-hours, power in W.
struct DesignParams {
  double t_spr_ref = 24.0;     // one SP&R run of the reference design
  double ref_gates = 7.0e5;    // gate count of the reference design
  double spr_exponent = 1.0;   // runtime ~ gates^exponent
  double t_analyze_frac = 0.05;
  // Exactly one of these is set.
  std::optional<double> t_verif;
  std::optional<double> verif_share = 0.65;
  double n_des = 100.0;
  double p_des = 10.0;
  double n_parts = 200000.0;
  double transistors_per_gate = 4.0;
  std::set<std::string, std::less<>> reuse;
};

}  // namespace hicarbon
