#include "hicarbon/techdb.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "hicarbon/error.hpp"
#include "hicarbon/format.hpp"

namespace hicarbon {

using nlohmann::json;

std::string_view to_string(DesignType type) {
  switch (type) {
    case DesignType::logic: return "logic";
    case DesignType::memory: return "memory";
    case DesignType::analog: return "analog";
  }
  return "?";
}

DesignType design_type_from_string(std::string_view text) {
  if (text == "logic") return DesignType::logic;
  if (text == "memory") return DesignType::memory;
  if (text == "analog") return DesignType::analog;
  throw ParseError("unknown design type '" + std::string(text) +
                   "' (expected logic, memory or analog)");
}

std::string_view to_string(Architecture arch) {
  switch (arch) {
    case Architecture::rdl_fanout: return "rdl_fanout";
    case Architecture::silicon_bridge: return "silicon_bridge";
    case Architecture::passive_interposer: return "passive_interposer";
    case Architecture::active_interposer: return "active_interposer";
    case Architecture::monolithic: return "monolithic";
  }
  return "?";
}

std::string_view short_name(Architecture arch) {
  switch (arch) {
    case Architecture::rdl_fanout: return "rdl";
    case Architecture::silicon_bridge: return "emib";
    case Architecture::passive_interposer: return "passive";
    case Architecture::active_interposer: return "active";
    case Architecture::monolithic: return "mono";
  }
  return "?";
}

Architecture architecture_from_string(std::string_view text) {
  if (text == "rdl" || text == "rdl_fanout") return Architecture::rdl_fanout;
  if (text == "emib" || text == "bridge" || text == "silicon_bridge")
    return Architecture::silicon_bridge;
  if (text == "passive" || text == "passive_interposer") return Architecture::passive_interposer;
  if (text == "active" || text == "active_interposer") return Architecture::active_interposer;
  if (text == "mono" || text == "monolithic") return Architecture::monolithic;
  throw ParseError("unknown package architecture '" + std::string(text) +
                   "' (expected rdl, emib, passive, active or mono)");
}

double ProcessParams::density(DesignType type) const {
  auto it = dt.find(type);
  if (it == dt.end())
    throw ValidationError("no transistor density for design type '" +
                          std::string(to_string(type)) + "'");
  return it->second;
}

const NodeEntry& TechDatabase::entry(std::string_view name) const {
  auto it = nodes.find(name);
  if (it == nodes.end()) throw UnknownNodeError(std::string(name));
  return it->second;
}

std::string TechDatabase::resolve_name(std::string_view text) const {
  if (contains(text)) return std::string(text);
  std::string with_suffix = std::string(text) + "nm";
  if (contains(with_suffix)) return with_suffix;
  throw UnknownNodeError(std::string(text));
}

std::vector<TechnologyNode> TechDatabase::ordered_nodes() const {
  std::vector<TechnologyNode> out;
  out.reserve(nodes.size());
  for (const auto& [name, e] : nodes) out.push_back(e.node);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.feature_index < b.feature_index;
  });
  return out;
}

const ProcessParams& lookup(const TechDatabase& db, std::string_view node) {
  return db.entry(node).params;
}

namespace {

// Collects range violations either as hard errors or as warnings.
class Checker {
 public:
  Checker(bool lenient, std::vector<std::string>& warnings)
      : lenient_(lenient), warnings_(warnings) {}

  // Documented range; overridable.
  void range(const std::string& where, const char* field, double v, double lo, double hi) {
    if (v >= lo && v <= hi) return;
    std::string msg = where + field + " = " + format_double(v) + " out of range [" +
                      format_double(lo) + "," + format_double(hi) + "]";
    if (!lenient_) throw ValidationError(msg);
    warnings_.push_back(msg);
  }

  // Structural requirement; never overridable.
  static void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
  }

 private:
  bool lenient_;
  std::vector<std::string>& warnings_;
};

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> known,
                         const std::string& where) {
  if (!j.is_object()) throw ParseError(where + "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!key.empty() && key.front() == '_') continue;  // annotation
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ParseError(where + "unknown key '" + key + "'");
  }
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->template get<T>();
}

template <typename T>
T read_req(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + "missing required key '" + key + "'");
  return it->template get<T>();
}

ProcessParams read_node(const json& j, const std::string& where, double alpha,
                        double c_material, double& feature_nm) {
  reject_unknown_keys(j, {"feature_nm", "d0", "dt", "eta_eq", "epa", "c_gas", "c_material",
                          "eta_eda"},
                      where);
  ProcessParams p;
  feature_nm = read_req<double>(j, "feature_nm", where);
  p.d0 = read_req<double>(j, "d0", where);
  p.alpha = alpha;
  const json& dt = j.at("dt");
  reject_unknown_keys(dt, {"logic", "memory", "analog"}, where + "dt.");
  for (const auto& [key, value] : dt.items()) {
    if (!key.empty() && key.front() == '_') continue;
    p.dt[design_type_from_string(key)] = value.get<double>();
  }
  p.eta_eq = read_req<double>(j, "eta_eq", where);
  p.epa = read_req<double>(j, "epa", where);
  p.c_gas = read_req<double>(j, "c_gas", where);
  p.c_material = c_material;
  read_opt(j, "c_material", p.c_material);
  p.eta_eda = read_req<double>(j, "eta_eda", where);
  return p;
}

}  // namespace

void read_packaging(const json& j, PackagingParams& out) {
  reject_unknown_keys(j, {"architecture", "node", "l_rdl", "epla_rdl", "l_bridge",
                          "epla_bridge", "bridge_range", "bridge_area", "l_int", "epla_int",
                          "f_feol", "noc_ports", "noc_flit_width", "k_router",
                          "phy_area_frac", "c_pkg_fixed", "spacing", "aspect_ratios"},
                      "packaging: ");
  if (auto it = j.find("architecture"); it != j.end())
    out.architecture = architecture_from_string(it->get<std::string>());
  read_opt(j, "node", out.node);
  read_opt(j, "l_rdl", out.l_rdl);
  read_opt(j, "epla_rdl", out.epla_rdl);
  read_opt(j, "l_bridge", out.l_bridge);
  read_opt(j, "epla_bridge", out.epla_bridge);
  read_opt(j, "bridge_range", out.bridge_range);
  read_opt(j, "bridge_area", out.bridge_area);
  if (auto it = j.find("l_int"); it != j.end()) {
    if (it->is_null())
      out.l_int.reset();
    else
      out.l_int = it->get<int>();
  }
  read_opt(j, "epla_int", out.epla_int);
  read_opt(j, "f_feol", out.f_feol);
  read_opt(j, "noc_ports", out.noc_ports);
  read_opt(j, "noc_flit_width", out.noc_flit_width);
  read_opt(j, "k_router", out.k_router);
  read_opt(j, "phy_area_frac", out.phy_area_frac);
  read_opt(j, "c_pkg_fixed", out.c_pkg_fixed);
  read_opt(j, "spacing", out.spacing);
  read_opt(j, "aspect_ratios", out.aspect_ratios);
}

void read_design(const json& j, DesignParams& out) {
  reject_unknown_keys(j, {"t_spr_ref", "ref_gates", "spr_exponent", "t_analyze_frac",
                          "t_verif", "verif_share", "n_des", "p_des", "n_parts",
                          "transistors_per_gate", "reuse"},
                      "design: ");
  read_opt(j, "t_spr_ref", out.t_spr_ref);
  read_opt(j, "ref_gates", out.ref_gates);
  read_opt(j, "spr_exponent", out.spr_exponent);
  read_opt(j, "t_analyze_frac", out.t_analyze_frac);
  bool has_verif = j.contains("t_verif") && !j.at("t_verif").is_null();
  bool has_share = j.contains("verif_share") && !j.at("verif_share").is_null();
  if (has_verif && has_share)
    throw ValidationError("design: specify only one of t_verif and verif_share");
  if (has_verif) {
    out.t_verif = j.at("t_verif").get<double>();
    out.verif_share.reset();
  }
  if (has_share) {
    out.verif_share = j.at("verif_share").get<double>();
    out.t_verif.reset();
  }
  read_opt(j, "n_des", out.n_des);
  read_opt(j, "p_des", out.p_des);
  read_opt(j, "n_parts", out.n_parts);
  read_opt(j, "transistors_per_gate", out.transistors_per_gate);
  if (auto it = j.find("reuse"); it != j.end()) {
    out.reuse.clear();
    for (const auto& name : *it) out.reuse.insert(name.get<std::string>());
  }
}

json to_json(const PackagingParams& pp) {
  json j = {
      {"architecture", std::string(to_string(pp.architecture))},
      {"node", pp.node},
      {"l_rdl", pp.l_rdl},
      {"epla_rdl", pp.epla_rdl},
      {"l_bridge", pp.l_bridge},
      {"epla_bridge", pp.epla_bridge},
      {"bridge_range", pp.bridge_range},
      {"bridge_area", pp.bridge_area},
      {"epla_int", pp.epla_int},
      {"f_feol", pp.f_feol},
      {"noc_ports", pp.noc_ports},
      {"noc_flit_width", pp.noc_flit_width},
      {"k_router", pp.k_router},
      {"phy_area_frac", pp.phy_area_frac},
      {"c_pkg_fixed", pp.c_pkg_fixed},
      {"spacing", pp.spacing},
      {"aspect_ratios", pp.aspect_ratios},
  };
  if (pp.l_int) j["l_int"] = *pp.l_int;
  return j;
}

json to_json(const DesignParams& dp) {
  json j = {
      {"t_spr_ref", dp.t_spr_ref},
      {"ref_gates", dp.ref_gates},
      {"spr_exponent", dp.spr_exponent},
      {"t_analyze_frac", dp.t_analyze_frac},
      {"n_des", dp.n_des},
      {"p_des", dp.p_des},
      {"n_parts", dp.n_parts},
      {"transistors_per_gate", dp.transistors_per_gate},
      {"reuse", json::array()},
  };
  if (dp.t_verif) j["t_verif"] = *dp.t_verif;
  if (dp.verif_share) j["verif_share"] = *dp.verif_share;
  for (const auto& name : dp.reuse) j["reuse"].push_back(name);
  return j;
}

void validate_packaging(const PackagingParams& pp, const TechDatabase& db,
                        bool allow_out_of_range, std::vector<std::string>& warnings) {
  Checker c(allow_out_of_range, warnings);
  const std::string where = "packaging: ";
  const auto& node = db.node(pp.node);
  c.range(where, "node feature_nm", node.feature_nm, 22, 65);
  c.range(where, "l_rdl", pp.l_rdl, 3, 4);
  c.range(where, "epla_rdl", pp.epla_rdl, 0.05, 0.2);
  c.range(where, "l_bridge", pp.l_bridge, 3, 4);
  c.range(where, "epla_bridge", pp.epla_bridge, 0.1, 0.35);
  c.range(where, "epla_int", pp.epla_int, 0.05, 0.2);
  c.range(where, "spacing", pp.spacing, 0.1, 1.0);
  Checker::require(pp.l_rdl > 0 && pp.l_bridge > 0 && pp.interposer_layers() > 0,
                   where + "layer counts must be positive");
  Checker::require(pp.epla_rdl > 0 && pp.epla_bridge > 0 && pp.epla_int > 0,
                   where + "EPLA values must be positive");
  Checker::require(pp.bridge_range > 0, where + "bridge_range must be positive");
  Checker::require(pp.bridge_area > 0, where + "bridge_area must be positive");
  Checker::require(pp.f_feol >= 0 && pp.f_feol <= 1, where + "f_feol must lie in [0,1]");
  Checker::require(pp.noc_ports > 0, where + "noc_ports must be positive");
  Checker::require(pp.noc_flit_width >= 0, where + "noc_flit_width must be non-negative");
  Checker::require(pp.k_router > 0, where + "k_router must be positive");
  Checker::require(pp.phy_area_frac >= 0 && pp.phy_area_frac < 1,
                   where + "phy_area_frac must lie in [0,1)");
  Checker::require(pp.c_pkg_fixed >= 0, where + "c_pkg_fixed must be non-negative");
  Checker::require(pp.spacing >= 0, where + "spacing must be non-negative");
  for (double r : pp.aspect_ratios)
    Checker::require(r > 0, where + "aspect_ratios must be positive");
}

void validate_design(const DesignParams& dp, bool allow_out_of_range,
                     std::vector<std::string>& warnings) {
  Checker c(allow_out_of_range, warnings);
  const std::string where = "design: ";
  Checker::require(dp.t_verif.has_value() != dp.verif_share.has_value(),
                   where + "exactly one of t_verif and verif_share must be set");
  if (dp.verif_share)
    Checker::require(*dp.verif_share >= 0 && *dp.verif_share < 1,
                     where + "verif_share must lie in [0,1)");
  if (dp.t_verif) Checker::require(*dp.t_verif >= 0, where + "t_verif must be non-negative");
  Checker::require(dp.t_spr_ref > 0, where + "t_spr_ref must be positive");
  Checker::require(dp.ref_gates > 0, where + "ref_gates must be positive");
  Checker::require(dp.spr_exponent > 0, where + "spr_exponent must be positive");
  Checker::require(dp.t_analyze_frac >= 0, where + "t_analyze_frac must be non-negative");
  Checker::require(dp.n_des > 0, where + "n_des must be positive");
  Checker::require(dp.p_des > 0, where + "p_des must be positive");
  Checker::require(dp.n_parts > 0, where + "n_parts must be positive");
  Checker::require(dp.transistors_per_gate > 0, where + "transistors_per_gate must be positive");
  (void)c;
}

void validate(TechDatabase& db) {
  Checker c(db.allow_out_of_range, db.warnings);
  Checker::require(!db.nodes.empty(), "database defines no technology nodes");
  c.range("fab: ", "c_mfg_src", db.fab.c_mfg_src, 30, 700);
  c.range("fab: ", "c_pkg_src", db.fab.c_pkg_src, 30, 700);
  c.range("fab: ", "c_des_src", db.fab.c_des_src, 30, 700);

  const double alpha = db.nodes.begin()->second.params.alpha;
  for (const auto& [name, e] : db.nodes) {
    const std::string where = name + ": ";
    const auto& p = e.params;
    c.range(where, "d0", p.d0, 0.07, 0.3);
    Checker::require(p.d0 > 0, where + "d0 must be positive");
    Checker::require(p.alpha > 0, where + "alpha must be positive");
    Checker::require(p.alpha == alpha, where + "alpha must be identical for all nodes");
    for (const auto& [type, density] : p.dt) {
      c.range(where, ("dt." + std::string(to_string(type))).c_str(), density, 5, 150);
      Checker::require(density > 0, where + "transistor densities must be positive");
    }
    Checker::require(p.eta_eq > 0 && p.eta_eq <= 1,
                     where + "eta_eq = " + format_double(p.eta_eq) + " outside (0,1]");
    c.range(where, "epa", p.epa, 0.8, 3.5);
    c.range(where, "c_gas", p.c_gas, 100, 500);
    Checker::require(p.c_material > 0, where + "c_material must be positive");
    Checker::require(p.eta_eda > 0 && p.eta_eda <= 1,
                     where + "eta_eda = " + format_double(p.eta_eda) + " outside (0,1]");
    Checker::require(e.node.feature_nm > 0, where + "feature_nm must be positive");
  }

  // Older nodes are expected to have lower (or equal) defect density.
  auto ordered = db.ordered_nodes();
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    const auto& newer = db.entry(ordered[i - 1].name).params;
    const auto& older = db.entry(ordered[i].name).params;
    if (older.d0 > newer.d0)
      db.warnings.push_back("d0 increases from " + ordered[i - 1].name + " to " +
                            ordered[i].name + " (older nodes usually have lower d0)");
  }

  validate_packaging(db.packaging_defaults, db, db.allow_out_of_range, db.warnings);
  validate_design(db.design_defaults, db.allow_out_of_range, db.warnings);
}

TechDatabase parse_database(const json& doc, LoadOptions options) {
  TechDatabase db;
  try {
    reject_unknown_keys(doc, {"alpha", "c_material", "fab", "nodes", "packaging", "design",
                              "allow_out_of_range"},
                        "");
    double alpha = 3.0;
    double c_material = 500.0;
    read_opt(doc, "alpha", alpha);
    read_opt(doc, "c_material", c_material);
    read_opt(doc, "allow_out_of_range", db.allow_out_of_range);
    db.allow_out_of_range = db.allow_out_of_range || options.allow_out_of_range;

    if (auto it = doc.find("fab"); it != doc.end()) {
      reject_unknown_keys(*it, {"c_mfg_src", "c_pkg_src", "c_des_src"}, "fab: ");
      read_opt(*it, "c_mfg_src", db.fab.c_mfg_src);
      read_opt(*it, "c_pkg_src", db.fab.c_pkg_src);
      read_opt(*it, "c_des_src", db.fab.c_des_src);
    }

    const json& nodes = doc.at("nodes");
    if (!nodes.is_object()) throw ParseError("'nodes' must be an object keyed by node name");
    for (const auto& [name, body] : nodes.items()) {
      NodeEntry e;
      e.node.name = name;
      e.params = read_node(body, name + ": ", alpha, c_material, e.node.feature_nm);
      db.nodes.emplace(name, std::move(e));
    }

    // feature_index: rank by feature size, smallest first.
    std::vector<std::pair<double, std::string>> order;
    for (const auto& [name, e] : db.nodes) order.emplace_back(e.node.feature_nm, name);
    std::sort(order.begin(), order.end());
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i > 0 && order[i].first == order[i - 1].first)
        throw ValidationError("nodes '" + order[i - 1].second + "' and '" + order[i].second +
                              "' share feature size " + format_double(order[i].first));
      db.nodes.find(order[i].second)->second.node.feature_index = static_cast<int>(i);
    }

    if (auto it = doc.find("packaging"); it != doc.end()) read_packaging(*it, db.packaging_defaults);
    if (auto it = doc.find("design"); it != doc.end()) read_design(*it, db.design_defaults);
  } catch (const json::exception& e) {
    throw ParseError(std::string("database: ") + e.what());
  }
  validate(db);
  return db;
}

TechDatabase load_database(const std::filesystem::path& path, LoadOptions options) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open database file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    return parse_database(doc, options);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

json to_json(const TechDatabase& db) {
  json j;
  const auto& first = db.nodes.begin()->second.params;
  j["alpha"] = first.alpha;
  j["c_material"] = first.c_material;
  j["allow_out_of_range"] = db.allow_out_of_range;
  j["fab"] = {{"c_mfg_src", db.fab.c_mfg_src},
              {"c_pkg_src", db.fab.c_pkg_src},
              {"c_des_src", db.fab.c_des_src}};
  json nodes = json::object();
  for (const auto& [name, e] : db.nodes) {
    const auto& p = e.params;
    json dt = json::object();
    for (const auto& [type, v] : p.dt) dt[std::string(to_string(type))] = v;
    json n = {{"feature_nm", e.node.feature_nm}, {"d0", p.d0},        {"dt", dt},
              {"eta_eq", p.eta_eq},              {"epa", p.epa},      {"c_gas", p.c_gas},
              {"eta_eda", p.eta_eda}};
    if (p.c_material != first.c_material) n["c_material"] = p.c_material;
    nodes[name] = std::move(n);
  }
  j["nodes"] = std::move(nodes);
  j["packaging"] = to_json(db.packaging_defaults);
  j["design"] = to_json(db.design_defaults);
  return j;
}

}  // namespace hicarbon
