#include "hicarbon/system.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <thread>

#include "hicarbon/error.hpp"
#include "hicarbon/format.hpp"

namespace hicarbon {

using nlohmann::json;

double CarbonReport::c_mfg() const {
  double sum = 0;
  for (const auto& c : chiplets) sum += c.mfg.carbon;
  return sum;
}

namespace {

const Chiplet* find_chiplet(const SystemSpec& spec, std::string_view name) {
  for (const auto& c : spec.chiplets)
    if (c.name == name) return &c;
  return nullptr;
}

// The block split_logic / to_monolithic key on: the designated one, else
// the only logic-type chiplet.
const Chiplet* logic_chiplet(const SystemSpec& spec) {
  if (spec.logic_block) return find_chiplet(spec, *spec.logic_block);
  const Chiplet* found = nullptr;
  for (const auto& c : spec.chiplets) {
    if (c.type != DesignType::logic) continue;
    if (found) return nullptr;
    found = &c;
  }
  return found;
}

}  // namespace

void validate_system(const SystemSpec& spec, const TechDatabase& db,
                     std::vector<std::string>* warnings) {
  if (spec.chiplets.empty()) throw ValidationError("system '" + spec.name + "' has no chiplets");
  std::set<std::string, std::less<>> names;
  for (const auto& c : spec.chiplets) {
    const std::string where = "chiplet '" + c.name + "': ";
    if (c.name.empty()) throw ValidationError("chiplet with empty name");
    if (!names.insert(c.name).second) throw ValidationError("duplicate chiplet name '" + c.name + "'");
    if (!(c.mtransistors > 0)) throw ValidationError(where + "mtransistors must be positive");
    if (!(c.extra_area >= 0)) throw ValidationError(where + "extra_area must be non-negative");
    if (!db.contains(c.node))
      throw ValidationError(where + "unknown technology node '" + c.node + "'");
    const ProcessParams& p = lookup(db, c.node);
    double density_area = c.mtransistors / p.density(c.type);
    if (c.width.has_value() != c.height.has_value())
      throw ValidationError(where + "width and height must be given together");
    if (c.width) {
      if (!(*c.width > 0 && *c.height > 0))
        throw ValidationError(where + "width and height must be positive");
      if (*c.width * *c.height < density_area * (1 - 1e-9))
        throw ValidationError(where + "width x height " + format_double(*c.width * *c.height) +
                              " mm2 is smaller than the derived core area " +
                              format_double(density_area) + " mm2");
    }
  }
  for (const auto& [a, b] : spec.connectivity.pairs) {
    if (!names.contains(a) || !names.contains(b))
      throw ValidationError("connectivity pair (" + a + ", " + b + ") names an unknown chiplet");
    if (a == b) throw ValidationError("connectivity pair links '" + a + "' to itself");
  }
  if (spec.logic_block) {
    const Chiplet* c = find_chiplet(spec, *spec.logic_block);
    if (!c) throw ValidationError("logic_block '" + *spec.logic_block + "' is not a chiplet");
  }
  std::vector<std::string> local;
  std::vector<std::string>& sink = warnings ? *warnings : local;
  validate_packaging(spec.package, db, db.allow_out_of_range, sink);
  validate_design(spec.design, db.allow_out_of_range, sink);
  for (const auto& r : spec.design.reuse)
    if (!names.contains(r)) sink.push_back("reuse names unknown chiplet '" + r + "'");
}

SystemSpec parse_system(const json& doc, const TechDatabase& db) {
  SystemSpec spec;
  spec.package = db.packaging_defaults;
  spec.design = db.design_defaults;
  try {
    for (const auto& [key, value] : doc.items()) {
      static const std::set<std::string> known = {"name", "chiplets", "connectivity",
                                                  "logic_block", "package", "design"};
      if (!key.empty() && key.front() == '_') continue;
      if (!known.contains(key)) throw ParseError("system: unknown key '" + key + "'");
    }
    spec.name = doc.value("name", std::string("system"));
    for (const auto& j : doc.at("chiplets")) {
      for (const auto& [key, value] : j.items()) {
        static const std::set<std::string> known = {"name",  "type",   "mtransistors", "node",
                                                    "width", "height", "extra_area"};
        if (!key.empty() && key.front() == '_') continue;
        if (!known.contains(key)) throw ParseError("chiplet: unknown key '" + key + "'");
      }
      Chiplet c;
      c.name = j.at("name").get<std::string>();
      c.type = design_type_from_string(j.at("type").get<std::string>());
      c.mtransistors = j.at("mtransistors").get<double>();
      std::string node = j.at("node").get<std::string>();
      c.node = db.contains(node) ? node : db.contains(node + "nm") ? node + "nm" : node;
      c.extra_area = j.value("extra_area", 0.0);
      if (j.contains("width")) c.width = j.at("width").get<double>();
      if (j.contains("height")) c.height = j.at("height").get<double>();
      spec.chiplets.push_back(std::move(c));
    }
    if (auto it = doc.find("connectivity"); it != doc.end()) {
      if (it->is_string()) {
        if (it->get<std::string>() != "adjacent")
          throw ParseError("connectivity must be \"adjacent\" or a list of pairs");
        spec.connectivity.all_adjacent = true;
      } else {
        spec.connectivity.all_adjacent = false;
        for (const auto& pair : *it) {
          if (!pair.is_array() || pair.size() != 2)
            throw ParseError("connectivity entries must be [a, b] pairs");
          spec.connectivity.pairs.emplace_back(pair[0].get<std::string>(),
                                               pair[1].get<std::string>());
        }
      }
    }
    if (auto it = doc.find("logic_block"); it != doc.end() && !it->is_null())
      spec.logic_block = it->get<std::string>();
    if (auto it = doc.find("package"); it != doc.end()) read_packaging(*it, spec.package);
    if (auto it = doc.find("design"); it != doc.end()) read_design(*it, spec.design);
  } catch (const json::exception& e) {
    throw ParseError(std::string("system: ") + e.what());
  }
  validate_system(spec, db);
  return spec;
}

SystemSpec load_system(const std::filesystem::path& path, const TechDatabase& db) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open system file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    return parse_system(doc, db);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

json to_json(const SystemSpec& spec) {
  json j;
  j["name"] = spec.name;
  json chiplets = json::array();
  for (const auto& c : spec.chiplets) {
    json cj = {{"name", c.name},
               {"type", std::string(to_string(c.type))},
               {"mtransistors", c.mtransistors},
               {"node", c.node}};
    if (c.extra_area != 0) cj["extra_area"] = c.extra_area;
    if (c.width) cj["width"] = *c.width;
    if (c.height) cj["height"] = *c.height;
    chiplets.push_back(std::move(cj));
  }
  j["chiplets"] = std::move(chiplets);
  if (spec.connectivity.all_adjacent) {
    j["connectivity"] = "adjacent";
  } else {
    json pairs = json::array();
    for (const auto& [a, b] : spec.connectivity.pairs) pairs.push_back({a, b});
    j["connectivity"] = std::move(pairs);
  }
  if (spec.logic_block) j["logic_block"] = *spec.logic_block;
  j["package"] = to_json(spec.package);
  j["design"] = to_json(spec.design);
  return j;
}

SystemSpec to_monolithic(const SystemSpec& spec, const TechDatabase& db) {
  std::string node;
  if (const Chiplet* logic = logic_chiplet(spec)) {
    node = logic->node;
  } else {
    int best = -1;
    for (const auto& c : spec.chiplets) {
      int idx = db.node(c.node).feature_index;
      if (best < 0 || idx < best) {
        best = idx;
        node = c.node;
      }
    }
  }
  const ProcessParams& params = lookup(db, node);
  double area = 0;
  double mtr = 0;
  for (const auto& c : spec.chiplets) {
    area += c.mtransistors / params.density(c.type) + c.extra_area;
    mtr += c.mtransistors;
  }
  SystemSpec mono;
  mono.name = spec.name;
  mono.package = spec.package;
  mono.package.architecture = Architecture::monolithic;
  mono.design = spec.design;
  mono.design.reuse.clear();
  Chiplet die;
  die.name = spec.name;
  die.type = DesignType::logic;
  die.mtransistors = mtr;
  die.node = node;
  die.width = std::sqrt(area);
  die.height = std::sqrt(area);
  mono.chiplets.push_back(std::move(die));
  mono.logic_block = spec.name;
  return mono;
}

CarbonReport evaluate(const SystemSpec& input, const TechDatabase& db) {
  with_stage("validate", [&] { validate_system(input, db); });
  const SystemSpec spec =
      input.package.architecture == Architecture::monolithic && input.chiplets.size() > 1
          ? to_monolithic(input, db)
          : input;
  const PackagingParams& pp = spec.package;

  CommResult comm = with_stage("communication", [&] {
    return comm_cfp(pp.architecture, spec.chiplets, pp, db);
  });

  std::vector<Chiplet> dies = spec.chiplets;
  for (auto& d : dies)
    if (auto it = comm.area_deltas.find(d.name); it != comm.area_deltas.end())
      d.extra_area += it->second;

  std::vector<FloorplanItem> items;
  items.reserve(dies.size());
  for (const auto& d : dies)
    items.push_back({d.name, die_area(d, lookup(db, d.node)), d.width, d.height});
  FloorplanResult fp = with_stage("floorplan", [&] {
    return build_floorplan(items, pp.spacing, pp.aspect_ratios);
  });

  PackageResult pkg = with_stage("packaging", [&] {
    return package_cfp(spec.chiplets, fp, spec.connectivity, pp, db);
  });

  CarbonReport report;
  report.system = input.name;
  report.architecture = pp.architecture;
  with_stage("manufacturing", [&] {
    for (const auto& d : dies)
      report.chiplets.push_back({d.name, d.node, d.type, chiplet_mfg_cfp(d, db)});
  });

  double router_mtr =
      static_cast<double>(pp.noc_ports) * pp.noc_flit_width * pp.k_router / 1e6;
  report.design = with_stage("design", [&] {
    return system_design_cfp(spec.chiplets, spec.design, db, comm.router_nodes, router_mtr);
  });

  report.c_package = pkg.c_package;
  report.c_comm = pkg.c_comm;
  report.c_des = report.design.amortized_per_part;
  report.package_area = pkg.package_area;
  report.whitespace = fp.whitespace;
  report.bridge_count = pkg.bridge_count;
  report.floorplan = std::move(fp);
  report.c_total = report.c_mfg() + report.c_des + report.c_package + report.c_comm;
  return report;
}

SystemSpec split_logic(const SystemSpec& spec, int n) {
  if (n < 1) throw ValidationError("logic split count must be at least 1");
  const Chiplet* logic = logic_chiplet(spec);
  if (!logic || logic->type != DesignType::logic)
    throw ValidationError("system '" + spec.name + "' has no single designated logic chiplet");
  if (n == 1) return spec;

  const Chiplet original = *logic;
  auto piece_name = [&](int i) { return original.name + std::to_string(i); };

  SystemSpec out = spec;
  out.chiplets.clear();
  for (const auto& c : spec.chiplets) {
    if (c.name != original.name) {
      out.chiplets.push_back(c);
      continue;
    }
    for (int i = 0; i < n; ++i) {
      Chiplet piece = original;
      piece.name = piece_name(i);
      piece.mtransistors = original.mtransistors / n;
      piece.extra_area = original.extra_area / n;
      if (original.width) {
        double s = std::sqrt(static_cast<double>(n));
        piece.width = *original.width / s;
        piece.height = *original.height / s;
      }
      out.chiplets.push_back(std::move(piece));
    }
  }
  for (auto& [a, b] : out.connectivity.pairs) {
    if (a == original.name) a = piece_name(0);
    if (b == original.name) b = piece_name(0);
  }
  if (!out.connectivity.all_adjacent)
    for (int i = 0; i + 1 < n; ++i) out.connectivity.pairs.emplace_back(piece_name(i), piece_name(i + 1));
  if (out.design.reuse.erase(original.name) > 0)
    for (int i = 0; i < n; ++i) out.design.reuse.insert(piece_name(i));
  out.logic_block.reset();
  return out;
}

std::string config_label(const SystemSpec& spec, const TechDatabase& db) {
  std::string label = "(";
  const DesignType order[] = {DesignType::logic, DesignType::analog, DesignType::memory};
  for (std::size_t k = 0; k < 3; ++k) {
    std::vector<std::pair<int, std::string>> seen;
    for (const auto& c : spec.chiplets) {
      if (c.type != order[k]) continue;
      const auto& node = db.node(c.node);
      std::pair<int, std::string> key{node.feature_index, format_double(node.feature_nm)};
      if (std::find(seen.begin(), seen.end(), key) == seen.end()) seen.push_back(key);
    }
    std::sort(seen.begin(), seen.end());
    if (k > 0) label += ",";
    if (seen.empty()) label += "-";
    for (std::size_t i = 0; i < seen.size(); ++i) label += (i ? "/" : "") + seen[i].second;
  }
  return label + ")";
}

std::vector<SweepEntry> sweep(const SystemSpec& spec, const SweepSpec& grid,
                              const TechDatabase& db, unsigned threads) {
  if (grid.nc_range.empty() || grid.architectures.empty())
    throw ValidationError("sweep needs at least one chiplet count and one architecture");

  // Per design type: the node choices, or "keep" when not swept.
  const DesignType order[] = {DesignType::logic, DesignType::analog, DesignType::memory};
  std::vector<std::vector<std::optional<std::string>>> choices;
  for (DesignType t : order) {
    bool present = std::any_of(spec.chiplets.begin(), spec.chiplets.end(),
                               [t](const Chiplet& c) { return c.type == t; });
    auto it = grid.node_choices.find(t);
    std::vector<std::optional<std::string>> opts;
    if (present && it != grid.node_choices.end()) {
      if (it->second.empty())
        throw ValidationError("empty node list for " + std::string(to_string(t)));
      for (const auto& n : it->second) opts.emplace_back(db.resolve_name(n));
    } else {
      opts.emplace_back(std::nullopt);
    }
    choices.push_back(std::move(opts));
  }

  struct Point {
    SystemSpec assigned;
    int nc;
    Architecture arch;
  };
  std::vector<Point> points;
  for (const auto& logic : choices[0])
    for (const auto& analog : choices[1])
      for (const auto& memory : choices[2]) {
        SystemSpec assigned = spec;
        for (auto& c : assigned.chiplets) {
          const auto& pick = c.type == DesignType::logic    ? logic
                             : c.type == DesignType::analog ? analog
                                                            : memory;
          if (pick) c.node = *pick;
        }
        for (int nc : grid.nc_range)
          for (Architecture arch : grid.architectures) points.push_back({assigned, nc, arch});
      }

  std::vector<SweepEntry> out(points.size());
  auto run_one = [&](std::size_t i) {
    const Point& p = points[i];
    SweepEntry& e = out[i];
    e.architecture = p.arch;
    e.nc = p.nc;
    try {
      e.label = config_label(p.assigned, db);
      SystemSpec s = p.nc == 1 ? p.assigned : split_logic(p.assigned, p.nc);
      s.package.architecture = p.arch;
      e.report = evaluate(s, db);
    } catch (const InfeasibleError& err) {
      e.status = "infeasible";
      e.error = err.what();
    } catch (const std::exception& err) {
      e.status = "error";
      e.error = err.what();
    }
  };

  unsigned n_threads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(points.size()));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i) run_one(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  for (unsigned t = 0; t < n_threads; ++t)
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < points.size(); i = next++) run_one(i);
    });
  workers.clear();
  return out;
}

}  // namespace hicarbon
