#include "hicarbon/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <CLI11.hpp>

#include "hicarbon/error.hpp"
#include "hicarbon/report.hpp"
#include "hicarbon/system.hpp"
#include "hicarbon/techdb.hpp"

#ifndef HICARBON_DEFAULT_DB
#define HICARBON_DEFAULT_DB "data/default_db.json"
#endif

namespace hicarbon {

namespace {

// Bad flag values detected after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

// "1..8", "2,4,6" or "3".
std::vector<int> parse_counts(const std::string& text) {
  std::vector<int> out;
  try {
    if (auto dots = text.find(".."); dots != std::string::npos) {
      int lo = std::stoi(text.substr(0, dots));
      int hi = std::stoi(text.substr(dots + 2));
      if (lo < 1 || hi < lo) throw UsageError("bad chiplet-count range '" + text + "'");
      for (int n = lo; n <= hi; ++n) out.push_back(n);
      return out;
    }
    for (const auto& item : split_list(text)) {
      std::size_t used = 0;
      int n = std::stoi(item, &used);
      if (used != item.size() || n < 1) throw UsageError("bad chiplet count '" + item + "'");
      out.push_back(n);
    }
  } catch (const std::logic_error&) {
    throw UsageError("bad chiplet-count list '" + text + "'");
  }
  if (out.empty()) throw UsageError("empty chiplet-count list");
  return out;
}

std::vector<Architecture> parse_architectures(const std::string& text) {
  std::vector<Architecture> out;
  try {
    for (const auto& item : split_list(text)) out.push_back(architecture_from_string(item));
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }
  if (out.empty()) throw UsageError("empty --package list");
  return out;
}

struct Common {
  std::string db_path;
  bool allow_out_of_range = false;
  std::string system_path;
  std::string out_path;
  std::string format = "csv";
  std::string package;
  std::optional<double> n_parts;
  std::optional<double> n_des;
  std::string reuse;
  int split = 1;
};

void add_common(CLI::App* cmd, Common& c, bool needs_system) {
  cmd->add_option("--db", c.db_path,
                  std::string("technology database (default: $") + kDatabaseEnv +
                      " or the bundled database)");
  cmd->add_flag("--allow-out-of-range", c.allow_out_of_range,
                "accept parameters outside their documented ranges");
  auto* sys = cmd->add_option("--system", c.system_path, "system description file");
  if (needs_system) sys->required();
}

void add_outputs(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out_path, "output file (default: stdout)");
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void add_design_overrides(CLI::App* cmd, Common& c) {
  cmd->add_option("--n-parts", c.n_parts, "parts manufactured (design amortization)");
  cmd->add_option("--n-des", c.n_des, "design iterations");
  cmd->add_option("--reuse", c.reuse, "comma-separated chiplets with reused designs");
}

TechDatabase open_db(const Common& c) {
  std::string path = c.db_path;
  if (path.empty()) {
    const char* env = std::getenv(kDatabaseEnv);
    path = env && *env ? env : HICARBON_DEFAULT_DB;
  }
  return load_database(path, LoadOptions{c.allow_out_of_range});
}

SystemSpec open_system(const Common& c, const TechDatabase& db) {
  SystemSpec spec = load_system(c.system_path, db);
  if (!c.package.empty()) {
    auto archs = parse_architectures(c.package);
    if (archs.size() != 1) throw UsageError("--package takes a single architecture here");
    spec.package.architecture = archs.front();
  }
  if (c.n_parts) spec.design.n_parts = *c.n_parts;
  if (c.n_des) spec.design.n_des = *c.n_des;
  for (const auto& name : split_list(c.reuse)) spec.design.reuse.insert(name);
  validate_system(spec, db);
  if (c.split > 1) spec = split_logic(spec, c.split);
  return spec;
}

void emit(const Common& c, const std::string& content, std::ostream& out) {
  if (c.out_path.empty() || c.out_path == "-")
    out << content;
  else
    write_atomic(c.out_path, content);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Embodied carbon estimator for monolithic and chiplet-based systems", "hicarbon"};
  app.require_subcommand(1);

  Common est, swp, fpl, val;

  auto* estimate = app.add_subcommand("estimate", "carbon breakdown for one system");
  add_common(estimate, est, true);
  add_outputs(estimate, est);
  add_design_overrides(estimate, est);
  estimate->add_option("--package", est.package, "rdl, emib, passive, active or mono");
  estimate->add_option("--split", est.split, "split the logic block into N chiplets")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> node_specs;
  std::string nc_text = "1";
  std::string sweep_packages = "rdl";
  unsigned threads = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate a grid of node assignments");
  add_common(sweep_cmd, swp, true);
  add_outputs(sweep_cmd, swp);
  add_design_overrides(sweep_cmd, swp);
  sweep_cmd->add_option("--nodes", node_specs, "per design type, e.g. logic=7,10 memory=10,14");
  sweep_cmd->add_option("--nc", nc_text, "logic chiplet counts: 1..8 or 2,4,6");
  sweep_cmd->add_option("--package", sweep_packages, "comma-separated architectures");
  sweep_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");

  auto* floorplan_cmd = app.add_subcommand("floorplan", "placed dies and adjacency as JSON");
  add_common(floorplan_cmd, fpl, true);
  floorplan_cmd->add_option("--out", fpl.out_path, "output file (default: stdout)");
  floorplan_cmd->add_option("--package", fpl.package, "architecture (sets die area overheads)");
  floorplan_cmd->add_option("--split", fpl.split, "split the logic block into N chiplets")
      ->check(CLI::PositiveNumber);

  auto* validate_cmd = app.add_subcommand("validate", "check a database and system file");
  add_common(validate_cmd, val, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*estimate) {
      TechDatabase db = open_db(est);
      SystemSpec spec = open_system(est, db);
      CarbonReport report = evaluate(spec, db);
      std::string content = est.format == "csv" ? format_breakdown_csv(report)
                                                : to_json(report).dump(2) + "\n";
      emit(est, content, out);
    } else if (*sweep_cmd) {
      TechDatabase db = open_db(swp);
      SystemSpec spec = open_system(swp, db);
      SweepSpec grid;
      for (const auto& item : node_specs) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("--nodes expects type=node,node: " + item);
        DesignType type;
        try {
          type = design_type_from_string(item.substr(0, eq));
        } catch (const ParseError& e) {
          throw UsageError(e.what());
        }
        auto nodes = split_list(item.substr(eq + 1));
        if (nodes.empty()) throw UsageError("no nodes given for " + item.substr(0, eq));
        grid.node_choices[type] = nodes;
      }
      grid.nc_range = parse_counts(nc_text);
      grid.architectures = parse_architectures(sweep_packages);
      auto entries = sweep(spec, grid, db, threads);
      std::string content =
          swp.format == "csv" ? format_csv(entries) : to_json(entries).dump(2) + "\n";
      emit(swp, content, out);
    } else if (*floorplan_cmd) {
      TechDatabase db = open_db(fpl);
      SystemSpec spec = open_system(fpl, db);
      CarbonReport report = evaluate(spec, db);
      nlohmann::json j = to_json(report.floorplan);
      j["system"] = spec.name;
      j["architecture"] = std::string(to_string(report.architecture));
      j["spacing_mm"] = spec.package.spacing;
      emit(fpl, j.dump(2) + "\n", out);
    } else if (*validate_cmd) {
      TechDatabase db = open_db(val);
      std::vector<std::string> warnings = db.warnings;
      if (!val.system_path.empty()) {
        SystemSpec spec = load_system(val.system_path, db);
        validate_system(spec, db, &warnings);
      }
      for (const auto& w : warnings) err << "warning: " << w << "\n";
      out << "ok\n";
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const ValidationError& e) {
    err << "invalid: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ParseError& e) {
    err << "invalid: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace hicarbon
