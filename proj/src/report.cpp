#include "hicarbon/report.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "hicarbon/error.hpp"
#include "hicarbon/format.hpp"

namespace hicarbon {

using nlohmann::json;

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

ReportFormat report_format_from_string(std::string_view text) {
  if (text == "csv") return ReportFormat::csv;
  if (text == "json") return ReportFormat::json;
  throw ParseError("unknown output format '" + std::string(text) + "' (expected csv or json)");
}

std::string format_csv(std::span<const SweepEntry> entries) {
  std::vector<std::string> names;
  for (const auto& e : entries) {
    if (!e.report) continue;
    for (const auto& c : e.report->chiplets)
      if (std::find(names.begin(), names.end(), c.name) == names.end()) names.push_back(c.name);
  }

  std::ostringstream os;
  os << "config_label,architecture,nc,status";
  for (const auto& n : names) os << "," << csv_field("c_mfg_" + n);
  os << ",c_mfg_total,c_package,c_comm,c_hi,c_des,c_total,package_area_mm2,whitespace_mm2,"
        "bridge_count,message\n";

  for (const auto& e : entries) {
    os << csv_field(e.label) << "," << short_name(e.architecture) << "," << e.nc << ","
       << e.status;
    if (!e.report) {
      for (std::size_t i = 0; i < names.size() + 9; ++i) os << ",";
      os << "," << csv_field(e.error) << "\n";
      continue;
    }
    const CarbonReport& r = *e.report;
    for (const auto& n : names) {
      os << ",";
      for (const auto& c : r.chiplets)
        if (c.name == n) os << format_double(c.mfg.carbon);
    }
    os << "," << format_double(r.c_mfg()) << "," << format_double(r.c_package) << ","
       << format_double(r.c_comm) << "," << format_double(r.c_hi()) << ","
       << format_double(r.c_des) << "," << format_double(r.c_total) << ","
       << format_double(r.package_area) << "," << format_double(r.whitespace) << ",";
    if (r.bridge_count) os << *r.bridge_count;
    os << ",\n";
  }
  return os.str();
}

std::string format_breakdown_csv(const CarbonReport& r) {
  std::ostringstream os;
  os << "term,component,carbon_g\n";
  for (const auto& c : r.chiplets)
    os << "c_mfg," << csv_field(c.name) << "," << format_double(c.mfg.carbon) << "\n";
  os << "c_package," << to_string(r.architecture) << "," << format_double(r.c_package) << "\n";
  os << "c_comm," << to_string(r.architecture) << "," << format_double(r.c_comm) << "\n";
  os << "c_des,amortized," << format_double(r.c_des) << "\n";
  os << "c_total," << csv_field(r.system) << "," << format_double(r.c_total) << "\n";
  return os.str();
}

json to_json(const FloorplanResult& fp) {
  json boxes = json::array();
  for (std::size_t i = 0; i < fp.items.size(); ++i) {
    const Box& b = fp.placed[i];
    boxes.push_back({{"name", fp.items[i].name},
                     {"area_mm2", fp.items[i].area},
                     {"x", b.x},
                     {"y", b.y},
                     {"w", b.w},
                     {"h", b.h}});
  }
  json adj = json::array();
  for (const auto& a : fp.adjacencies)
    adj.push_back({{"a", fp.items[a.a].name}, {"b", fp.items[a.b].name}, {"overlap_mm", a.overlap}});

  std::function<json(std::size_t)> tree = [&](std::size_t n) -> json {
    const FloorplanNode& node = fp.nodes[n];
    json j = {{"box", {node.box.x, node.box.y, node.box.w, node.box.h}}};
    if (node.is_leaf()) {
      j["chiplet"] = fp.items[*node.item].name;
    } else {
      j["cut"] = node.cut == Cut::vertical ? "vertical" : "horizontal";
      j["children"] = {tree(node.first), tree(node.second)};
    }
    return j;
  };

  const Box& root = fp.nodes[fp.root].box;
  return {{"package_area_mm2", fp.package_area},
          {"whitespace_mm2", fp.whitespace},
          {"width_mm", root.w},
          {"height_mm", root.h},
          {"boxes", boxes},
          {"adjacencies", adj},
          {"tree", tree(fp.root)}};
}

json to_json(const CarbonReport& r) {
  json chiplets = json::array();
  for (const auto& c : r.chiplets)
    chiplets.push_back({{"name", c.name},
                        {"node", c.node},
                        {"type", std::string(to_string(c.type))},
                        {"area_mm2", c.mfg.area},
                        {"yield", c.mfg.yield},
                        {"cfpa_g_per_cm2", c.mfg.cfpa},
                        {"c_mfg", c.mfg.carbon}});
  json design = {{"per_chiplet_unamortized", r.design.per_chiplet_carbon},
                 {"comm_unamortized", r.design.comm_carbon},
                 {"total_unamortized", r.design.total_unamortized},
                 {"amortized_per_part", r.design.amortized_per_part}};
  json j = {{"system", r.system},
            {"architecture", std::string(to_string(r.architecture))},
            {"chiplets", chiplets},
            {"c_mfg_total", r.c_mfg()},
            {"c_package", r.c_package},
            {"c_comm", r.c_comm},
            {"c_hi", r.c_hi()},
            {"c_des", r.c_des},
            {"c_total", r.c_total},
            {"package_area_mm2", r.package_area},
            {"whitespace_mm2", r.whitespace},
            {"bridge_count", r.bridge_count ? json(*r.bridge_count) : json(nullptr)},
            {"design", design},
            {"floorplan", to_json(r.floorplan)}};
  return j;
}

json to_json(std::span<const SweepEntry> entries) {
  json out = json::array();
  for (const auto& e : entries) {
    json j = {{"config_label", e.label},
              {"architecture", std::string(short_name(e.architecture))},
              {"nc", e.nc},
              {"status", e.status}};
    if (e.report)
      j["report"] = to_json(*e.report);
    else
      j["message"] = e.error;
    out.push_back(std::move(j));
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content << std::flush;
    return;
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot move report into '" + path.string() + "': " + ec.message());
  }
}

void write_report(std::span<const SweepEntry> entries, ReportFormat format,
                  const std::filesystem::path& path) {
  if (entries.empty()) throw ValidationError("no reports to write");
  std::string content =
      format == ReportFormat::csv ? format_csv(entries) : to_json(entries).dump(2) + "\n";
  write_atomic(path, content);
}

}  // namespace hicarbon
