#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "hicarbon/floorplan.hpp"
#include "hicarbon/params.hpp"
#include "hicarbon/techdb.hpp"

#ifndef HICARBON_SOURCE_DIR
#define HICARBON_SOURCE_DIR "."
#endif

namespace testsupport {

using big = boost::multiprecision::cpp_bin_float_50;

inline std::filesystem::path source_dir() { return HICARBON_SOURCE_DIR; }
inline std::filesystem::path data_path(const std::string& rel) { return source_dir() / "data" / rel; }

inline hicarbon::TechDatabase default_db() {
  return hicarbon::load_database(data_path("default_db.json"));
}

inline double rel_err(double got, const big& want) {
  big w = want;
  if (w == 0) return std::abs(got);
  big e = abs((big(got) - w) / w);
  return e.convert_to<double>();
}

// Independent recomputation of the closed forms in 50-digit arithmetic.
namespace oracle {

inline big yield(const big& area_mm2, const big& d0, const big& alpha) {
  return pow(big(1) + area_mm2 / 100 * d0 / alpha, -alpha);
}

inline big cfpa(const big& y, const big& eta, const big& c_src, const big& epa, const big& gas,
                const big& mat) {
  return (eta * c_src * epa + gas + mat) / y;
}

// layers x energy per layer-cm2 x intensity x cm2 / yield
inline big layered(const big& n, const big& layers, const big& epla, const big& c_src,
                   const big& area_mm2, const big& y) {
  return n * layers * epla * c_src * (area_mm2 / 100) / y;
}

inline big design_hours(const big& t_verif, const big& t_spr, const big& t_an, const big& n_des,
                        const big& eta) {
  return (t_verif + (t_spr + t_an) * n_des) / eta;
}

inline big design_carbon(const big& hours, const big& p_w, const big& c_src) {
  return hours * p_w / 1000 * c_src;
}

}  // namespace oracle

// Small seeded generator helpers.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }
  std::mt19937_64& engine() { return rng_; }

  // One node's parameters drawn inside the documented ranges.
  hicarbon::ProcessParams process() {
    hicarbon::ProcessParams p;
    p.d0 = uniform(0.07, 0.3);
    p.alpha = 3;
    for (auto t : hicarbon::kDesignTypes) p.dt[t] = uniform(5, 150);
    p.eta_eq = uniform(0.5, 1.0);
    p.epa = uniform(0.8, 3.5);
    p.c_gas = uniform(100, 500);
    p.c_material = uniform(100, 800);
    p.eta_eda = uniform(0.5, 1.0);
    return p;
  }

 private:
  std::mt19937_64 rng_;
};

// A one-node database with explicit parameters, for hand-checked examples.
inline hicarbon::TechDatabase single_node_db(const hicarbon::ProcessParams& p,
                                             const std::string& name = "7nm",
                                             double c_src = 700) {
  hicarbon::TechDatabase db;
  db.nodes[name] = hicarbon::NodeEntry{{name, 7, 0}, p};
  db.fab = {c_src, c_src, c_src};
  db.packaging_defaults.node = name;
  return db;
}

// Exhaustive slicing-tree enumeration for small item sets.
namespace slicing {

struct Dim {
  double w, h;
};

inline std::vector<Dim> leaf_options(const hicarbon::FloorplanItem& item,
                                     const std::vector<double>& aspects) {
  if (item.width && item.height) {
    double s = std::sqrt(item.area / (*item.width * *item.height));
    return {{*item.width * s, *item.height * s}, {*item.height * s, *item.width * s}};
  }
  if (aspects.empty()) return {{std::sqrt(item.area), std::sqrt(item.area)}};
  std::vector<Dim> out;
  for (double r : aspects) out.push_back({std::sqrt(item.area * r), std::sqrt(item.area / r)});
  return out;
}

inline std::vector<Dim> join(const std::vector<Dim>& a, const std::vector<Dim>& b, double s) {
  std::vector<Dim> out;
  for (const auto& x : a)
    for (const auto& y : b) {
      out.push_back({x.w + s + y.w, std::max(x.h, y.h)});
      out.push_back({std::max(x.w, y.w), x.h + s + y.h});
    }
  return out;
}

// Every realization of every slicing tree over the items selected by `mask`.
inline std::vector<Dim> all_shapes(const std::vector<hicarbon::FloorplanItem>& items,
                                   unsigned mask, double s, const std::vector<double>& aspects) {
  if ((mask & (mask - 1)) == 0) {
    unsigned i = 0;
    while (!(mask & (1u << i))) ++i;
    return leaf_options(items[i], aspects);
  }
  std::vector<Dim> out;
  unsigned low = mask & (~mask + 1);
  // Unordered splits: the lowest item always lands in the first half.
  for (unsigned sub = (mask - 1) & mask; sub; sub = (sub - 1) & mask) {
    if (!(sub & low)) continue;
    auto joined = join(all_shapes(items, sub, s, aspects), all_shapes(items, mask ^ sub, s, aspects), s);
    out.insert(out.end(), joined.begin(), joined.end());
  }
  return out;
}

inline double min_area(const std::vector<Dim>& dims) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& d : dims) best = std::min(best, d.w * d.h);
  return best;
}

inline double global_optimum(const std::vector<hicarbon::FloorplanItem>& items, double s,
                             const std::vector<double>& aspects = {}) {
  return min_area(all_shapes(items, (1u << items.size()) - 1, s, aspects));
}

// Realizations of trees whose every split follows the greedy bipartition.
inline std::vector<Dim> greedy_shapes(const std::vector<hicarbon::FloorplanItem>& items, double s,
                                      const std::vector<double>& aspects) {
  if (items.size() == 1) return leaf_options(items.front(), aspects);
  auto [p1, p2] = hicarbon::bipartition(items);
  auto pick = [&](const std::vector<std::size_t>& idx) {
    std::vector<hicarbon::FloorplanItem> sub;
    for (auto i : idx) sub.push_back(items[i]);
    return sub;
  };
  return join(greedy_shapes(pick(p1), s, aspects), greedy_shapes(pick(p2), s, aspects), s);
}

inline double greedy_optimum(const std::vector<hicarbon::FloorplanItem>& items, double s,
                             const std::vector<double>& aspects = {}) {
  return min_area(greedy_shapes(items, s, aspects));
}

}  // namespace slicing

}  // namespace testsupport
