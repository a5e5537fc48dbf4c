#include "hicarbon/floorplan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hicarbon/error.hpp"

namespace hicarbon {

namespace {

constexpr double kEps = 1e-9;

bool less_eq(double a, double b) { return a <= b + kEps * std::max(1.0, std::abs(b)); }

struct Shape {
  double w = 0, h = 0;
  Cut cut = Cut::vertical;
  std::size_t first_shape = 0;
  std::size_t second_shape = 0;
};

struct Work {
  std::vector<Shape> shapes;
  std::optional<std::size_t> item;
  std::size_t first = 0, second = 0;
};

std::vector<Shape> leaf_shapes(const FloorplanItem& item, std::span<const double> aspects) {
  if (item.width && item.height) {
    double scale = std::sqrt(item.area / (*item.width * *item.height));
    double w = *item.width * scale;
    double h = *item.height * scale;
    if (w == h) return {Shape{w, h}};
    return {Shape{w, h}, Shape{h, w}};
  }
  if (aspects.empty()) {
    double side = std::sqrt(item.area);
    return {Shape{side, side}};
  }
  std::vector<Shape> out;
  for (double r : aspects) {
    Shape s{std::sqrt(item.area * r), std::sqrt(item.area / r)};
    bool dup = std::any_of(out.begin(), out.end(), [&](const Shape& o) {
      return less_eq(o.w, s.w) && less_eq(s.w, o.w);
    });
    if (!dup) out.push_back(s);
  }
  return out;
}

// Drops dominated shapes. Earlier candidates win exact ties, so generation
// order encodes the tie-break preference.
std::vector<Shape> pareto(const std::vector<Shape>& cands) {
  std::vector<Shape> kept;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const Shape& c = cands[i];
    bool dominated = false;
    for (std::size_t j = 0; j < cands.size() && !dominated; ++j) {
      if (i == j) continue;
      const Shape& d = cands[j];
      if (!less_eq(d.w, c.w) || !less_eq(d.h, c.h)) continue;
      bool same = less_eq(c.w, d.w) && less_eq(c.h, d.h);
      dominated = !same || j < i;
    }
    if (!dominated) kept.push_back(c);
  }
  return kept;
}

std::vector<Shape> combine(const std::vector<Shape>& first, const std::vector<Shape>& second,
                           double spacing) {
  // Swapping the two children never changes the enclosing dimensions, so
  // only the original order is generated.
  std::vector<Shape> cands;
  cands.reserve(2 * first.size() * second.size());
  for (Cut cut : {Cut::vertical, Cut::horizontal}) {
    for (std::size_t i = 0; i < first.size(); ++i) {
      for (std::size_t j = 0; j < second.size(); ++j) {
        const Shape& a = first[i];
        const Shape& b = second[j];
        Shape s;
        s.cut = cut;
        s.first_shape = i;
        s.second_shape = j;
        if (cut == Cut::vertical) {
          s.w = a.w + spacing + b.w;
          s.h = std::max(a.h, b.h);
        } else {
          s.w = std::max(a.w, b.w);
          s.h = a.h + spacing + b.h;
        }
        cands.push_back(s);
      }
    }
  }
  return pareto(cands);
}

class Builder {
 public:
  Builder(std::span<const FloorplanItem> items, double spacing, std::span<const double> aspects)
      : items_(items), spacing_(spacing), aspects_(aspects) {}

  std::size_t build(const std::vector<std::size_t>& members) {
    if (members.size() == 1) {
      Work w;
      w.item = members.front();
      w.shapes = leaf_shapes(items_[members.front()], aspects_);
      work_.push_back(std::move(w));
      return work_.size() - 1;
    }
    std::vector<FloorplanItem> subset;
    subset.reserve(members.size());
    for (auto m : members) subset.push_back(items_[m]);
    auto [p1, p2] = bipartition(subset);
    auto remap = [&](const std::vector<std::size_t>& local) {
      std::vector<std::size_t> out;
      for (auto i : local) out.push_back(members[i]);
      return out;
    };
    std::size_t first = build(remap(p1));
    std::size_t second = build(remap(p2));
    Work w;
    w.first = first;
    w.second = second;
    w.shapes = combine(work_[first].shapes, work_[second].shapes, spacing_);
    work_.push_back(std::move(w));
    return work_.size() - 1;
  }

  void place(std::size_t node, std::size_t shape_index, double x, double y,
             FloorplanResult& out) const {
    const Work& w = work_[node];
    const Shape& s = w.shapes[shape_index];
    FloorplanNode& fn = out.nodes[node];
    fn.box = Box{x, y, s.w, s.h};
    if (w.item) {
      fn.item = w.item;
      out.placed[*w.item] = fn.box;
      return;
    }
    fn.cut = s.cut;
    fn.first = w.first;
    fn.second = w.second;
    const Shape& a = work_[w.first].shapes[s.first_shape];
    place(w.first, s.first_shape, x, y, out);
    if (s.cut == Cut::vertical)
      place(w.second, s.second_shape, x + a.w + spacing_, y, out);
    else
      place(w.second, s.second_shape, x, y + a.h + spacing_, out);
  }

  const std::vector<Work>& work() const { return work_; }

 private:
  std::span<const FloorplanItem> items_;
  double spacing_;
  std::span<const double> aspects_;
  std::vector<Work> work_;
};

}  // namespace

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> bipartition(
    std::span<const FloorplanItem> items) {
  if (items.size() < 2) throw ValidationError("bipartition needs at least two chiplets");
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return items[a].area > items[b].area; });
  std::vector<std::size_t> first, second;
  double w1 = 0, w2 = 0;
  for (auto i : order) {
    if (w2 < w1) {
      second.push_back(i);
      w2 += items[i].area;
    } else {
      first.push_back(i);
      w1 += items[i].area;
    }
  }
  return {first, second};
}

FloorplanResult build_floorplan(std::span<const FloorplanItem> items, double spacing,
                                std::span<const double> aspect_ratios) {
  if (items.empty()) throw ValidationError("floorplan needs at least one chiplet");
  if (spacing < 0) throw ValidationError("chiplet spacing must be non-negative");
  for (const auto& item : items) {
    if (!(item.area > 0))
      throw ValidationError("chiplet '" + item.name + "' has non-positive area");
    if (item.width.has_value() != item.height.has_value() ||
        (item.width && !(*item.width > 0 && *item.height > 0)))
      throw ValidationError("chiplet '" + item.name + "' needs both positive width and height");
  }

  for (double r : aspect_ratios)
    if (!(r > 0)) throw ValidationError("leaf aspect ratios must be positive");
  Builder builder(items, spacing, aspect_ratios);
  std::vector<std::size_t> all(items.size());
  std::iota(all.begin(), all.end(), 0);
  std::size_t root = builder.build(all);

  const auto& shapes = builder.work()[root].shapes;
  // Least area; equal areas go to the less elongated box, then to
  // generation order (vertical first).
  std::size_t best = 0;
  for (std::size_t i = 1; i < shapes.size(); ++i) {
    double a = shapes[i].w * shapes[i].h;
    double b = shapes[best].w * shapes[best].h;
    if (a < b && !less_eq(b, a)) {
      best = i;
    } else if (less_eq(a, b) && less_eq(b, a)) {
      double long_i = std::max(shapes[i].w, shapes[i].h);
      double long_best = std::max(shapes[best].w, shapes[best].h);
      if (long_i < long_best && !less_eq(long_best, long_i)) best = i;
    }
  }

  FloorplanResult out;
  out.items.assign(items.begin(), items.end());
  out.nodes.resize(builder.work().size());
  out.placed.resize(items.size());
  out.root = root;
  builder.place(root, best, 0.0, 0.0, out);

  out.package_area = out.nodes[root].box.area();
  double silicon = 0;
  for (const auto& item : items) silicon += item.area;
  out.whitespace = std::max(0.0, out.package_area - silicon);
  out.adjacencies = adjacencies(out, spacing);
  return out;
}

std::vector<Adjacency> adjacencies(const FloorplanResult& result, double spacing) {
  const double max_gap = kAdjacencyGapFactor * spacing + kEps;
  std::vector<Adjacency> out;
  const auto& boxes = result.placed;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      const Box& a = boxes[i];
      const Box& b = boxes[j];
      double gap_x = std::max(b.x - a.right(), a.x - b.right());
      double gap_y = std::max(b.y - a.top(), a.y - b.top());
      double overlap_x = std::min(a.right(), b.right()) - std::max(a.x, b.x);
      double overlap_y = std::min(a.top(), b.top()) - std::max(a.y, b.y);
      if (gap_x >= -kEps && gap_x <= max_gap && overlap_y > kEps)
        out.push_back({i, j, overlap_y});
      else if (gap_y >= -kEps && gap_y <= max_gap && overlap_x > kEps)
        out.push_back({i, j, overlap_x});
    }
  }
  return out;
}

}  // namespace hicarbon
