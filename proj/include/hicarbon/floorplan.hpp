#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hicarbon {

/// Axis-aligned rectangle, lower-left corner at (x, y), in mm.
struct Box {
  double x = 0, y = 0, w = 0, h = 0;

  double area() const { return w * h; }
  double right() const { return x + w; }
  double top() const { return y + h; }
};

/// A block to place: its silicon area and optional explicit dimensions.
/// With explicit dimensions the block keeps its aspect ratio and is scaled
/// to `area`; otherwise its shape comes from the allowed aspect ratios.
struct FloorplanItem {
  std::string name;
  double area = 0;  // mm²
  std::optional<double> width;
  std::optional<double> height;
};

enum class Cut {
  vertical,    // children side by side (cut line is vertical)
  horizontal,  // children stacked
};

struct FloorplanNode {
  Box box;
  std::optional<std::size_t> item;  // set on leaves
  Cut cut = Cut::vertical;
  std::size_t first = 0;  // child node indices, internal nodes only
  std::size_t second = 0;

  bool is_leaf() const { return item.has_value(); }
};

struct Adjacency {
  std::size_t a = 0;  // item indices, a < b
  std::size_t b = 0;
  double overlap = 0;  // length of the shared interface, mm
};

struct FloorplanResult {
  std::vector<FloorplanItem> items;
  std::vector<FloorplanNode> nodes;  // nodes[root] spans the package
  std::size_t root = 0;
  std::vector<Box> placed;           // leaf box per item
  double package_area = 0;           // mm²
  double whitespace = 0;             // mm²
  std::vector<Adjacency> adjacencies;
};

/// Greedy area-balanced two-way split. Items are visited by decreasing
/// area (stable) and each goes to the partition with the smaller total;
/// ties go to the first partition. Returns indices into `items`.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> bipartition(
    std::span<const FloorplanItem> items);

/// Recursive bipartitioning slicing floorplan. Each subtree keeps its
/// non-dominated (width, height) realizations; the root takes the one of
/// least bounding-box area. Ties prefer the less elongated box, then a
/// vertical cut, then the original child order. `spacing` separates siblings along the cut axis.
///
/// Items without explicit dimensions may take any width/height ratio in
/// `aspect_ratios` (an empty list means square only); explicit rectangles
/// may be rotated.
FloorplanResult build_floorplan(std::span<const FloorplanItem> items, double spacing,
                                std::span<const double> aspect_ratios = {});

/// Multiplier on `spacing` below which two facing edges count as adjacent.
inline constexpr double kAdjacencyGapFactor = 1.5;

/// Pairs of placed boxes that face each other across a gap of at most
/// kAdjacencyGapFactor × spacing and whose perpendicular projections
/// overlap by a positive length.
std::vector<Adjacency> adjacencies(const FloorplanResult& result, double spacing);

}  // namespace hicarbon
