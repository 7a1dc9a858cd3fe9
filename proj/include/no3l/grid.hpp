// grid.hpp
// The n x n lattice grid, its points, point sets, and the collinearity
// predicate shared by every other part of the library.
//
// Coordinates run over 0 <= x, y < n, so the grid holds exactly n^2 points.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace no3l {

// Side lengths are capped at 2^30. Coordinate differences then fit in 31
// bits and a cross product needs at most 2*31 + 1 = 63 bits, which is what
// int64_t gives us.
inline constexpr std::int64_t kMaxGridSize = std::int64_t{1} << 30;
using Coord = std::int32_t;
using Wide = std::int64_t;
static_assert(sizeof(Wide) * 8 >= 2 * 30 + 2, "cross product headroom");

// Thrown when a caller violates a documented precondition (bad n, points
// off the grid, budget refusals). The CLI maps it to exit status 1.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GridSize {
 public:
  explicit GridSize(std::int64_t n);

  std::int64_t value() const noexcept { return n_; }
  std::int64_t point_count() const noexcept { return n_ * n_; }

  friend bool operator==(GridSize, GridSize) = default;

 private:
  std::int64_t n_;
};

struct GridPoint {
  Coord x = 0;
  Coord y = 0;

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

// Row-major order: by y, then by x.
inline bool row_major_less(const GridPoint& a, const GridPoint& b) noexcept {
  return a.y != b.y ? a.y < b.y : a.x < b.x;
}

inline bool in_grid(GridSize n, const GridPoint& p) noexcept {
  return p.x >= 0 && p.y >= 0 && p.x < n.value() && p.y < n.value();
}

// True iff (b - a) x (c - a) == 0. Repeated points count as collinear.
constexpr bool collinear(const GridPoint& a, const GridPoint& b,
                         const GridPoint& c) noexcept {
  const Wide bx = Wide{b.x} - a.x, by = Wide{b.y} - a.y;
  const Wide cx = Wide{c.x} - a.x, cy = Wide{c.y} - a.y;
  return bx * cy == by * cx;
}

// Number of lattice points strictly between a and b. Throws DomainError if
// a == b.
std::int64_t interior_count(const GridPoint& a, const GridPoint& b);

using Triple = std::array<GridPoint, 3>;

// Scans points in order and reports the first collinear triple among
// distinct entries, or nullopt. Each new point p is compared against the
// reduced directions to all earlier points; two equal directions mean a
// triple through p. Worst case O(m^2 log m), exits on the first hit.
std::optional<Triple> first_collinear_triple(std::span<const GridPoint> pts);

class PointSet {
 public:
  explicit PointSet(GridSize n) : n_(n),
      column_count_(static_cast<std::size_t>(n.value()), 0),
      row_count_(static_cast<std::size_t>(n.value()), 0) {}

  // Throws DomainError on off-grid or duplicate points.
  PointSet(GridSize n, std::span<const GridPoint> pts);

  // Throws DomainError if p is off the grid; returns false if p is already a
  // member.
  bool insert(const GridPoint& p);
  bool contains(const GridPoint& p) const;

  GridSize size_param() const noexcept { return n_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }

  // Members in row-major order.
  std::span<const GridPoint> members() const noexcept { return members_; }

  int column_count(Coord x) const { return column_count_.at(static_cast<std::size_t>(x)); }
  int row_count(Coord y) const { return row_count_.at(static_cast<std::size_t>(y)); }

  // Pigeonhole necessary condition for a no-three-in-line set.
  bool occupancy_ok() const noexcept;

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  GridSize n_;
  std::vector<GridPoint> members_;
  std::vector<int> column_count_;
  std::vector<int> row_count_;
};

bool is_no3l(const PointSet& s);

// Text format:
//   n <size>
//   x y
//   ...
// one point per line in row-major order.
void write_point_set(std::ostream& os, const PointSet& s);
std::string to_text(const PointSet& s);

// Raw parse result; no grid or duplicate validation beyond syntax.
struct RawPointList {
  std::int64_t n = 0;
  std::vector<GridPoint> points;
};
RawPointList parse_point_list(std::istream& is);

// Parses and validates into a PointSet (throws ParseError / DomainError).
PointSet read_point_set(std::istream& is);

}  // namespace no3l
