#include "no3l/grid.hpp"

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <utility>

namespace no3l {

GridSize::GridSize(std::int64_t n) : n_(n) {
  if (n < 1) throw DomainError("grid size must satisfy n >= 1, got " + std::to_string(n));
  if (n > kMaxGridSize)
    throw DomainError("grid size must satisfy n <= 2^30, got " + std::to_string(n));
}

std::int64_t interior_count(const GridPoint& a, const GridPoint& b) {
  if (a == b) throw DomainError("interior_count requires distinct points");
  const Wide dx = std::abs(Wide{b.x} - a.x);
  const Wide dy = std::abs(Wide{b.y} - a.y);
  return std::gcd(dx, dy) - 1;
}

namespace {

// Primitive direction from p to q with a canonical sign, packed into 64 bits.
std::uint64_t direction_key(const GridPoint& p, const GridPoint& q) {
  Wide dx = Wide{q.x} - p.x, dy = Wide{q.y} - p.y;
  const Wide g = std::gcd(dx, dy);
  dx /= g;
  dy /= g;
  if (dx < 0 || (dx == 0 && dy < 0)) {
    dx = -dx;
    dy = -dy;
  }
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(dx)) << 32) |
         static_cast<std::uint32_t>(dy);
}

}  // namespace

std::optional<Triple> first_collinear_triple(std::span<const GridPoint> pts) {
  std::vector<std::pair<std::uint64_t, std::size_t>> dirs;
  dirs.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    dirs.clear();
    for (std::size_t j = 0; j < i; ++j) {
      if (pts[j] == pts[i]) continue;
      dirs.emplace_back(direction_key(pts[i], pts[j]), j);
    }
    std::sort(dirs.begin(), dirs.end());
    auto hit = std::adjacent_find(dirs.begin(), dirs.end(),
                                  [](const auto& l, const auto& r) { return l.first == r.first; });
    if (hit != dirs.end()) {
      return Triple{pts[hit->second], pts[std::next(hit)->second], pts[i]};
    }
  }
  return std::nullopt;
}

PointSet::PointSet(GridSize n, std::span<const GridPoint> pts) : PointSet(n) {
  for (const auto& p : pts) {
    if (!insert(p)) {
      throw DomainError("duplicate point (" + std::to_string(p.x) + ", " +
                        std::to_string(p.y) + ")");
    }
  }
}

bool PointSet::insert(const GridPoint& p) {
  if (!in_grid(n_, p)) {
    throw DomainError("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                      ") lies outside the " + std::to_string(n_.value()) + "x" +
                      std::to_string(n_.value()) + " grid");
  }
  auto it = std::lower_bound(members_.begin(), members_.end(), p, row_major_less);
  if (it != members_.end() && *it == p) return false;
  members_.insert(it, p);
  ++column_count_[static_cast<std::size_t>(p.x)];
  ++row_count_[static_cast<std::size_t>(p.y)];
  return true;
}

bool PointSet::contains(const GridPoint& p) const {
  return std::binary_search(members_.begin(), members_.end(), p, row_major_less);
}

bool PointSet::occupancy_ok() const noexcept {
  auto le2 = [](int c) { return c <= 2; };
  return std::all_of(column_count_.begin(), column_count_.end(), le2) &&
         std::all_of(row_count_.begin(), row_count_.end(), le2);
}

bool is_no3l(const PointSet& s) {
  if (!s.occupancy_ok()) return false;
  return !first_collinear_triple(s.members()).has_value();
}

void write_point_set(std::ostream& os, const PointSet& s) {
  os << "n " << s.size_param().value() << '\n';
  for (const auto& p : s.members()) os << p.x << ' ' << p.y << '\n';
}

std::string to_text(const PointSet& s) {
  std::ostringstream os;
  write_point_set(os, s);
  return os.str();
}

namespace {

bool parse_int(std::string_view tok, std::int64_t& out) {
  if (tok.empty()) return false;
  std::size_t i = tok[0] == '-' ? 1 : 0;
  if (i == tok.size() || tok.size() - i > 18) return false;
  std::int64_t v = 0;
  for (std::size_t k = i; k < tok.size(); ++k) {
    if (tok[k] < '0' || tok[k] > '9') return false;
    v = v * 10 + (tok[k] - '0');
  }
  out = i ? -v : v;
  return true;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ls(line);
  std::vector<std::string> toks;
  for (std::string t; ls >> t;) toks.push_back(t);
  return toks;
}

}  // namespace

RawPointList parse_point_list(std::istream& is) {
  RawPointList out;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (!have_header) {
      if (toks.size() != 2 || toks[0] != "n" || !parse_int(toks[1], out.n))
        throw ParseError(where + "expected header 'n <size>'");
      have_header = true;
      continue;
    }
    std::int64_t x = 0, y = 0;
    if (toks.size() != 2 || !parse_int(toks[0], x) || !parse_int(toks[1], y))
      throw ParseError(where + "expected 'x y'");
    if (x < INT32_MIN || x > INT32_MAX || y < INT32_MIN || y > INT32_MAX)
      throw ParseError(where + "coordinate out of range");
    out.points.push_back({static_cast<Coord>(x), static_cast<Coord>(y)});
  }
  if (!have_header) throw ParseError("missing header 'n <size>'");
  return out;
}

PointSet read_point_set(std::istream& is) {
  const auto raw = parse_point_list(is);
  return PointSet(GridSize(raw.n), raw.points);
}

}  // namespace no3l
