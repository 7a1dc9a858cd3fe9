#include <doctest.h>

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <sstream>

#include "no3l/grid.hpp"
#include "no3l/solver.hpp"

using namespace no3l;

namespace {

// The definition, straight: every unordered triple of distinct members.
bool naive_no3l(const std::vector<GridPoint>& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      for (std::size_t k = j + 1; k < pts.size(); ++k)
        if (collinear(pts[i], pts[j], pts[k])) return false;
  return true;
}

// The 8 symmetries of the n x n square.
GridPoint dihedral(int g, GridPoint p, Coord n) {
  const Coord m = n - 1;
  switch (g) {
    case 0: return p;
    case 1: return {m - p.y, p.x};
    case 2: return {m - p.x, m - p.y};
    case 3: return {p.y, m - p.x};
    case 4: return {m - p.x, p.y};
    case 5: return {p.x, m - p.y};
    case 6: return {p.y, p.x};
    default: return {m - p.y, m - p.x};
  }
}

}  // namespace

TEST_CASE("grid size bounds") {
  CHECK_THROWS_AS(GridSize(0), DomainError);
  CHECK_THROWS_AS(GridSize(-3), DomainError);
  CHECK_THROWS_AS(GridSize(kMaxGridSize + 1), DomainError);
  CHECK(GridSize(7).point_count() == 49);
  CHECK(GridSize(kMaxGridSize).value() == kMaxGridSize);
}

TEST_CASE("collinear examples") {
  CHECK(collinear({0, 0}, {1, 1}, {2, 2}));
  CHECK_FALSE(collinear({0, 0}, {1, 0}, {0, 1}));
  CHECK(collinear({0, 0}, {2, 1}, {4, 2}));
  CHECK(collinear({3, 4}, {3, 4}, {0, 7}));
  // Extreme coordinates must not overflow.
  const Coord big = static_cast<Coord>(kMaxGridSize - 1);
  CHECK(collinear({0, 0}, {big, big}, {big - 1, big - 1}));
  CHECK_FALSE(collinear({0, 0}, {big, big - 1}, {big - 1, big - 1}));
  CHECK_FALSE(collinear({0, big}, {big, 0}, {big, big}));
}

TEST_CASE("collinear is invariant under permutation and the dihedral group") {
  std::mt19937_64 rng(12345);
  const Coord n = 9;
  std::uniform_int_distribution<Coord> coord(0, n - 1);
  // Small grid so collinear triples show up often.
  int hits = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    std::array<GridPoint, 3> t{};
    for (auto& p : t) p = {coord(rng), coord(rng)};
    const bool base = collinear(t[0], t[1], t[2]);
    hits += base;
    std::array<int, 3> perm{0, 1, 2};
    do {
      REQUIRE(collinear(t[perm[0]], t[perm[1]], t[perm[2]]) == base);
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (int g = 0; g < 8; ++g)
      REQUIRE(collinear(dihedral(g, t[0], n), dihedral(g, t[1], n), dihedral(g, t[2], n)) == base);
  }
  CHECK(hits > 100);
}

TEST_CASE("interior_count") {
  CHECK(interior_count({0, 0}, {3, 3}) == 2);
  CHECK(interior_count({0, 0}, {1, 2}) == 0);
  CHECK(interior_count({0, 0}, {4, 6}) == 1);
  CHECK(interior_count({5, 1}, {1, 5}) == 3);
  CHECK_THROWS_AS(interior_count({2, 2}, {2, 2}), DomainError);
}

TEST_CASE("interior_count matches a lattice scan for every pair, n <= 8") {
  for (Coord n = 1; n <= 8; ++n) {
    std::vector<GridPoint> pts;
    for (Coord x = 0; x < n; ++x)
      for (Coord y = 0; y < n; ++y) pts.push_back({x, y});
    for (const auto& a : pts)
      for (const auto& b : pts) {
        if (a == b) continue;
        std::int64_t inside = 0;
        for (const auto& p : pts) {
          if (p == a || p == b || !collinear(a, p, b)) continue;
          if (p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
              p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y))
            ++inside;
        }
        REQUIRE(interior_count(a, b) == inside);
      }
  }
}

TEST_CASE("point set membership and occupancy") {
  PointSet s(GridSize(3));
  CHECK(s.insert({1, 2}));
  CHECK(s.insert({0, 0}));
  CHECK_FALSE(s.insert({1, 2}));
  CHECK_THROWS_AS(s.insert({3, 0}), DomainError);
  CHECK_THROWS_AS(s.insert({0, -1}), DomainError);
  CHECK(s.size() == 2);
  CHECK(s.contains({0, 0}));
  CHECK_FALSE(s.contains({2, 2}));
  CHECK(s.members()[0] == GridPoint{0, 0});
  CHECK(s.column_count(1) == 1);
  CHECK(s.row_count(2) == 1);
  CHECK(s.occupancy_ok());

  const std::vector<GridPoint> dup{{0, 0}, {0, 0}};
  CHECK_THROWS_AS(PointSet(GridSize(2), dup), DomainError);
}

TEST_CASE("is_no3l examples") {
  const std::vector<GridPoint> full2{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  CHECK(is_no3l(PointSet(GridSize(2), full2)));
  const std::vector<GridPoint> row{{0, 1}, {1, 1}, {2, 1}};
  CHECK_FALSE(is_no3l(PointSet(GridSize(3), row)));
  CHECK(is_no3l(PointSet(GridSize(5))));

  SolverConfig cfg = SolverConfig::defaults(GridSize(3));
  const auto r = solve(GridSize(3), cfg);
  REQUIRE(r.best_size == 6);
  const auto m = r.witness.members();
  CHECK(naive_no3l({m.begin(), m.end()}));
  CHECK(is_no3l(r.witness));
}

TEST_CASE("is_no3l agrees with the naive scan on all 512 subsets of the 3x3 grid") {
  std::vector<GridPoint> cells;
  for (Coord y = 0; y < 3; ++y)
    for (Coord x = 0; x < 3; ++x) cells.push_back({x, y});
  int valid = 0;
  for (unsigned mask = 0; mask < 512; ++mask) {
    std::vector<GridPoint> pts;
    for (unsigned i = 0; i < 9; ++i)
      if (mask >> i & 1u) pts.push_back(cells[i]);
    const bool expect = naive_no3l(pts);
    REQUIRE(is_no3l(PointSet(GridSize(3), pts)) == expect);
    valid += expect;
  }
  // Frozen from an independent Python enumeration.
  CHECK(valid == 230);
}

TEST_CASE("first_collinear_triple agrees with the naive scan on random sets") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 3000; ++trial) {
    const Coord n = 3 + static_cast<Coord>(rng() % 8);
    const std::size_t m = 3 + rng() % std::min<std::size_t>(10, static_cast<std::size_t>(n * n) - 2);
    std::vector<GridPoint> pts;
    while (pts.size() < m) {
      GridPoint p{static_cast<Coord>(rng() % n), static_cast<Coord>(rng() % n)};
      if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
    }
    const auto hit = first_collinear_triple(pts);
    REQUIRE(hit.has_value() == !naive_no3l(pts));
    if (hit) {
      REQUIRE(collinear((*hit)[0], (*hit)[1], (*hit)[2]));
    }
  }
}

TEST_CASE("point set text format") {
  const std::vector<GridPoint> pts{{2, 1}, {0, 1}, {1, 0}, {0, 0}};
  const PointSet s(GridSize(4), pts);
  CHECK(to_text(s) == "n 4\n0 0\n1 0\n0 1\n2 1\n");

  std::istringstream in(to_text(s));
  CHECK(read_point_set(in) == s);

  std::istringstream empty("n 6\n");
  CHECK(read_point_set(empty).empty());

  std::istringstream crlf("n 3\r\n1 2\r\n\r\n");
  CHECK(read_point_set(crlf).size() == 1);

  for (const char* bad : {"", "4\n0 0\n", "n x\n", "n 3\n1\n", "n 3\n1 2 3\n", "n 3\na b\n"}) {
    std::istringstream is(bad);
    CHECK_THROWS_AS(read_point_set(is), ParseError);
  }
  std::istringstream off("n 3\n3 0\n");
  CHECK_THROWS_AS(read_point_set(off), DomainError);
}

TEST_CASE("text format round-trips random point sets bit-exactly") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = 1 + static_cast<std::int64_t>(rng() % 40);
    PointSet s{GridSize(n)};
    const auto m = rng() % 30;
    for (std::uint64_t i = 0; i < m; ++i)
      s.insert({static_cast<Coord>(rng() % n), static_cast<Coord>(rng() % n)});
    const auto text = to_text(s);
    std::istringstream in(text);
    const auto back = read_point_set(in);
    REQUIRE(back == s);
    REQUIRE(to_text(back) == text);
  }
}
