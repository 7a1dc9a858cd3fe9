#include "no3l/solver.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <istream>
#include <mutex>
#include <numeric>
#include <thread>
#include <vector>

namespace no3l {

SolverConfig SolverConfig::defaults(GridSize n) {
  SolverConfig cfg;
  cfg.target_size = 2 * n.value();
  cfg.time_budget = std::chrono::seconds(60);
  return cfg;
}

void SolverConfig::validate() const {
  if (!node_budget && !time_budget && !target_size && !exhaustive)
    throw DomainError("solver needs a node budget, time budget, target size, or an explicit exhaustive search");
  if (node_budget && *node_budget == 0) throw DomainError("node budget must be positive");
  if (time_budget && time_budget->count() <= 0) throw DomainError("time budget must be positive");
  if (target_size && *target_size < 0) throw DomainError("target size must be nonnegative");
  if (thread_count == 0) throw DomainError("thread count must be positive");
}

std::int64_t pigeonhole_bound(GridSize n) {
  return std::min<std::int64_t>(2, n.value()) * n.value();
}

namespace {

using Clock = std::chrono::steady_clock;

// One choice for a column: up to two rows, -1 marks an unused slot.
struct ColumnChoice {
  Coord r1 = -1;
  Coord r2 = -1;
  int count() const { return (r1 >= 0) + (r2 >= 0); }
};

// Lexicographic comparison of sorted row tuples; the empty choice sorts first.
bool mirror_canonical(const ColumnChoice& c, Coord n) {
  if (c.count() == 0) return true;
  if (c.count() == 1) return c.r1 <= n - 1 - c.r1;
  const Coord m1 = n - 1 - c.r2, m2 = n - 1 - c.r1;
  return c.r1 != m1 ? c.r1 < m1 : c.r2 <= m2;
}

// Pairs in (r1, r2) lexicographic order, then singles, then empty.
std::vector<ColumnChoice> column_choices(Coord n, int max_points) {
  std::vector<ColumnChoice> out;
  if (max_points >= 2)
    for (Coord a = 0; a < n; ++a)
      for (Coord b = a + 1; b < n; ++b) out.push_back({a, b});
  if (max_points >= 1)
    for (Coord a = 0; a < n; ++a) out.push_back({a, -1});
  out.push_back({});
  return out;
}

// Placement state with forbidden-cell reference counts and an undo trail.
class Board {
 public:
  explicit Board(Coord n)
      : n_(n), forbid_(static_cast<std::size_t>(n) * n, 0), free_in_column_(static_cast<std::size_t>(n), n) {
    chosen_.reserve(2 * static_cast<std::size_t>(n));
  }

  Coord n() const { return n_; }
  std::size_t size() const { return chosen_.size(); }
  const std::vector<GridPoint>& chosen() const { return chosen_; }

  bool free(Coord x, Coord y) const { return forbid_[index(x, y)] == 0; }

  std::size_t mark() const { return trail_.size(); }

  // Upper bound on the final size: current size plus, for every column from
  // x on, min(cap, cells in it still free).
  std::int64_t reach(Coord x, Coord cap) const {
    auto r = static_cast<std::int64_t>(chosen_.size());
    for (Coord c = x; c < n_; ++c) r += std::min(cap, free_in_column_[static_cast<std::size_t>(c)]);
    return r;
  }

  // Places p and forbids, for each earlier point q in a previous column, the
  // cells beyond p on line qp. Lines are only walked forward: columns at or
  // before p.x are already decided.
  void place(const GridPoint& p) {
    for (const auto& q : chosen_) {
      if (q.x == p.x) continue;  // vertical line, covered by the column cap
      Coord dx = p.x - q.x, dy = p.y - q.y;
      const Coord g = std::gcd(dx, dy);
      dx /= g;
      dy /= g;
      for (Coord x = p.x + dx, y = p.y + dy; x < n_ && y >= 0 && y < n_; x += dx, y += dy) {
        const auto i = index(x, y);
        if (forbid_[i]++ == 0) --free_in_column_[static_cast<std::size_t>(x)];
        trail_.push_back(static_cast<std::uint32_t>(i));
      }
    }
    chosen_.push_back(p);
  }

  void undo(std::size_t trail_mark, std::size_t count) {
    while (trail_.size() > trail_mark) {
      const auto i = trail_.back();
      if (--forbid_[i] == 0) ++free_in_column_[i / static_cast<std::size_t>(n_)];
      trail_.pop_back();
    }
    chosen_.resize(chosen_.size() - count);
  }

 private:
  std::size_t index(Coord x, Coord y) const { return static_cast<std::size_t>(x) * n_ + y; }

  Coord n_;
  std::vector<std::uint32_t> forbid_;
  std::vector<std::uint32_t> trail_;
  std::vector<Coord> free_in_column_;
  std::vector<GridPoint> chosen_;
};

// Places a column choice if both cells are free; returns the number placed,
// or -1 when the choice is blocked (nothing is left placed in that case).
int try_place(Board& board, Coord x, const ColumnChoice& c) {
  const std::size_t m = board.mark();
  int placed = 0;
  for (Coord r : {c.r1, c.r2}) {
    if (r < 0) continue;
    if (!board.free(x, r)) {
      board.undo(m, static_cast<std::size_t>(placed));
      return -1;
    }
    board.place({x, r});
    ++placed;
  }
  return placed;
}

struct SharedState {
  std::atomic<std::int64_t> best{-1};
  std::atomic<bool> stop{false};
  std::atomic<bool> budget_hit{false};
  std::atomic<std::uint64_t> nodes{0};
  std::mutex witness_mutex;
  std::vector<GridPoint> witness;
};

class Optimizer {
 public:
  Optimizer(Coord n, const SolverConfig& cfg, Clock::time_point start, SharedState& shared)
      : board_(n), cfg_(cfg), start_(start), shared_(shared),
        per_column_(std::min<Coord>(2, n)), choices_(column_choices(n, per_column_)) {}

  void run_subtree(const ColumnChoice& first) {
    const std::size_t m = board_.mark();
    const int placed = try_place(board_, 0, first);
    if (placed < 0) return;
    descend(1);
    board_.undo(m, static_cast<std::size_t>(placed));
  }

  void flush_nodes() { shared_.nodes.fetch_add(local_nodes_ - flushed_nodes_); flushed_nodes_ = local_nodes_; }

 private:
  bool should_stop() {
    if (shared_.stop.load(std::memory_order_relaxed)) return true;
    ++local_nodes_;
    if ((local_nodes_ & 1023) == 0) {
      flush_nodes();
      if (cfg_.node_budget && shared_.nodes.load() >= *cfg_.node_budget) return halt_on_budget();
      if (cfg_.time_budget && Clock::now() - start_ >= *cfg_.time_budget) return halt_on_budget();
    }
    if (cfg_.node_budget && cfg_.thread_count == 1 && local_nodes_ >= *cfg_.node_budget)
      return halt_on_budget();
    return false;
  }

  bool halt_on_budget() {
    shared_.budget_hit = true;
    shared_.stop = true;
    return true;
  }

  void record() {
    const auto s = static_cast<std::int64_t>(board_.size());
    std::int64_t cur = shared_.best.load();
    if (s <= cur) return;
    std::lock_guard lock(shared_.witness_mutex);
    cur = shared_.best.load();
    if (s <= cur) return;
    shared_.witness = board_.chosen();
    shared_.best.store(s);
    const Coord n = board_.n();
    if ((cfg_.target_size && s >= *cfg_.target_size) || s >= static_cast<std::int64_t>(per_column_) * n)
      shared_.stop = true;
  }

  void descend(Coord x) {
    if (should_stop()) return;
    const Coord n = board_.n();
    if (x == n) {
      record();
      return;
    }
    if (board_.reach(x, per_column_) <= shared_.best.load(std::memory_order_relaxed)) return;
    for (const auto& c : choices_) {
      if (shared_.stop.load(std::memory_order_relaxed)) return;
      const std::size_t m = board_.mark();
      const int placed = try_place(board_, x, c);
      if (placed < 0) continue;
      descend(x + 1);
      board_.undo(m, static_cast<std::size_t>(placed));
    }
  }

  Board board_;
  const SolverConfig& cfg_;
  Clock::time_point start_;
  SharedState& shared_;
  Coord per_column_;
  std::vector<ColumnChoice> choices_;
  std::uint64_t local_nodes_ = 0;
  std::uint64_t flushed_nodes_ = 0;
};

}  // namespace

SolverResult solve(GridSize n, const SolverConfig& cfg) {
  cfg.validate();
  if (n.value() > 4096) throw DomainError("solver supports n <= 4096");
  const auto start = Clock::now();
  const auto N = static_cast<Coord>(n.value());

  std::vector<ColumnChoice> first = column_choices(N, std::min<Coord>(2, N));
  if (cfg.symmetry_breaking)
    std::erase_if(first, [N](const ColumnChoice& c) { return !mirror_canonical(c, N); });

  SharedState shared;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    Optimizer opt(N, cfg, start, shared);
    for (std::size_t i; (i = next.fetch_add(1)) < first.size();) {
      if (shared.stop.load()) break;
      opt.run_subtree(first[i]);
    }
    opt.flush_nodes();
  };
  if (cfg.thread_count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < cfg.thread_count; ++t) pool.emplace_back(worker);
  }

  SolverResult out;
  out.n = n.value();
  out.best_size = std::max<std::int64_t>(0, shared.best.load());
  out.witness = PointSet(n, shared.witness);
  out.tree_exhausted = !shared.stop.load();
  out.proven_optimal = out.tree_exhausted || out.best_size == pigeonhole_bound(n);
  out.nodes_explored = shared.nodes.load();
  out.elapsed = Clock::now() - start;
  return out;
}

namespace {

class Counter {
 public:
  Counter(Coord n, std::int64_t target)
      : board_(n), target_(target), per_column_(std::min<Coord>(2, n)),
        choices_(column_choices(n, per_column_)) {}

  std::uint64_t run() {
    descend(0);
    return count_;
  }

 private:
  void descend(Coord x) {
    const auto s = static_cast<std::int64_t>(board_.size());
    if (s == target_) {
      // Remaining columns stay empty.
      ++count_;
      return;
    }
    const Coord n = board_.n();
    if (x == n || board_.reach(x, per_column_) < target_) return;
    for (const auto& c : choices_) {
      if (s + c.count() > target_) continue;
      const std::size_t m = board_.mark();
      const int placed = try_place(board_, x, c);
      if (placed < 0) continue;
      descend(x + 1);
      board_.undo(m, static_cast<std::size_t>(placed));
    }
  }

  Board board_;
  std::int64_t target_;
  Coord per_column_;
  std::vector<ColumnChoice> choices_;
  std::uint64_t count_ = 0;
};

}  // namespace

std::uint64_t count_solutions_of_size(GridSize n, std::int64_t size) {
  if (n.value() > 64) throw DomainError("solution counting supports n <= 64");
  if (size < 0 || size > pigeonhole_bound(n)) return 0;
  return Counter(static_cast<Coord>(n.value()), size).run();
}

MaximumSolutionCount count_maximum_solutions(GridSize n, std::int64_t cap) {
  if (n.value() > cap) {
    throw DomainError("exhaustive solution count refuses n = " + std::to_string(n.value()) +
                      " above cap " + std::to_string(cap));
  }
  for (std::int64_t size = pigeonhole_bound(n); size >= 0; --size) {
    if (const auto c = count_solutions_of_size(n, size); c > 0) return {size, c};
  }
  return {0, 1};
}

VerifyReport verify_points(const RawPointList& raw) {
  VerifyReport rep;
  if (raw.n < 1 || raw.n > kMaxGridSize) {
    rep.reason = "invalid grid size " + std::to_string(raw.n);
    return rep;
  }
  const GridSize n(raw.n);
  const auto& pts = raw.points;
  for (const auto& p : pts) {
    if (!in_grid(n, p)) {
      rep.reason = "point (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") is outside the grid";
      return rep;
    }
  }
  std::vector<GridPoint> sorted = pts;
  std::sort(sorted.begin(), sorted.end(), row_major_less);
  if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end()) {
    rep.reason = "duplicate point (" + std::to_string(dup->x) + ", " + std::to_string(dup->y) + ")";
    return rep;
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      for (std::size_t k = j + 1; k < pts.size(); ++k)
        if (collinear(pts[i], pts[j], pts[k])) {
          rep.offending = Triple{pts[i], pts[j], pts[k]};
          rep.reason = "collinear triple";
          return rep;
        }
  rep.valid = true;
  return rep;
}

VerifyReport verify_witness(std::istream& is) { return verify_points(parse_point_list(is)); }

VerifyReport verify_witness(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open witness file " + path.string());
  return verify_witness(in);
}

}  // namespace no3l
