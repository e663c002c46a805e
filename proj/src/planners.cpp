#include "covpath/planners.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

#include "covpath/kernels.hpp"
#include "covpath/raytrace.hpp"

namespace covpath {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr int kDx[8] = {1, 0, -1, 0, 1, -1, -1, 1};
constexpr int kDy[8] = {0, 1, 0, -1, 1, 1, -1, -1};
constexpr std::size_t kTspStarts = 4;  // local-search restarts, one per first hop

bool open(const MaskGrid& g, int x, int y) { return g.in_bounds(x, y) && g(x, y) != 0; }

// Move k from (x,y) is legal: target open and, for diagonals, both side cells
// open.
bool can_move(const MaskGrid& g, int x, int y, int k) {
  const int nx = x + kDx[k], ny = y + kDy[k];
  if (!open(g, nx, ny)) return false;
  if (k < 4) return true;
  return open(g, nx, y) && open(g, x, ny);
}

struct QItem {
  double f;
  double g;
  std::uint32_t idx;
};
struct QLess {
  bool operator()(const QItem& a, const QItem& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;
    return a.idx > b.idx;
  }
};
using OpenList = std::priority_queue<QItem, std::vector<QItem>, QLess>;

// Dijkstra with a reusable distance buffer; only touched cells are reset.
class BoundedDijkstra {
 public:
  explicit BoundedDijkstra(const MaskGrid& passable)
      : pass_(passable), dist_(passable.size(), kInf), done_(passable.size(), 0) {}

  template <class OnSettle>
  void run(Cell source, double max_cost, OpCounter* ops, OnSettle&& settle) {
    for (auto i : touched_) {
      dist_[i] = kInf;
      done_[i] = 0;
    }
    touched_.clear();
    if (!open(pass_, source.x, source.y)) return;
    OpenList q;
    const auto s = static_cast<std::uint32_t>(pass_.index(source.x, source.y));
    dist_[s] = 0.0;
    touched_.push_back(s);
    q.push({0.0, 0.0, s});
    std::int64_t work = 0;
    while (!q.empty()) {
      const QItem it = q.top();
      q.pop();
      if (done_[it.idx]) continue;
      done_[it.idx] = 1;
      ++work;
      const Cell c = pass_.cell_of(it.idx);
      if (!settle(c, it.g)) break;
      for (int k = 0; k < 8; ++k) {
        if (!can_move(pass_, c.x, c.y, k)) continue;
        const double ng = it.g + (k < 4 ? 1.0 : kSqrt2);
        if (ng > max_cost) continue;
        const auto ni = static_cast<std::uint32_t>(pass_.index(c.x + kDx[k], c.y + kDy[k]));
        if (ng < dist_[ni]) {
          if (dist_[ni] == kInf) touched_.push_back(ni);
          dist_[ni] = ng;
          q.push({ng, ng, ni});
        }
      }
    }
    if (ops) ops->add(work * 8);
  }

 private:
  const MaskGrid& pass_;
  std::vector<double> dist_;
  std::vector<std::uint8_t> done_;
  std::vector<std::uint32_t> touched_;
};

double cell_dist(Cell a, Cell b) { return std::hypot(double(a.x - b.x), double(a.y - b.y)); }

std::vector<Cell> disc_offsets(double radius_cells) {
  const int r = static_cast<int>(std::floor(radius_cells + 1e-9));
  std::vector<Cell> out;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      if (dx * dx + dy * dy <= radius_cells * radius_cells + 1e-9) out.push_back({dx, dy});
  return out;
}

}  // namespace

double octile(Cell a, Cell b) {
  const int dx = std::abs(a.x - b.x), dy = std::abs(a.y - b.y);
  return std::max(dx, dy) + (kSqrt2 - 1.0) * std::min(dx, dy);
}

std::optional<GridPath> astar(const MaskGrid& passable, Cell start, Cell goal, OpCounter* ops) {
  if (!open(passable, start.x, start.y) || !open(passable, goal.x, goal.y)) return std::nullopt;
  if (start == goal) return GridPath{{start}, 0.0};
  std::vector<double> g(passable.size(), kInf);
  std::vector<std::uint32_t> parent(passable.size(), 0);
  std::vector<std::uint8_t> closed(passable.size(), 0);
  OpenList q;
  const auto s = static_cast<std::uint32_t>(passable.index(start.x, start.y));
  const auto t = static_cast<std::uint32_t>(passable.index(goal.x, goal.y));
  g[s] = 0.0;
  q.push({octile(start, goal), 0.0, s});
  std::int64_t work = 0;
  bool found = false;
  while (!q.empty()) {
    const QItem it = q.top();
    q.pop();
    if (closed[it.idx]) continue;
    closed[it.idx] = 1;
    ++work;
    if (it.idx == t) {
      found = true;
      break;
    }
    const Cell c = passable.cell_of(it.idx);
    for (int k = 0; k < 8; ++k) {
      if (!can_move(passable, c.x, c.y, k)) continue;
      const Cell n{c.x + kDx[k], c.y + kDy[k]};
      const auto ni = static_cast<std::uint32_t>(passable.index(n.x, n.y));
      const double ng = it.g + (k < 4 ? 1.0 : kSqrt2);
      if (ng < g[ni]) {
        g[ni] = ng;
        parent[ni] = it.idx;
        q.push({ng + octile(n, goal), ng, ni});
      }
    }
  }
  if (ops) ops->add(work * 8);
  if (!found) return std::nullopt;
  GridPath path;
  path.cost = g[t];
  for (std::uint32_t i = t;; i = parent[i]) {
    path.cells.push_back(passable.cell_of(i));
    if (i == s) break;
  }
  std::reverse(path.cells.begin(), path.cells.end());
  return path;
}

Grid<double> dijkstra(const MaskGrid& passable, Cell source, double max_cost, OpCounter* ops) {
  Grid<double> out(passable.width(), passable.height(), kInf);
  BoundedDijkstra d(passable);
  d.run(source, max_cost, ops, [&](Cell c, double g) {
    out[c] = g;
    return true;
  });
  return out;
}

// --- coverage cells ---------------------------------------------------------

CoverageGrid build_coverage_grid(const MaskGrid& passable, double cell_side, double resolution) {
  CoverageGrid g;
  g.cell_side = cell_side;
  g.nx = static_cast<int>(std::ceil(passable.width() * resolution / cell_side - 1e-9));
  g.ny = static_cast<int>(std::ceil(passable.height() * resolution / cell_side - 1e-9));
  g.node_of.assign(static_cast<std::size_t>(g.nx) * g.ny, -1);
  std::vector<double> best(g.node_of.size(), kInf);
  std::vector<Cell> pick(g.node_of.size());
  for (int y = 0; y < passable.height(); ++y) {
    for (int x = 0; x < passable.width(); ++x) {
      if (!passable(x, y)) continue;
      const double px = (x + 0.5) * resolution, py = (y + 0.5) * resolution;
      const int gx = std::min(g.nx - 1, static_cast<int>(std::floor(px / cell_side)));
      const int gy = std::min(g.ny - 1, static_cast<int>(std::floor(py / cell_side)));
      const double d = std::hypot(px - (gx + 0.5) * cell_side, py - (gy + 0.5) * cell_side);
      const auto k = static_cast<std::size_t>(gy * g.nx + gx);
      if (d < best[k] - 1e-12) {
        best[k] = d;
        pick[k] = {x, y};
      }
    }
  }
  for (int gy = 0; gy < g.ny; ++gy)
    for (int gx = 0; gx < g.nx; ++gx) {
      const auto k = static_cast<std::size_t>(gy * g.nx + gx);
      if (best[k] == kInf) continue;
      g.node_of[k] = static_cast<int>(g.nodes.size());
      g.nodes.push_back(pick[k]);
      g.coarse.push_back({gx, gy});
    }
  return g;
}

MaskGrid sweep_mask(int width, int height, std::span<const Cell> polyline, double radius_cells) {
  MaskGrid out(width, height, 0);
  const double r2 = radius_cells * radius_cells + 1e-9;
  auto stamp = [&](Cell a, Cell b) {
    const int pad = static_cast<int>(std::ceil(radius_cells));
    const int x0 = std::max(0, std::min(a.x, b.x) - pad), x1 = std::min(width - 1, std::max(a.x, b.x) + pad);
    const int y0 = std::max(0, std::min(a.y, b.y) - pad), y1 = std::min(height - 1, std::max(a.y, b.y) + pad);
    const double ux = b.x - a.x, uy = b.y - a.y;
    const double len2 = ux * ux + uy * uy;
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) {
        const double px = x - a.x, py = y - a.y;
        const double t = len2 > 0 ? std::clamp((px * ux + py * uy) / len2, 0.0, 1.0) : 0.0;
        const double dx = px - t * ux, dy = py - t * uy;
        if (dx * dx + dy * dy <= r2) out(x, y) = 1;
      }
  };
  if (polyline.size() == 1) stamp(polyline[0], polyline[0]);
  for (std::size_t i = 1; i < polyline.size(); ++i) stamp(polyline[i - 1], polyline[i]);
  return out;
}

CoverTargets greedy_cover(const MaskGrid& passable, MaskGrid remaining, double radius_cells, OpCounter* ops) {
  CoverTargets out;
  const auto disc = disc_offsets(radius_cells);
  std::int64_t work = 0;
  auto gain = [&](Cell p) {
    int n = 0;
    for (const Cell& o : disc) {
      const int x = p.x + o.x, y = p.y + o.y;
      n += remaining.in_bounds(x, y) && remaining(x, y);
    }
    work += static_cast<std::int64_t>(disc.size());
    return n;
  };
  for (int y = 0; y < remaining.height(); ++y) {
    for (int x = 0; x < remaining.width(); ++x) {
      if (!remaining(x, y)) continue;
      const Cell u{x, y};
      Cell best{};
      int best_gain = 0;
      double best_d = kInf;
      for (const Cell& o : disc) {
        const Cell p{x + o.x, y + o.y};
        if (!open(passable, p.x, p.y)) continue;
        const int gn = gain(p);
        const double d = cell_dist(p, u);
        if (gn > best_gain || (gn == best_gain && d < best_d)) {
          best = p;
          best_gain = gn;
          best_d = d;
        }
      }
      if (best_gain == 0) {
        remaining(x, y) = 0;
        ++out.unreachable;
        continue;
      }
      out.targets.push_back(best);
      for (const Cell& o : disc) {
        const int cx = best.x + o.x, cy = best.y + o.y;
        if (remaining.in_bounds(cx, cy)) remaining(cx, cy) = 0;
      }
    }
  }
  if (ops) ops->add(work);
  return out;
}

// --- TSP --------------------------------------------------------------------

CostMatrix tsp_costs(const MaskGrid& passable, std::span<const Cell> points, double resolution,
                     const TspCostConfig& cfg, OpCounter* ops) {
  const int n = static_cast<int>(points.size());
  CostMatrix m;
  m.n = n;
  m.c.assign(static_cast<std::size_t>(n) * n, kInf);
  const double diag = std::hypot(double(passable.width()), double(passable.height()));
  const double bound = cfg.distant_fraction * diag;
  const double largest = double(count_set(passable)) * kSqrt2;

  std::vector<int> point_at(passable.size(), -1);
  for (int i = 0; i < n; ++i) {
    const Cell c = points[static_cast<std::size_t>(i)];
    if (passable.in_bounds(c)) point_at[passable.index(c.x, c.y)] = i;
  }
  // several points may share a cell; chain them
  std::vector<int> same(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const Cell c = points[static_cast<std::size_t>(i)];
    if (!passable.in_bounds(c)) continue;
    const int head = point_at[passable.index(c.x, c.y)];
    if (head != i) {
      same[static_cast<std::size_t>(i)] = same[static_cast<std::size_t>(head)];
      same[static_cast<std::size_t>(head)] = i;
    }
  }

  BoundedDijkstra dj(passable);
  for (int i = 0; i < n; ++i) {
    dj.run(points[static_cast<std::size_t>(i)], bound, ops, [&](Cell c, double g) {
      for (int j = point_at[passable.index(c.x, c.y)]; j >= 0; j = same[static_cast<std::size_t>(j)])
        m(i, j) = g * resolution;
      return true;
    });
  }
  for (int i = 0; i < n; ++i) {
    m(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      double v = std::min(m(i, j), m(j, i));
      if (v == kInf)
        v = (largest + cell_dist(points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)])) *
            resolution;
      m(i, j) = m(j, i) = v;
    }
  }
  return m;
}

double tour_cost(const CostMatrix& costs, std::span<const int> order) {
  double s = 0.0;
  for (std::size_t i = 1; i < order.size(); ++i) s += costs(order[i - 1], order[i]);
  return s;
}

namespace {

bool two_opt_pass(const CostMatrix& c, std::vector<int>& p, std::int64_t& work) {
  const int n = static_cast<int>(p.size());
  bool improved = false;
  for (int i = 1; i + 1 < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      ++work;
      const int a = p[static_cast<std::size_t>(i - 1)], b = p[static_cast<std::size_t>(i)];
      const int d = p[static_cast<std::size_t>(j)];
      double delta = c(a, d) - c(a, b);
      if (j + 1 < n) {
        const int e = p[static_cast<std::size_t>(j + 1)];
        delta += c(b, e) - c(d, e);
      }
      if (delta < -1e-9) {
        std::reverse(p.begin() + i, p.begin() + j + 1);
        improved = true;
      }
    }
  }
  return improved;
}

bool or_opt_pass(const CostMatrix& c, std::vector<int>& p, std::int64_t& work) {
  const int n = static_cast<int>(p.size());
  bool improved = false;
  for (int len = 1; len <= 3; ++len) {
    for (int i = 1; i + len <= n; ++i) {
      const int a = p[static_cast<std::size_t>(i - 1)];
      const int s0 = p[static_cast<std::size_t>(i)], s1 = p[static_cast<std::size_t>(i + len - 1)];
      const bool tail = i + len == n;
      const int b = tail ? -1 : p[static_cast<std::size_t>(i + len)];
      const double removed = c(a, s0) + (tail ? 0.0 : c(s1, b) - c(a, b));
      double best = -1e-9;
      int best_k = -1;
      bool best_rev = false;
      for (int k = 0; k < n; ++k) {
        if (k >= i - 1 && k <= i + len - 1) continue;
        ++work;
        const int u = p[static_cast<std::size_t>(k)];
        const bool at_end = k + 1 == n;
        const int v = at_end ? -1 : p[static_cast<std::size_t>(k + 1)];
        const double fwd = c(u, s0) + (at_end ? 0.0 : c(s1, v) - c(u, v)) - removed;
        const double rev = c(u, s1) + (at_end ? 0.0 : c(s0, v) - c(u, v)) - removed;
        if (fwd < best) {
          best = fwd;
          best_k = k;
          best_rev = false;
        }
        if (rev < best) {
          best = rev;
          best_k = k;
          best_rev = true;
        }
      }
      if (best_k < 0) continue;
      std::vector<int> seg(p.begin() + i, p.begin() + i + len);
      if (best_rev) std::reverse(seg.begin(), seg.end());
      std::vector<int> rest;
      rest.reserve(p.size());
      int insert_after = -1;
      for (int k = 0; k < n; ++k) {
        if (k >= i && k < i + len) continue;
        rest.push_back(p[static_cast<std::size_t>(k)]);
        if (k == best_k) insert_after = static_cast<int>(rest.size()) - 1;
      }
      rest.insert(rest.begin() + insert_after + 1, seg.begin(), seg.end());
      p = std::move(rest);
      improved = true;
    }
  }
  return improved;
}

}  // namespace

std::vector<int> tsp_order(const CostMatrix& costs, int start, OpCounter* ops) {
  const int n = costs.n;
  if (n == 0) return {};
  std::int64_t work = 0;
  // first hops to try, cheapest first
  std::vector<int> hops;
  for (int j = 0; j < n; ++j)
    if (j != start) hops.push_back(j);
  std::stable_sort(hops.begin(), hops.end(), [&](int a, int b) { return costs(start, a) < costs(start, b); });
  if (hops.size() > kTspStarts) hops.resize(kTspStarts);
  if (hops.empty()) hops.push_back(-1);

  std::vector<int> best_p;
  double best_cost = kInf;
  for (int hop : hops) {
    std::vector<int> p{start};
    std::vector<std::uint8_t> used(static_cast<std::size_t>(n), 0);
    used[static_cast<std::size_t>(start)] = 1;
    if (hop >= 0) {
      p.push_back(hop);
      used[static_cast<std::size_t>(hop)] = 1;
    }
    while (static_cast<int>(p.size()) < n) {
      const int cur = p.back();
      int best = -1;
      for (int j = 0; j < n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        if (best < 0 || costs(cur, j) < costs(cur, best)) best = j;
      }
      work += n;
      used[static_cast<std::size_t>(best)] = 1;
      p.push_back(best);
    }
    for (int round = 0; round < 1000; ++round) {
      const bool a = two_opt_pass(costs, p, work);
      const bool b = or_opt_pass(costs, p, work);
      if (!a && !b) break;
    }
    const double c = tour_cost(costs, p);
    if (c < best_cost - 1e-9) {
      best_cost = c;
      best_p = std::move(p);
    }
  }
  if (ops) ops->add(work);
  return best_p;
}

// --- BSA --------------------------------------------------------------------

namespace {

// Straight segment between two cells runs over passable cells only.
bool line_passable(const MaskGrid& passable, Cell a, Cell b) {
  const Vec2 pa{a.x + 0.5, a.y + 0.5}, pb{b.x + 0.5, b.y + 0.5};
  const double len = distance(pa, pb);
  if (len == 0.0) return open(passable, a.x, a.y);
  bool ok = true;
  traverse_ray({0.0, 0.0}, 1.0, pa, (pb - pa) * (1.0 / len), len, [&](Cell c, double, double) {
    ok = open(passable, c.x, c.y);
    return ok;
  });
  return ok;
}

}  // namespace

std::vector<int> bsa_sequence(const CoverageGrid& grid, const MaskGrid& passable, int start_node, int start_dir,
                              OpCounter* ops) {
  const int n = static_cast<int>(grid.nodes.size());
  if (n == 0) return {};
  // node graph: the 8 neighbouring decomposition cells, linked when the
  // straight segment between their nodes is passable
  std::vector<std::array<int, 8>> nb(static_cast<std::size_t>(n));
  std::int64_t work = 0;
  for (int i = 0; i < n; ++i) {
    const Cell g = grid.coarse[static_cast<std::size_t>(i)];
    for (int k = 0; k < 8; ++k) {
      const int j = grid.node_at(g.x + kDx[k], g.y + kDy[k]);
      int link = -1;
      if (j >= 0 && line_passable(passable, grid.nodes[static_cast<std::size_t>(i)], grid.nodes[static_cast<std::size_t>(j)]))
        link = j;
      nb[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = link;
      work += 8;
    }
  }

  std::vector<std::uint8_t> visited(static_cast<std::size_t>(n), 0);
  std::vector<int> seq{start_node};
  visited[static_cast<std::size_t>(start_node)] = 1;
  int cur = start_node;
  int dir = ((start_dir % 4) + 4) % 4;
  bool straight = true;

  auto unvisited_link = [&](int node, int k) {
    const int j = nb[static_cast<std::size_t>(node)][static_cast<std::size_t>(k)];
    return j >= 0 && !visited[static_cast<std::size_t>(j)] ? j : -1;
  };
  auto has_unvisited = [&](int node) {
    for (int k = 0; k < 8; ++k)
      if (unvisited_link(node, k) >= 0) return true;
    return false;
  };
  auto move_to = [&](int j, int k) {
    visited[static_cast<std::size_t>(j)] = 1;
    seq.push_back(j);
    cur = j;
    if (k < 4) dir = k;
  };

  for (;;) {
    ++work;
    if (straight) {
      const int j = unvisited_link(cur, dir);
      if (j >= 0) {
        move_to(j, dir);
        continue;
      }
      straight = false;
      // blocked ahead: turn so the blocking side ends up on the right
      bool moved = false;
      for (int k : {(dir + 1) % 4, (dir + 3) % 4, (dir + 2) % 4}) {
        const int jj = unvisited_link(cur, k);
        if (jj >= 0) {
          move_to(jj, k);
          moved = true;
          break;
        }
      }
      if (moved) continue;
    }
    bool moved = false;
    for (int k : {(dir + 3) % 4, dir, (dir + 1) % 4, (dir + 2) % 4, 4, 5, 6, 7}) {
      const int j = unvisited_link(cur, k);
      if (j >= 0) {
        move_to(j, k);
        moved = true;
        break;
      }
    }
    if (moved) continue;

    // dead end: shortest walk over the node graph to a visited node with an
    // unvisited neighbour
    std::vector<double> dist(static_cast<std::size_t>(n), kInf);
    std::vector<int> parent(static_cast<std::size_t>(n), -1);
    OpenList q;
    dist[static_cast<std::size_t>(cur)] = 0.0;
    q.push({0.0, 0.0, static_cast<std::uint32_t>(cur)});
    int target = -1;
    while (!q.empty()) {
      const QItem it = q.top();
      q.pop();
      const int u = static_cast<int>(it.idx);
      if (it.g > dist[static_cast<std::size_t>(u)]) continue;
      ++work;
      if (u != cur && has_unvisited(u)) {
        target = u;
        break;
      }
      for (int k = 0; k < 8; ++k) {
        const int v = nb[static_cast<std::size_t>(u)][static_cast<std::size_t>(k)];
        if (v < 0) continue;
        const double w = cell_dist(grid.nodes[static_cast<std::size_t>(u)], grid.nodes[static_cast<std::size_t>(v)]);
        if (it.g + w < dist[static_cast<std::size_t>(v)]) {
          dist[static_cast<std::size_t>(v)] = it.g + w;
          parent[static_cast<std::size_t>(v)] = u;
          q.push({it.g + w, it.g + w, static_cast<std::uint32_t>(v)});
        }
      }
    }
    if (target < 0) break;
    std::vector<int> back;
    for (int v = target; v != cur; v = parent[static_cast<std::size_t>(v)]) back.push_back(v);
    std::reverse(back.begin(), back.end());
    int prev = cur;
    for (int v : back) {
      const Cell d{grid.coarse[static_cast<std::size_t>(v)].x - grid.coarse[static_cast<std::size_t>(prev)].x,
                   grid.coarse[static_cast<std::size_t>(v)].y - grid.coarse[static_cast<std::size_t>(prev)].y};
      if (std::abs(d.x) >= std::abs(d.y)) dir = d.x > 0 ? 0 : 2;
      else dir = d.y > 0 ? 1 : 3;
      seq.push_back(v);
      prev = v;
    }
    cur = target;
  }
  if (ops) ops->add(work);
  return seq;
}

// --- frontier -----------------------------------------------------------------

std::optional<FrontierGoal> nearest_frontier(const MaskGrid& passable, const MaskGrid& frontier, Cell from,
                                             double reach_cells, OpCounter* ops) {
  if (count_set(frontier) == 0) return std::nullopt;
  const Grid<double> d2 = kernels::squared_edt(frontier);
  const double reach2 = reach_cells * reach_cells + 1e-9;
  std::optional<FrontierGoal> out;
  BoundedDijkstra dj(passable);
  dj.run(from, kInf, ops, [&](Cell c, double g) {
    if (d2[c] > reach2) return true;
    out = FrontierGoal{c, c, g};
    return false;
  });
  if (!out) return std::nullopt;
  // the frontier cell it serves: nearest one, first in scan order on ties
  const int r = static_cast<int>(std::ceil(reach_cells));
  double best = kInf;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) {
      const Cell f{out->goal.x + dx, out->goal.y + dy};
      if (!frontier.in_bounds(f) || !frontier[f]) continue;
      const double d = cell_dist(f, out->goal);
      if (d < best) {
        best = d;
        out->frontier = f;
      }
    }
  return out;
}

// --- path post-processing ------------------------------------------------------

bool segment_clear(const WorldMap& map, Vec2 a, Vec2 b, double radius, OpCounter* ops) {
  const double step = map.resolution() / 4.0;
  const int n = std::max(1, static_cast<int>(std::ceil(distance(a, b) / step)));
  if (ops) ops->add(std::int64_t(n + 1) * 16);
  for (int k = 0; k <= n; ++k) {
    const double t = double(k) / n;
    if (collides(map, a + (b - a) * t, radius + 1e-3)) return false;
  }
  return true;
}

std::vector<Vec2> shortcut(const WorldMap& map, std::span<const Cell> cells, double radius, OpCounter* ops) {
  std::vector<Vec2> out;
  if (cells.empty()) return out;
  auto centre = [&](std::size_t i) { return map.cell_center(cells[i]); };
  std::size_t i = 0;
  out.push_back(centre(0));
  while (i + 1 < cells.size()) {
    std::size_t last = i + 1;
    for (std::size_t j = i + 2; j < cells.size(); ++j) {
      if (!segment_clear(map, centre(i), centre(j), radius, ops)) break;
      last = j;
    }
    out.push_back(centre(last));
    i = last;
  }
  return out;
}

std::optional<Cell> nearest_passable(const MaskGrid& passable, Cell c, int max_cells) {
  std::optional<Cell> best;
  double best_d = kInf;
  for (int dy = -max_cells; dy <= max_cells; ++dy)
    for (int dx = -max_cells; dx <= max_cells; ++dx) {
      const Cell p{c.x + dx, c.y + dy};
      if (!open(passable, p.x, p.y)) continue;
      const double d = std::hypot(double(dx), double(dy));
      if (d < best_d) {
        best_d = d;
        best = p;
      }
    }
  return best;
}

}  // namespace covpath
