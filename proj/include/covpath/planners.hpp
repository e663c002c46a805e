#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "covpath/geometry.hpp"
#include "covpath/grid.hpp"
#include "covpath/worldmodel.hpp"

namespace covpath {

// Work counter for planner compute. Episodes charge planning time from it
// instead of the wall clock so runs stay reproducible.
struct OpCounter {
  std::int64_t ops = 0;
  void add(std::int64_t n) { ops += n; }
};

// --- grid search ----------------------------------------------------------

struct GridPath {
  std::vector<Cell> cells;  // start first, goal last
  double cost = 0.0;        // in cells
};

double octile(Cell a, Cell b);

// Optimal 8-connected path over `passable` (diagonal steps cost sqrt 2 and may
// not cut a blocked corner). start == goal yields a single-cell path of cost 0.
std::optional<GridPath> astar(const MaskGrid& passable, Cell start, Cell goal, OpCounter* ops = nullptr);

// Single-source costs with the same move rules; cells beyond `max_cost` or
// unreachable stay +inf.
Grid<double> dijkstra(const MaskGrid& passable, Cell source,
                      double max_cost = std::numeric_limits<double>::infinity(), OpCounter* ops = nullptr);

// --- coverage cells ---------------------------------------------------------

// Square decomposition of the map into cells of `cell_side` metres. Each
// decomposition cell that contains a passable world cell gets one node,
// snapped to the passable world cell nearest to its centre.
struct CoverageGrid {
  double cell_side = 0.0;
  int nx = 0, ny = 0;
  std::vector<int> node_of;   // per decomposition cell, -1 if none
  std::vector<Cell> nodes;    // world cell of each node
  std::vector<Cell> coarse;   // decomposition cell of each node

  int node_at(int gx, int gy) const {
    if (gx < 0 || gy < 0 || gx >= nx || gy >= ny) return -1;
    return node_of[static_cast<std::size_t>(gy * nx + gx)];
  }
};

CoverageGrid build_coverage_grid(const MaskGrid& passable, double cell_side, double resolution);

// Cells within `radius_cells` (centre distance) of a polyline through the
// given cell centres.
MaskGrid sweep_mask(int width, int height, std::span<const Cell> polyline, double radius_cells);

// Greedy disc cover of `remaining`: every set cell gets a passable centre
// within `radius_cells`; cells with no such centre are dropped and reported.
struct CoverTargets {
  std::vector<Cell> targets;
  std::size_t unreachable = 0;
};
CoverTargets greedy_cover(const MaskGrid& passable, MaskGrid remaining, double radius_cells, OpCounter* ops = nullptr);

// --- TSP --------------------------------------------------------------------

// Dense cost matrix, row-major.
struct CostMatrix {
  int n = 0;
  std::vector<double> c;
  double operator()(int i, int j) const { return c[static_cast<std::size_t>(i) * n + j]; }
  double& operator()(int i, int j) { return c[static_cast<std::size_t>(i) * n + j]; }
};

struct TspCostConfig {
  double distant_fraction = 0.25;  // of the map diagonal
};

// Path costs (metres) between the points by bounded Dijkstra from each point
// out to the distant threshold. Pairs it does not reach get the largest
// possible path length plus their straight-line distance as a tie-break.
CostMatrix tsp_costs(const MaskGrid& passable, std::span<const Cell> points, double resolution,
                     const TspCostConfig& cfg = {}, OpCounter* ops = nullptr);

// Open tour from node `start`: nearest neighbour, then 2-opt and or-opt until
// no move improves. Restarts from the few cheapest first hops and keeps the
// best tour.
std::vector<int> tsp_order(const CostMatrix& costs, int start, OpCounter* ops = nullptr);
double tour_cost(const CostMatrix& costs, std::span<const int> order);

// --- BSA --------------------------------------------------------------------

// Node visit sequence of the backtracking spiral over a coverage grid: move
// straight until blocked, then spiral keeping covered space on the right
// (right, forward, left); at a dead end, walk the node graph to the nearest
// visited node that borders an unvisited one. Consecutive entries are
// adjacent nodes.
std::vector<int> bsa_sequence(const CoverageGrid& grid, const MaskGrid& passable, int start_node, int start_dir,
                              OpCounter* ops = nullptr);

// --- frontier -----------------------------------------------------------------

struct FrontierGoal {
  Cell goal;       // passable cell to drive to
  Cell frontier;   // frontier cell it serves
  double cost = 0.0;
};

// Nearest (by path cost) passable cell within `reach_cells` of a frontier cell.
std::optional<FrontierGoal> nearest_frontier(const MaskGrid& passable, const MaskGrid& frontier, Cell from,
                                             double reach_cells, OpCounter* ops = nullptr);

// --- path post-processing ------------------------------------------------------

// True if a disc of `radius` (plus a small margin) stays clear of obstacles
// along the whole segment.
bool segment_clear(const WorldMap& map, Vec2 a, Vec2 b, double radius, OpCounter* ops = nullptr);

// Drops intermediate cells while the straight segment stays clear.
std::vector<Vec2> shortcut(const WorldMap& map, std::span<const Cell> cells, double radius, OpCounter* ops = nullptr);

// Nearest passable cell to `c` by Euclidean distance within `max_cells`.
std::optional<Cell> nearest_passable(const MaskGrid& passable, Cell c, int max_cells);

}  // namespace covpath
