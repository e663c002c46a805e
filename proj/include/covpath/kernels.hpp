#pragma once

#include "covpath/grid.hpp"

// Data-parallel grid kernels. Every kernel has a plain serial reference in
// `serial` and an OpenMP version in `parallel`; the two must agree exactly
// (TV agrees to summation-order rounding). Library code calls the
// `parallel` versions; tests and the benchmark compare both.
namespace covpath::kernels {

namespace serial {

// Discrete isotropic total variation in cell units. Forward differences are
// only taken where both the right and the upper neighbour exist.
double total_variation(const MaskGrid& x);
double total_variation(const Grid<float>& x);

// Squared Euclidean distance (in cells, centre to centre) from every cell to
// the nearest cell with seeds != 0. Cells with no seed anywhere get +inf.
Grid<double> squared_edt(const MaskGrid& seeds);

// Coarse cell = 1 iff any fine cell inside its factor x factor block is set.
// Blocks tile from cell (0,0); a partial block at the far edge is pooled over
// its in-map part.
MaskGrid block_or_pool(const MaskGrid& fine, int factor);

// Coarse cell = mean of its factor x factor block; out-of-map cells of a
// partial block count as `outside`.
Grid<float> block_mean_pool(const Grid<float>& fine, int factor, float outside);

// Frontier points: not covered, not a known obstacle, and at least one of the
// 8 neighbours covered.
MaskGrid frontier_mask(const MaskGrid& covered, const MaskGrid& known_obstacle);

}  // namespace serial

namespace parallel {

double total_variation(const MaskGrid& x);
double total_variation(const Grid<float>& x);
Grid<double> squared_edt(const MaskGrid& seeds);
MaskGrid block_or_pool(const MaskGrid& fine, int factor);
Grid<float> block_mean_pool(const Grid<float>& fine, int factor, float outside);
MaskGrid frontier_mask(const MaskGrid& covered, const MaskGrid& known_obstacle);

}  // namespace parallel

using parallel::block_mean_pool;
using parallel::block_or_pool;
using parallel::frontier_mask;
using parallel::squared_edt;
using parallel::total_variation;

}  // namespace covpath::kernels
