#include "covpath/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

namespace covpath::kernels {

namespace {

constexpr double kFar = 1e20;

// TV term for a binary cell is 0, 1 or sqrt(2); counting the two non-zero
// cases makes the sum independent of evaluation order.
struct TvCounts {
  long long ones = 0;
  long long diagonals = 0;
};

inline void tv_accumulate_row(const MaskGrid& x, int y, TvCounts& c) {
  const int w = x.width();
  for (int i = 0; i + 1 < w; ++i) {
    const bool v = x(i, y) != 0;
    const bool dx = (x(i + 1, y) != 0) != v;
    const bool dy = (x(i, y + 1) != 0) != v;
    if (dx && dy) {
      ++c.diagonals;
    } else if (dx || dy) {
      ++c.ones;
    }
  }
}

inline double tv_row(const Grid<float>& x, int y) {
  double s = 0.0;
  const int w = x.width();
  for (int i = 0; i + 1 < w; ++i) {
    const double v = x(i, y);
    const double dx = x(i + 1, y) - v;
    const double dy = x(i, y + 1) - v;
    s += std::sqrt(dx * dx + dy * dy);
  }
  return s;
}

// 1D squared distance transform of a sampled function (lower envelope of
// parabolas). `f` and `d` have length n; v and z are scratch.
void edt_1d(const double* f, double* d, int n, std::vector<int>& v, std::vector<double>& z) {
  v.assign(static_cast<std::size_t>(n), 0);
  z.assign(static_cast<std::size_t>(n) + 1, 0.0);
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  auto intersect = [&](int q, int p) {
    return ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * q - 2.0 * p);
  };
  for (int q = 1; q < n; ++q) {
    double s = intersect(q, v[static_cast<std::size_t>(k)]);
    while (s <= z[static_cast<std::size_t>(k)]) {
      --k;
      s = intersect(q, v[static_cast<std::size_t>(k)]);
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = s;
    z[static_cast<std::size_t>(k) + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[static_cast<std::size_t>(k) + 1] < q) ++k;
    const int p = v[static_cast<std::size_t>(k)];
    d[q] = double(q - p) * double(q - p) + f[p];
  }
}

void edt_columns(const MaskGrid& seeds, Grid<double>& out, int x0, int x1) {
  const int h = seeds.height();
  std::vector<double> f(static_cast<std::size_t>(h)), d(static_cast<std::size_t>(h));
  std::vector<int> v;
  std::vector<double> z;
  for (int x = x0; x < x1; ++x) {
    for (int y = 0; y < h; ++y) f[static_cast<std::size_t>(y)] = seeds(x, y) ? 0.0 : kFar;
    edt_1d(f.data(), d.data(), h, v, z);
    for (int y = 0; y < h; ++y) out(x, y) = d[static_cast<std::size_t>(y)];
  }
}

void edt_rows(Grid<double>& g, int y0, int y1) {
  const int w = g.width();
  std::vector<double> f(static_cast<std::size_t>(w)), d(static_cast<std::size_t>(w));
  std::vector<int> v;
  std::vector<double> z;
  for (int y = y0; y < y1; ++y) {
    for (int x = 0; x < w; ++x) f[static_cast<std::size_t>(x)] = g(x, y);
    edt_1d(f.data(), d.data(), w, v, z);
    for (int x = 0; x < w; ++x) {
      const double val = d[static_cast<std::size_t>(x)];
      g(x, y) = val >= kFar * 0.5 ? std::numeric_limits<double>::infinity() : val;
    }
  }
}

inline int ceil_div(int a, int b) { return (a + b - 1) / b; }

inline std::uint8_t or_block(const MaskGrid& fine, int factor, int cx, int cy) {
  const int x_end = std::min(fine.width(), (cx + 1) * factor);
  const int y_end = std::min(fine.height(), (cy + 1) * factor);
  for (int y = cy * factor; y < y_end; ++y)
    for (int x = cx * factor; x < x_end; ++x)
      if (fine(x, y)) return 1;
  return 0;
}

inline float mean_block(const Grid<float>& fine, int factor, float outside, int cx, int cy) {
  double s = 0.0;
  int inside = 0;
  const int x_end = std::min(fine.width(), (cx + 1) * factor);
  const int y_end = std::min(fine.height(), (cy + 1) * factor);
  for (int y = cy * factor; y < y_end; ++y)
    for (int x = cx * factor; x < x_end; ++x) {
      s += fine(x, y);
      ++inside;
    }
  const int total = factor * factor;
  s += double(total - inside) * outside;
  return static_cast<float>(s / total);
}

inline std::uint8_t frontier_at(const MaskGrid& covered, const MaskGrid& known_obstacle, int x, int y) {
  if (covered(x, y) || known_obstacle(x, y)) return 0;
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const int nx = x + dx, ny = y + dy;
      if (covered.in_bounds(nx, ny) && covered(nx, ny)) return 1;
    }
  return 0;
}

}  // namespace

namespace serial {

double total_variation(const MaskGrid& x) {
  TvCounts c;
  for (int y = 0; y + 1 < x.height(); ++y) tv_accumulate_row(x, y, c);
  return double(c.ones) + std::numbers::sqrt2 * double(c.diagonals);
}

double total_variation(const Grid<float>& x) {
  double s = 0.0;
  for (int y = 0; y + 1 < x.height(); ++y) s += tv_row(x, y);
  return s;
}

Grid<double> squared_edt(const MaskGrid& seeds) {
  Grid<double> out(seeds.width(), seeds.height(), 0.0);
  if (seeds.empty()) return out;
  edt_columns(seeds, out, 0, seeds.width());
  edt_rows(out, 0, seeds.height());
  return out;
}

MaskGrid block_or_pool(const MaskGrid& fine, int factor) {
  MaskGrid out(ceil_div(fine.width(), factor), ceil_div(fine.height(), factor), 0);
  for (int cy = 0; cy < out.height(); ++cy)
    for (int cx = 0; cx < out.width(); ++cx) out(cx, cy) = or_block(fine, factor, cx, cy);
  return out;
}

Grid<float> block_mean_pool(const Grid<float>& fine, int factor, float outside) {
  Grid<float> out(ceil_div(fine.width(), factor), ceil_div(fine.height(), factor), 0.0f);
  for (int cy = 0; cy < out.height(); ++cy)
    for (int cx = 0; cx < out.width(); ++cx) out(cx, cy) = mean_block(fine, factor, outside, cx, cy);
  return out;
}

MaskGrid frontier_mask(const MaskGrid& covered, const MaskGrid& known_obstacle) {
  MaskGrid out(covered.width(), covered.height(), 0);
  for (int y = 0; y < covered.height(); ++y)
    for (int x = 0; x < covered.width(); ++x) out(x, y) = frontier_at(covered, known_obstacle, x, y);
  return out;
}

}  // namespace serial

namespace parallel {

double total_variation(const MaskGrid& x) {
  long long ones = 0, diagonals = 0;
  const int rows = x.height() - 1;
#pragma omp parallel for reduction(+ : ones, diagonals) schedule(static)
  for (int y = 0; y < rows; ++y) {
    TvCounts c;
    tv_accumulate_row(x, y, c);
    ones += c.ones;
    diagonals += c.diagonals;
  }
  return double(ones) + std::numbers::sqrt2 * double(diagonals);
}

double total_variation(const Grid<float>& x) {
  double s = 0.0;
  const int rows = x.height() - 1;
#pragma omp parallel for reduction(+ : s) schedule(static)
  for (int y = 0; y < rows; ++y) s += tv_row(x, y);
  return s;
}

Grid<double> squared_edt(const MaskGrid& seeds) {
  Grid<double> out(seeds.width(), seeds.height(), 0.0);
  if (seeds.empty()) return out;
  const int w = seeds.width();
  const int h = seeds.height();
#pragma omp parallel
  {
#pragma omp for schedule(static)
    for (int x = 0; x < w; ++x) edt_columns(seeds, out, x, x + 1);
#pragma omp for schedule(static)
    for (int y = 0; y < h; ++y) edt_rows(out, y, y + 1);
  }
  return out;
}

MaskGrid block_or_pool(const MaskGrid& fine, int factor) {
  MaskGrid out(ceil_div(fine.width(), factor), ceil_div(fine.height(), factor), 0);
  const int h = out.height();
#pragma omp parallel for schedule(static)
  for (int cy = 0; cy < h; ++cy)
    for (int cx = 0; cx < out.width(); ++cx) out(cx, cy) = or_block(fine, factor, cx, cy);
  return out;
}

Grid<float> block_mean_pool(const Grid<float>& fine, int factor, float outside) {
  Grid<float> out(ceil_div(fine.width(), factor), ceil_div(fine.height(), factor), 0.0f);
  const int h = out.height();
#pragma omp parallel for schedule(static)
  for (int cy = 0; cy < h; ++cy)
    for (int cx = 0; cx < out.width(); ++cx) out(cx, cy) = mean_block(fine, factor, outside, cx, cy);
  return out;
}

MaskGrid frontier_mask(const MaskGrid& covered, const MaskGrid& known_obstacle) {
  MaskGrid out(covered.width(), covered.height(), 0);
  const int h = covered.height();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < covered.width(); ++x) out(x, y) = frontier_at(covered, known_obstacle, x, y);
  return out;
}

}  // namespace parallel

}  // namespace covpath::kernels
