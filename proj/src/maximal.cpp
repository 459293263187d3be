#include "zyg/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace zyg {

namespace {

constexpr std::size_t kMaterializeBudget = 200'000'000; // cells * breakpoints

// Line decomposition of a grid along a 0-based axis: cells along the axis at
// stride `step`, one line per transverse index pair.
struct LineWalk {
  std::size_t count;  // number of lines
  std::size_t length; // cells per line
  std::size_t step;   // stride between consecutive cells of a line
};

LineWalk make_walk(const Grid3& grid, int axis0) {
  switch (axis0) {
    case 0: return {grid.ny() * grid.nz(), grid.nx(), 1};
    case 1: return {grid.nx() * grid.nz(), grid.ny(), grid.nx()};
    default: return {grid.nx() * grid.ny(), grid.nz(), grid.nx() * grid.ny()};
  }
}

std::size_t line_base(const Grid3& grid, int axis0, std::size_t line) {
  const std::size_t nx = grid.nx(), ny = grid.ny();
  switch (axis0) {
    case 0: return grid.cell_index(0, line % ny, line / ny);
    case 1: return grid.cell_index(line % nx, 0, line / nx);
    default: return grid.cell_index(line % nx, line / nx, 0);
  }
}

// Transverse area of a cell (product of the two non-axis cell lengths).
Measure transverse_area(const Grid3& grid, int axis0, std::size_t cell_index) {
  const std::size_t nx = grid.nx(), ny = grid.ny();
  const std::size_t i = cell_index % nx;
  const std::size_t j = (cell_index / nx) % ny;
  const std::size_t k = cell_index / (nx * ny);
  const Measure lx = grid.xs[i + 1] - grid.xs[i];
  const Measure ly = grid.ys[j + 1] - grid.ys[j];
  const Measure lz = grid.zs[k + 1] - grid.zs[k];
  switch (axis0) {
    case 0: return ly * lz;
    case 1: return lx * lz;
    default: return lx * ly;
  }
}

int check_axis(int axis) {
  if (axis < 1 || axis > 3) {
    throw std::invalid_argument("maximal: axis must be 1, 2 or 3");
  }
  return axis - 1;
}

} // namespace

ScalarField3 make_integer_field(Grid3 grid, std::vector<Measure> values) {
  if (values.size() != grid.cells()) {
    throw std::invalid_argument("make_integer_field: value count does not match the grid");
  }
  ScalarField3 f;
  f.grid = std::move(grid);
  f.ivalue = std::move(values);
  f.value.resize(f.ivalue.size());
  for (std::size_t i = 0; i < f.ivalue.size(); ++i) {
    if (f.ivalue[i] < 0) throw std::invalid_argument("make_integer_field: negative value");
    f.value[i] = static_cast<double>(f.ivalue[i]);
  }
  f.exact = true;
  return f;
}

ScalarField3 make_exp_field(const DepthField& depth, double c) {
  if (!(c > 0)) throw std::invalid_argument("make_exp_field: c must be positive");
  ScalarField3 f;
  f.grid = depth.grid;
  f.value.resize(depth.depth.size());
  for (std::size_t i = 0; i < depth.depth.size(); ++i) {
    const std::int32_t d = depth.depth[i];
    if (c * d > 700.0) throw ExpOverflowError("make_exp_field: depth exceeds e^{ck} range");
    f.value[i] = d > 0 ? std::exp(c * d) : 0.0;
  }
  return f;
}

MaximalField hl_maximal_1d(const ScalarField3& f, int axis) {
  const int a = check_axis(axis);
  const Grid3& grid = f.grid;
  const std::vector<Scalar>& bp = grid.axis(a);
  const std::size_t g = bp.size() - 1;
  if (grid.cells() * g > kMaterializeBudget) {
    throw std::invalid_argument("hl_maximal_1d: grid too large to materialize; "
                                "use maximal_superlevel_measure");
  }

  MaximalField mf;
  mf.grid = grid;
  mf.axis = axis;
  mf.value.resize(grid.cells());
  mf.is_exact = f.exact;
  if (f.exact) mf.exact.resize(grid.cells());

  const LineWalk walk = make_walk(grid, a);
  std::vector<double> prefix(g + 1);
  std::vector<Wide> iprefix(g + 1);
  for (std::size_t line = 0; line < walk.count; ++line) {
    const std::size_t base = line_base(grid, a, line);
    prefix[0] = 0.0;
    iprefix[0] = 0;
    for (std::size_t i = 0; i < g; ++i) {
      const Scalar len = bp[i + 1] - bp[i];
      const std::size_t cell = base + i * walk.step;
      prefix[i + 1] = prefix[i] + f.value[cell] * static_cast<double>(len);
      if (f.exact) iprefix[i + 1] = iprefix[i] + Wide(f.ivalue[cell]) * len;
    }
    for (std::size_t i = 0; i < g; ++i) {
      const std::size_t cell = base + i * walk.step;
      if (f.exact) {
        Rational best{0, 1};
        bool first = true;
        for (std::size_t lo = 0; lo <= i; ++lo) {
          for (std::size_t hi = i + 1; hi <= g; ++hi) {
            const Wide num = iprefix[hi] - iprefix[lo];
            const Measure den = bp[hi] - bp[lo];
            if (num > Wide(std::numeric_limits<Measure>::max())) {
              throw std::invalid_argument("hl_maximal_1d: field too large for exact averages");
            }
            const Rational cand{static_cast<Measure>(num), den};
            if (first || best < cand) {
              best = cand;
              first = false;
            }
          }
        }
        mf.exact[cell] = best;
        mf.value[cell] = best.to_double();
      } else {
        double best = 0.0;
        bool first = true;
        for (std::size_t lo = 0; lo <= i; ++lo) {
          for (std::size_t hi = i + 1; hi <= g; ++hi) {
            const double cand = (prefix[hi] - prefix[lo]) / static_cast<double>(bp[hi] - bp[lo]);
            if (first || cand > best) {
              best = cand;
              first = false;
            }
          }
        }
        mf.value[cell] = best;
      }
    }
  }
  return mf;
}

namespace {

// Exact comparison num/den > lambda against the dyadic expansion of lambda
// whenever the sizes allow; long double otherwise.
bool rational_above(const Rational& r, double lambda) {
  if (lambda < 0) return true;
  if (lambda == 0) return r.num > 0;
  int e = 0;
  const double frac = std::frexp(lambda, &e);
  const int shift = 53 - e;
  if (shift >= 0 && shift <= 62 && r.num < (Measure(1) << 61)) {
    const auto mantissa = static_cast<Measure>(std::ldexp(frac, 53));
    return (Wide(r.num) << shift) > Wide(mantissa) * r.den;
  }
  return static_cast<long double>(r.num) > static_cast<long double>(lambda) * r.den;
}

bool maximal_above(const MaximalField& mf, std::size_t cell, double lambda) {
  return mf.is_exact ? rational_above(mf.exact[cell], lambda) : mf.value[cell] > lambda;
}

} // namespace

Measure level_set_measure(const MaximalField& mf, double lambda) {
  Measure total = 0;
  const Grid3& g = mf.grid;
  for (std::size_t k = 0; k < g.nz(); ++k)
    for (std::size_t j = 0; j < g.ny(); ++j)
      for (std::size_t i = 0; i < g.nx(); ++i) {
        if (maximal_above(mf, g.cell_index(i, j, k), lambda)) {
          total += g.cell_volume(i, j, k);
        }
      }
  return total;
}

Measure level_set_measure_or(const MaximalField& a, const MaximalField& b, double lambda) {
  if (!(a.grid == b.grid)) {
    throw std::invalid_argument("level_set_measure_or: fields live on different grids");
  }
  Measure total = 0;
  const Grid3& g = a.grid;
  for (std::size_t k = 0; k < g.nz(); ++k)
    for (std::size_t j = 0; j < g.ny(); ++j)
      for (std::size_t i = 0; i < g.nx(); ++i) {
        const std::size_t cell = g.cell_index(i, j, k);
        if (maximal_above(a, cell, lambda) || maximal_above(b, cell, lambda)) {
          total += g.cell_volume(i, j, k);
        }
      }
  return total;
}

namespace {

// lambda as an exact dyadic rational F * 2^{e-53}; the threshold comparison
// (S_b - S_a) > lambda (x_b - x_a) becomes an exact 128-bit integer
// comparison of (S << (53-e)) - F x at the breakpoints.
struct DyadicLambda {
  Measure mantissa = 0;
  int shift = 0; // 53 - exponent
  bool usable = false;
};

DyadicLambda decompose_lambda(double lambda, Wide max_abs_sum) {
  DyadicLambda d;
  int e = 0;
  const double frac = std::frexp(lambda, &e);
  d.mantissa = static_cast<Measure>(std::ldexp(frac, 53));
  d.shift = 53 - e;
  if (d.shift < 0 || d.shift > 62) return d;
  // (max |S|) << shift must stay inside 128 bits with headroom
  Wide limit = Wide(1) << (120 - d.shift);
  d.usable = max_abs_sum < limit;
  return d;
}

} // namespace

Measure maximal_superlevel_measure(const ScalarField3& f, int axis, double lambda) {
  const int a = check_axis(axis);
  const Grid3& grid = f.grid;
  const std::vector<Scalar>& bp = grid.axis(a);
  const std::size_t g = bp.size() - 1;
  const LineWalk walk = make_walk(grid, a);

  DyadicLambda dyadic;
  if (f.exact && lambda > 0) {
    Wide total_mass = 0;
    for (std::size_t cell = 0; cell < f.ivalue.size(); ++cell) {
      total_mass += Wide(f.ivalue[cell]) * (Wide(1) << 23); // coarse bound on v * length
    }
    dyadic = decompose_lambda(lambda, total_mass);
  }

  Measure total = 0;
  std::vector<double> shifted(g + 1); // S_m - lambda * x_m at breakpoints
  std::vector<double> prefmin(g + 1), sufmax(g + 1);
  std::vector<Wide> ishifted(g + 1);
  std::vector<Wide> iprefmin(g + 1), isufmax(g + 1);
  for (std::size_t line = 0; line < walk.count; ++line) {
    const std::size_t base = line_base(grid, a, line);
    if (dyadic.usable) {
      Wide s = 0;
      ishifted[0] = -Wide(dyadic.mantissa) * bp[0];
      for (std::size_t i = 0; i < g; ++i) {
        s += Wide(f.ivalue[base + i * walk.step]) * (bp[i + 1] - bp[i]);
        ishifted[i + 1] = (s << dyadic.shift) - Wide(dyadic.mantissa) * bp[i + 1];
      }
      iprefmin[0] = ishifted[0];
      for (std::size_t i = 1; i <= g; ++i) iprefmin[i] = std::min(iprefmin[i - 1], ishifted[i]);
      isufmax[g] = ishifted[g];
      for (std::size_t i = g; i-- > 0;) isufmax[i] = std::max(isufmax[i + 1], ishifted[i]);
      for (std::size_t i = 0; i < g; ++i) {
        if (isufmax[i + 1] > iprefmin[i]) {
          const std::size_t cell = base + i * walk.step;
          total += (bp[i + 1] - bp[i]) * transverse_area(grid, a, cell);
        }
      }
      continue;
    }
    double s = 0.0;
    shifted[0] = -lambda * static_cast<double>(bp[0]);
    for (std::size_t i = 0; i < g; ++i) {
      s += f.value[base + i * walk.step] * static_cast<double>(bp[i + 1] - bp[i]);
      shifted[i + 1] = s - lambda * static_cast<double>(bp[i + 1]);
    }
    prefmin[0] = shifted[0];
    for (std::size_t i = 1; i <= g; ++i) prefmin[i] = std::min(prefmin[i - 1], shifted[i]);
    sufmax[g] = shifted[g];
    for (std::size_t i = g; i-- > 0;) sufmax[i] = std::max(sufmax[i + 1], shifted[i]);
    for (std::size_t i = 0; i < g; ++i) {
      if (sufmax[i + 1] > prefmin[i]) {
        const std::size_t cell = base + i * walk.step;
        total += (bp[i + 1] - bp[i]) * transverse_area(grid, a, cell);
      }
    }
  }
  return total;
}

WeakTypeReport weak_type_check(const ScalarField3& f, int axis, double lambda, double constant) {
  if (!(lambda > 0) || !(constant > 0)) {
    throw std::invalid_argument("weak_type_check: lambda and constant must be positive");
  }
  WeakTypeReport report;
  report.axis = axis;
  report.lambda = lambda;
  report.constant = constant;
  report.level_set = maximal_superlevel_measure(f, axis, lambda);

  const Grid3& g = f.grid;
  double integral = 0.0;
  for (std::size_t k = 0; k < g.nz(); ++k)
    for (std::size_t j = 0; j < g.ny(); ++j)
      for (std::size_t i = 0; i < g.nx(); ++i) {
        integral += f.value[g.cell_index(i, j, k)] *
                    static_cast<double>(g.cell_volume(i, j, k));
      }
  report.integral = integral;
  report.bound = constant / lambda * integral;
  report.pass = static_cast<double>(report.level_set) <= report.bound * (1.0 + 1e-12);
  return report;
}

InclusionReport rejected_inclusion_check(const SelectionResult& result, const BoxFamily& f) {
  InclusionReport report;
  report.lambda = rejection_level();
  if (result.rejected.empty()) return report;

  const double c = result.params.c;
  std::vector<Box3> gens;
  gens.reserve(result.selected.size());
  for (std::size_t i : result.selected) gens.push_back(dilate(f.boxes[i], result.params.dilation));
  std::vector<Box3> rejected;
  rejected.reserve(result.rejected.size());
  for (std::size_t i : result.rejected) rejected.push_back(f.boxes[i]);

  // Grid over the dilated selections and the rejected rectangles, so every
  // rejected rectangle is an exact union of cells. Only the in-plane
  // operators M_1 and M_2 appear, so each z-slab is independent.
  std::vector<Scalar> xs, ys, zs;
  auto collect = [&](const std::vector<Box3>& boxes) {
    for (const Box3& b : boxes) {
      xs.push_back(b.x.lo);
      xs.push_back(b.x.hi);
      ys.push_back(b.y.lo);
      ys.push_back(b.y.hi);
      zs.push_back(b.z.lo);
      zs.push_back(b.z.hi);
    }
  };
  collect(gens);
  collect(rejected);
  auto dedup = [](std::vector<Scalar>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  dedup(xs);
  dedup(ys);
  dedup(zs);
  const std::size_t nx = xs.size() - 1, ny = ys.size() - 1;
  auto xindex = [&](Scalar v) {
    return static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), v) - xs.begin());
  };
  auto yindex = [&](Scalar v) {
    return static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), v) - ys.begin());
  };

  std::vector<std::int32_t> diff((nx + 1) * (ny + 1));
  std::vector<double> shifted(std::max(nx, ny) + 1);
  std::vector<double> prefmin(std::max(nx, ny) + 1), sufmax(std::max(nx, ny) + 1);
  std::vector<unsigned char> pass1(nx * ny), pass2(nx * ny);
  std::vector<unsigned char> rowNeeded(ny), colNeeded(nx);
  const double lambda = report.lambda;

  for (std::size_t kz = 0; kz + 1 < zs.size(); ++kz) {
    const Scalar z0 = zs[kz], z1 = zs[kz + 1];
    bool any = false;
    for (const Box3& r : rejected) {
      if (r.z.lo <= z0 && r.z.hi >= z1) {
        any = true;
        break;
      }
    }
    if (!any) continue;

    std::fill(diff.begin(), diff.end(), 0);
    for (const Box3& b : gens) {
      if (b.z.lo <= z0 && b.z.hi >= z1) {
        const std::size_t i0 = xindex(b.x.lo), i1 = xindex(b.x.hi);
        const std::size_t j0 = yindex(b.y.lo), j1 = yindex(b.y.hi);
        diff[j0 * (nx + 1) + i0] += 1;
        diff[j0 * (nx + 1) + i1] -= 1;
        diff[j1 * (nx + 1) + i0] -= 1;
        diff[j1 * (nx + 1) + i1] += 1;
      }
    }
    for (std::size_t j = 0; j <= ny; ++j)
      for (std::size_t i = 1; i <= nx; ++i) diff[j * (nx + 1) + i] += diff[j * (nx + 1) + i - 1];
    for (std::size_t j = 1; j <= ny; ++j)
      for (std::size_t i = 0; i <= nx; ++i) diff[j * (nx + 1) + i] += diff[(j - 1) * (nx + 1) + i];
    auto depth_at = [&](std::size_t i, std::size_t j) { return diff[j * (nx + 1) + i]; };
    auto exp_at = [&](std::size_t i, std::size_t j) {
      const std::int32_t d = depth_at(i, j);
      if (c * d > 700.0) throw ExpOverflowError("rejected_inclusion_check: depth overflow");
      return d > 0 ? std::exp(c * d) : 0.0;
    };

    std::fill(rowNeeded.begin(), rowNeeded.end(), 0);
    std::fill(colNeeded.begin(), colNeeded.end(), 0);
    for (const Box3& r : rejected) {
      if (!(r.z.lo <= z0 && r.z.hi >= z1)) continue;
      for (std::size_t j = yindex(r.y.lo); j < yindex(r.y.hi); ++j) rowNeeded[j] = 1;
      for (std::size_t i = xindex(r.x.lo); i < xindex(r.x.hi); ++i) colNeeded[i] = 1;
    }

    // M_1: scan along x for each needed row.
    for (std::size_t j = 0; j < ny; ++j) {
      if (!rowNeeded[j]) continue;
      double s = 0.0;
      shifted[0] = -lambda * static_cast<double>(xs[0]);
      for (std::size_t i = 0; i < nx; ++i) {
        s += exp_at(i, j) * static_cast<double>(xs[i + 1] - xs[i]);
        shifted[i + 1] = s - lambda * static_cast<double>(xs[i + 1]);
      }
      prefmin[0] = shifted[0];
      for (std::size_t i = 1; i <= nx; ++i) prefmin[i] = std::min(prefmin[i - 1], shifted[i]);
      sufmax[nx] = shifted[nx];
      for (std::size_t i = nx; i-- > 0;) sufmax[i] = std::max(sufmax[i + 1], shifted[i]);
      for (std::size_t i = 0; i < nx; ++i) pass1[j * nx + i] = sufmax[i + 1] > prefmin[i];
    }
    // M_2: scan along y for each needed column.
    for (std::size_t i = 0; i < nx; ++i) {
      if (!colNeeded[i]) continue;
      double s = 0.0;
      shifted[0] = -lambda * static_cast<double>(ys[0]);
      for (std::size_t j = 0; j < ny; ++j) {
        s += exp_at(i, j) * static_cast<double>(ys[j + 1] - ys[j]);
        shifted[j + 1] = s - lambda * static_cast<double>(ys[j + 1]);
      }
      prefmin[0] = shifted[0];
      for (std::size_t j = 1; j <= ny; ++j) prefmin[j] = std::min(prefmin[j - 1], shifted[j]);
      sufmax[ny] = shifted[ny];
      for (std::size_t j = ny; j-- > 0;) sufmax[j] = std::max(sufmax[j + 1], shifted[j]);
      for (std::size_t j = 0; j < ny; ++j) pass2[j * nx + i] = sufmax[j + 1] > prefmin[j];
    }

    // For a cell with no whole-cell witness, the per-direction failing set is
    // the slab {t : Q <= T(t) <= P} inside the cell (T is linear there); the
    // cell holds genuinely uncovered points iff both slabs have positive
    // length.
    auto failing_span = [](double t0, double t1, double lo, double hi, double pmin,
                           double qmax) {
      if (qmax > pmin) return 0.0;
      if (t1 == t0) return (t0 >= qmax && t0 <= pmin) ? hi - lo : 0.0;
      const double scale = (hi - lo) / (t1 - t0);
      double a = lo + (qmax - t0) * scale;
      double b = lo + (pmin - t0) * scale;
      if (a > b) std::swap(a, b);
      a = std::max(a, lo);
      b = std::min(b, hi);
      return std::max(0.0, b - a);
    };
    auto x_fail_length = [&](std::size_t i, std::size_t j) {
      double s = 0.0, pmin = -lambda * static_cast<double>(xs[0]), t0 = pmin, t1 = 0.0;
      for (std::size_t m = 0; m < nx; ++m) {
        s += exp_at(m, j) * static_cast<double>(xs[m + 1] - xs[m]);
        const double t = s - lambda * static_cast<double>(xs[m + 1]);
        if (m + 1 <= i) pmin = std::min(pmin, t);
        if (m == i) t1 = t;
        if (m + 1 == i) t0 = t;
      }
      double qmax = -std::numeric_limits<double>::infinity();
      s = 0.0;
      for (std::size_t m = 0; m < nx; ++m) {
        s += exp_at(m, j) * static_cast<double>(xs[m + 1] - xs[m]);
        const double t = s - lambda * static_cast<double>(xs[m + 1]);
        if (m + 1 >= i + 1) qmax = std::max(qmax, t);
      }
      return failing_span(t0, t1, static_cast<double>(xs[i]), static_cast<double>(xs[i + 1]),
                          pmin, qmax);
    };
    auto y_fail_length = [&](std::size_t i, std::size_t j) {
      double s = 0.0, pmin = -lambda * static_cast<double>(ys[0]), t0 = pmin, t1 = 0.0;
      for (std::size_t m = 0; m < ny; ++m) {
        s += exp_at(i, m) * static_cast<double>(ys[m + 1] - ys[m]);
        const double t = s - lambda * static_cast<double>(ys[m + 1]);
        if (m + 1 <= j) pmin = std::min(pmin, t);
        if (m == j) t1 = t;
        if (m + 1 == j) t0 = t;
      }
      double qmax = -std::numeric_limits<double>::infinity();
      s = 0.0;
      for (std::size_t m = 0; m < ny; ++m) {
        s += exp_at(i, m) * static_cast<double>(ys[m + 1] - ys[m]);
        const double t = s - lambda * static_cast<double>(ys[m + 1]);
        if (m + 1 >= j + 1) qmax = std::max(qmax, t);
      }
      return failing_span(t0, t1, static_cast<double>(ys[j]), static_cast<double>(ys[j + 1]),
                          pmin, qmax);
    };

    for (const Box3& r : rejected) {
      if (!(r.z.lo <= z0 && r.z.hi >= z1)) continue;
      for (std::size_t j = yindex(r.y.lo); j < yindex(r.y.hi); ++j) {
        for (std::size_t i = xindex(r.x.lo); i < xindex(r.x.hi); ++i) {
          ++report.cells_checked;
          const bool w1 = pass1[j * nx + i] != 0;
          const bool w2 = pass2[j * nx + i] != 0;
          if (w1 && w2) {
            ++report.witness_both;
          } else if (w1) {
            ++report.witness_axis1;
          } else if (w2) {
            ++report.witness_axis2;
          } else {
            ++report.violation_count;
            if (report.violations.size() < 64) {
              report.violations.emplace_back(Interval(xs[i], xs[i + 1]),
                                             Interval(ys[j], ys[j + 1]), Interval(z0, z1));
            }
            const double lx = x_fail_length(i, j);
            const double ly = y_fail_length(i, j);
            if (lx > 0.0 && ly > 0.0) {
              ++report.pointwise_violation_count;
              report.pointwise_violation_measure += lx * ly * static_cast<double>(z1 - z0);
            }
          }
        }
      }
    }
  }
  return report;
}

StrongMaximalReport strong_maximal_grid(std::span<const Measure> values, std::size_t g,
                                        double alpha) {
  if (g == 0 || g > 48) {
    throw std::invalid_argument("strong_maximal_grid: grid side must be in [1, 48]");
  }
  if (values.size() != g * g) {
    throw std::invalid_argument("strong_maximal_grid: expected g*g values");
  }
  if (!(alpha > 0)) throw std::invalid_argument("strong_maximal_grid: alpha must be positive");
  for (Measure v : values) {
    if (v < 0) throw std::invalid_argument("strong_maximal_grid: negative value");
  }

  // best[y * g + x], as exact fractions sum/area.
  std::vector<Rational> best(g * g, Rational{0, 1});
  std::vector<Measure> colsum(g);
  std::vector<Measure> prefix(g + 1);
  std::vector<Rational> bandBest(g);
  for (std::size_t y0 = 0; y0 < g; ++y0) {
    std::fill(colsum.begin(), colsum.end(), 0);
    for (std::size_t y1 = y0 + 1; y1 <= g; ++y1) {
      const Measure h = static_cast<Measure>(y1 - y0);
      for (std::size_t x = 0; x < g; ++x) colsum[x] += values[(y1 - 1) * g + x];
      prefix[0] = 0;
      for (std::size_t x = 0; x < g; ++x) prefix[x + 1] = prefix[x] + colsum[x];
      for (std::size_t x = 0; x < g; ++x) {
        Rational b{0, 1};
        for (std::size_t x0 = 0; x0 <= x; ++x0) {
          for (std::size_t x1 = x + 1; x1 <= g; ++x1) {
            const Rational cand{prefix[x1] - prefix[x0],
                                h * static_cast<Measure>(x1 - x0)};
            if (b < cand) b = cand;
          }
        }
        bandBest[x] = b;
      }
      for (std::size_t y = y0; y < y1; ++y) {
        for (std::size_t x = 0; x < g; ++x) {
          if (best[y * g + x] < bandBest[x]) best[y * g + x] = bandBest[x];
        }
      }
    }
  }

  StrongMaximalReport report;
  for (std::size_t cell = 0; cell < g * g; ++cell) {
    const Rational& m = best[cell];
    if (static_cast<long double>(m.num) > static_cast<long double>(alpha) * m.den) {
      ++report.superlevel;
    }
    report.max_value = std::max(report.max_value, m.to_double());
    const double t = static_cast<double>(values[cell]) / alpha;
    if (t > 0.0) report.orlicz += t * (1.0 + std::max(0.0, std::log(t)));
  }
  report.ratio = report.orlicz > 0.0 ? static_cast<double>(report.superlevel) / report.orlicz : 0.0;
  return report;
}

} // namespace zyg
