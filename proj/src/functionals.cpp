#include "caplab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "caplab/overlap.hpp"
#include "caplab/quadrature.hpp"

namespace caplab {

namespace {

double require_volume(const MeasureTriple& m) {
  if (!(m.volume > 0.0)) throw domain_error("functional needs positive volume");
  return m.volume;
}

// Golden-section minimization on [a,b] for a unimodal-ish scalar function;
// deterministic, returns the midpoint of the final bracket.
template <typename F>
double golden_min(F&& f, double a, double b, double tol) {
  const double gr = 0.6180339887498949;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  int guard = 0;
  while (b - a > tol && ++guard < 200) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double deficit(const MeasureTriple& m, const CapillarityParams& p) {
  const double v = require_volume(m);
  return capillarity_perimeter(m, p.lambda) / reference_energy(p, v) - 1.0;
}

double deficit(const ProfileSet& e, const CapillarityParams& p) {
  return deficit(profile_measures(e, p.n), p);
}

double deficit(const VoxelSet& e, const CapillarityParams& p) {
  if (e.dim != p.n) throw domain_error("deficit: voxel dim != n");
  return deficit(voxel_measures(e), p);
}

double psi_concave(double t, int n) {
  if (!(t >= 0.0 && t <= 1.0)) throw domain_error("psi_concave: t outside [0,1]");
  if (n < 2) throw domain_error("psi_concave: n >= 2 required");
  const double q = double(n - 1) / n;
  return std::pow(t, q) + std::pow(1.0 - t, q) - 1.0;
}

// ---------------------------------------------------------------------------
// Fraenkel asymmetry, profile path
// ---------------------------------------------------------------------------

AsymmetryResult asymmetry_alpha(const ProfileSet& e, const CapillarityParams& p) {
  const MeasureTriple m = profile_measures(e, p.n);
  const double v = require_volume(m);
  const Bubble b = make_bubble(p, v);
  const int n = p.n;
  const double w = unit_ball_volume(n - 1);
  const double topb = bubble_top_height(b);
  const double hi = std::max(e.top(), topb);

  // breakpoints: profile nodes, cap top, and slice-radius crossings
  std::vector<double> brk(e.heights.begin(), e.heights.end());
  if (topb > 0.0 && topb < hi) brk.push_back(topb);
  brk.push_back(hi);
  const double ch = b.ball_center_height;
  for (std::size_t k = 0; k + 1 < e.heights.size(); ++k) {
    const double t0 = e.heights[k], t1 = e.heights[k + 1];
    const double aa = e.radii[k];
    const double bb = (e.radii[k + 1] - aa) / (t1 - t0);
    // (aa + bb (t-t0))^2 = s^2 - (t-ch)^2
    const double A = bb * bb + 1.0;
    const double B = 2.0 * (aa * bb - bb * bb * t0) - 2.0 * ch;
    const double C = sq(aa - bb * t0) + ch * ch - b.scale * b.scale;
    const double disc = B * B - 4 * A * C;
    if (disc > 0.0) {
      const double r = std::sqrt(disc);
      for (double root : {(-B - r) / (2 * A), (-B + r) / (2 * A)})
        if (root > t0 && root < t1) brk.push_back(root);
    }
  }
  std::sort(brk.begin(), brk.end());
  brk.erase(std::unique(brk.begin(), brk.end()), brk.end());

  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
    const double t0 = brk[i], t1 = brk[i + 1];
    if (t1 - t0 <= 0.0) continue;
    acc += integrate_gk(
        [&](double t) {
          const double rp = e.radius_at(t);
          const double rb = bubble_slice_radius(b, t);
          return std::abs(std::pow(rp, n - 1) - std::pow(rb, n - 1));
        },
        t0, t1, 1e-13, 1e-11);
  }
  AsymmetryResult r;
  r.value = w * acc / v;
  r.center.assign(std::size_t(n - 1), 0.0);
  return r;
}

// ---------------------------------------------------------------------------
// Fraenkel asymmetry, voxel path
// ---------------------------------------------------------------------------

namespace {

struct CellGeom {
  std::vector<std::array<double, 3>> centers;  // occupied cell centers
  double h = 0.0;
  int dim = 2;
};

CellGeom collect_cells(const VoxelSet& e) {
  CellGeom g;
  g.h = e.spacing;
  g.dim = e.dim;
  g.centers.reserve(e.occupied_count());
  for (int t = 0; t < e.nt(); ++t)
    for (int y = 0; y < e.ny(); ++y)
      for (int x = 0; x < e.nx(); ++x)
        if (e.at(x, y, t)) g.centers.push_back(e.center(x, y, t));
  return g;
}

// |E cap ball|: cells classified by center distance, annulus cells clipped.
double cells_ball_overlap(const CellGeom& g, const std::array<double, 3>& bc,
                          double s, bool exact) {
  const double h = g.h;
  const double halfdiag = 0.5 * h * std::sqrt(double(g.dim));
  const double cellv = std::pow(h, g.dim);
  double acc = 0.0;
  for (const auto& c : g.centers) {
    double d2 = sq(c[0] - bc[0]) + sq(c[g.dim - 1] - bc[g.dim - 1]);
    if (g.dim == 3) d2 += sq(c[1] - bc[1]);
    const double d = std::sqrt(d2);
    if (d <= s - halfdiag) {
      acc += cellv;
    } else if (d < s + halfdiag) {
      if (!exact) {
        if (d < s) acc += cellv;
      } else if (g.dim == 2) {
        acc += disk_rect_area(bc[0], bc[1], s, c[0] - 0.5 * h, c[0] + 0.5 * h,
                              c[1] - 0.5 * h, c[1] + 0.5 * h);
      } else {
        const std::array<double, 3> lo{c[0] - 0.5 * h, c[1] - 0.5 * h,
                                       c[2] - 0.5 * h};
        const std::array<double, 3> hi{c[0] + 0.5 * h, c[1] + 0.5 * h,
                                       c[2] + 0.5 * h};
        acc += ball_box_volume(bc, s, lo, hi, 1e-12 * cellv);
      }
    }
  }
  return acc;
}

std::array<double, 3> ball_center_for(const CapillarityParams& p,
                                      const std::vector<double>& x,
                                      double scale) {
  std::array<double, 3> bc{0, 0, 0};
  bc[0] = x[0];
  if (p.n == 3) bc[1] = x[1];
  bc[p.n - 1] = -scale * p.lambda;
  return bc;
}

}  // namespace

double voxel_bubble_sym_diff(const VoxelSet& e, const Bubble& b) {
  e.validate();
  if (e.dim != b.params.n) throw domain_error("sym_diff: voxel dim != n");
  CellGeom g = collect_cells(e);
  std::vector<double> x = b.center;
  const auto bc = ball_center_for(b.params, x, b.scale);
  const double inter = cells_ball_overlap(g, bc, b.scale, true);
  const double vol = double(g.centers.size()) * std::pow(e.spacing, e.dim);
  return vol + b.volume - 2.0 * inter;
}

namespace {

// Shared translation-search driver for alpha/beta style objectives.
// objective(x) must be exact when `exact` is requested.
template <typename FastF, typename ExactF>
AsymmetryResult translate_search(int n, const std::vector<double>& center0,
                                 double scale, double h, FastF&& fast,
                                 ExactF&& exact, const SearchOptions& opt) {
  const double W = opt.window_halfwidth_scales * scale;
  const double tol = opt.golden_tol_scales * scale;
  const int axes = n - 1;
  const int limit = axes == 1 ? opt.coarse_limit : 48;
  const double step = std::max(h, 2.0 * W / limit);

  std::vector<std::vector<double>> seeds;
  std::vector<double> seed_scores;
  if (axes == 1) {
    for (double x = center0[0] - W; x <= center0[0] + W + 0.5 * step; x += step) {
      seeds.push_back({x});
      seed_scores.push_back(fast({x}));
    }
  } else {
    for (double x = center0[0] - W; x <= center0[0] + W + 0.5 * step; x += step)
      for (double y = center0[1] - W; y <= center0[1] + W + 0.5 * step; y += step) {
        seeds.push_back({x, y});
        seed_scores.push_back(fast({x, y}));
      }
  }
  // pick best multistart seeds (stable order for ties)
  std::vector<std::size_t> order(seeds.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return seed_scores[a] < seed_scores[b];
  });
  const std::size_t starts = std::min<std::size_t>(
      std::max(1, opt.multistart), order.size());

  AsymmetryResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (std::size_t si = 0; si < starts; ++si) {
    std::vector<double> x = seeds[order[si]];
    if (axes == 1) {
      const double xr = golden_min(
          [&](double t) { return exact({t}); }, x[0] - step, x[0] + step, tol);
      x[0] = xr;
    } else {
      for (int sweep = 0; sweep < opt.sweeps_3d; ++sweep)
        for (int a = 0; a < axes; ++a) {
          const double lo = x[a] - (sweep == 0 ? step : 4 * tol);
          const double hi = x[a] + (sweep == 0 ? step : 4 * tol);
          x[a] = golden_min(
              [&](double t) {
                auto xx = x;
                xx[a] = t;
                return exact(xx);
              },
              lo, hi, tol);
        }
    }
    const double val = exact(x);
    if (val < best.value - 1e-15 ||
        (std::abs(val - best.value) <= 1e-15 &&
         std::lexicographical_compare(x.begin(), x.end(), best.center.begin(),
                                      best.center.end()))) {
      best.value = val;
      best.center = x;
    }
  }
  return best;
}

}  // namespace

AsymmetryResult asymmetry_alpha(const VoxelSet& e, const CapillarityParams& p,
                                const SearchOptions& opt) {
  e.validate();
  if (e.dim != p.n) throw domain_error("asymmetry_alpha: voxel dim != n");
  const MeasureTriple m = voxel_measures(e);
  const double v = require_volume(m);
  const double s = std::pow(v / p.cap_volume, 1.0 / p.n);
  CellGeom g = collect_cells(e);
  auto centroid = e.wetted_centroid();

  auto objective = [&](const std::vector<double>& x, bool exact) {
    const auto bc = ball_center_for(p, x, s);
    return v + v - 2.0 * cells_ball_overlap(g, bc, s, exact);
  };
  AsymmetryResult r = translate_search(
      p.n, centroid, s, e.spacing,
      [&](const std::vector<double>& x) { return objective(x, false); },
      [&](const std::vector<double>& x) { return objective(x, true); }, opt);
  r.value /= v;
  return r;
}

// ---------------------------------------------------------------------------
// Wetted-trace asymmetry
// ---------------------------------------------------------------------------

AsymmetryResult asymmetry_beta(const ProfileSet& e, const CapillarityParams& p) {
  const MeasureTriple m = profile_measures(e, p.n);
  const double v = require_volume(m);
  const double s = std::pow(v / p.cap_volume, 1.0 / p.n);
  const double rw = s * p.wetted_radius;
  const int n = p.n;
  AsymmetryResult r;
  r.center.assign(std::size_t(n - 1), 0.0);
  const double trace = std::pow(e.radii.front(), n - 1);
  const double ref = std::pow(rw, n - 1);
  // concentric (n-1)-balls: normalized symmetric difference of measures
  r.value = std::abs(trace - ref) / ref;
  if (e.radii.front() == 0.0) r.value = 1.0;  // detached droplet
  return r;
}

AsymmetryResult asymmetry_beta(const VoxelSet& e, const CapillarityParams& p,
                               const SearchOptions& opt) {
  e.validate();
  if (e.dim != p.n) throw domain_error("asymmetry_beta: voxel dim != n");
  const MeasureTriple m = voxel_measures(e);
  const double v = require_volume(m);
  const double s = std::pow(v / p.cap_volume, 1.0 / p.n);
  const double rw = s * p.wetted_radius;
  const double h = e.spacing;

  if (m.wetted_area == 0.0) {
    AsymmetryResult r;
    r.value = 1.0;
    r.center.assign(std::size_t(p.n - 1), 0.0);
    return r;
  }

  if (p.n == 2) {
    // bottom footprint as a union of intervals
    std::vector<std::array<double, 2>> runs;
    for (int x = 0; x < e.nx(); ++x) {
      if (!e.at(x, 0, 0)) continue;
      const double lo = e.origin[0] + x * h;
      if (!runs.empty() && std::abs(runs.back()[1] - lo) < 1e-12 * h)
        runs.back()[1] = lo + h;
      else
        runs.push_back({lo, lo + h});
    }
    double total = 0.0;
    for (auto& r0 : runs) total += r0[1] - r0[0];
    const double refm = 2.0 * rw;
    auto score = [&](const std::vector<double>& x) {
      double inter = 0.0;
      for (auto& r0 : runs)
        inter += interval_overlap(r0[0], r0[1], x[0] - rw, x[0] + rw);
      return (total + refm - 2.0 * inter) / refm;
    };
    auto centroid = e.wetted_centroid();
    return translate_search(2, centroid, s, h, score, score, opt);
  }

  // n == 3: pixel footprint against the trace disk
  std::vector<std::array<double, 2>> px;
  for (int y = 0; y < e.ny(); ++y)
    for (int x = 0; x < e.nx(); ++x)
      if (e.at(x, y, 0))
        px.push_back({e.origin[0] + (x + 0.5) * h, e.origin[1] + (y + 0.5) * h});
  const double total = double(px.size()) * h * h;
  const double refm = kPi * rw * rw;
  const double halfdiag = 0.5 * h * std::sqrt(2.0);
  auto score = [&](const std::vector<double>& x, bool exact) {
    double inter = 0.0;
    for (auto& c : px) {
      const double d = std::hypot(c[0] - x[0], c[1] - x[1]);
      if (d <= rw - halfdiag)
        inter += h * h;
      else if (d < rw + halfdiag) {
        if (!exact) {
          if (d < rw) inter += h * h;
        } else {
          inter += disk_rect_area(x[0], x[1], rw, c[0] - 0.5 * h, c[0] + 0.5 * h,
                                  c[1] - 0.5 * h, c[1] + 0.5 * h);
        }
      }
    }
    return (total + refm - 2.0 * inter) / refm;
  };
  auto centroid = e.wetted_centroid();
  return translate_search(
      3, centroid, s, h,
      [&](const std::vector<double>& x) { return score(x, false); },
      [&](const std::vector<double>& x) { return score(x, true); }, opt);
}

// ---------------------------------------------------------------------------
// Hausdorff distances
// ---------------------------------------------------------------------------

double pointset_hausdorff(const std::vector<std::array<double, 3>>& a,
                          const std::vector<std::array<double, 3>>& b) {
  if (a.empty() || b.empty())
    throw domain_error("pointset_hausdorff: empty boundary");
  auto directed = [](const std::vector<std::array<double, 3>>& from,
                     const std::vector<std::array<double, 3>>& to) {
    double worst2 = 0.0;
    for (const auto& p : from) {
      double best2 = std::numeric_limits<double>::infinity();
      for (const auto& q : to) {
        const double d2 = sq(p[0] - q[0]) + sq(p[1] - q[1]) + sq(p[2] - q[2]);
        if (d2 < best2) {
          best2 = d2;
          if (best2 <= worst2) break;  // cannot raise the max
        }
      }
      if (best2 > worst2) worst2 = best2;
    }
    return worst2;
  };
  return std::sqrt(std::max(directed(a, b), directed(b, a)));
}

std::vector<std::array<double, 3>> bubble_boundary_samples(const Bubble& b,
                                                           double ds) {
  if (!(ds > 0.0)) throw domain_error("bubble_boundary_samples: bad spacing");
  const int n = b.params.n;
  const double s = b.scale;
  const double amax = std::acos(b.params.lambda);
  const double da = std::min(amax, ds / s);
  const int ka = std::max(2, int(std::ceil(amax / da)));
  std::vector<std::array<double, 3>> pts;
  if (n == 2) {
    for (int i = -ka; i <= ka; ++i) {
      const double a = amax * double(i) / ka;
      pts.push_back({b.center[0] + s * std::sin(a), 0.0, 0.0});
      pts.back()[1] = b.ball_center_height + s * std::cos(a);
    }
  } else {
    const int kphi = std::max(4, int(std::ceil(2.0 * kPi * s / ds)));
    for (int i = 0; i <= ka; ++i) {
      const double a = amax * double(i) / ka;
      const double rr = s * std::sin(a);
      const double hh = b.ball_center_height + s * std::cos(a);
      const int klocal = i == 0 ? 1 : kphi;
      for (int j = 0; j < klocal; ++j) {
        const double phi = 2.0 * kPi * double(j) / klocal;
        pts.push_back({b.center[0] + rr * std::cos(phi),
                       b.center[1] + rr * std::sin(phi), hh});
      }
    }
  }
  return pts;
}

double hausdorff_boundary_distance(const ProfileSet& e, const Bubble& b,
                                   double ds) {
  e.validate();
  if (e.empty_geometry()) throw domain_error("hausdorff: empty boundary");
  // coaxial surfaces: the distance reduces to the meridian polylines
  auto mer = profile_meridian(e, ds);
  std::vector<std::array<double, 3>> a;
  a.reserve(mer.size());
  for (auto& q : mer) a.push_back({q[0], q[1], 0.0});
  const double s = b.scale;
  const double amax = std::acos(b.params.lambda);
  const int ka = std::max(2, int(std::ceil(amax * s / ds)));
  std::vector<std::array<double, 3>> bb;
  bb.reserve(std::size_t(ka) + 1);
  for (int i = 0; i <= ka; ++i) {
    const double ang = amax * double(i) / ka;
    bb.push_back({s * std::sin(ang), b.ball_center_height + s * std::cos(ang), 0.0});
  }
  return pointset_hausdorff(a, bb);
}

double hausdorff_boundary_distance(const VoxelSet& e, const Bubble& b,
                                   double ds) {
  auto a = voxel_boundary_samples(e, ds);
  if (a.empty()) throw domain_error("hausdorff: empty boundary");
  auto bb = bubble_boundary_samples(b, ds);
  if (e.dim == 2)
    for (auto& q : bb) q = {q[0], q[1], 0.0};
  return pointset_hausdorff(a, bb);
}

// ---------------------------------------------------------------------------
// Slice-area lower bound from the energy deficit
// ---------------------------------------------------------------------------

namespace {

double slice_residual_impl(const std::vector<double>& heights,
                           const std::vector<double>& areas,
                           const std::vector<double>& below,
                           double volume, double defct,
                           const CapillarityParams& p) {
  if (std::abs(volume - p.cap_volume) > 1e-6 * p.cap_volume)
    throw precondition_error(
        "slice_lower_bound_residual: normalize to the unit cap volume first");
  const double pref = p.ref_energy;
  const double ratio = std::pow(unit_ball_volume(p.n) / p.cap_volume, 1.0 / p.n);
  const double q = double(p.n - 1) / p.n;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < heights.size(); ++i) {
    if (!(heights[i] > 0.0)) continue;
    const double g = std::clamp(below[i] / p.cap_volume, 0.0, 1.0);
    const double rhs = 0.5 * pref * (ratio * std::pow(1.0 - g, q) - 1.0 - defct);
    worst = std::min(worst, areas[i] - rhs);
  }
  return worst;
}

}  // namespace

double slice_lower_bound_residual(const ProfileSet& e, const CapillarityParams& p) {
  const MeasureTriple m = profile_measures(e, p.n);
  const double d = deficit(m, p);
  const double w = unit_ball_volume(p.n - 1);
  std::vector<double> hh, aa, bb;
  for (std::size_t k = 0; k + 1 < e.heights.size(); ++k) {
    for (double t : {e.heights[k], 0.5 * (e.heights[k] + e.heights[k + 1])}) {
      hh.push_back(t);
      aa.push_back(w * std::pow(e.radius_at(t), p.n - 1));
      bb.push_back(e.volume_below(t, p.n));
    }
  }
  return slice_residual_impl(hh, aa, bb, m.volume, d, p);
}

double slice_lower_bound_residual(const VoxelSet& e, const CapillarityParams& p) {
  if (e.dim != p.n) throw domain_error("slice_lower_bound_residual: dim != n");
  const MeasureTriple m = voxel_measures(e);
  const double d = deficit(m, p);
  auto areas = e.layer_area(e.dim - 1);
  auto pre = e.prefix_volume(e.dim - 1);
  std::vector<double> hh, aa, bb;
  for (std::size_t t = 0; t < areas.size(); ++t) {
    hh.push_back((double(t) + 0.5) * e.spacing);
    aa.push_back(areas[t]);
    bb.push_back(pre[t] + 0.5 * e.spacing * areas[t]);
  }
  return slice_residual_impl(hh, aa, bb, m.volume, d, p);
}

// ---------------------------------------------------------------------------
// Radial excess
// ---------------------------------------------------------------------------

double radial_excess_integral(const ProfileSet& e, int n,
                              const std::vector<double>& x0) {
  e.validate();
  if (x0.size() != std::size_t(n))
    throw domain_error("radial_excess_integral: x0 needs n coordinates");
  double acc = 0.0;
  const int kphi = 128;
  for (std::size_t k = 0; k + 1 < e.heights.size(); ++k) {
    const double t0 = e.heights[k], t1 = e.heights[k + 1];
    const double dt = t1 - t0;
    const double slope = (e.radii[k + 1] - e.radii[k]) / dt;
    const double root = std::sqrt(1.0 + slope * slope);
    if (n == 2) {
      for (double side : {1.0, -1.0}) {
        acc += root * integrate_gk(
                          [&](double t) {
                            const double r = e.radius_at(t);
                            return std::abs(std::hypot(side * r - x0[0],
                                                       t - x0[1]) -
                                            1.0);
                          },
                          t0, t1, 1e-10, 1e-8);
      }
    } else {
      // revolve: trapezoid in the angle (periodic), GK in height
      for (int j = 0; j < kphi; ++j) {
        const double phi = 2.0 * kPi * (j + 0.5) / kphi;
        const double cx = std::cos(phi), sx = std::sin(phi);
        acc += root * (2.0 * kPi / kphi) *
               integrate_gk(
                   [&](double t) {
                     const double r = e.radius_at(t);
                     const double dx = r * cx - x0[0];
                     const double dy = r * sx - x0[1];
                     const double dz = t - x0[2];
                     return r * std::abs(
                                    std::sqrt(dx * dx + dy * dy + dz * dz) - 1.0);
                   },
                   t0, t1, 1e-9, 1e-7);
      }
    }
  }
  return acc;
}

double radial_excess_integral(const VoxelSet& e, const std::vector<double>& x0) {
  e.validate();
  if (x0.size() != std::size_t(e.dim))
    throw domain_error("radial_excess_integral: x0 needs dim coordinates");
  const double h = e.spacing;
  const double face = std::pow(h, e.dim - 1);
  double acc = 0.0;
  auto excess = [&](double px, double py, double pt) {
    double d2 = sq(px - x0[0]);
    if (e.dim == 3) {
      d2 += sq(py - x0[1]) + sq(pt - x0[2]);
    } else {
      d2 += sq(pt - x0[1]);
    }
    return std::abs(std::sqrt(d2) - 1.0);
  };
  for (int t = 0; t < e.nt(); ++t)
    for (int y = 0; y < e.ny(); ++y)
      for (int x = 0; x < e.nx(); ++x) {
        if (!e.at(x, y, t)) continue;
        auto c = e.center(x, y, t);
        const double cy3 = e.dim == 3 ? c[1] : 0.0;
        const double ct = c[e.dim - 1];
        if (!e.at(x - 1, y, t)) acc += excess(c[0] - 0.5 * h, cy3, ct);
        if (!e.at(x + 1, y, t)) acc += excess(c[0] + 0.5 * h, cy3, ct);
        if (e.dim == 3) {
          if (!e.at(x, y - 1, t)) acc += excess(c[0], cy3 - 0.5 * h, ct);
          if (!e.at(x, y + 1, t)) acc += excess(c[0], cy3 + 0.5 * h, ct);
        }
        if (!e.at(x, y, t + 1)) acc += excess(c[0], cy3, ct + 0.5 * h);
        if (t > 0 && !e.at(x, y, t - 1)) acc += excess(c[0], cy3, ct - 0.5 * h);
      }
  return acc * face;
}

// ---------------------------------------------------------------------------
// Helpers for the near-cap inequality checks
// ---------------------------------------------------------------------------

double profile_ball_intersection_volume(const ProfileSet& e, int n, double r) {
  e.validate();
  if (!(r > 0.0)) throw domain_error("profile_ball_intersection_volume: r > 0");
  const double w = unit_ball_volume(n - 1);
  const double hi = std::min(e.top(), r);
  if (hi <= 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < e.heights.size(); ++k) {
    const double t0 = e.heights[k];
    const double t1 = std::min(e.heights[k + 1], hi);
    if (t1 <= t0) break;
    acc += integrate_gk(
        [&](double t) {
          const double rr = std::min(e.radius_at(t),
                                     std::sqrt(std::max(0.0, r * r - t * t)));
          return std::pow(rr, n - 1);
        },
        t0, t1, 1e-12, 1e-10);
  }
  return w * acc;
}

double profile_unit_ball_sym_diff(const ProfileSet& e, int n,
                                  const std::vector<double>& x0) {
  e.validate();
  if (n != 2 && n != 3)
    throw domain_error("profile_unit_ball_sym_diff: n must be 2 or 3");
  if (x0.size() != std::size_t(n))
    throw domain_error("profile_unit_ball_sym_diff: x0 needs n coordinates");
  const double zc = x0[n - 1];
  const double d = n == 2 ? std::abs(x0[0]) : std::hypot(x0[0], x0[1]);
  const double hi = std::max(e.top(), zc + 1.0);
  std::vector<double> brk(e.heights.begin(), e.heights.end());
  for (double t : {zc - 1.0, zc + 1.0})
    if (t > 0.0 && t < hi) brk.push_back(t);
  brk.push_back(hi);
  brk.push_back(0.0);
  std::sort(brk.begin(), brk.end());
  brk.erase(std::unique(brk.begin(), brk.end()), brk.end());

  auto slice = [&](double t) {
    const double rho = e.radius_at(t);
    const double bb = 1.0 - sq(t - zc);
    const double rb = bb > 0.0 ? std::sqrt(bb) : 0.0;
    if (n == 2) {
      const double inter =
          interval_overlap(-rho, rho, x0[0] - rb, x0[0] + rb);
      return 2.0 * rho + 2.0 * rb - 2.0 * inter;
    }
    const double inter = disk_lens_area(rho, rb, d);
    return kPi * (rho * rho + rb * rb) - 2.0 * inter;
  };
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
    if (brk[i + 1] - brk[i] <= 0.0 || brk[i] < 0.0) continue;
    acc += integrate_gk(slice, brk[i], brk[i + 1], 1e-10, 1e-8);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Full reports
// ---------------------------------------------------------------------------

EvalReport evaluate(const ProfileSet& e, const CapillarityParams& p) {
  EvalReport r;
  r.measures = profile_measures(e, p.n);
  require_volume(r.measures);
  r.p_lambda = capillarity_perimeter(r.measures, p.lambda);
  r.deficit = deficit(r.measures, p);
  auto a = asymmetry_alpha(e, p);
  r.alpha = a.value;
  r.alpha_center = a.center;
  auto b = asymmetry_beta(e, p);
  r.beta = b.value;
  r.beta_center = b.center;
  const Bubble bub = make_bubble(p, r.measures.volume, a.center);
  double span = std::max(e.top(), bubble_top_height(bub));
  for (double rr : e.radii) span = std::max(span, rr);
  r.hausdorff = hausdorff_boundary_distance(e, bub, span / 2048.0);
  return r;
}

EvalReport evaluate(const VoxelSet& e, const CapillarityParams& p,
                    const SearchOptions& opt) {
  EvalReport r;
  r.measures = voxel_measures(e);
  require_volume(r.measures);
  r.p_lambda = capillarity_perimeter(r.measures, p.lambda);
  r.deficit = deficit(r.measures, p);
  auto a = asymmetry_alpha(e, p, opt);
  r.alpha = a.value;
  r.alpha_center = a.center;
  auto b = asymmetry_beta(e, p, opt);
  r.beta = b.value;
  r.beta_center = b.center;
  const Bubble bub = make_bubble(p, r.measures.volume, a.center);
  r.hausdorff = hausdorff_boundary_distance(e, bub, 0.5 * e.spacing);
  return r;
}

}  // namespace caplab
