#include "caplab/harness.hpp"

#include <algorithm>
#include <cmath>

#include "caplab/abp.hpp"
#include "caplab/symmetrize.hpp"

namespace caplab {

namespace {

double legendre(int k, double x) {
  if (k == 0) return 1.0;
  double pm = 1.0, pc = x;
  for (int j = 1; j < k; ++j) {
    const double pn = ((2 * j + 1) * x * pc - j * pm) / (j + 1);
    pm = pc;
    pc = pn;
  }
  return pc;
}

double cap_graph(double lambda, double u) {
  // |phi u theta + lambda e_n| = 1 solved for phi, u = <theta, e_n>
  return -lambda * u + std::sqrt(1.0 - lambda * lambda + lambda * lambda * u * u);
}

double mode_shape(int mode, double u) {
  if (mode >= 1) return legendre(mode, 2.0 * u - 1.0);
  return std::exp(-sq(u / 0.15));  // wetted-edge bump
}

struct FamilySample {
  std::vector<double> t, rho;
  bool valid = true;
};

FamilySample sample_family(const CapillarityParams& p, int mode, double eps,
                           int nodes) {
  FamilySample f;
  f.t.reserve(std::size_t(nodes) + 1);
  f.rho.reserve(std::size_t(nodes) + 1);
  for (int i = 0; i <= nodes; ++i) {
    const double a = 0.5 * kPi * (1.0 - double(i) / nodes);  // polar angle
    const double u = std::cos(a);
    const double phi = cap_graph(p.lambda, u) * (1.0 + eps * mode_shape(mode, u));
    if (!(phi > 0.0)) {
      f.valid = false;
      return f;
    }
    const double t = i == 0 ? 0.0 : phi * u;
    const double rho = i == nodes ? 0.0 : phi * std::sqrt(std::max(0.0, 1.0 - u * u));
    if (i > 0 && !(t > f.t.back())) {
      f.valid = false;
      return f;
    }
    f.t.push_back(t);
    f.rho.push_back(rho);
  }
  return f;
}

}  // namespace

double estimate_eps_max(const CapillarityParams& p, const PerturbationSpec& spec) {
  const int coarse_nodes = std::min(spec.nodes, 1024);
  double lo = 0.0, hi = 1.5;
  if (sample_family(p, spec.mode, hi, coarse_nodes).valid) return hi;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sample_family(p, spec.mode, mid, coarse_nodes).valid)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

ProfileSet graph_perturbation_family(const CapillarityParams& p,
                                     const PerturbationSpec& spec, double eps) {
  if (eps < 0.0) throw domain_error("graph_perturbation_family: eps must be >= 0");
  FamilySample f = sample_family(p, spec.mode, eps, spec.nodes);
  if (!f.valid)
    throw domain_error(
        "graph_perturbation_family: profile not a positive single-valued graph; "
        "eps_max for this mode is about " +
        fmt_double(estimate_eps_max(p, spec)));
  ProfileSet e;
  e.heights = std::move(f.t);
  e.radii = std::move(f.rho);
  e.validate();
  if (spec.volume_renormalize) e = normalize(e, p.n, p.cap_volume);
  return e;
}

double family_c1_distance(const ProfileSet& e, const CapillarityParams& p) {
  e.validate();
  double max_gap = 0.0, max_dgap = 0.0;
  double prev_gap = 0.0, prev_theta = 0.0;
  bool has_prev = false;
  for (std::size_t i = 0; i < e.heights.size(); ++i) {
    const double r = std::hypot(e.radii[i], e.heights[i]);
    if (!(r > 0.0)) continue;
    const double u = std::clamp(e.heights[i] / r, 0.0, 1.0);
    const double gap = r - cap_graph(p.lambda, u);
    const double theta = std::acos(u);
    max_gap = std::max(max_gap, std::abs(gap));
    if (has_prev && std::abs(theta - prev_theta) > 1e-9)
      max_dgap = std::max(max_dgap,
                          std::abs((gap - prev_gap) / (theta - prev_theta)));
    prev_gap = gap;
    prev_theta = theta;
    has_prev = true;
  }
  return max_gap + max_dgap;
}

SweepTable sweep(const CapillarityParams& p, const PerturbationSpec& spec,
                 const std::vector<double>& eps_schedule,
                 const SweepResolutions& res, bool with_abp, int jobs) {
  if (with_abp && p.n != 2)
    throw domain_error("sweep: coupling residuals need n = 2");
  SweepTable tab;
  tab.params = p;
  tab.spec = spec;
  tab.res = res;
  tab.with_abp = with_abp;
  tab.rows.assign(eps_schedule.size(), SweepRow{});
  parallel_for(
      eps_schedule.size(),
      [&](std::size_t i) {
        SweepRow& row = tab.rows[i];
        row.eps = eps_schedule[i];
        PerturbationSpec sp = spec;
        sp.nodes = res.nodes;
        ProfileSet e;
        try {
          e = graph_perturbation_family(p, sp, row.eps);
        } catch (const error& err) {
          row.generated = false;
          row.error = err.what();
          return;
        }
        const MeasureTriple m = profile_measures(e, p.n);
        row.volume = m.volume;
        row.p_lambda = capillarity_perimeter(m, p.lambda);
        row.deficit = deficit(m, p);
        row.alpha = asymmetry_alpha(e, p).value;
        row.beta = asymmetry_beta(e, p).value;
        const Bubble b = make_bubble(p, m.volume);
        row.hausdorff =
            hausdorff_boundary_distance(e, b, bubble_top_height(b) / 2048.0);
        if (with_abp) {
          VoxelSet v = voxelize(e, 2, res.h);
          row.deficit_voxel = deficit(v, p);
          NeumannSolution sol = solve_neumann(v, p, 1e-10, 0, 1);
          ConjugateGrid cg = restricted_legendre(sol, p, res.xi_step, 1);
          CouplingField f = k_envelope(cg, v, 1);
          auto [r1, r2] = coupling_residuals(f, cg, v, p);
          row.r1 = r1;
          row.r2 = r2;
        }
      },
      jobs);
  for (const auto& row : tab.rows)
    if (!row.generated) tab.complete = false;
  return tab;
}

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw domain_error("fit_loglog: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw domain_error("fit_loglog: data must be positive");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const int n = int(lx.size());
  if (n < 4) throw domain_error("fit_loglog: needs at least 4 points");
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += lx[std::size_t(i)];
    my += ly[std::size_t(i)];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += sq(lx[std::size_t(i)] - mx);
    sxy += (lx[std::size_t(i)] - mx) * (ly[std::size_t(i)] - my);
  }
  if (!(sxx > 0.0)) throw domain_error("fit_loglog: degenerate abscissa");
  LogLogFit fit;
  fit.points = n;
  fit.slope = sxy / sxx;
  double rss = 0.0;
  for (int i = 0; i < n; ++i)
    rss += sq(ly[std::size_t(i)] - my - fit.slope * (lx[std::size_t(i)] - mx));
  fit.stderr_slope = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
  return fit;
}

// ---------------------------------------------------------------------------
// 1-D interval sets
// ---------------------------------------------------------------------------

Interval1DSet Interval1DSet::from_endpoints(std::vector<double> endpoints) {
  if (endpoints.size() % 2 != 0)
    throw domain_error("interval set: endpoint count must be even");
  std::sort(endpoints.begin(), endpoints.end());
  Interval1DSet s;
  for (std::size_t i = 0; i + 1 < endpoints.size(); i += 2) {
    const double a = std::max(0.0, endpoints[i]);
    const double b = std::max(0.0, endpoints[i + 1]);
    if (b <= a) continue;
    if (!s.intervals.empty() && a <= s.intervals.back()[1] + 1e-14)
      s.intervals.back()[1] = std::max(s.intervals.back()[1], b);  // merge
    else
      s.intervals.push_back({a, b});
  }
  return s;
}

std::vector<double> Interval1DSet::boundary() const {
  std::vector<double> b;
  for (const auto& iv : intervals) {
    if (iv[0] > 1e-15) b.push_back(iv[0]);
    b.push_back(iv[1]);
  }
  return b;
}

namespace {

// integral_a^b t^{n-1} dt
double monomial(double a, double b, int n) {
  if (b <= a) return 0.0;
  return (std::pow(b, n) - std::pow(a, n)) / n;
}

}  // namespace

Lemma1dTerms lemma1d_terms(const Interval1DSet& e, const CapillarityParams& p,
                           double l) {
  const int n = p.n;
  Lemma1dTerms out;
  // (l, inf) cap E
  for (const auto& iv : e.intervals)
    if (iv[1] > l) out.lhs += monomial(std::max(iv[0], l), iv[1], n);
  // [0, l] minus E  and  [0, r/2] minus E  by gap walking
  auto complement_mass = [&](double hi) {
    double acc = 0.0, cursor = 0.0;
    for (const auto& iv : e.intervals) {
      if (cursor >= hi) break;
      if (iv[0] > cursor) acc += monomial(cursor, std::min(iv[0], hi), n);
      cursor = std::max(cursor, iv[1]);
    }
    if (cursor < hi) acc += monomial(cursor, hi, n);
    return acc;
  };
  out.lhs += complement_mass(l);
  out.bracket = complement_mass(0.5 * p.r_small);
  for (double t : e.boundary())
    out.bracket += std::pow(t, n - 1) * std::abs(l - t);
  if (out.lhs <= 1e-14 * std::pow(l, n))
    out.ratio = 0.0;
  else if (out.bracket <= 0.0)
    out.ratio = std::numeric_limits<double>::infinity();
  else
    out.ratio = out.lhs / out.bracket;
  return out;
}

FittedConstant lemma1d_check(const CapillarityParams& p, double l, int trials,
                             std::uint64_t seed) {
  if (!(l >= 0.875 * p.r_small && l <= 1.125 * p.r_big))
    throw domain_error("lemma1d_check: l outside [7/8 r, 9/8 R]");
  if (trials < 2) throw domain_error("lemma1d_check: need at least 2 trials");
  Rng rng(seed);
  FittedConstant fc;
  const int half = trials / 2;
  for (int j = 0; j < trials; ++j) {
    const int m = rng.uniform_int(0, 6);
    std::vector<double> ep(std::size_t(2 * m));
    for (auto& v : ep) v = rng.uniform(0.0, 3.0);
    auto set = Interval1DSet::from_endpoints(std::move(ep));
    const double ratio = lemma1d_terms(set, p, l).ratio;
    if (!std::isfinite(ratio))
      throw theorem_violation("lemma1d_check: unbounded ratio");
    if (j < half) {
      fc.fitted_max = std::max(fc.fitted_max, ratio);
      ++fc.fit_count;
    } else {
      fc.heldout_max = std::max(fc.heldout_max, ratio);
      ++fc.heldout_count;
    }
  }
  fc.stable = fc.heldout_max <= 3.0 * fc.fitted_max + 1e-9;
  return fc;
}

// ---------------------------------------------------------------------------
// factor-3 bound
// ---------------------------------------------------------------------------

namespace {

// E union its reflection across a cell boundary of the given axis.
VoxelSet mirror_union(const VoxelSet& v, int axis) {
  const int len = axis == 0 ? v.nx() : (axis == 1 && v.dim == 3 ? v.ny() : v.nt());
  // occupied index range along the axis
  int lo = len, hi = -1;
  for (int t = 0; t < v.nt(); ++t)
    for (int y = 0; y < v.ny(); ++y)
      for (int x = 0; x < v.nx(); ++x)
        if (v.at(x, y, t)) {
          const int c = axis == 0 ? x : (v.dim == 3 && axis == 1 ? y : t);
          lo = std::min(lo, c);
          hi = std::max(hi, c);
        }
  if (hi < lo) throw domain_error("mirror_union: empty set");
  const int kcut = (lo + hi + 1) / 2;  // boundary plane index
  const int reach = std::max(hi - kcut + 1, kcut - lo);
  const int new_lo = kcut - reach, new_len = 2 * reach;
  VoxelSet out = v;
  out.shape[axis] = new_len;
  out.origin[axis] = v.origin[axis] + new_lo * v.spacing;
  out.occ.assign(std::size_t(out.nx()) * out.ny() * out.nt(), 0);
  for (int t = 0; t < v.nt(); ++t)
    for (int y = 0; y < v.ny(); ++y)
      for (int x = 0; x < v.nx(); ++x) {
        if (!v.at(x, y, t)) continue;
        const int c = axis == 0 ? x : (v.dim == 3 && axis == 1 ? y : t);
        for (int image : {c, 2 * kcut - 1 - c}) {
          const int oi = image - new_lo;
          if (oi < 0 || oi >= new_len) continue;
          int ox = x, oy = y, ot = t;
          if (axis == 0)
            ox = oi;
          else if (v.dim == 3 && axis == 1)
            oy = oi;
          else
            ot = oi;
          out.set(ox, oy, ot, true);
        }
      }
  return out;
}

double mirror_plane_coord(const VoxelSet& sym, int axis) {
  const int len = axis == 0 ? sym.nx() : sym.ny();
  return sym.origin[axis] + 0.5 * len * sym.spacing;
}

}  // namespace

Factor3Record factor3_check(const CapillarityParams& p, int trials,
                            std::uint64_t seed, int jobs) {
  if (p.n != 2 && p.n != 3) throw domain_error("factor3_check: n must be 2 or 3");
  Factor3Record rec;
  rec.trials = trials;
  std::vector<double> excess(std::size_t(trials), 0.0);
  std::vector<double> ratio(std::size_t(trials), 0.0);
  Rng base(seed);
  std::vector<Rng> streams;
  streams.reserve(std::size_t(trials));
  for (int i = 0; i < trials; ++i) streams.push_back(base.split());
  parallel_for(
      std::size_t(trials),
      [&](std::size_t i) {
        Rng rng = streams[i];
        VoxelSet v = random_voxel(rng, p.n, p.n == 2 ? 28 : 12);
        for (int a = 0; a < p.n - 1; ++a) v = mirror_union(v, a);
        const double vol = voxel_measures(v).volume;
        std::vector<double> xsym;
        for (int a = 0; a < p.n - 1; ++a) xsym.push_back(mirror_plane_coord(v, a));
        const Bubble b = make_bubble(p, vol, xsym);
        const double restricted = voxel_bubble_sym_diff(v, b);
        const double unrestricted = asymmetry_alpha(v, p).value * vol;
        excess[i] = restricted - 3.0 * unrestricted;
        ratio[i] = unrestricted > 1e-12 ? restricted / unrestricted : 0.0;
      },
      jobs);
  rec.max_excess = *std::max_element(excess.begin(), excess.end());
  rec.max_ratio = *std::max_element(ratio.begin(), ratio.end());
  rec.pass = rec.max_excess <= 1e-3;
  return rec;
}

// ---------------------------------------------------------------------------
// beta scan
// ---------------------------------------------------------------------------

namespace {

double beta_ratio(double defct, double beta, int n) {
  const double d = std::max(defct, 0.0);
  if (d <= 1e-12) return beta <= 1e-6 ? 0.0 : std::numeric_limits<double>::infinity();
  const double denom = std::max(d, std::pow(d, 1.0 / (2.0 * n)));
  return beta / denom;
}

}  // namespace

BetaScanResult deficit_beta_scan(const CapillarityParams& p, int corpus_size,
                                 std::uint64_t seed, int jobs) {
  BetaScanResult out;
  const int total = 2 * corpus_size;
  std::vector<BetaScanRow> rows(static_cast<std::size_t>(total));
  Rng base(seed);
  std::vector<Rng> streams;
  streams.reserve(std::size_t(total));
  for (int i = 0; i < total; ++i) streams.push_back(base.split());
  parallel_for(
      std::size_t(total),
      [&](std::size_t i) {
        Rng rng = streams[i];
        ProfileSet e = random_profile(rng, p);
        BetaScanRow row;
        row.deficit = deficit(e, p);
        row.beta = asymmetry_beta(e, p).value;
        row.ratio = beta_ratio(row.deficit, row.beta, p.n);
        rows[i] = row;
      },
      jobs);
  for (int i = 0; i < total; ++i) {
    if (!std::isfinite(rows[std::size_t(i)].ratio))
      throw theorem_violation("deficit_beta_scan: unbounded ratio");
    if (i < corpus_size)
      out.rows.push_back(rows[std::size_t(i)]);
    else
      out.heldout.push_back(rows[std::size_t(i)]);
  }
  for (const auto& r : out.rows)
    out.constant.fitted_max = std::max(out.constant.fitted_max, r.ratio);
  for (const auto& r : out.heldout)
    out.constant.heldout_max = std::max(out.constant.heldout_max, r.ratio);
  out.constant.fit_count = corpus_size;
  out.constant.heldout_count = corpus_size;
  out.constant.stable =
      out.constant.heldout_max <= 3.0 * out.constant.fitted_max + 1e-9;
  return out;
}

// ---------------------------------------------------------------------------
// corpora
// ---------------------------------------------------------------------------

ProfileSet random_near_bubble(Rng& rng, const CapillarityParams& p,
                              double max_eps_fraction) {
  PerturbationSpec spec;
  spec.mode = rng.uniform_int(1, 4);
  spec.nodes = 2048;
  const double emax = estimate_eps_max(p, spec);
  const double eps = rng.uniform(0.005, std::max(0.01, max_eps_fraction * emax));
  return graph_perturbation_family(p, spec, eps);
}

ProfileSet random_profile(Rng& rng, const CapillarityParams& p) {
  const int kind = rng.uniform_int(0, 4);
  ProfileSet e;
  if (kind == 0) {
    return random_near_bubble(rng, p);
  } else if (kind == 1) {
    // random walk with optional detachment
    const int m = rng.uniform_int(8, 40);
    const double T = rng.uniform(0.4, 2.5);
    double r = rng.uniform() < 0.15 ? 0.0 : rng.uniform(0.05, 1.3);
    const double step = 0.35 * std::max(0.3, r) * std::sqrt(T / m);
    e.heights.push_back(0.0);
    e.radii.push_back(r);
    for (int k = 1; k <= m; ++k) {
      e.heights.push_back(T * double(k) / m);
      if (k == m) {
        e.radii.push_back(0.0);
      } else {
        r = std::max(0.0, r + rng.uniform(-step, step));
        e.radii.push_back(r);
      }
    }
  } else if (kind == 2) {
    // cone
    const double T = rng.uniform(0.3, 2.0);
    const double r0 = rng.uniform(0.2, 1.5);
    const int m = rng.uniform_int(4, 24);
    for (int k = 0; k <= m; ++k) {
      e.heights.push_back(T * double(k) / m);
      e.radii.push_back(r0 * (1.0 - double(k) / m));
    }
  } else if (kind == 3) {
    // tall thin column with a capped top
    const double T = rng.uniform(1.5, 4.0);
    const double r0 = rng.uniform(0.08, 0.4);
    e.heights = {0.0, 0.9 * T, T};
    e.radii = {r0, r0, 0.0};
  } else {
    // detached droplet: empty trace
    const double lift = rng.uniform(0.2, 1.0);
    const double body = rng.uniform(0.3, 1.2);
    const double r0 = rng.uniform(0.2, 0.9);
    e.heights = {0.0, lift, lift + 0.5 * body, lift + body};
    e.radii = {0.0, 0.0, r0, 0.0};
  }
  e.validate();
  if (profile_measures(e, p.n).volume < 1e-6) {
    // degenerate draw; fall back to a definite cone
    e.heights = {0.0, 1.0};
    e.radii = {1.0, 0.0};
  }
  return e;
}

VoxelSet random_voxel(Rng& rng, int dim, int base_cells, double spacing) {
  if (dim != 2 && dim != 3) throw domain_error("random_voxel: dim must be 2 or 3");
  VoxelSet v;
  v.dim = dim;
  v.spacing = spacing;
  const int nx = base_cells + rng.uniform_int(0, base_cells / 2);
  const int nt = (2 * base_cells) / 3 + rng.uniform_int(0, base_cells / 2);
  const int ny = dim == 3 ? nx : nt;
  v.shape = {nx, ny, dim == 3 ? nt : 1};
  if (dim == 2) v.shape = {nx, nt, 1};
  v.origin = {-0.5 * nx * spacing, dim == 3 ? -0.5 * nx * spacing : 0.0, 0.0};
  v.origin[dim - 1] = 0.0;
  v.occ.assign(std::size_t(v.nx()) * v.ny() * v.nt(), 0);
  const int blocks = rng.uniform_int(1, 5);
  auto rand_block = [&](bool value) {
    const int wx = rng.uniform_int(2, std::max(3, nx / 2));
    const int wt = rng.uniform_int(2, std::max(3, nt / 2));
    const int wy = dim == 3 ? rng.uniform_int(2, std::max(3, nx / 2)) : 1;
    const int x0 = rng.uniform_int(0, std::max(0, nx - wx));
    const int t0 = rng.uniform() < 0.6 ? 0 : rng.uniform_int(0, std::max(0, nt - wt));
    const int y0 = dim == 3 ? rng.uniform_int(0, std::max(0, nx - wy)) : 0;
    for (int t = t0; t < std::min(nt, t0 + wt); ++t)
      for (int y = y0; y < std::min(v.ny(), y0 + wy); ++y)
        for (int x = x0; x < std::min(nx, x0 + wx); ++x)
          v.set(x, y, t, value);
  };
  for (int b = 0; b < blocks; ++b) rand_block(true);
  if (rng.uniform() < 0.3) rand_block(false);
  if (v.occupied_count() == 0) v.set(nx / 2, dim == 3 ? nx / 2 : 0, 0, true);
  return v;
}

}  // namespace caplab
