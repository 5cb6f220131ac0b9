#include "caplab/symmetrize.hpp"

#include <algorithm>
#include <cmath>

namespace caplab {

namespace {

constexpr double kRampFraction = 1e-11;  // hairline ramp width / row height

double bisect_monotone(const std::function<double(double)>& f, double lo,
                       double hi, double target) {
  // f nondecreasing; returns t with f(t) ~ target
  double flo = f(lo) - target, fhi = f(hi) - target;
  if (flo >= 0.0) return lo;
  if (fhi <= 0.0) return hi;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) - target < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ProfileSet schwarz_symmetrize(const VoxelSet& v) {
  v.validate();
  const int n = v.dim;
  const double h = v.spacing;
  const double w = unit_ball_volume(n - 1);
  auto area = v.layer_area(n - 1);
  int last = -1;
  for (int j = 0; j < int(area.size()); ++j)
    if (area[std::size_t(j)] > 0.0) last = j;
  ProfileSet out;
  if (last < 0) {  // empty raster -> empty profile
    out.heights = {0.0, h};
    out.radii = {0.0, 0.0};
    return out;
  }
  const double delta = kRampFraction * h;
  std::vector<double> rho(std::size_t(last) + 1, 0.0);
  for (int j = 0; j <= last; ++j)
    rho[std::size_t(j)] = std::pow(area[std::size_t(j)] / w, 1.0 / (n - 1));
  out.heights.push_back(0.0);
  out.radii.push_back(rho[0]);
  for (int j = 1; j <= last; ++j) {
    out.heights.push_back(j * h);
    out.radii.push_back(rho[std::size_t(j - 1)]);
    out.heights.push_back(j * h + delta);
    out.radii.push_back(rho[std::size_t(j)]);
  }
  out.heights.push_back((last + 1) * h);
  out.radii.push_back(rho[std::size_t(last)]);
  out.heights.push_back((last + 1) * h + delta);
  out.radii.push_back(0.0);
  return out;
}

std::pair<VoxelSet, VoxelSet> bisect_reflect(const VoxelSet& v, int axis,
                                             int refine) {
  v.validate();
  if (axis < 0 || axis >= v.dim - 1)
    throw domain_error("bisect_reflect: only wall-parallel axes can be reflected");
  if (v.dim == 3 && refine > 2) refine = 2;  // grid memory
  VoxelSet g = v.refined(refine);
  const double h = g.spacing;
  auto pre = g.prefix_volume(axis);
  const double total = pre.back();
  if (!(total > 0.0)) throw domain_error("bisect_reflect: empty set");

  // exact split position by sub-cell interpolation, then snap to the nearest
  // refined cell boundary (reflection across a boundary maps cells to cells)
  std::size_t k = 0;
  while (k + 1 < pre.size() && pre[k + 1] < 0.5 * total) ++k;
  // candidate boundaries k and k+1; keep the one with the better split
  auto split_err = [&](std::size_t kk) {
    return std::abs(2.0 * pre[kk] - total);
  };
  std::size_t kcut = split_err(k) <= split_err(k + 1) ? k : k + 1;

  const int len = axis == 0 ? g.nx() : (axis == g.dim - 1 ? g.nt() : g.ny());
  auto coord_of = [&](int x, int y, int t) {
    return axis == 0 ? x : (g.dim == 3 && axis == 1 ? y : t);
  };
  auto build = [&](bool upper) {
    // kept half: indices >= kcut (upper) or < kcut (lower), mirrored across
    // the boundary plane at index kcut: i -> 2*kcut - 1 - i
    int lo_idx, hi_idx;
    if (upper) {
      lo_idx = 2 * int(kcut) - len;  // mirror of len-1
      hi_idx = len - 1;
    } else {
      lo_idx = 0;
      hi_idx = 2 * int(kcut) - 1;
    }
    lo_idx = std::max(lo_idx, upper ? 2 * int(kcut) - len : 0);
    VoxelSet out;
    out.dim = g.dim;
    out.spacing = h;
    out.origin = g.origin;
    const int out_len = hi_idx - lo_idx + 1;
    if (out_len <= 0) throw domain_error("bisect_reflect: degenerate half");
    out.shape = g.shape;
    out.shape[axis == g.dim - 1 ? g.dim - 1 : axis] = out_len;
    if (g.dim == 2)
      out.shape = {axis == 0 ? out_len : g.nx(), axis == 0 ? g.nt() : out_len, 1};
    else {
      out.shape = {g.nx(), g.ny(), g.nt()};
      out.shape[axis] = out_len;
    }
    out.origin[axis] = g.origin[axis] + lo_idx * h;
    out.occ.assign(std::size_t(out.nx()) * out.ny() * out.nt(), 0);
    for (int t = 0; t < g.nt(); ++t)
      for (int y = 0; y < g.ny(); ++y)
        for (int x = 0; x < g.nx(); ++x) {
          if (!g.at(x, y, t)) continue;
          const int c = coord_of(x, y, t);
          const bool kept = upper ? (c >= int(kcut)) : (c < int(kcut));
          if (!kept) continue;
          const int mirror = 2 * int(kcut) - 1 - c;
          for (int image : {c, mirror}) {
            const int oi = image - lo_idx;
            if (oi < 0 || oi >= out_len) continue;
            int ox = x, oy = y, ot = t;
            if (axis == 0)
              ox = oi;
            else if (g.dim == 3 && axis == 1)
              oy = oi;
            else
              ot = oi;
            out.set(ox, oy, ot, true);
          }
        }
    return out;
  };
  return {build(true), build(false)};
}

ProfileSet normalize(const ProfileSet& e, int n, double target_volume) {
  if (!(target_volume > 0.0)) throw domain_error("normalize: target volume > 0");
  const double vol = profile_measures(e, n).volume;
  if (!(vol > 0.0)) throw domain_error("normalize: zero-volume set");
  return e.scaled(std::pow(target_volume / vol, 1.0 / n));
}

VoxelSet normalize(const VoxelSet& e, double target_volume) {
  if (!(target_volume > 0.0)) throw domain_error("normalize: target volume > 0");
  const double vol = voxel_measures(e).volume;
  if (!(vol > 0.0)) throw domain_error("normalize: zero-volume set");
  return e.scaled(std::pow(target_volume / vol, 1.0 / e.dim));
}

namespace {

double small_deficit_gate(int n) {
  return (std::pow(2.0, 1.0 / n) - 1.0) / 4.0;
}

void check_truncation_gate(double vol, double defct, const CapillarityParams& p) {
  if (std::abs(vol - p.cap_volume) > 1e-6 * p.cap_volume)
    throw precondition_error("truncate_and_rescale: normalize to |cap| first");
  if (defct >= small_deficit_gate(p.n))
    throw precondition_error(
        "truncate_and_rescale: deficit above the small-deficit gate (2^{1/n}-1)/4");
}

// solves psi(g) = 2D on the increasing flank [0, 1/2]
double flank_level(double defct, int n) {
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (psi_concave(mid, n) < 2.0 * defct)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::pair<ProfileSet, TruncationRecord> truncate_and_rescale(
    const ProfileSet& e, const CapillarityParams& p) {
  const int n = p.n;
  MeasureTriple m = profile_measures(e, n);
  const double defct = deficit(m, p);
  check_truncation_gate(m.volume, defct, p);

  TruncationRecord rec;
  rec.pre_volume = m.volume;
  rec.pre_deficit = defct;
  for (int a = 0; a < n - 1; ++a) {
    TruncationAxis ax;
    ax.axis = a;
    ax.note = "identity: Schwarz-symmetric input is centered along wall axes";
    rec.axes.push_back(ax);
  }

  TruncationAxis vert;
  vert.axis = n - 1;
  if (defct <= 1e-8) {
    vert.note = "identity: deficit at minimizer scale, thresholds degenerate";
    rec.axes.push_back(vert);
    rec.post_volume = m.volume;
    rec.post_deficit = defct;
    return {e, rec};
  }

  const double gstar = flank_level(defct, n);
  const double T = e.top();
  auto gfun = [&](double t) { return e.volume_below(t, n) / p.cap_volume; };
  const double t2 = bisect_monotone(gfun, 0.0, T, 1.0 - gstar);
  // outermost slice-area crossing above t2
  const double w = unit_ball_volume(n - 1);
  const double thresh = 0.5 * n * p.cap_volume * defct;
  const double rho_c = std::pow(thresh / w, 1.0 / (n - 1));
  double tau2 = T;
  bool found = false;
  if (e.radius_at(t2) <= rho_c) {
    tau2 = t2;
    found = true;
  } else {
    for (std::size_t k = 0; k + 1 < e.heights.size() && !found; ++k) {
      const double ta = std::max(e.heights[k], t2);
      const double tb = e.heights[k + 1];
      if (tb <= t2) continue;
      const double ra = e.radius_at(ta), rb = e.radius_at(tb);
      if (ra > rho_c && rb <= rho_c) {
        tau2 = ta + (ra - rho_c) / (ra - rb) * (tb - ta);
        found = true;
      }
    }
  }
  if (!found || tau2 >= T * (1.0 - 1e-12)) {
    vert.note = "identity: slice area never dips below the threshold before the top";
    rec.axes.push_back(vert);
    rec.post_volume = m.volume;
    rec.post_deficit = defct;
    return {e, rec};
  }

  // clip at tau2 with a hairline closing ramp (flat top disk stays exact)
  ProfileSet cut;
  for (std::size_t k = 0; k < e.heights.size() && e.heights[k] < tau2; ++k) {
    cut.heights.push_back(e.heights[k]);
    cut.radii.push_back(e.radii[k]);
  }
  const double rtop = e.radius_at(tau2);
  cut.heights.push_back(tau2);
  cut.radii.push_back(rtop);
  cut.heights.push_back(tau2 * (1.0 + 1e-12) + kRampFraction * tau2);
  cut.radii.push_back(0.0);
  cut.validate();

  vert.applied = true;
  vert.tau2 = tau2;
  rec.axes.push_back(vert);
  rec.no_op = false;

  const double vol_cut = profile_measures(cut, n).volume;
  const double sigma = std::pow(p.cap_volume / vol_cut, 1.0 / n);
  ProfileSet out = cut.scaled(sigma);
  rec.sigma = sigma;
  MeasureTriple mo = profile_measures(out, n);
  rec.post_volume = mo.volume;
  rec.post_deficit = deficit(mo, p);
  return {out, rec};
}

std::pair<VoxelSet, TruncationRecord> truncate_and_rescale(
    const VoxelSet& e, const CapillarityParams& p) {
  if (e.dim != p.n) throw domain_error("truncate_and_rescale: dim != n");
  const int n = p.n;
  VoxelSet cur = e;
  MeasureTriple m = voxel_measures(cur);
  double defct = deficit(m, p);
  check_truncation_gate(m.volume, defct, p);

  TruncationRecord rec;
  rec.pre_volume = m.volume;
  rec.pre_deficit = defct;
  if (defct <= 1e-8) {
    for (int a = 0; a < n; ++a) {
      TruncationAxis ax;
      ax.axis = a;
      ax.note = "identity: deficit at minimizer scale";
      rec.axes.push_back(ax);
    }
    rec.post_volume = m.volume;
    rec.post_deficit = defct;
    return {cur, rec};
  }

  auto clip_axis = [&](int axis, bool lower_too) {
    TruncationAxis ax;
    ax.axis = axis;
    auto pre = cur.prefix_volume(axis);
    auto areas = cur.layer_area(axis);
    const double total = pre.back();
    const int len = int(areas.size());
    const double h = cur.spacing;
    const double o = cur.origin[axis];
    const double gstar = flank_level(defct, n);
    const double thresh = 0.5 * n * p.cap_volume * defct;

    auto gOf = [&](double a) {
      const double idx = std::clamp((a - o) / h, 0.0, double(len));
      const int k = std::min(len - 1, int(idx));
      return (pre[std::size_t(k)] +
              (idx - k) * areas[std::size_t(k)] * h) /
             p.cap_volume;
    };
    (void)total;
    const double a_lo = o, a_hi = o + len * h;
    const double t1 = bisect_monotone(gOf, a_lo, a_hi, gstar);
    const double t2 = bisect_monotone(gOf, a_lo, a_hi, 1.0 - gstar);
    const int layer1 = std::clamp(int((t1 - o) / h), 0, len - 1);
    const int layer2 = std::clamp(int((t2 - o) / h), 0, len - 1);
    // outermost layers at/inside [t1, t2] whose slice area crosses the
    // threshold; the crossing layer itself is kept (smallest truncation)
    int k1 = 0, k2 = len;
    if (lower_too) {
      for (int k = layer1; k >= 0; --k)
        if (areas[std::size_t(k)] <= thresh) {
          k1 = k;
          break;
        }
    }
    for (int k = layer2; k < len; ++k)
      if (areas[std::size_t(k)] <= thresh) {
        k2 = k + 1;
        break;
      }
    if (k1 == 0 && k2 == len) {
      ax.note = "identity: slice areas stay above the threshold";
      rec.axes.push_back(ax);
      return;
    }
    // raster-exact clip at layer boundaries
    VoxelSet out = cur;
    const int keep = k2 - k1;
    if (keep <= 0) throw numeric_error("truncate: empty clip");
    if (axis == 0)
      out.shape[0] = keep;
    else if (cur.dim == 3 && axis == 1)
      out.shape[1] = keep;
    else
      out.shape[cur.dim == 3 ? 2 : 1] = keep;
    out.origin[axis] = o + k1 * h;
    if (axis == cur.dim - 1) out.origin[axis] = 0.0;  // vertical clip keeps the wall
    out.occ.assign(std::size_t(out.nx()) * out.ny() * out.nt(), 0);
    for (int t = 0; t < out.nt(); ++t)
      for (int y = 0; y < out.ny(); ++y)
        for (int x = 0; x < out.nx(); ++x) {
          int sx = x, sy = y, st = t;
          if (axis == 0)
            sx += k1;
          else if (cur.dim == 3 && axis == 1)
            sy += k1;
          else
            st += k1;
          out.set(x, y, t, cur.at(sx, sy, st));
        }
    ax.applied = true;
    ax.tau1 = lower_too ? o + k1 * h : 0.0;
    ax.tau2 = o + k2 * h;
    rec.no_op = false;
    rec.axes.push_back(ax);
    // rescale back to |cap| exactly, then refresh the deficit
    const double vol = voxel_measures(out).volume;
    const double sigma = std::pow(p.cap_volume / vol, 1.0 / n);
    cur = out.scaled(sigma);
    rec.sigma *= sigma;
    defct = deficit(voxel_measures(cur), p);
  };

  for (int a = 0; a < n - 1; ++a) clip_axis(a, true);
  clip_axis(n - 1, false);  // vertical: upper truncation only

  MeasureTriple mo = voxel_measures(cur);
  rec.post_volume = mo.volume;
  rec.post_deficit = deficit(mo, p);
  return {cur, rec};
}

namespace {

PipelineStage stage_of(const std::string& name, const MeasureTriple& m,
                       const CapillarityParams& p, double alpha) {
  PipelineStage s;
  s.name = name;
  s.volume = m.volume;
  s.p_lambda = capillarity_perimeter(m, p.lambda);
  s.deficit = deficit(m, p);
  s.alpha = alpha;
  return s;
}

}  // namespace

PipelineResult run_pipeline(const VoxelSet& v, const CapillarityParams& p,
                            const SearchOptions& opt) {
  if (v.dim != p.n) throw domain_error("pipeline: dim != n");
  PipelineResult out;
  VoxelSet cur = v;
  out.stages.push_back(
      stage_of("input", voxel_measures(cur), p, asymmetry_alpha(cur, p, opt).value));

  cur = normalize(cur, p.cap_volume);
  out.stages.push_back(stage_of("normalize", voxel_measures(cur), p,
                                asymmetry_alpha(cur, p, opt).value));

  double defct = out.stages.back().deficit;
  if (defct < small_deficit_gate(p.n)) {
    auto [tr, rec] = truncate_and_rescale(cur, p);
    cur = tr;
    out.truncation = rec;
    out.stages.push_back(stage_of("truncate", voxel_measures(cur), p,
                                  asymmetry_alpha(cur, p, opt).value));
  } else {
    out.notes.push_back(
        "truncation skipped: deficit above the small-deficit gate");
  }

  for (int a = 0; a < p.n - 1; ++a) {
    const double d_in = out.stages.back().deficit;
    auto [up, down] = bisect_reflect(cur, a);
    const double au = asymmetry_alpha(up, p, opt).value;
    const double ad = asymmetry_alpha(down, p, opt).value;
    const bool take_up = au >= ad;
    cur = take_up ? up : down;
    out.notes.push_back("reflect axis " + std::to_string(a) + ": kept " +
                        (take_up ? "upper" : "lower") +
                        " half (alpha " + fmt_double(take_up ? au : ad) + ")");
    auto m = voxel_measures(cur);
    const double d_out = deficit(m, p);
    if (d_out > 2.0 * d_in + 1e-6)
      throw theorem_violation("pipeline: reflected deficit exceeds 2x input");
    out.stages.push_back(
        stage_of("reflect-" + std::to_string(a), m, p, take_up ? au : ad));
  }

  const double p_before = out.stages.back().p_lambda;
  out.final_profile = schwarz_symmetrize(cur);
  auto m = profile_measures(out.final_profile, p.n);
  if (capillarity_perimeter(m, p.lambda) > p_before + 1e-9)
    throw theorem_violation("pipeline: Schwarz symmetrization increased P_lambda");
  out.stages.push_back(stage_of("schwarz", m, p,
                                asymmetry_alpha(out.final_profile, p).value));
  return out;
}

PipelineResult run_pipeline(const ProfileSet& e, const CapillarityParams& p) {
  PipelineResult out;
  out.stages.push_back(stage_of("input", profile_measures(e, p.n), p,
                                asymmetry_alpha(e, p).value));
  ProfileSet cur = normalize(e, p.n, p.cap_volume);
  out.stages.push_back(stage_of("normalize", profile_measures(cur, p.n), p,
                                asymmetry_alpha(cur, p).value));
  const double defct = out.stages.back().deficit;
  if (defct < small_deficit_gate(p.n)) {
    auto [tr, rec] = truncate_and_rescale(cur, p);
    cur = tr;
    out.truncation = rec;
    out.stages.push_back(stage_of("truncate", profile_measures(cur, p.n), p,
                                  asymmetry_alpha(cur, p).value));
  } else {
    out.notes.push_back(
        "truncation skipped: deficit above the small-deficit gate");
  }
  out.final_profile = cur;
  return out;
}

}  // namespace caplab
