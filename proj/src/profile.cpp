#include "caplab/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "caplab/quadrature.hpp"

namespace caplab {

namespace {

int gauss_points_for_degree(int deg) { return deg / 2 + 1; }

// integral over [0,1] of (a + (b-a)s)^k ds, exact.
double poly_power_integral(double a, double b, int k) {
  if (k == 0) return 1.0;
  const double d = b - a;
  if (std::abs(d) < 1e-300) return std::pow(a, k);
  // ((b^{k+1} - a^{k+1}) / ((k+1)(b-a))
  return (std::pow(b, k + 1) - std::pow(a, k + 1)) / ((k + 1) * d);
}

}  // namespace

bool ProfileSet::empty_geometry() const {
  for (double r : radii)
    if (r > 0.0) return false;
  return true;
}

void ProfileSet::validate() const {
  if (heights.size() != radii.size())
    throw domain_error("profile: heights/radii size mismatch");
  if (heights.size() < 2) throw domain_error("profile: needs at least two nodes");
  if (heights.front() != 0.0) throw domain_error("profile: first height must be 0");
  for (std::size_t k = 1; k < heights.size(); ++k)
    if (!(heights[k] > heights[k - 1]))
      throw domain_error("profile: heights must be strictly increasing");
  for (double r : radii)
    if (!(r >= 0.0) || !std::isfinite(r))
      throw domain_error("profile: radii must be finite and nonnegative");
  if (radii.back() != 0.0)
    throw domain_error("profile: final radius must be zero (set closes at the top)");
}

double ProfileSet::radius_at(double t) const {
  if (heights.empty() || t < heights.front() || t > heights.back()) return 0.0;
  auto it = std::upper_bound(heights.begin(), heights.end(), t);
  if (it == heights.begin()) return radii.front();
  std::size_t k = std::size_t(it - heights.begin());
  if (k >= heights.size()) return radii.back();
  const double t0 = heights[k - 1], t1 = heights[k];
  const double w = (t - t0) / (t1 - t0);
  return radii[k - 1] + w * (radii[k] - radii[k - 1]);
}

double ProfileSet::volume_below(double t, int n) const {
  const double w = unit_ball_volume(n - 1);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < heights.size(); ++k) {
    const double t0 = heights[k], t1 = heights[k + 1];
    if (t <= t0) break;
    const double hi = std::min(t, t1);
    const double rb = radii[k] + (radii[k + 1] - radii[k]) * (hi - t0) / (t1 - t0);
    acc += (hi - t0) * poly_power_integral(radii[k], rb, n - 1);
  }
  return w * acc;
}

ProfileSet ProfileSet::scaled(double sigma) const {
  if (!(sigma > 0.0)) throw domain_error("profile: scale factor must be positive");
  ProfileSet out;
  out.heights.reserve(heights.size());
  out.radii.reserve(radii.size());
  for (double t : heights) out.heights.push_back(t * sigma);
  for (double r : radii) out.radii.push_back(r * sigma);
  if (!out.heights.empty()) out.heights.front() = 0.0;
  return out;
}

MeasureTriple profile_measures(const ProfileSet& p, int n) {
  p.validate();
  const double w = unit_ball_volume(n - 1);
  MeasureTriple m;
  m.wetted_area = w * std::pow(p.radii.front(), n - 1);
  for (std::size_t k = 0; k + 1 < p.heights.size(); ++k) {
    const double dt = p.heights[k + 1] - p.heights[k];
    const double ra = p.radii[k], rb = p.radii[k + 1];
    if (ra == 0.0 && rb == 0.0) continue;  // empty stretch, no boundary
    m.volume += w * dt * poly_power_integral(ra, rb, n - 1);
    // frustum lateral area: (n-1) w int rho^{n-2} sqrt(1+rho'^2) dt with the
    // root constant per piece
    const double slope = (rb - ra) / dt;
    m.rel_perimeter += (n - 1) * w * std::sqrt(1.0 + slope * slope) * dt *
                       poly_power_integral(ra, rb, n - 2);
  }
  return m;
}

double profile_volume_slicewise(const ProfileSet& p, int n) {
  p.validate();
  const double w = unit_ball_volume(n - 1);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < p.heights.size(); ++k) {
    const double ra = p.radii[k], rb = p.radii[k + 1];
    const double dt = p.heights[k + 1] - p.heights[k];
    const int pts = gauss_points_for_degree(n - 1);
    acc += dt * integrate_gauss(
                    [&](double s) {
                      return std::pow(ra + (rb - ra) * s, n - 1);
                    },
                    0.0, 1.0, std::min(8, pts + 1));
  }
  return w * acc;
}

double profile_perimeter_flux(const ProfileSet& p, int n, double lambda) {
  p.validate();
  const double w = unit_ball_volume(n - 1);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < p.heights.size(); ++k) {
    const double dt = p.heights[k + 1] - p.heights[k];
    const double ra = p.radii[k], rb = p.radii[k + 1];
    if (ra == 0.0 && rb == 0.0) continue;
    const double slope = (rb - ra) / dt;
    // <e_n, nu> = -rho'/sqrt(1+rho'^2) on the outward frustum normal, so the
    // weighted area element is (sqrt(1+rho'^2) + lambda rho') rho^{n-2} dt.
    const double factor = std::sqrt(1.0 + slope * slope) + lambda * slope;
    acc += (n - 1) * factor * dt * poly_power_integral(ra, rb, n - 2);
  }
  return w * acc;
}

double profile_arclength(const ProfileSet& p) {
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < p.heights.size(); ++k)
    s += std::hypot(p.heights[k + 1] - p.heights[k], p.radii[k + 1] - p.radii[k]);
  return s;
}

double mean_curvature_profile(const ProfileSet& p, double s, int n) {
  p.validate();
  const std::size_t m = p.heights.size();
  if (m < 3) throw domain_error("mean_curvature_profile: needs >= 3 nodes");
  // cumulative arclength at nodes
  std::vector<double> arc(m, 0.0);
  for (std::size_t k = 1; k < m; ++k)
    arc[k] = arc[k - 1] + std::hypot(p.heights[k] - p.heights[k - 1],
                                     p.radii[k] - p.radii[k - 1]);
  if (s < 0.0 || s > arc.back())
    throw domain_error("mean_curvature_profile: arclength out of range");
  std::size_t seg = std::size_t(std::upper_bound(arc.begin(), arc.end(), s) -
                                arc.begin());
  if (seg == 0) seg = 1;
  if (seg >= m) seg = m - 1;
  // triple of nodes around the segment [seg-1, seg]
  std::size_t k1 = seg - 1;
  if (k1 == 0) k1 = 1;
  if (k1 + 1 >= m) k1 = m - 2;
  const std::size_t k0 = k1 - 1, k2 = k1 + 1;

  // local quadratic through three nodes in chord-length parameter
  const double s0 = arc[k0], s1 = arc[k1], s2 = arc[k2];
  auto fit = [&](double y0, double y1, double y2, double at, double& d1,
                 double& d2) {
    // Newton divided differences
    const double f01 = (y1 - y0) / (s1 - s0);
    const double f12 = (y2 - y1) / (s2 - s1);
    const double f012 = (f12 - f01) / (s2 - s0);
    d1 = f01 + f012 * (2.0 * at - s0 - s1);
    d2 = 2.0 * f012;
  };
  double ad1, ad2, bd1, bd2;
  fit(p.radii[k0], p.radii[k1], p.radii[k2], s, ad1, ad2);    // alpha(s)
  fit(p.heights[k0], p.heights[k1], p.heights[k2], s, bd1, bd2);  // beta(s)

  // alpha at s from the same quadratic
  const double w0 = (s - s1) * (s - s2) / ((s0 - s1) * (s0 - s2));
  const double w1 = (s - s0) * (s - s2) / ((s1 - s0) * (s1 - s2));
  const double w2 = (s - s0) * (s - s1) / ((s2 - s0) * (s2 - s1));
  const double a_here = w0 * p.radii[k0] + w1 * p.radii[k1] + w2 * p.radii[k2];
  if (!(a_here > 1e-12))
    throw domain_error("mean_curvature_profile: evaluation on the axis (rho = 0)");

  // curvature vector of the chord-parametrized curve, arclength-normalized
  const double speed2 = ad1 * ad1 + bd1 * bd1;
  const double speed = std::sqrt(speed2);
  const double tx = ad1 / speed, ty = bd1 / speed;
  // k = (c'' - <c'',T>T)/|c'|^2
  const double dot = ad2 * tx + bd2 * ty;
  const double kx = (ad2 - dot * tx) / speed2;
  const double ky = (bd2 - dot * ty) / speed2;
  // outward normal for an ascending generatrix: (beta', -alpha') arclength
  const double nx = ty, ny = -tx;
  const double k_prof = kx * nx + ky * ny;
  const double k_rot = -ty / a_here;  // latitude circle term w.r.t. the same normal
  return k_prof + (n - 2) * k_rot;
}

ProfileSet sample_bubble_profile(const Bubble& b, int m) {
  if (m < 2) throw domain_error("sample_bubble_profile: m >= 2 required");
  // uniform polar angle = uniform arclength along the spherical generatrix
  const double amax = std::acos(b.params.lambda);
  ProfileSet p;
  p.heights.reserve(std::size_t(m) + 1);
  p.radii.reserve(std::size_t(m) + 1);
  for (int k = 0; k <= m; ++k) {
    const double a = amax * (1.0 - double(k) / m);
    const double t = b.ball_center_height + b.scale * std::cos(a);
    p.heights.push_back(k == 0 ? 0.0 : t);
    p.radii.push_back(k == m ? 0.0 : b.scale * std::sin(a));
  }
  p.heights.back() = bubble_top_height(b);
  return p;
}

std::vector<std::array<double, 2>> profile_meridian(const ProfileSet& p,
                                                    double ds) {
  p.validate();
  if (!(ds > 0.0)) throw domain_error("profile_meridian: spacing must be positive");
  std::vector<std::array<double, 2>> pts;
  for (std::size_t k = 0; k + 1 < p.heights.size(); ++k) {
    const double x0 = p.radii[k], y0 = p.heights[k];
    const double x1 = p.radii[k + 1], y1 = p.heights[k + 1];
    if (x0 == 0.0 && x1 == 0.0) continue;  // empty stretch carries no boundary
    const double len = std::hypot(x1 - x0, y1 - y0);
    const int steps = std::max(1, int(std::ceil(len / ds)));
    for (int i = 0; i <= steps; ++i) {
      const double w = double(i) / steps;
      pts.push_back({x0 + w * (x1 - x0), y0 + w * (y1 - y0)});
    }
  }
  if (pts.empty()) pts.push_back({p.radii.back(), p.heights.back()});
  return pts;
}

SliceFunction slice_function(const ProfileSet& p, int n) {
  p.validate();
  const double w = unit_ball_volume(n - 1);
  SliceFunction f;
  f.heights = p.heights;
  f.values.reserve(p.radii.size());
  for (double r : p.radii) f.values.push_back(w * std::pow(r, n - 1));
  return f;
}

}  // namespace caplab
