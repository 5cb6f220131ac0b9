#include "caplab/geometry.hpp"

#include <cmath>

#include "caplab/quadrature.hpp"

namespace caplab {

namespace {

void check_range(double lambda, int n) {
  if (!(lambda > -1.0 && lambda < 1.0))
    throw domain_error("lambda must lie in (-1, 1)");
  if (n < 2) throw domain_error("dimension n must be >= 2");
}

}  // namespace

double unit_cap_volume(double lambda, int n) {
  check_range(lambda, n);
  // integral_lambda^1 omega_{n-1} (1-t^2)^{(n-1)/2} dt; t = sin(theta) removes
  // the endpoint derivative singularity at t = 1.
  const double w = unit_ball_volume(n - 1);
  const double a = std::asin(lambda);
  return w * integrate_gk(
                 [n](double th) { return std::pow(std::cos(th), n); }, a,
                 0.5 * kPi, 1e-14, 1e-12);
}

double unit_cap_lateral_area(double lambda, int n) {
  check_range(lambda, n);
  // (n-1) omega_{n-1} integral_lambda^1 (1-t^2)^{(n-3)/2} dt, same substitution.
  const double w = unit_ball_volume(n - 1);
  const double a = std::asin(lambda);
  return (n - 1) * w *
         integrate_gk([n](double th) { return std::pow(std::cos(th), n - 2); },
                      a, 0.5 * kPi, 1e-14, 1e-12);
}

CapillarityParams make_params(double lambda, int n) {
  check_range(lambda, n);
  CapillarityParams p;
  p.lambda = lambda;
  p.n = n;
  p.cap_volume = unit_cap_volume(lambda, n);
  p.wetted_radius = std::sqrt(1.0 - lambda * lambda);
  p.r_small = std::min(p.wetted_radius, 1.0 - lambda);
  p.r_big = std::max(p.wetted_radius, 1.0 - lambda);
  p.ref_energy = n * p.cap_volume;
  return p;
}

double reference_energy(const CapillarityParams& p, double volume) {
  if (!(volume > 0.0)) throw domain_error("reference_energy: volume must be positive");
  return p.n * std::pow(p.cap_volume, 1.0 / p.n) *
         std::pow(volume, double(p.n - 1) / p.n);
}

Bubble make_bubble(const CapillarityParams& p, double volume,
                   std::vector<double> center) {
  if (!(volume > 0.0)) throw domain_error("make_bubble: volume must be positive");
  if (center.empty()) center.assign(std::size_t(p.n - 1), 0.0);
  if (center.size() != std::size_t(p.n - 1))
    throw domain_error("make_bubble: center must have n-1 coordinates");
  Bubble b;
  b.params = p;
  b.volume = volume;
  b.center = std::move(center);
  b.scale = std::pow(volume / p.cap_volume, 1.0 / p.n);
  b.ball_center_height = -b.scale * p.lambda;
  return b;
}

double bubble_slice_radius(const Bubble& b, double t) {
  if (t < 0.0) throw domain_error("bubble_slice_radius: t must be >= 0");
  const double d = t - b.ball_center_height;
  const double r2 = b.scale * b.scale - d * d;
  return r2 > 0.0 ? std::sqrt(r2) : 0.0;
}

MeasureTriple bubble_measures(const Bubble& b) {
  const auto& p = b.params;
  const double sn1 = std::pow(b.scale, p.n - 1);
  MeasureTriple m;
  m.volume = b.volume;
  m.rel_perimeter = sn1 * unit_cap_lateral_area(p.lambda, p.n);
  m.wetted_area =
      sn1 * unit_ball_volume(p.n - 1) * std::pow(p.wetted_radius, p.n - 1);
  return m;
}

}  // namespace caplab
