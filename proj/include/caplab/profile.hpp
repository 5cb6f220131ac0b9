#pragma once

#include <array>
#include <vector>

#include "caplab/geometry.hpp"

namespace caplab {

// A Schwarz-symmetric set encoded by its slice-radius profile rho(t): the
// slice at height t is the centered (n-1)-ball of radius rho(t), with rho
// piecewise linear between nodes. Starts on the wall (t0 = 0) and closes at
// the top (rho(T) = 0). Pure geometry; the dimension n enters per operation.
struct ProfileSet {
  std::vector<double> heights;
  std::vector<double> radii;

  double top() const { return heights.empty() ? 0.0 : heights.back(); }
  bool empty_geometry() const;

  // Structural checks: sizes match, t strictly increasing from 0, radii
  // nonnegative, final radius zero. Throws domain_error.
  void validate() const;

  // rho(t) by linear interpolation; zero outside [0, T].
  double radius_at(double t) const;

  // |E intersect {x_n < t}| for the revolved set, exact per linear piece.
  double volume_below(double t, int n) const;

  ProfileSet scaled(double sigma) const;
};

MeasureTriple profile_measures(const ProfileSet& p, int n);

// Volume by composite per-piece Simpson sampling of omega_{n-1} rho^{n-1};
// an independent route used by the validation invariant.
double profile_volume_slicewise(const ProfileSet& p, int n);

// Flux form of the capillarity perimeter: integral of 1 - lambda<e_n, nu>
// over the relative boundary only (per-piece frustum normals).
double profile_perimeter_flux(const ProfileSet& p, int n, double lambda);

// Signed scalar mean curvature of the revolved generatrix at arclength s
// (measured along the polyline from the wall upward), by a local quadratic
// fit through three neighboring nodes. Sign convention: the unit ball has
// H = -(n-1) with outward normal. Throws domain_error at the axis (rho = 0).
double mean_curvature_profile(const ProfileSet& p, double s, int n);

double profile_arclength(const ProfileSet& p);

// Dense sample of the optimal cap as a profile (m+1 nodes).
ProfileSet sample_bubble_profile(const Bubble& b, int m);

// Meridian polyline of the relative boundary, resampled at spacing <= ds,
// as (radius, height) pairs including endpoints.
std::vector<std::array<double, 2>> profile_meridian(const ProfileSet& p,
                                                    double ds);

// v_E(t) sampled where the representation is exact: profile nodes.
struct SliceFunction {
  std::vector<double> heights;
  std::vector<double> values;
};

SliceFunction slice_function(const ProfileSet& p, int n);

}  // namespace caplab
