#pragma once

#include <vector>

#include "caplab/common.hpp"

namespace caplab {

// Volume, relative perimeter in the open half-space, and wetted area on the
// wall {x_n = 0}. All exact or quadrature-accurate per representation.
struct MeasureTriple {
  double volume = 0.0;
  double rel_perimeter = 0.0;
  double wetted_area = 0.0;
};

// The pair (lambda, n) plus the derived reference constants of the unit cap:
// a unit ball truncated at signed height lambda and dropped onto the wall.
struct CapillarityParams {
  double lambda = 0.0;
  int n = 2;
  double cap_volume = 0.0;    // volume of the unit cap
  double wetted_radius = 0.0; // sqrt(1 - lambda^2)
  double r_small = 0.0;       // min{sqrt(1-lambda^2), 1-lambda}
  double r_big = 0.0;         // max{sqrt(1-lambda^2), 1-lambda}
  double ref_energy = 0.0;    // capillarity perimeter of the unit cap = n*cap_volume
};

// Volume of the unit cap by adaptive quadrature, relative error <= 1e-10.
double unit_cap_volume(double lambda, int n);

// Lateral (spherical) area of the unit cap, same accuracy.
double unit_cap_lateral_area(double lambda, int n);

CapillarityParams make_params(double lambda, int n);

// Reference energy n |cap|^{1/n} v^{(n-1)/n}: the capillarity perimeter of
// the optimal cap of volume v.
double reference_energy(const CapillarityParams& p, double volume);

// An optimal cap of prescribed volume translated along the wall: the ball of
// radius `scale` centered at (center, -scale*lambda), cut by {x_n > 0}.
struct Bubble {
  CapillarityParams params;
  double volume = 0.0;
  std::vector<double> center;       // n-1 wall coordinates
  double scale = 0.0;               // (volume/cap_volume)^{1/n}
  double ball_center_height = 0.0;  // -scale*lambda
};

Bubble make_bubble(const CapillarityParams& p, double volume,
                   std::vector<double> center = {});

// Radius of the slice {x_n = t}; zero once t leaves the cap.
double bubble_slice_radius(const Bubble& b, double t);

MeasureTriple bubble_measures(const Bubble& b);

// Height of the top point of the cap above the wall.
inline double bubble_top_height(const Bubble& b) {
  return b.ball_center_height + b.scale;
}

}  // namespace caplab
