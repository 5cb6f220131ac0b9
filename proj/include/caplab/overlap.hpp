#pragma once

#include <array>

namespace caplab {

// Area of disk(cx, cy; r) intersected with [x0,x1] x [y0,y1]; closed form
// (piecewise circular-segment primitives), exact up to arithmetic.
double disk_rect_area(double cx, double cy, double r, double x0, double x1,
                      double y0, double y1);

// Volume of ball(c; r) intersected with the box [lo, hi]; slab integration of
// disk_rect_area via adaptive Simpson, absolute tolerance abs_tol.
double ball_box_volume(const std::array<double, 3>& c, double r,
                       const std::array<double, 3>& lo,
                       const std::array<double, 3>& hi, double abs_tol);

// Length of [a,b] intersect [c,d].
double interval_overlap(double a, double b, double c, double d);

// Area of the intersection of two disks with radii r1, r2 and center
// distance d (the lens), closed form.
double disk_lens_area(double r1, double r2, double d);

}  // namespace caplab
