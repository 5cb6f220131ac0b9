#include "caplab/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "caplab/common.hpp"

namespace caplab {

namespace {

// primitive of sqrt(r^2 - X^2)
double seg_primitive(double x, double r) {
  x = std::clamp(x, -r, r);
  return 0.5 * (x * std::sqrt(std::max(0.0, r * r - x * x)) +
                r * r * std::asin(x / r));
}

}  // namespace

double disk_rect_area(double cx, double cy, double r, double x0, double x1,
                      double y0, double y1) {
  if (!(r > 0.0) || x1 <= x0 || y1 <= y0) return 0.0;
  // shift circle to the origin
  const double ax = x0 - cx, bx = x1 - cx;
  const double ay = y0 - cy, by = y1 - cy;
  double lo = std::max(ax, -r), hi = std::min(bx, r);
  if (lo >= hi) return 0.0;

  std::vector<double> brk = {lo, hi};
  auto add_brk = [&](double y) {
    if (std::abs(y) < r) {
      const double x = std::sqrt(r * r - y * y);
      if (x > lo && x < hi) brk.push_back(x);
      if (-x > lo && -x < hi) brk.push_back(-x);
    }
  };
  add_brk(ay);
  add_brk(by);
  std::sort(brk.begin(), brk.end());

  double area = 0.0;
  for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
    const double p = brk[i], q = brk[i + 1];
    if (q - p <= 0.0) continue;
    const double mid = 0.5 * (p + q);
    const double u = std::sqrt(std::max(0.0, r * r - mid * mid));
    const double top = std::min(by, u);
    const double bot = std::max(ay, -u);
    if (top <= bot) continue;
    // len(X) = c1 + c2 * sqrt(r^2 - X^2) on this piece
    double c1 = 0.0;
    int c2 = 0;
    if (u < by)
      c2 += 1;
    else
      c1 += by;
    if (-u > ay)
      c2 += 1;
    else
      c1 -= ay;
    area += c1 * (q - p) + c2 * (seg_primitive(q, r) - seg_primitive(p, r));
  }
  return area;
}

double ball_box_volume(const std::array<double, 3>& c, double r,
                       const std::array<double, 3>& lo,
                       const std::array<double, 3>& hi, double abs_tol) {
  const double z0 = std::max(lo[2] - c[2], -r);
  const double z1 = std::min(hi[2] - c[2], r);
  if (z0 >= z1) return 0.0;
  auto slab = [&](double z) {
    const double rr = r * r - z * z;
    if (rr <= 0.0) return 0.0;
    return disk_rect_area(c[0], c[1], std::sqrt(rr), lo[0], hi[0], lo[1], hi[1]);
  };
  // adaptive Simpson
  struct Rec {
    double a, b, fa, fm, fb, whole;
  };
  auto simpson = [](double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  };
  double a = z0, b = z1;
  double fa = slab(a), fb = slab(b), fm = slab(0.5 * (a + b));
  std::vector<Rec> stack{{a, b, fa, fm, fb, simpson(a, b, fa, fm, fb)}};
  double total = 0.0;
  const double roundoff = 1e-15 * r * r * (z1 - z0);  // integral scale floor
  int guard = 0;
  while (!stack.empty()) {
    if (++guard > 200000) throw numeric_error("ball_box_volume: refinement stuck");
    Rec rec = stack.back();
    stack.pop_back();
    const double m = 0.5 * (rec.a + rec.b);
    const double lm = 0.5 * (rec.a + m), rm = 0.5 * (m + rec.b);
    const double flm = slab(lm), frm = slab(rm);
    const double left = simpson(rec.a, m, rec.fa, flm, rec.fm);
    const double right = simpson(m, rec.b, rec.fm, frm, rec.fb);
    const double err = (left + right - rec.whole) / 15.0;
    if (std::abs(err) <= abs_tol * (rec.b - rec.a) / (b - a) ||
        std::abs(err) <= roundoff || rec.b - rec.a < 1e-13 * (b - a)) {
      total += left + right + err;
    } else {
      stack.push_back({rec.a, m, rec.fa, flm, rec.fm, left});
      stack.push_back({m, rec.b, rec.fm, frm, rec.fb, right});
    }
  }
  return total;
}

double interval_overlap(double a, double b, double c, double d) {
  return std::max(0.0, std::min(b, d) - std::max(a, c));
}

double disk_lens_area(double r1, double r2, double d) {
  if (r1 <= 0.0 || r2 <= 0.0) return 0.0;
  if (d >= r1 + r2) return 0.0;
  const double rmin = std::min(r1, r2);
  if (d <= std::abs(r1 - r2)) return kPi * rmin * rmin;
  const double d2 = d * d, r1s = r1 * r1, r2s = r2 * r2;
  const double a1 = r1s * std::acos(std::clamp((d2 + r1s - r2s) / (2 * d * r1), -1.0, 1.0));
  const double a2 = r2s * std::acos(std::clamp((d2 + r2s - r1s) / (2 * d * r2), -1.0, 1.0));
  const double k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
  return a1 + a2 - 0.5 * std::sqrt(std::max(0.0, k));
}

}  // namespace caplab
