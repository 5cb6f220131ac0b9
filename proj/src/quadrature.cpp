#include "caplab/quadrature.hpp"

#include <cmath>

#include "caplab/common.hpp"

namespace caplab {

namespace {

// Kronrod-15 nodes/weights on [-1,1]; the Gauss-7 subset sits at odd indices.
const double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
const double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
const double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                       0.417959183673469};

struct GkResult {
  double integral;
  double err;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double res_g = fc * kWg[3];
  double res_k = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double fsum = f(c - x) + f(c + x);
    res_k += kWgk[j] * fsum;
    if (j % 2 == 1) res_g += kWg[j / 2] * fsum;
  }
  res_g *= h;
  res_k *= h;
  return {res_k, std::abs(res_k - res_g)};
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double tol, double floor_tol, int depth, int max_depth) {
  GkResult r = gk15(f, a, b);
  if (r.err <= tol || r.err <= 1e-16 * std::abs(r.integral)) return r.integral;
  if (depth >= max_depth)
    throw numeric_error("integrate_gk: subdivision budget exhausted");
  const double c = 0.5 * (a + b);
  // halve the budget per side but never demand below roundoff scale
  const double child = std::max(0.5 * tol, floor_tol);
  return adapt(f, a, c, child, floor_tol, depth + 1, max_depth) +
         adapt(f, c, b, child, floor_tol, depth + 1, max_depth);
}

// Gauss-Legendre nodes (positive half) and weights for orders 1..8.
const double kGlX[8][4] = {
    {0.0, 0, 0, 0},
    {0.5773502691896257, 0, 0, 0},
    {0.0, 0.7745966692414834, 0, 0},
    {0.3399810435848563, 0.8611363115940526, 0, 0},
    {0.0, 0.5384693101056831, 0.9061798459386640, 0},
    {0.2386191860831969, 0.6612093864662645, 0.9324695142031521, 0},
    {0.0, 0.4058451513773972, 0.7415311855993945, 0.9491079123427585},
    {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
     0.9602898564975363}};
const double kGlW[8][4] = {
    {2.0, 0, 0, 0},
    {1.0, 0, 0, 0},
    {0.8888888888888888, 0.5555555555555556, 0, 0},
    {0.6521451548625461, 0.3478548451374538, 0, 0},
    {0.5688888888888889, 0.4786286704993665, 0.2369268850561891, 0},
    {0.4679139345726910, 0.3607615730481386, 0.1713244923791704, 0},
    {0.4179591836734694, 0.3818300505051189, 0.2797053914892766,
     0.1294849661688697},
    {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
     0.1012285362903763}};

}  // namespace

double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double abs_tol, double rel_tol, int max_depth) {
  if (a == b) return 0.0;
  GkResult first = gk15(f, a, b);
  double tol = abs_tol + rel_tol * std::abs(first.integral);
  if (first.err <= tol) return first.integral;
  const double floor_tol = 1e-16 * (1.0 + std::abs(first.integral));
  return adapt(f, a, b, tol, floor_tol, 0, max_depth);
}

double integrate_gauss(const std::function<double(double)>& f, double a, double b,
                       int points) {
  if (points < 1 || points > 8) throw domain_error("integrate_gauss: order out of range");
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const int row = points - 1;
  const int entries = (points + 1) / 2;
  const bool has_center = (points % 2 == 1);
  double acc = 0.0;
  int j = 0;
  if (has_center) {
    acc += kGlW[row][0] * f(c);
    j = 1;
  }
  for (; j < entries; ++j) {
    const double x = h * kGlX[row][j];
    acc += kGlW[row][j] * (f(c - x) + f(c + x));
  }
  return acc * h;
}

}  // namespace caplab
