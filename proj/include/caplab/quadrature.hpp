#pragma once

#include <functional>

namespace caplab {

// Adaptive Gauss-Kronrod (G7,K15) on [a,b]. Stops when the local error
// estimate is below abs_tol + rel_tol*|integral|. Throws numeric_error when
// the subdivision budget is exhausted before reaching the tolerance.
double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double abs_tol = 1e-12, double rel_tol = 1e-12,
                    int max_depth = 48);

// Fixed-order Gauss-Legendre on [a,b]; exact for polynomials of degree
// 2*points-1. points in [1,8].
double integrate_gauss(const std::function<double(double)>& f, double a, double b,
                       int points);

}  // namespace caplab
