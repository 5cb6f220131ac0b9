#pragma once

#include <optional>
#include <vector>

#include "caplab/geometry.hpp"
#include "caplab/profile.hpp"
#include "caplab/voxel.hpp"

namespace caplab {

// P_lambda = relative perimeter - lambda * wetted area.
inline double capillarity_perimeter(const MeasureTriple& m, double lambda) {
  return m.rel_perimeter - lambda * m.wetted_area;
}

// D_lambda = P_lambda / (n |cap|^{1/n} v^{(n-1)/n}) - 1.
double deficit(const MeasureTriple& m, const CapillarityParams& p);
double deficit(const ProfileSet& e, const CapillarityParams& p);
double deficit(const VoxelSet& e, const CapillarityParams& p);

// psi(t) = t^{(n-1)/n} + (1-t)^{(n-1)/n} - 1 on [0,1], concave, zero at ends.
double psi_concave(double t, int n);

struct AsymmetryResult {
  double value = 0.0;
  std::vector<double> center;  // n-1 wall coordinates
};

struct SearchOptions {
  double window_halfwidth_scales = 2.0;  // window halfwidth in units of scale
  int coarse_limit = 512;                // cap on coarse candidates per axis
  double golden_tol_scales = 1e-4;       // refinement tolerance in scales
  int multistart = 3;
  int sweeps_3d = 2;
};

// |E delta B(v,x)| for a voxel set against the cap of equal volume centered
// at x; per-cell analytic ball clipping (exact in 2-D, 1e-6-accurate in 3-D).
double voxel_bubble_sym_diff(const VoxelSet& e, const Bubble& b);

// Fraenkel asymmetry. Profile path: optimal center 0 (slicewise, concentric
// balls minimize each slice's symmetric difference), closed quadrature.
// Voxel path: coarse translation scan then golden-section refinement.
AsymmetryResult asymmetry_alpha(const ProfileSet& e, const CapillarityParams& p);
AsymmetryResult asymmetry_alpha(const VoxelSet& e, const CapillarityParams& p,
                                const SearchOptions& opt = {});

// Wetted-trace asymmetry against the (n-1)-ball of the equal-volume cap.
// Detached sets (empty trace) score 1 by convention.
AsymmetryResult asymmetry_beta(const ProfileSet& e, const CapillarityParams& p);
AsymmetryResult asymmetry_beta(const VoxelSet& e, const CapillarityParams& p,
                               const SearchOptions& opt = {});

// Two-sided Hausdorff distance between closures of relative boundaries,
// dense sampling at resolution <= ds.
double pointset_hausdorff(const std::vector<std::array<double, 3>>& a,
                          const std::vector<std::array<double, 3>>& b);
std::vector<std::array<double, 3>> bubble_boundary_samples(const Bubble& b,
                                                           double ds);
double hausdorff_boundary_distance(const ProfileSet& e, const Bubble& b,
                                   double ds);
double hausdorff_boundary_distance(const VoxelSet& e, const Bubble& b,
                                   double ds);

// Minimum over sampled heights t > 0 of
//   v_E(t) - 1/2 P_ref [ (omega_n/|cap|)^{1/n} (1 - g(t))^{(n-1)/n} - 1 - D ],
// nonnegative a.e. by the slice lower bound. Requires |E| = |cap| (1e-6 rel).
double slice_lower_bound_residual(const ProfileSet& e, const CapillarityParams& p);
double slice_lower_bound_residual(const VoxelSet& e, const CapillarityParams& p);

// integral over the relative boundary of | |x - x0| - 1 |.
double radial_excess_integral(const ProfileSet& e, int n,
                              const std::vector<double>& x0);
double radial_excess_integral(const VoxelSet& e, const std::vector<double>& x0);

// |E intersect B_r(0)| for a profile set (ball centered at the wall origin).
double profile_ball_intersection_volume(const ProfileSet& e, int n, double r);

// |E delta (B_1(x0) minus lower half-space)| for a profile set, x0 given in
// full coordinates (n = 2 or 3); slicewise interval/lens quadrature.
double profile_unit_ball_sym_diff(const ProfileSet& e, int n,
                                  const std::vector<double>& x0);

// All functionals of one set.
struct EvalReport {
  MeasureTriple measures;
  double p_lambda = 0.0;
  double deficit = 0.0;
  double alpha = 0.0;
  std::vector<double> alpha_center;
  double beta = 0.0;
  std::vector<double> beta_center;
  double hausdorff = 0.0;
};

EvalReport evaluate(const ProfileSet& e, const CapillarityParams& p);
EvalReport evaluate(const VoxelSet& e, const CapillarityParams& p,
                    const SearchOptions& opt = {});

// Slack of the projection bound P_lambda >= (1-lambda)/2 (P_rel + wetted).
inline double projection_bound_slack(const MeasureTriple& m, double lambda) {
  return capillarity_perimeter(m, lambda) -
         0.5 * (1.0 - lambda) * (m.rel_perimeter + m.wetted_area);
}

}  // namespace caplab
