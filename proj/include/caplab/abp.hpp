#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "caplab/geometry.hpp"
#include "caplab/voxel.hpp"

namespace caplab {

// Finite-volume solution of the capillarity Neumann problem on a connected
// 2-D voxel domain: Delta u = P_lambda(E)/|E| with flux 1 per relative
// boundary face and -lambda per wetted face, zero-mean gauge.
struct NeumannSolution {
  VoxelSet domain;
  std::vector<std::array<int, 2>> cells;   // (x, t) per cell id
  std::vector<int> cell_id;                // grid index -> id, -1 outside
  std::vector<double> u;                   // per cell, zero mean
  std::vector<std::array<double, 2>> grad; // central/one-sided differences
  double rhs = 0.0;                        // P_lambda/|E|
  double compat_residual = 0.0;            // |sum b| / ||b|| before projection
  double solve_residual = 0.0;             // final relative residual

  int id_at(int x, int t) const {
    if (x < 0 || t < 0 || x >= domain.nx() || t >= domain.nt()) return -1;
    return cell_id[std::size_t(t) * domain.nx() + x];
  }
};

NeumannSolution solve_neumann(const VoxelSet& domain, const CapillarityParams& p,
                              double tol = 1e-10, int max_iter = 0, int jobs = 0);

// Lower contact set via the discrete global supporting-plane test with slack
// scaled by the grid step.
struct ContactSet {
  std::vector<std::uint8_t> mask;  // per cell id
  double slack = 2.0;
  std::size_t count = 0;
};

ContactSet lower_contact_set(const NeumannSolution& s, double slack = 2.0,
                             int jobs = 0);

// Rasterized coverage of the unit cap by grad u over the contact set, plus
// the area-formula chain quantities and the pointwise AM-GM slack.
struct CoverageReport {
  double cap_volume = 0.0;        // |B^lambda|, quadrature
  double covered_fraction = 0.0;  // hit bins / bins inside the cap
  double sum_det_contact = 0.0;   // sum over contact cells of det D^2u h^2
  double sum_amgm_bound = 0.0;    // sum over E of (Delta u / n)^n h^n, exact
  double amgm_min_slack = 0.0;    // min over PSD contact cells of (tr/2)^2-det
  double xi_step = 0.0;
  std::size_t contact_cells = 0;
};

CoverageReport gradient_coverage(const NeumannSolution& s, const ContactSet& c,
                                 const CapillarityParams& p,
                                 double xi_step = 1.0 / 128.0, int jobs = 0);

// Restricted Legendre conjugate u*(xi) = max_y <xi,y> - u(y) over a grid of
// xi covering the closure of the unit cap (Cartesian nodes strictly inside
// plus exact arc and base-edge nodes).
struct ConjugateGrid {
  std::vector<std::array<double, 2>> xi;
  std::vector<double> ustar;
  double step = 0.0;
};

ConjugateGrid restricted_legendre(const NeumannSolution& s,
                                  const CapillarityParams& p, double xi_step,
                                  int jobs = 0);

// K-envelope Psi(x) = max_xi <xi,x> - u*(xi): 1-Lipschitz convex coupling
// with gradients constrained to the cap. Sampled on the domain grid padded by
// one ring so Hessians exist on every domain cell.
struct CouplingField {
  int nx = 0, nt = 0;               // padded grid extents
  double h = 0.0;
  std::array<double, 2> origin{};   // padded grid corner
  std::vector<double> psi, gx, gt;  // per padded grid node (cell centers)

  std::size_t idx(int x, int t) const { return std::size_t(t) * nx + x; }
};

CouplingField k_envelope(const ConjugateGrid& cg, const VoxelSet& domain,
                         int jobs = 0);

// Evaluate the envelope gradient at an arbitrary point (argmax xi).
std::array<double, 2> envelope_gradient(const ConjugateGrid& cg, double x,
                                        double t);

// (R1, R2): interior Hessian-identity residual and boundary gradient-norm
// residual; R2 >= 0 up to roundoff since all xi satisfy |xi| <= 1.
std::pair<double, double> coupling_residuals(const CouplingField& f,
                                             const ConjugateGrid& cg,
                                             const VoxelSet& domain,
                                             const CapillarityParams& p);

}  // namespace caplab
