#pragma once

#include <string>
#include <utility>
#include <vector>

#include "caplab/functionals.hpp"
#include "caplab/profile.hpp"
#include "caplab/voxel.hpp"

namespace caplab {

struct TruncationAxis {
  int axis = 0;          // 0..n-2 wall-parallel, n-1 vertical
  bool applied = false;
  double tau1 = 0.0;     // lower cut (wall-parallel only)
  double tau2 = 0.0;     // upper cut
  std::string note;
};

struct TruncationRecord {
  std::vector<TruncationAxis> axes;
  double sigma = 1.0;  // accumulated rescale factor
  double pre_volume = 0.0, post_volume = 0.0;
  double pre_deficit = 0.0, post_deficit = 0.0;
  bool no_op = true;
};

// Schwarz symmetrization of a raster: per row the centered ball of equal
// slice measure. The stepped set is encoded as a profile with hairline ramps
// (width ~1e-11 h) between rows, so row sums are preserved to ~1e-11 relative
// and P_lambda never increases beyond a 1e-9 slack.
ProfileSet schwarz_symmetrize(const VoxelSet& v);

// Halves the volume across a wall-parallel hyperplane (prefix sums plus
// sub-cell interpolation, then snapped to a refined grid so the reflection
// maps cells to cells) and returns both half-union-reflection sets.
std::pair<VoxelSet, VoxelSet> bisect_reflect(const VoxelSet& v, int axis,
                                             int refine = 16);

// Uniform scaling to a target volume; exact for both representations.
ProfileSet normalize(const ProfileSet& e, int n, double target_volume);
VoxelSet normalize(const VoxelSet& e, double target_volume);

// The bounded-reduction construction: per-axis thresholds from psi(g) = 2D,
// outermost slice-area crossings of n|cap|D/2, truncation, rescale to |cap|.
// Vertical axis truncates from above only. Gated by |E| = |cap| (1e-6) and
// D < (2^{1/n}-1)/4; deficits at minimizer scale return the identity.
std::pair<ProfileSet, TruncationRecord> truncate_and_rescale(
    const ProfileSet& e, const CapillarityParams& p);
std::pair<VoxelSet, TruncationRecord> truncate_and_rescale(
    const VoxelSet& e, const CapillarityParams& p);

// Full reduction pipeline: normalize, truncate (gated), reflect-symmetrize
// wall-parallel axes keeping the half with the larger asymmetry, Schwarz.
struct PipelineStage {
  std::string name;
  double volume = 0.0, p_lambda = 0.0, deficit = 0.0, alpha = 0.0;
};

struct PipelineResult {
  ProfileSet final_profile;
  std::vector<PipelineStage> stages;
  TruncationRecord truncation;
  std::vector<std::string> notes;
};

PipelineResult run_pipeline(const VoxelSet& v, const CapillarityParams& p,
                            const SearchOptions& opt = {});
PipelineResult run_pipeline(const ProfileSet& e, const CapillarityParams& p);

}  // namespace caplab
