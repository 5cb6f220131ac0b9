#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "caplab/functionals.hpp"
#include "caplab/harness.hpp"
#include "caplab/profile.hpp"
#include "caplab/symmetrize.hpp"
#include "caplab/voxel.hpp"

namespace caplab {

// Profile file: CSV with header "t,rho", strictly increasing t, final rho 0.
// Doubles are printed in shortest round-trip form, so files are bit-stable.
void write_profile_csv(const std::filesystem::path& path, const ProfileSet& p);
ProfileSet read_profile_csv(const std::filesystem::path& path);

// Voxel file: JSON header {dim, spacing, origin, shape, encoding, data[,
// channels]} plus a binary sidecar of 0/1 bytes (row-major, x fastest);
// optional named float64 channels append after the occupancy block.
struct VoxelChannel {
  std::string name;
  std::vector<double> values;  // one per grid cell
};

void write_voxel(const std::filesystem::path& json_path, const VoxelSet& v,
                 const std::vector<VoxelChannel>& channels = {});
VoxelSet read_voxel(const std::filesystem::path& json_path,
                    std::vector<VoxelChannel>* channels = nullptr);

std::string eval_report_to_json(const EvalReport& r);

std::string truncation_record_to_json(const TruncationRecord& rec);

// Sweep CSV with a fixed column order; absent entries print as nan.
std::string sweep_to_csv(const SweepTable& t);
std::string sweep_meta_to_json(const SweepTable& t);

std::string pipeline_stages_to_csv(const std::vector<PipelineStage>& stages);

// Manifest of produced files (path, bytes, fnv1a64) for one command run.
void write_manifest(const std::filesystem::path& out_dir,
                    const std::vector<std::filesystem::path>& files);

}  // namespace caplab
