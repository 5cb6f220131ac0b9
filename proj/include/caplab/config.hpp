#pragma once

#include <filesystem>
#include <string>

namespace caplab {

// Flat key=value run configuration. Every numeric default lives here and is
// echoed into output metadata so results are self-describing.
struct RunConfig {
  double lambda = 0.0;
  int n = 2;
  std::string rep = "profile";  // profile | voxel
  int nodes = 4096;             // profile resolution
  double h = 0.02;              // voxel pitch
  double xi_step = 1.0 / 128.0; // gradient-grid pitch for the coupling
  std::uint64_t seed = 1;
  int jobs = 0;                 // 0 = hardware concurrency
  std::string out = "out";
  double tol_quadrature = 1e-10;  // guaranteed floor; kernels run at or below it
  double tol_solver = 1e-10;
  double tol_search = 1e-4;
  double tol_theorem = 1e-9;

  void validate() const;
  std::string to_kv() const;
  static RunConfig from_kv_file(const std::filesystem::path& path);
};

}  // namespace caplab
