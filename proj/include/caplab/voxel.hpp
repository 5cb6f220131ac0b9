#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "caplab/geometry.hpp"
#include "caplab/profile.hpp"

namespace caplab {

// Axis-aligned cell union in the half-space. The grid's bottom faces lie
// exactly on the wall {x_n = 0}; the vertical axis is the last one. All
// measures are exact (up to arithmetic) for the polyhedral union of cells, so
// the voxel set is itself a legitimate finite-perimeter set.
struct VoxelSet {
  int dim = 2;                           // 2 or 3
  double spacing = 1.0;                  // cell edge length h
  std::array<double, 3> origin{0, 0, 0}; // min corner; origin[dim-1] == 0
  std::array<int, 3> shape{0, 0, 1};     // nx, ny, nt (ny = 1 when dim = 2)
  std::vector<std::uint8_t> occ;         // x fastest, then y, then t

  void validate() const;

  int nx() const { return shape[0]; }
  int ny() const { return dim == 3 ? shape[1] : 1; }
  int nt() const { return shape[dim - 1]; }

  std::size_t index(int x, int y, int t) const {
    return (std::size_t(t) * ny() + y) * nx() + x;
  }
  bool at(int x, int y, int t) const {
    if (x < 0 || y < 0 || t < 0 || x >= nx() || y >= ny() || t >= nt()) return false;
    return occ[index(x, y, t)] != 0;
  }
  void set(int x, int y, int t, bool v) { occ[index(x, y, t)] = v ? 1 : 0; }

  std::size_t occupied_count() const;
  bool empty_geometry() const { return occupied_count() == 0; }

  // Cell center; the vertical coordinate sits at index dim-1.
  std::array<double, 3> center(int x, int y, int t) const {
    std::array<double, 3> c{0.0, 0.0, 0.0};
    c[0] = origin[0] + (x + 0.5) * spacing;
    if (dim == 3) c[1] = origin[1] + (y + 0.5) * spacing;
    c[dim - 1] = origin[dim - 1] + (t + 0.5) * spacing;
    return c;
  }

  // Uniform scaling about the origin of the half-space: exact on rasters
  // (only spacing and origin change).
  VoxelSet scaled(double sigma) const;

  // Same occupancy on a grid refined by an integer factor per axis.
  VoxelSet refined(int factor) const;

  bool connected() const;  // face-connectivity over occupied cells

  // Exact partial volumes along one axis: volume of cells with index < k,
  // for k = 0..shape[axis]. axis indexes x (0), y (1), vertical (dim-1).
  std::vector<double> prefix_volume(int axis) const;

  // Exact slice areas per cell layer along one axis.
  std::vector<double> layer_area(int axis) const;

  // Centroid of the wetted footprint (wall coordinates); falls back to the
  // volume centroid when the footprint is empty.
  std::vector<double> wetted_centroid() const;
};

MeasureTriple voxel_measures(const VoxelSet& v);

// Flux form of the capillarity perimeter: sums 1 - lambda<e_n, nu> over
// exposed faces off the wall with their exact normals.
double voxel_perimeter_flux(const VoxelSet& v, double lambda);

// Rasterize a revolved profile: cell occupied iff its center lies in the
// set. Throws resource_error if the grid would exceed max_cells.
VoxelSet voxelize(const ProfileSet& p, int n, double h,
                  std::size_t max_cells = std::size_t(1) << 26);

SliceFunction slice_function(const VoxelSet& v);

// Sample points of the closure of the relative boundary at spacing <= ds
// (exposed face corners/midpoints; wall faces excluded).
std::vector<std::array<double, 3>> voxel_boundary_samples(const VoxelSet& v,
                                                          double ds);

}  // namespace caplab
