// three-dimensional voxel paths: searches, clipping oracles, pipeline
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "caplab/functionals.hpp"
#include "caplab/harness.hpp"
#include "caplab/io.hpp"
#include "caplab/overlap.hpp"
#include "caplab/quadrature.hpp"
#include "caplab/symmetrize.hpp"

using namespace caplab;

TEST_CASE("disk-rectangle clipping against adaptive quadrature") {
  Rng rng(777);
  for (int trial = 0; trial < 25; ++trial) {
    const double cx = rng.uniform(-1, 1), cy = rng.uniform(-1, 1);
    const double r = rng.uniform(0.2, 1.4);
    const double x0 = rng.uniform(-1.5, 0.5), y0 = rng.uniform(-1.5, 0.5);
    const double x1 = x0 + rng.uniform(0.05, 2.0), y1 = y0 + rng.uniform(0.05, 2.0);
    const double exact = disk_rect_area(cx, cy, r, x0, x1, y0, y1);
    // strip-length oracle via adaptive quadrature
    const double quad = integrate_gk(
        [&](double X) {
          const double rr = r * r - sq(X - cx);
          if (rr <= 0.0) return 0.0;
          const double u = std::sqrt(rr);
          return std::max(0.0, std::min(y1, cy + u) - std::max(y0, cy - u));
        },
        x0, x1, 1e-13, 1e-12);
    CHECK(exact == doctest::Approx(quad).epsilon(1e-9));
  }
}

TEST_CASE("ball-box clipping against a midpoint grid") {
  Rng rng(778);
  for (int trial = 0; trial < 6; ++trial) {
    const std::array<double, 3> c{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5),
                                  rng.uniform(-0.5, 0.5)};
    const double r = rng.uniform(0.3, 1.0);
    const std::array<double, 3> lo{rng.uniform(-1.0, 0.0), rng.uniform(-1.0, 0.0),
                                   rng.uniform(-1.0, 0.0)};
    const std::array<double, 3> hi{lo[0] + rng.uniform(0.2, 1.5),
                                   lo[1] + rng.uniform(0.2, 1.5),
                                   lo[2] + rng.uniform(0.2, 1.5)};
    const double exact = ball_box_volume(c, r, lo, hi, 1e-10);
    const int g = 64;
    double est = 0.0;
    const double dx = (hi[0] - lo[0]) / g, dy = (hi[1] - lo[1]) / g,
                 dz = (hi[2] - lo[2]) / g;
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j)
        for (int k = 0; k < g; ++k) {
          const double px = lo[0] + (i + 0.5) * dx;
          const double py = lo[1] + (j + 0.5) * dy;
          const double pz = lo[2] + (k + 0.5) * dz;
          if (sq(px - c[0]) + sq(py - c[1]) + sq(pz - c[2]) < r * r)
            est += dx * dy * dz;
        }
    CHECK(exact == doctest::Approx(est).epsilon(0.02));
  }
}

TEST_CASE("voxel symmetric difference against a fine-grid oracle") {
  Rng rng(779);
  for (int dim : {2, 3}) {
    auto p = make_params(0.15, dim);
    VoxelSet v = random_voxel(rng, dim, dim == 2 ? 10 : 6, 0.25);
    const double vol = voxel_measures(v).volume;
    const Bubble b = make_bubble(p, vol, std::vector<double>(std::size_t(dim - 1), 0.1));
    const double exact = voxel_bubble_sym_diff(v, b);
    // oracle: refine the raster and classify subcell centers against the ball
    VoxelSet fine = v.refined(dim == 2 ? 32 : 8);
    const double h = fine.spacing;
    const double cell = std::pow(h, dim);
    double inter = 0.0;
    for (int t = 0; t < fine.nt(); ++t)
      for (int y = 0; y < fine.ny(); ++y)
        for (int x = 0; x < fine.nx(); ++x) {
          if (!fine.at(x, y, t)) continue;
          auto c = fine.center(x, y, t);
          double d2 = sq(c[0] - 0.1) + sq(c[dim - 1] - b.ball_center_height);
          if (dim == 3) d2 += sq(c[1] - 0.1);
          if (d2 < b.scale * b.scale) inter += cell;
        }
    const double oracle = vol + b.volume - 2.0 * inter;
    CHECK(exact == doctest::Approx(oracle).epsilon(dim == 2 ? 0.01 : 0.05));
  }
}

TEST_CASE("translated caps are recovered in three dimensions") {
  auto p = make_params(0.0, 3);
  auto prof = sample_bubble_profile(make_bubble(p, p.cap_volume), 1024);
  VoxelSet v = voxelize(prof, 3, 0.05);
  v.origin[0] += 0.3;
  v.origin[1] -= 0.2;
  auto a = asymmetry_alpha(v, p);
  CHECK(a.value <= 0.15);
  CHECK(std::abs(a.center[0] - 0.3) <= 0.06);
  CHECK(std::abs(a.center[1] + 0.2) <= 0.06);
  auto bb = asymmetry_beta(v, p);
  CHECK(bb.value <= 0.1);
  // Hausdorff against the recovered cap stays at the raster scale
  const Bubble b = make_bubble(p, voxel_measures(v).volume, a.center);
  CHECK(hausdorff_boundary_distance(v, b, 0.025) <= 0.12);
}

TEST_CASE("radial excess face sums in three dimensions") {
  auto p = make_params(0.0, 3);
  auto prof = sample_bubble_profile(make_bubble(p, p.cap_volume), 1024);
  VoxelSet v = voxelize(prof, 3, 0.05);
  // face midpoints sit within half a diagonal of the unit sphere
  std::vector<double> x0{0.0, 0.0, 0.0};
  const double excess = radial_excess_integral(v, x0);
  const double area = voxel_measures(v).rel_perimeter;
  CHECK(excess <= 0.06 * area);
  // shifting the reference point moves the excess up
  CHECK(radial_excess_integral(v, {0.4, 0.0, 0.0}) > excess);
}

TEST_CASE("slice bound, pipeline and interval terms in three dimensions") {
  auto p = make_params(-0.3, 3);
  Rng rng(4031);
  for (int trial = 0; trial < 5; ++trial) {
    VoxelSet v = normalize(random_voxel(rng, 3, 7), p.cap_volume);
    CHECK(slice_lower_bound_residual(v, p) >= -1e-6);
  }
  // full raster pipeline with two reflection axes
  VoxelSet v = random_voxel(rng, 3, 6);
  PipelineResult res = run_pipeline(v, p);
  CHECK(res.stages.back().name == "schwarz");
  res.final_profile.validate();
  const auto& pre = res.stages[res.stages.size() - 2];
  CHECK(res.stages.back().p_lambda <= pre.p_lambda + 1e-9);

  // interval inequality terms with the cubic weight
  auto fc = lemma1d_check(p, p.r_small, 2000, 99);
  CHECK(fc.stable);
  CHECK(fc.fitted_max > 0.0);
}

TEST_CASE("factor-3 bound in three dimensions") {
  auto p = make_params(0.2, 3);
  auto rec = factor3_check(p, 6, 555);
  CHECK(rec.pass);
}

TEST_CASE("three-dimensional voxel files round-trip") {
  Rng rng(4242);
  VoxelSet v = random_voxel(rng, 3, 6);
  auto dir = std::filesystem::temp_directory_path() / "caplab_test_vox3";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  write_voxel(dir / "v.json", v);
  VoxelSet back = read_voxel(dir / "v.json");
  CHECK(back.dim == 3);
  CHECK(back.occ == v.occ);
  CHECK(back.shape == v.shape);
  CHECK(back.origin == v.origin);
}
