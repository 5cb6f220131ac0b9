#include "caplab/voxel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace caplab {

void VoxelSet::validate() const {
  if (dim != 2 && dim != 3) throw domain_error("voxel: dim must be 2 or 3");
  if (!(spacing > 0.0)) throw domain_error("voxel: spacing must be positive");
  if (origin[dim - 1] != 0.0)
    throw domain_error("voxel: grid must be anchored on the wall (vertical origin 0)");
  std::size_t want = std::size_t(nx()) * ny() * nt();
  if (occ.size() != want) throw domain_error("voxel: occupancy size mismatch");
  for (int i = 0; i < dim; ++i)
    if (shape[i] <= 0) throw domain_error("voxel: nonpositive shape");
}

std::size_t VoxelSet::occupied_count() const {
  return std::size_t(std::count(occ.begin(), occ.end(), std::uint8_t(1)));
}

VoxelSet VoxelSet::scaled(double sigma) const {
  if (!(sigma > 0.0)) throw domain_error("voxel: scale factor must be positive");
  VoxelSet out = *this;
  out.spacing = spacing * sigma;
  out.origin[0] = origin[0] * sigma;
  out.origin[1] = origin[1] * sigma;
  // vertical origin stays exactly 0
  out.origin[dim - 1] = 0.0;
  return out;
}

VoxelSet VoxelSet::refined(int factor) const {
  if (factor < 1) throw domain_error("voxel: refine factor must be >= 1");
  if (factor == 1) return *this;
  VoxelSet out;
  out.dim = dim;
  out.spacing = spacing / factor;
  out.origin = origin;
  out.shape = {nx() * factor, dim == 3 ? ny() * factor : nt() * factor,
               dim == 3 ? nt() * factor : 1};
  out.occ.assign(std::size_t(out.nx()) * out.ny() * out.nt(), 0);
  for (int t = 0; t < out.nt(); ++t)
    for (int y = 0; y < out.ny(); ++y)
      for (int x = 0; x < out.nx(); ++x)
        out.occ[out.index(x, y, t)] =
            at(x / factor, dim == 3 ? y / factor : 0, t / factor) ? 1 : 0;
  return out;
}

bool VoxelSet::connected() const {
  const std::size_t total = occupied_count();
  if (total == 0) return false;
  std::vector<std::uint8_t> seen(occ.size(), 0);
  std::queue<std::array<int, 3>> q;
  bool started = false;
  for (int t = 0; t < nt() && !started; ++t)
    for (int y = 0; y < ny() && !started; ++y)
      for (int x = 0; x < nx() && !started; ++x)
        if (at(x, y, t)) {
          q.push({x, y, t});
          seen[index(x, y, t)] = 1;
          started = true;
        }
  std::size_t visited = 0;
  const int dx[6] = {1, -1, 0, 0, 0, 0};
  const int dy[6] = {0, 0, 1, -1, 0, 0};
  const int dt[6] = {0, 0, 0, 0, 1, -1};
  const int nbrs = dim == 3 ? 6 : 4;
  while (!q.empty()) {
    auto [x, y, t] = q.front();
    q.pop();
    ++visited;
    for (int k = 0; k < nbrs; ++k) {
      int xx = x + dx[k], tt = t, yy = y;
      if (dim == 2) {
        tt = t + dy[k];  // for dim 2 the second pair moves t
      } else {
        yy = y + dy[k];
        tt = t + dt[k];
      }
      if (xx < 0 || yy < 0 || tt < 0 || xx >= nx() || yy >= ny() || tt >= nt())
        continue;
      if (!at(xx, yy, tt) || seen[index(xx, yy, tt)]) continue;
      seen[index(xx, yy, tt)] = 1;
      q.push({xx, yy, tt});
    }
  }
  return visited == total;
}

std::vector<double> VoxelSet::prefix_volume(int axis) const {
  if (axis < 0 || axis >= dim) throw domain_error("voxel: bad axis");
  const int len = axis == 0 ? nx() : (axis == dim - 1 ? nt() : ny());
  std::vector<double> pre(std::size_t(len) + 1, 0.0);
  const double cell = std::pow(spacing, dim);
  for (int t = 0; t < nt(); ++t)
    for (int y = 0; y < ny(); ++y)
      for (int x = 0; x < nx(); ++x)
        if (at(x, y, t)) {
          int k = axis == 0 ? x : (axis == dim - 1 ? t : y);
          pre[std::size_t(k) + 1] += cell;
        }
  std::partial_sum(pre.begin(), pre.end(), pre.begin());
  return pre;
}

std::vector<double> VoxelSet::layer_area(int axis) const {
  if (axis < 0 || axis >= dim) throw domain_error("voxel: bad axis");
  const int len = axis == 0 ? nx() : (axis == dim - 1 ? nt() : ny());
  std::vector<double> area(std::size_t(len), 0.0);
  const double face = std::pow(spacing, dim - 1);
  for (int t = 0; t < nt(); ++t)
    for (int y = 0; y < ny(); ++y)
      for (int x = 0; x < nx(); ++x)
        if (at(x, y, t)) {
          int k = axis == 0 ? x : (axis == dim - 1 ? t : y);
          area[std::size_t(k)] += face;
        }
  return area;
}

std::vector<double> VoxelSet::wetted_centroid() const {
  double wsum = 0.0;
  std::vector<double> c(std::size_t(dim - 1), 0.0);
  for (int y = 0; y < ny(); ++y)
    for (int x = 0; x < nx(); ++x)
      if (at(x, y, 0)) {
        auto ctr = center(x, y, 0);
        c[0] += ctr[0];
        if (dim == 3) c[1] += ctr[1];
        wsum += 1.0;
      }
  if (wsum == 0.0) {
    for (int t = 0; t < nt(); ++t)
      for (int y = 0; y < ny(); ++y)
        for (int x = 0; x < nx(); ++x)
          if (at(x, y, t)) {
            auto ctr = center(x, y, t);
            c[0] += ctr[0];
            if (dim == 3) c[1] += ctr[1];
            wsum += 1.0;
          }
  }
  if (wsum == 0.0) throw domain_error("voxel: empty set has no centroid");
  for (auto& v : c) v /= wsum;
  return c;
}

MeasureTriple voxel_measures(const VoxelSet& v) {
  v.validate();
  MeasureTriple m;
  const double cell = std::pow(v.spacing, v.dim);
  const double face = std::pow(v.spacing, v.dim - 1);
  std::size_t count = 0, rel_faces = 0, wet_faces = 0;
  for (int t = 0; t < v.nt(); ++t)
    for (int y = 0; y < v.ny(); ++y)
      for (int x = 0; x < v.nx(); ++x) {
        if (!v.at(x, y, t)) continue;
        ++count;
        if (!v.at(x - 1, y, t)) ++rel_faces;
        if (!v.at(x + 1, y, t)) ++rel_faces;
        if (v.dim == 3) {
          if (!v.at(x, y - 1, t)) ++rel_faces;
          if (!v.at(x, y + 1, t)) ++rel_faces;
        }
        if (!v.at(x, y, t + 1)) ++rel_faces;
        if (t == 0)
          ++wet_faces;  // lower face on the wall
        else if (!v.at(x, y, t - 1))
          ++rel_faces;
      }
  m.volume = double(count) * cell;
  m.rel_perimeter = double(rel_faces) * face;
  m.wetted_area = double(wet_faces) * face;
  return m;
}

double voxel_perimeter_flux(const VoxelSet& v, double lambda) {
  v.validate();
  const double face = std::pow(v.spacing, v.dim - 1);
  double acc = 0.0;
  for (int t = 0; t < v.nt(); ++t)
    for (int y = 0; y < v.ny(); ++y)
      for (int x = 0; x < v.nx(); ++x) {
        if (!v.at(x, y, t)) continue;
        // side faces have <e_n, nu> = 0
        if (!v.at(x - 1, y, t)) acc += 1.0;
        if (!v.at(x + 1, y, t)) acc += 1.0;
        if (v.dim == 3) {
          if (!v.at(x, y - 1, t)) acc += 1.0;
          if (!v.at(x, y + 1, t)) acc += 1.0;
        }
        if (!v.at(x, y, t + 1)) acc += 1.0 - lambda;  // nu = +e_n
        if (t > 0 && !v.at(x, y, t - 1)) acc += 1.0 + lambda;  // nu = -e_n
      }
  return acc * face;
}

VoxelSet voxelize(const ProfileSet& p, int n, double h, std::size_t max_cells) {
  p.validate();
  if (n != 2 && n != 3) throw domain_error("voxelize: n must be 2 or 3");
  if (!(h > 0.0)) throw domain_error("voxelize: h must be positive");
  double rmax = 0.0;
  for (double r : p.radii) rmax = std::max(rmax, r);
  VoxelSet v;
  v.dim = n;
  v.spacing = h;
  if (p.empty_geometry() || rmax == 0.0) {
    v.shape = {1, 1, 1};
    v.origin = {-0.5 * h, n == 3 ? -0.5 * h : 0.0, 0.0};
    v.origin[n - 1] = 0.0;
    v.occ.assign(1, 0);
    return v;
  }
  const int half = int(std::ceil(rmax / h)) + 1;
  const int lat = 2 * half;  // symmetric about 0
  const int rows = int(std::ceil(p.top() / h)) + 1;
  std::size_t cells = std::size_t(lat) * rows * (n == 3 ? std::size_t(lat) : 1);
  if (cells > max_cells)
    throw resource_error("voxelize: grid of " + std::to_string(cells) +
                         " cells exceeds the configured budget");
  v.origin = {-half * h, n == 3 ? -half * h : 0.0, 0.0};
  v.origin[n - 1] = 0.0;
  if (n == 2)
    v.shape = {lat, rows, 1};
  else
    v.shape = {lat, lat, rows};
  v.occ.assign(cells, 0);
  for (int t = 0; t < rows; ++t) {
    const double rho = p.radius_at((t + 0.5) * h);
    const double r2 = rho * rho;
    for (int y = 0; y < v.ny(); ++y)
      for (int x = 0; x < v.nx(); ++x) {
        auto c = v.center(x, y, t);
        const double d2 = c[0] * c[0] + (n == 3 ? c[1] * c[1] : 0.0);
        if (d2 < r2) v.set(x, y, t, true);
      }
  }
  return v;
}

SliceFunction slice_function(const VoxelSet& v) {
  v.validate();
  SliceFunction f;
  auto area = v.layer_area(v.dim - 1);
  f.heights.reserve(area.size());
  f.values = std::move(area);
  for (std::size_t t = 0; t < f.values.size(); ++t)
    f.heights.push_back((double(t) + 0.5) * v.spacing);
  return f;
}

std::vector<std::array<double, 3>> voxel_boundary_samples(const VoxelSet& v,
                                                          double ds) {
  v.validate();
  if (!(ds > 0.0)) throw domain_error("voxel_boundary_samples: bad spacing");
  std::vector<std::array<double, 3>> pts;
  const double h = v.spacing;
  const int per = std::max(1, int(std::ceil(h / ds)));
  auto emit_face_2d = [&](double x0, double t0, double x1, double t1) {
    for (int i = 0; i <= per; ++i) {
      double w = double(i) / per;
      pts.push_back({x0 + w * (x1 - x0), t0 + w * (t1 - t0), 0.0});
    }
  };
  auto emit_face_3d = [&](std::array<double, 3> corner, int ua, int va) {
    for (int i = 0; i <= per; ++i)
      for (int j = 0; j <= per; ++j) {
        auto p = corner;
        p[ua] += h * double(i) / per;
        p[va] += h * double(j) / per;
        pts.push_back(p);
      }
  };
  for (int t = 0; t < v.nt(); ++t)
    for (int y = 0; y < v.ny(); ++y)
      for (int x = 0; x < v.nx(); ++x) {
        if (!v.at(x, y, t)) continue;
        const double cx = v.origin[0] + x * h;
        const double cy = v.dim == 3 ? v.origin[1] + y * h : 0.0;
        const double ct = t * h;
        if (v.dim == 2) {
          if (!v.at(x - 1, y, t)) emit_face_2d(cx, ct, cx, ct + h);
          if (!v.at(x + 1, y, t)) emit_face_2d(cx + h, ct, cx + h, ct + h);
          if (!v.at(x, y, t + 1)) emit_face_2d(cx, ct + h, cx + h, ct + h);
          if (t > 0 && !v.at(x, y, t - 1)) emit_face_2d(cx, ct, cx + h, ct);
        } else {
          if (!v.at(x - 1, y, t)) emit_face_3d({cx, cy, ct}, 1, 2);
          if (!v.at(x + 1, y, t)) emit_face_3d({cx + h, cy, ct}, 1, 2);
          if (!v.at(x, y - 1, t)) emit_face_3d({cx, cy, ct}, 0, 2);
          if (!v.at(x, y + 1, t)) emit_face_3d({cx, cy + h, ct}, 0, 2);
          if (!v.at(x, y, t + 1)) emit_face_3d({cx, cy, ct + h}, 0, 1);
          if (t > 0 && !v.at(x, y, t - 1)) emit_face_3d({cx, cy, ct}, 0, 1);
        }
      }
  return pts;
}

}  // namespace caplab
