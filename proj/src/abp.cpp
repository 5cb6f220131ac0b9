#include "caplab/abp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

#include "caplab/functionals.hpp"

namespace caplab {

NeumannSolution solve_neumann(const VoxelSet& domain, const CapillarityParams& p,
                              double tol, int max_iter, int jobs) {
  domain.validate();
  if (domain.dim != 2 || p.n != 2)
    throw domain_error("solve_neumann: only 2-D voxel domains are supported");
  if (!domain.connected())
    throw domain_error("solve_neumann: domain must be connected");

  NeumannSolution s;
  s.domain = domain;
  const int nx = domain.nx(), nt = domain.nt();
  const double h = domain.spacing;
  s.cell_id.assign(std::size_t(nx) * nt, -1);
  for (int t = 0; t < nt; ++t)
    for (int x = 0; x < nx; ++x)
      if (domain.at(x, 0, t)) {
        s.cell_id[std::size_t(t) * nx + x] = int(s.cells.size());
        s.cells.push_back({x, t});
      }
  const std::size_t N = s.cells.size();
  const MeasureTriple m = voxel_measures(domain);
  s.rhs = capillarity_perimeter(m, p.lambda) / m.volume;

  // right-hand side of  sum_j (u_i - u_j) = -rhs h^2 + h sum g_f
  std::vector<double> b(N, 0.0);
  std::vector<std::array<int, 4>> nbr(N, {-1, -1, -1, -1});
  std::vector<double> diag(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    auto [x, t] = s.cells[i];
    const int ids[4] = {s.id_at(x - 1, t), s.id_at(x + 1, t), s.id_at(x, t - 1),
                        s.id_at(x, t + 1)};
    double gsum = 0.0;
    int deg = 0;
    for (int k = 0; k < 4; ++k) {
      nbr[i][std::size_t(k)] = ids[k];
      if (ids[k] >= 0) {
        ++deg;
      } else {
        gsum += (k == 2 && t == 0) ? -p.lambda : 1.0;  // wall face vs relative
      }
    }
    diag[i] = double(deg);
    b[i] = -s.rhs * h * h + h * gsum;
  }
  double bsum = std::accumulate(b.begin(), b.end(), 0.0);
  double bnorm = 0.0;
  for (double v : b) bnorm += v * v;
  bnorm = std::sqrt(bnorm);
  s.compat_residual = bnorm > 0.0 ? std::abs(bsum) / bnorm : 0.0;
  const double mean_b = bsum / double(N);
  for (double& v : b) v -= mean_b;  // project onto the compatible subspace

  s.u.assign(N, 0.0);
  if (N > 1 && bnorm > 0.0) {
    // Jacobi-preconditioned CG on the graph Laplacian
    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
      parallel_for(
          N,
          [&](std::size_t i) {
            double acc = diag[i] * x[i];
            for (int k = 0; k < 4; ++k)
              if (nbr[i][std::size_t(k)] >= 0)
                acc -= x[std::size_t(nbr[i][std::size_t(k)])];
            y[i] = acc;
          },
          jobs);
    };
    std::vector<double> r = b, z(N), q(N), d(N);
    for (std::size_t i = 0; i < N; ++i) z[i] = r[i] / std::max(1.0, diag[i]);
    d = z;
    double rz = 0.0;
    for (std::size_t i = 0; i < N; ++i) rz += r[i] * z[i];
    const double btol = tol * bnorm;
    const int iters = max_iter > 0 ? max_iter : std::max(20000, int(N) * 4);
    double rn = bnorm;
    for (int it = 0; it < iters; ++it) {
      apply(d, q);
      double dq = 0.0;
      for (std::size_t i = 0; i < N; ++i) dq += d[i] * q[i];
      if (!(dq > 0.0)) throw numeric_error("solve_neumann: CG breakdown");
      const double alpha = rz / dq;
      for (std::size_t i = 0; i < N; ++i) {
        s.u[i] += alpha * d[i];
        r[i] -= alpha * q[i];
      }
      rn = 0.0;
      for (std::size_t i = 0; i < N; ++i) rn += r[i] * r[i];
      rn = std::sqrt(rn);
      if (rn <= btol) break;
      double rz_new = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        z[i] = r[i] / std::max(1.0, diag[i]);
        rz_new += r[i] * z[i];
      }
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < N; ++i) d[i] = z[i] + beta * d[i];
      if (it + 1 == iters && rn > btol)
        throw numeric_error("solve_neumann: CG stagnated, residual " +
                            fmt_double(rn / bnorm));
    }
    s.solve_residual = bnorm > 0.0 ? rn / bnorm : 0.0;
  }

  // zero-mean gauge
  const double mean_u = std::accumulate(s.u.begin(), s.u.end(), 0.0) / double(N);
  for (double& v : s.u) v -= mean_u;

  // gradient by central differences, one-sided at the boundary
  s.grad.assign(N, {0.0, 0.0});
  for (std::size_t i = 0; i < N; ++i) {
    auto [x, t] = s.cells[i];
    auto diff = [&](int lo, int hi) {
      if (lo >= 0 && hi >= 0)
        return (s.u[std::size_t(hi)] - s.u[std::size_t(lo)]) / (2.0 * h);
      if (hi >= 0) return (s.u[std::size_t(hi)] - s.u[i]) / h;
      if (lo >= 0) return (s.u[i] - s.u[std::size_t(lo)]) / h;
      return 0.0;
    };
    s.grad[i][0] = diff(s.id_at(x - 1, t), s.id_at(x + 1, t));
    s.grad[i][1] = diff(s.id_at(x, t - 1), s.id_at(x, t + 1));
  }
  return s;
}

ContactSet lower_contact_set(const NeumannSolution& s, double slack, int jobs) {
  const std::size_t N = s.cells.size();
  ContactSet c;
  c.slack = slack;
  c.mask.assign(N, 0);
  const double h = s.domain.spacing;
  // flat SoA copies for the hot loop
  std::vector<double> px(N), pt(N);
  for (std::size_t i = 0; i < N; ++i) {
    auto ctr = s.domain.center(s.cells[i][0], 0, s.cells[i][1]);
    px[i] = ctr[0];
    pt[i] = ctr[1];
  }
  parallel_for(
      N,
      [&](std::size_t i) {
        const double ui = s.u[i], gx = s.grad[i][0], gt = s.grad[i][1];
        const double xi = px[i], ti = pt[i];
        for (std::size_t j = 0; j < N; ++j) {
          const double dx = px[j] - xi, dt = pt[j] - ti;
          const double allow = slack * (h + h * std::sqrt(dx * dx + dt * dt));
          if (s.u[j] - ui - gx * dx - gt * dt < -allow) return;
        }
        c.mask[i] = 1;
      },
      jobs);
  c.count = std::size_t(std::count(c.mask.begin(), c.mask.end(), std::uint8_t(1)));
  if (c.count == 0)
    throw theorem_violation("lower_contact_set: empty contact set on a connected domain");
  return c;
}

namespace {

// discrete Hessian at cell i: compact second differences on the diagonal
// (their trace equals the five-point Laplacian, hence the constant rhs, on
// interior cells) and symmetrized gradient differences off-diagonal
std::array<double, 3> discrete_hessian(const NeumannSolution& s, std::size_t i) {
  const double h = s.domain.spacing;
  auto [x, t] = s.cells[i];
  const int xl = s.id_at(x - 1, t), xr = s.id_at(x + 1, t);
  const int tl = s.id_at(x, t - 1), tr = s.id_at(x, t + 1);
  auto second = [&](int lo, int hi) {
    const double ui = s.u[i];
    if (lo >= 0 && hi >= 0)
      return (s.u[std::size_t(hi)] - 2.0 * ui + s.u[std::size_t(lo)]) / (h * h);
    return 0.0;  // no curvature information across the boundary
  };
  auto gdiff = [&](int lo, int hi, int comp, double self) {
    if (lo >= 0 && hi >= 0)
      return (s.grad[std::size_t(hi)][std::size_t(comp)] -
              s.grad[std::size_t(lo)][std::size_t(comp)]) /
             (2.0 * h);
    if (hi >= 0)
      return (s.grad[std::size_t(hi)][std::size_t(comp)] - self) / h;
    if (lo >= 0)
      return (self - s.grad[std::size_t(lo)][std::size_t(comp)]) / h;
    return 0.0;
  };
  const double hxx = second(xl, xr);
  const double htt = second(tl, tr);
  const double hxt = 0.5 * (gdiff(xl, xr, 1, s.grad[i][1]) +
                            gdiff(tl, tr, 0, s.grad[i][0]));
  return {hxx, htt, hxt};
}

}  // namespace

CoverageReport gradient_coverage(const NeumannSolution& s, const ContactSet& c,
                                 const CapillarityParams& p, double xi_step,
                                 int jobs) {
  if (c.count == 0) throw domain_error("gradient_coverage: empty contact set");
  (void)jobs;
  CoverageReport rep;
  rep.xi_step = xi_step;
  rep.cap_volume = p.cap_volume;
  rep.contact_cells = c.count;

  // bins over the cap's bounding box
  const double x0 = -1.0, t0 = p.lambda;
  const int bx = int(std::ceil(2.0 / xi_step));
  const int bt = int(std::ceil((1.0 - p.lambda) / xi_step));
  std::vector<std::uint8_t> hit(std::size_t(bx) * bt, 0);
  auto bin_center = [&](int i, int j) {
    return std::array<double, 2>{x0 + (i + 0.5) * xi_step,
                                 t0 + (j + 0.5) * xi_step};
  };

  const std::size_t N = s.cells.size();
  const int nx = s.domain.nx();
  (void)nx;
  for (std::size_t i = 0; i < N; ++i) {
    if (!c.mask[i]) continue;
    // local gradient oscillation over occupied neighbors
    auto [x, t] = s.cells[i];
    double osc = 0.0;
    for (int k = 0; k < 4; ++k) {
      const int xx = x + (k == 0 ? -1 : k == 1 ? 1 : 0);
      const int tt = t + (k == 2 ? -1 : k == 3 ? 1 : 0);
      const int j = s.id_at(xx, tt);
      if (j >= 0)
        osc = std::max(osc, std::hypot(s.grad[std::size_t(j)][0] - s.grad[i][0],
                                       s.grad[std::size_t(j)][1] - s.grad[i][1]));
    }
    const double reach = 0.5 * xi_step + osc;
    const double gx = s.grad[i][0], gt = s.grad[i][1];
    const int ilo = std::max(0, int(std::floor((gx - reach - x0) / xi_step - 0.5)));
    const int ihi = std::min(bx - 1, int(std::ceil((gx + reach - x0) / xi_step)));
    const int jlo = std::max(0, int(std::floor((gt - reach - t0) / xi_step - 0.5)));
    const int jhi = std::min(bt - 1, int(std::ceil((gt + reach - t0) / xi_step)));
    for (int jj = jlo; jj <= jhi; ++jj)
      for (int ii = ilo; ii <= ihi; ++ii) {
        auto bc = bin_center(ii, jj);
        if (std::max(std::abs(bc[0] - gx), std::abs(bc[1] - gt)) <= reach)
          hit[std::size_t(jj) * bx + ii] = 1;
      }
  }

  std::size_t inside = 0, covered = 0;
  for (int jj = 0; jj < bt; ++jj)
    for (int ii = 0; ii < bx; ++ii) {
      auto bc = bin_center(ii, jj);
      if (bc[0] * bc[0] + bc[1] * bc[1] < 1.0 && bc[1] > p.lambda) {
        ++inside;
        if (hit[std::size_t(jj) * bx + ii]) ++covered;
      }
    }
  rep.covered_fraction = inside ? double(covered) / double(inside) : 0.0;

  // chain quantities and AM-GM slack; the continuum contact set carries
  // positive semi-definite Hessians, so the discrete sum keeps PSD cells only
  // (slack-admitted boundary cells would otherwise inject meaningless dets)
  const double h = s.domain.spacing;
  double sum_det = 0.0;
  double amgm = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < N; ++i) {
    if (!c.mask[i]) continue;
    auto H = discrete_hessian(s, i);
    const double det = H[0] * H[1] - H[2] * H[2];
    const double tr = H[0] + H[1];
    if (tr >= 0.0 && det >= 0.0) {  // positive semi-definite (2x2 test)
      sum_det += det * h * h;
      amgm = std::min(amgm, sq(0.5 * tr) - det);
    }
  }
  rep.sum_det_contact = sum_det;
  rep.amgm_min_slack = amgm;
  rep.sum_amgm_bound = sq(0.5 * s.rhs) * double(N) * h * h;
  return rep;
}

ConjugateGrid restricted_legendre(const NeumannSolution& s,
                                  const CapillarityParams& p, double xi_step,
                                  int jobs) {
  ConjugateGrid cg;
  cg.step = xi_step;
  const double lambda = p.lambda;
  // Cartesian nodes strictly inside the closed cap
  for (double xt = lambda; xt <= 1.0 + 1e-12; xt += xi_step)
    for (double xx = -1.0; xx <= 1.0 + 1e-12; xx += xi_step)
      if (xx * xx + xt * xt <= 1.0 && xt >= lambda) cg.xi.push_back({xx, xt});
  // exact arc nodes |xi| = 1 and base-edge nodes xi_t = lambda
  const double amax = std::acos(lambda);
  const int karc = std::max(8, int(std::ceil(2.0 * amax / xi_step)));
  for (int k = -karc; k <= karc; ++k) {
    const double a = amax * double(k) / karc;
    cg.xi.push_back({std::sin(a), std::cos(a)});
  }
  const double half_chord = std::sqrt(1.0 - lambda * lambda);
  const int kbase = std::max(4, int(std::ceil(2.0 * half_chord / xi_step)));
  for (int k = 0; k <= kbase; ++k)
    cg.xi.push_back({-half_chord + 2.0 * half_chord * double(k) / kbase, lambda});

  const std::size_t N = s.cells.size();
  std::vector<double> px(N), pt(N);
  for (std::size_t i = 0; i < N; ++i) {
    auto ctr = s.domain.center(s.cells[i][0], 0, s.cells[i][1]);
    px[i] = ctr[0];
    pt[i] = ctr[1];
  }
  cg.ustar.assign(cg.xi.size(), 0.0);
  parallel_for(
      cg.xi.size(),
      [&](std::size_t k) {
        const double a = cg.xi[k][0], b = cg.xi[k][1];
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < N; ++i) {
          const double v = a * px[i] + b * pt[i] - s.u[i];
          if (v > best) best = v;
        }
        cg.ustar[k] = best;
      },
      jobs);
  return cg;
}

namespace {

std::array<double, 3> envelope_value_gradient(const ConjugateGrid& cg, double x,
                                              double t) {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t k = 0; k < cg.xi.size(); ++k) {
    const double v = cg.xi[k][0] * x + cg.xi[k][1] * t - cg.ustar[k];
    if (v > best) {
      best = v;
      arg = k;
    }
  }
  return {best, cg.xi[arg][0], cg.xi[arg][1]};
}

}  // namespace

std::array<double, 2> envelope_gradient(const ConjugateGrid& cg, double x,
                                        double t) {
  auto v = envelope_value_gradient(cg, x, t);
  return {v[1], v[2]};
}

CouplingField k_envelope(const ConjugateGrid& cg, const VoxelSet& domain,
                         int jobs) {
  domain.validate();
  CouplingField f;
  f.h = domain.spacing;
  f.nx = domain.nx() + 2;
  f.nt = domain.nt() + 2;
  f.origin = {domain.origin[0] - f.h, -f.h};
  const std::size_t total = std::size_t(f.nx) * f.nt;
  f.psi.assign(total, 0.0);
  f.gx.assign(total, 0.0);
  f.gt.assign(total, 0.0);
  parallel_for(
      total,
      [&](std::size_t k) {
        const int x = int(k % std::size_t(f.nx));
        const int t = int(k / std::size_t(f.nx));
        const double cx = f.origin[0] + (x + 0.5) * f.h;
        const double ct = f.origin[1] + (t + 0.5) * f.h;
        auto v = envelope_value_gradient(cg, cx, ct);
        f.psi[k] = v[0];
        f.gx[k] = v[1];
        f.gt[k] = v[2];
      },
      jobs);
  return f;
}

std::pair<double, double> coupling_residuals(const CouplingField& f,
                                             const ConjugateGrid& cg,
                                             const VoxelSet& domain,
                                             const CapillarityParams& p) {
  (void)p;
  domain.validate();
  const double h = domain.spacing;
  double r1 = 0.0;
  for (int t = 0; t < domain.nt(); ++t)
    for (int x = 0; x < domain.nx(); ++x) {
      if (!domain.at(x, 0, t)) continue;
      const int fx = x + 1, ft = t + 1;  // padded coordinates
      const double hxx =
          (f.gx[f.idx(fx + 1, ft)] - f.gx[f.idx(fx - 1, ft)]) / (2.0 * h);
      const double htt =
          (f.gt[f.idx(fx, ft + 1)] - f.gt[f.idx(fx, ft - 1)]) / (2.0 * h);
      const double hxt =
          0.5 * ((f.gt[f.idx(fx + 1, ft)] - f.gt[f.idx(fx - 1, ft)]) / (2.0 * h) +
                 (f.gx[f.idx(fx, ft + 1)] - f.gx[f.idx(fx, ft - 1)]) / (2.0 * h));
      r1 += std::sqrt(sq(hxx - 1.0) + 2.0 * sq(hxt) + sq(htt - 1.0)) * h * h;
    }

  double r2 = 0.0;
  auto face = [&](double mx, double mt) {
    auto g = envelope_gradient(cg, mx, mt);
    r2 += (1.0 - std::hypot(g[0], g[1])) * h;
  };
  for (int t = 0; t < domain.nt(); ++t)
    for (int x = 0; x < domain.nx(); ++x) {
      if (!domain.at(x, 0, t)) continue;
      const double cx = domain.origin[0] + (x + 0.5) * h;
      const double ct = (t + 0.5) * h;
      if (!domain.at(x - 1, 0, t)) face(cx - 0.5 * h, ct);
      if (!domain.at(x + 1, 0, t)) face(cx + 0.5 * h, ct);
      if (!domain.at(x, 0, t + 1)) face(cx, ct + 0.5 * h);
      if (t > 0 && !domain.at(x, 0, t - 1)) face(cx, ct - 0.5 * h);
    }
  return {r1, r2};
}

}  // namespace caplab
