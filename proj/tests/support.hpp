#ifndef RFSI_TESTS_SUPPORT_HPP
#define RFSI_TESTS_SUPPORT_HPP

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "rfsi/affine.hpp"
#include "rfsi/config.hpp"
#include "rfsi/fem.hpp"
#include "rfsi/hifi.hpp"
#include "rfsi/mesh.hpp"
#include "rfsi/sparse_util.hpp"
#include "rfsi/workbench.hpp"

namespace rfsi::testing
{

// Small channel with the desk signals, for fast unit tests.
inline RunConfig small_config(int nx = 6, int ny = 3)
{
  RunConfig c;
  c.mesh.nx = nx;
  c.mesh.ny = ny;
  c.time.n_steps = 40;
  c.time.stride = 5;
  c.time.warmup_periods = 0.0;
  return c;
}

inline std::shared_ptr<const HifiModel> small_model(int nx = 6, int ny = 3)
{
  return make_hifi(small_config(nx, ny));
}

inline double frobenius(const SpMat &A) { return std::sqrt(A.cwiseAbs2().sum()); }

inline ParameterVector random_parameter(std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> s(0.2, 1.8), a(1.0 - kMaxAlpha, 1.0 + kMaxAlpha);
  ParameterVector mu;
  mu.mu0 = s(rng);
  mu.mu1 = s(rng);
  mu.mu2 = s(rng);
  mu.mu3 = a(rng);
  return mu;
}

// Zero on the inlet, random elsewhere.
inline Vec random_homogeneous_velocity(const FunctionSpace &space, std::mt19937_64 &rng, double scale)
{
  std::normal_distribution<double> n(0.0, scale);
  Vec u(space.n_u());
  for (int i = 0; i < space.n_u(); ++i)
    u[i] = space.is_dirichlet(i) ? 0.0 : n(rng);
  return u;
}

inline Vec random_wall_field(const FunctionSpace &space, std::mt19937_64 &rng, double scale)
{
  std::normal_distribution<double> n(0.0, scale);
  Vec d = Vec::Zero(space.n_u());
  for (int dof : space.wall_dofs())
    if (!space.is_dirichlet(dof))
      d[dof] = n(rng);
  return d;
}

// One time step written in the original unknowns (full velocity, no lifting):
// (rho/dt) M u + rho C(w) u + K u - B^T p + wall mass/dt + dt K_Gamma u = rhs,
// with w = u~^n + e2 L the full previous velocity. Assembled without any
// affine splitting.
struct DirectSystem
{
  SpMat matrix;
  Vec load;  // for the full unknowns
};

inline DirectSystem direct_assembly(const HifiModel &h, const ParameterVector &mu, const Vec &u_tilde_prev,
                                    const Vec &d_prev)
{
  const AssembledOperators &o = h.ops;
  const PhysicalParams &pp = h.params;
  const int nu = h.space.n_u(), np = h.space.n_p(), nt = nu + np;
  const Vec w = u_tilde_prev + mu.e2() * o.lift;
  const SpMat vel = (pp.rho_f / pp.dt) * o.M_f + pp.rho_f * assemble_convection(h.space, w) + o.K_visc +
                    (pp.h_s * pp.rho_s / pp.dt) * o.M_Gamma + pp.dt * o.K_Gamma;
  std::vector<Triplet> t;
  for (int k = 0; k < vel.outerSize(); ++k)
    for (SpMat::InnerIterator it(vel, k); it; ++it)
      t.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < o.B.outerSize(); ++k)
    for (SpMat::InnerIterator it(o.B, k); it; ++it)
    {
      t.emplace_back(nu + it.row(), it.col(), it.value());
      t.emplace_back(it.col(), nu + it.row(), -it.value());
    }
  DirectSystem s;
  s.matrix.resize(nt, nt);
  s.matrix.setFromTriplets(t.begin(), t.end());
  s.load = Vec::Zero(nt);
  s.load.head(nu) = mu.e1() * o.f_N +
                    ((pp.rho_f / pp.dt) * o.M_f + (pp.h_s * pp.rho_s / pp.dt) * o.M_Gamma) * w -
                    o.K_Gamma * d_prev;
  return s;
}

// Same step in the lifted unknowns: A (u~, p) = F with u = u~ + e0 L.
inline DirectSystem direct_lifted(const HifiModel &h, const ParameterVector &mu, const Vec &u_tilde_prev,
                                  const Vec &d_prev)
{
  DirectSystem s = direct_assembly(h, mu, u_tilde_prev, d_prev);
  Vec L = Vec::Zero(s.load.size());
  L.head(h.space.n_u()) = mu.e0() * h.ops.lift;
  s.load -= s.matrix * L;
  return s;
}

// ||r||_{X'} by a dense solve with the full X on free velocity and pressure dofs.
inline double dense_dual_norm(const HifiModel &h, const Vec &r)
{
  const std::vector<int> keep = coupled_free_dofs(h.space.free_velocity_dofs(), h.space.n_u(), h.space.n_p());
  const int nu = h.space.n_u(), np = h.space.n_p();
  Mat X = Mat::Zero(nu + np, nu + np);
  X.topLeftCorner(nu, nu) = Mat(h.ops.X_u);
  X.bottomRightCorner(np, np) = Mat(h.ops.X_p);
  const int m = static_cast<int>(keep.size());
  Mat Xr(m, m);
  Vec rr(m);
  for (int i = 0; i < m; ++i)
  {
    rr[i] = r[keep[i]];
    for (int j = 0; j < m; ++j)
      Xr(i, j) = X(keep[i], keep[j]);
  }
  const Vec z = Xr.ldlt().solve(rr);
  return std::sqrt(std::max(0.0, rr.dot(z)));
}

// Residual F - A x of the lifted step (unconstrained rows).
inline Vec full_residual(const HifiModel &h, const ParameterVector &mu, const Vec &u_tilde_prev,
                         const Vec &d_prev, const Vec &x)
{
  const LinearSystem ls = evaluate_system(h.space, h.sys, mu, u_tilde_prev, d_prev);
  return ls.load - ls.matrix * x;
}

// Steady Stokes with velocity psi-curl of sin(pi x) sin(pi y) and pressure
// cos(pi x) cos(pi y) on the unit square, Dirichlet data on the whole
// boundary and one pinned pressure vertex.
inline ErrorNorms mms_stokes_errors(int n, double mu = 1.0)
{
  const double pi = 3.14159265358979323846;
  const VectorField u_exact = [pi](const Point &x) -> Point
  { return {pi * std::sin(pi * x.x) * std::cos(pi * x.y), -pi * std::cos(pi * x.x) * std::sin(pi * x.y)}; };
  const TensorField grad_exact = [pi](const Point &x) -> std::array<double, 4>
  {
    const double sx = std::sin(pi * x.x), cx = std::cos(pi * x.x), sy = std::sin(pi * x.y), cy = std::cos(pi * x.y);
    return {pi * pi * cx * cy, -pi * pi * sx * sy, pi * pi * sx * sy, -pi * pi * cx * cy};
  };
  const auto p_exact = [pi](const Point &x) { return std::cos(pi * x.x) * std::cos(pi * x.y); };
  // -mu lap u + grad p, with lap u = -2 pi^2 u.
  const VectorField f = [&](const Point &x) -> Point
  {
    const Point u = u_exact(x);
    return {2.0 * pi * pi * mu * u.x - pi * std::sin(pi * x.x) * std::cos(pi * x.y),
            2.0 * pi * pi * mu * u.y - pi * std::cos(pi * x.x) * std::sin(pi * x.y)};
  };

  const FunctionSpace space(build_channel(1.0, 1.0, n, n));
  PhysicalParams params;
  params.mu = mu;
  const BoundaryData data{[](const Point &) { return Point{0.0, 0.0}; }, [](double) { return 0.0; },
                          [](const Point &) { return Point{0.0, 0.0}; }, [](double) { return 0.0; }, 0.8};
  const AssembledOperators ops = assemble_constant_operators(space, params, data);
  const int nu = space.n_u(), np = space.n_p(), nt = nu + np;

  std::vector<char> fixed(nt, 0);
  const Mesh &mesh = space.mesh();
  for (std::size_t i = 0; i < mesh.boundary_edges.size(); ++i)
  {
    const auto &e = mesh.boundary_edges[i];
    for (int node : {e.v[0], e.v[1], space.edge_midpoint(static_cast<int>(i))})
      fixed[FunctionSpace::vdof(node, 0)] = fixed[FunctionSpace::vdof(node, 1)] = 1;
  }
  fixed[nu] = 1;

  const Vec ui = interpolate_velocity(space, u_exact);
  const Vec pi_h = interpolate_pressure(space, p_exact);
  Vec xd = join(ui, pi_h);
  Vec rhs = Vec::Zero(nt);
  rhs.head(nu) = assemble_body_force(space, f);

  std::vector<Triplet> t;
  auto add = [&](int r, int c, double v)
  {
    if (fixed[r])
      return;
    if (fixed[c])
      rhs[r] -= v * xd[c];
    else
      t.emplace_back(r, c, v);
  };
  for (int k = 0; k < ops.K_visc.outerSize(); ++k)
    for (SpMat::InnerIterator it(ops.K_visc, k); it; ++it)
      add(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int k = 0; k < ops.B.outerSize(); ++k)
    for (SpMat::InnerIterator it(ops.B, k); it; ++it)
    {
      add(nu + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
      add(static_cast<int>(it.col()), nu + static_cast<int>(it.row()), -it.value());
    }
  for (int i = 0; i < nt; ++i)
    if (fixed[i])
    {
      t.emplace_back(i, i, 1.0);
      rhs[i] = xd[i];
    }
  SpMat A(nt, nt);
  A.setFromTriplets(t.begin(), t.end());
  Eigen::SparseLU<SpMat> lu(A);
  const Vec x = lu.solve(rhs);
  return discretization_errors(space, x.head(nu), x.tail(np), u_exact, grad_exact, p_exact);
}

}  // namespace rfsi::testing

#endif  // RFSI_TESTS_SUPPORT_HPP
