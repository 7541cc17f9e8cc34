#include "rfsi/affine.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rfsi
{

namespace
{

SpMat coupled_a0(const AssembledOperators &ops, const PhysicalParams &prm, int n_u, int n_p)
{
  const SpMat vel = (prm.rho_f / prm.dt) * ops.M_f + ops.K_visc +
                    (prm.h_s * prm.rho_s / prm.dt) * ops.M_Gamma + prm.dt * ops.K_Gamma;
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(vel.nonZeros() + 2 * ops.B.nonZeros()));
  for (int k = 0; k < vel.outerSize(); ++k)
    for (SpMat::InnerIterator it(vel, k); it; ++it)
      trip.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < ops.B.outerSize(); ++k)
  {
    for (SpMat::InnerIterator it(ops.B, k); it; ++it)
    {
      trip.emplace_back(n_u + it.row(), it.col(), it.value());
      trip.emplace_back(it.col(), n_u + it.row(), -it.value());
    }
  }
  SpMat A(n_u + n_p, n_u + n_p);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  return A;
}

Vec pad(const Vec &u, int n_total)
{
  Vec out = Vec::Zero(n_total);
  out.head(u.size()) = u;
  return out;
}

}  // namespace

double theta(double alpha, double t, double period)
{
  if (!(alpha >= 0.0 && alpha <= kMaxAlpha))
    throw InvalidArgument("theta: alpha must lie in [0, 0.2]");
  return 1.0 + alpha * std::sin(2.0 * std::numbers::pi * t / period);
}

ParameterVector make_parameter(int n, const BoundaryData &data, double dt, double alpha)
{
  if (n < 0)
    throw InvalidArgument("make_parameter: negative time index");
  const double t0 = n * dt, t1 = (n + 1) * dt;
  ParameterVector mu;
  mu.mu0 = data.sigma1(t1);
  mu.mu1 = data.sigma2(t1);
  mu.mu2 = data.sigma1(t0);
  mu.mu3 = theta(alpha, t0, data.period);
  return mu;
}

double coefficient_value(Coefficient c, const ParameterVector &mu)
{
  switch (c)
  {
    case Coefficient::One:
      return 1.0;
    case Coefficient::E1:
      return mu.e1();
    case Coefficient::E2:
      return mu.e2();
    case Coefficient::NegE0:
      return -mu.e0();
    case Coefficient::NegE0E2:
      return -mu.e0() * mu.e2();
  }
  return 0.0;
}

AffineSystem build_affine_system(const FunctionSpace &space, const AssembledOperators &ops,
                                 const PhysicalParams &params)
{
  AffineSystem sys;
  sys.n_u = space.n_u();
  sys.n_p = space.n_p();
  sys.rho_f = params.rho_f;
  const int nt = sys.n_total();

  sys.A0 = coupled_a0(ops, params, sys.n_u, sys.n_p);
  sys.M_prev = (params.rho_f / params.dt) * ops.M_f + (params.h_s * params.rho_s / params.dt) * ops.M_Gamma;
  sys.K_Gamma = ops.K_Gamma;
  sys.lift = ops.lift;

  const SpMat CL = params.rho_f * assemble_convection(space, ops.lift);
  const Vec L = pad(ops.lift, nt);
  const SpMat CLc = embed_velocity_block(CL, nt);

  sys.operator_terms.push_back({"a0", Coefficient::One, sys.A0});
  sys.operator_terms.push_back({"a1_lift", Coefficient::E2, CLc});

  sys.load_terms.push_back({"neumann", Coefficient::E1, pad(ops.f_N, nt)});
  sys.load_terms.push_back({"mass_lift", Coefficient::E2, pad(sys.M_prev * ops.lift, nt)});
  sys.load_terms.push_back({"a0_lift", Coefficient::NegE0, sys.A0 * L});
  sys.load_terms.push_back({"a1_lift_lift", Coefficient::NegE0E2, CLc * L});
  return sys;
}

LinearSystem evaluate_system(const FunctionSpace &space, const AffineSystem &sys,
                             const ParameterVector &mu, const Vec &prev_velocity,
                             const Vec &prev_displacement)
{
  if (prev_velocity.size() != sys.n_u || prev_displacement.size() != sys.n_u)
    throw InvalidArgument("evaluate_system: previous state has the wrong dimension");
  if (sys.operator_terms.size() != 2 || sys.load_terms.size() != 4)
    throw std::logic_error("evaluate_system: affine term list is incomplete");
  const int nt = sys.n_total();
  const SpMat Cu = sys.rho_f * assemble_convection(space, prev_velocity);

  LinearSystem out;
  out.matrix = embed_velocity_block(Cu, nt);
  for (const auto &term : sys.operator_terms)
    out.matrix += coefficient_value(term.coefficient, mu) * term.matrix;

  out.load = Vec::Zero(nt);
  for (const auto &term : sys.load_terms)
    out.load += coefficient_value(term.coefficient, mu) * term.vector;
  out.load.head(sys.n_u) += sys.M_prev * prev_velocity - mu.e0() * (Cu * sys.lift) -
                            sys.K_Gamma * prev_displacement;
  return out;
}

}  // namespace rfsi
