#include "rfsi/hifi.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/SparseLU>

namespace rfsi
{

HifiModel build_hifi_model(const Mesh &mesh, const PhysicalParams &params, const BoundaryData &data)
{
  params.validate();
  FunctionSpace space(mesh);
  AssembledOperators ops = assemble_constant_operators(space, params, data);
  AffineSystem sys = build_affine_system(space, ops, params);
  return HifiModel{std::move(space), params, data, std::move(ops), std::move(sys)};
}

State zero_state(const HifiModel &model)
{
  State s;
  s.u_tilde = Vec::Zero(model.space.n_u());
  s.u = s.u_tilde;
  s.p = Vec::Zero(model.space.n_p());
  s.d = s.u_tilde;
  return s;
}

Vec solve_step(const HifiModel &model, const ParameterVector &mu, const Vec &prev_velocity,
               const Vec &prev_displacement)
{
  const FunctionSpace &space = model.space;
  LinearSystem ls = evaluate_system(space, model.sys, mu, prev_velocity, prev_displacement);
  const SpMat A = constrain_homogeneous(ls.matrix, space);
  Vec b = ls.load;
  for (int dof : space.dirichlet_dofs())
    b[dof] = 0.0;

  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw NumericalError("hifi step: sparse factorization failed: " + lu.lastErrorMessage());
  Vec x = lu.solve(b);
  // One step of iterative refinement.
  Vec r = b - A * x;
  x += lu.solve(r);
  r = b - A * x;
  const double bn = std::max(b.norm(), 1e-300);
  if (!x.allFinite() || r.norm() > 1e-8 * bn)
    throw NumericalError("hifi step: linear solve did not converge, relative residual " +
                         std::to_string(r.norm() / bn));
  return x;
}

Vec advance_displacement(const HifiModel &model, const Vec &d, const Vec &u_tilde)
{
  Vec out = d;
  const double dt = model.params.dt;
  for (int dof : model.space.wall_dofs())
    out[dof] += dt * u_tilde[dof];
  return out;
}

State step(const HifiModel &model, const State &state, const ParameterVector &mu)
{
  const int nu = model.space.n_u();
  const Vec x = solve_step(model, mu, state.u_tilde, state.d);
  State next;
  next.u_tilde = x.head(nu);
  next.p = x.tail(model.space.n_p());
  next.u = next.u_tilde + mu.e0() * model.sys.lift;
  next.d = advance_displacement(model, state.d, next.u_tilde);
  next.n = state.n + 1;
  next.t = next.n * model.params.dt;
  return next;
}

void RunProtocol::validate() const
{
  if (n_steps < 1 || stride < 1 || warmup_steps < 0)
    throw InvalidArgument("run: n_steps and stride must be >= 1, warm-up >= 0");
  if (n_steps % stride != 0)
    throw InvalidArgument("run: stride " + std::to_string(stride) + " does not divide n_steps " +
                          std::to_string(n_steps));
}

int steps_per_periods(double periods, double period, double dt)
{
  const double raw = periods * period / dt;
  const double r = std::round(raw);
  if (!(raw >= 0.0) || std::abs(raw - r) > 1e-9 * std::max(1.0, raw))
    throw InvalidArgument("warm-up length is not an integer number of time steps");
  return static_cast<int>(r);
}

SnapshotSet run(const HifiModel &model, const RunProtocol &protocol, double alpha,
                const StepObserver &observer)
{
  protocol.validate();
  const int total = protocol.warmup_steps + protocol.n_steps;
  const int ns = protocol.n_steps / protocol.stride;
  SnapshotSet snaps;
  snaps.u.resize(model.space.n_u(), ns);
  snaps.p.resize(model.space.n_p(), ns);
  snaps.d.resize(model.space.n_u(), ns);
  snaps.stride = protocol.stride;
  snaps.warmup_steps = protocol.warmup_steps;
  snaps.n_steps = protocol.n_steps;
  snaps.dt = model.params.dt;
  snaps.alpha = alpha;

  State state = zero_state(model);
  snaps.initial_u = state.u_tilde;
  snaps.initial_p = state.p;
  snaps.initial_d = state.d;
  int col = 0;
  for (int n = 0; n < total; ++n)
  {
    const ParameterVector mu = make_parameter(n, model.data, model.params.dt, alpha);
    try
    {
      state = step(model, state, mu);
    }
    catch (const NumericalError &e)
    {
      throw NumericalError(std::string(e.what()) + " (at step " + std::to_string(n + 1) + ")");
    }
    if (observer)
      observer(state);
    if (state.n == protocol.warmup_steps)
    {
      snaps.initial_u = state.u_tilde;
      snaps.initial_p = state.p;
      snaps.initial_d = state.d;
    }
    const int rec = state.n - protocol.warmup_steps;
    if (rec > 0 && rec % protocol.stride == 0)
    {
      snaps.u.col(col) = state.u_tilde;
      snaps.p.col(col) = state.p;
      snaps.d.col(col) = state.d;
      snaps.times.push_back(state.t);
      snaps.steps.push_back(state.n);
      snaps.lift_coefficients.push_back(mu.e0());
      ++col;
    }
  }
  return snaps;
}

double reynolds(const PhysicalParams &params, double flow_rate, double diameter)
{
  if (!(diameter > 0.0))
    throw InvalidArgument("reynolds: diameter must be positive");
  return 4.0 * params.rho_f * flow_rate / (std::numbers::pi * diameter * params.mu);
}

}  // namespace rfsi
