#ifndef RFSI_HIFI_HPP
#define RFSI_HIFI_HPP

#include <functional>
#include <vector>

#include "rfsi/affine.hpp"
#include "rfsi/fem.hpp"
#include "rfsi/types.hpp"

namespace rfsi
{

// Everything the full-order solver needs, assembled once.
struct HifiModel
{
  FunctionSpace space;
  PhysicalParams params;
  BoundaryData data;
  AssembledOperators ops;
  AffineSystem sys;
};

HifiModel build_hifi_model(const Mesh &mesh, const PhysicalParams &params, const BoundaryData &data);

struct State
{
  Vec u_tilde;  // homogeneous velocity, zero on the inlet
  Vec u;        // u_tilde + e0 * lift
  Vec p;
  Vec d;        // wall displacement, supported on wall dofs
  double t = 0.0;
  int n = 0;
};

State zero_state(const HifiModel &model);

// Coupled (u~^{n+1}, p^{n+1}) for the given previous velocity and displacement.
Vec solve_step(const HifiModel &model, const ParameterVector &mu, const Vec &prev_velocity,
               const Vec &prev_displacement);

// d <- d + dt * u~ on wall dofs.
Vec advance_displacement(const HifiModel &model, const Vec &d, const Vec &u_tilde);

State step(const HifiModel &model, const State &state, const ParameterVector &mu);

struct SnapshotSet
{
  Mat u;  // homogeneous velocity, n_u x N_S
  Mat p;  // n_p x N_S
  Mat d;  // displacement, n_u x N_S
  std::vector<double> times;
  std::vector<int> steps;  // absolute step index of each column
  std::vector<double> lift_coefficients;
  // State at the start of the recorded window (end of the warm-up).
  Vec initial_u, initial_p, initial_d;
  int stride = 1;
  int warmup_steps = 0;
  int n_steps = 0;
  double dt = 0.0;
  double alpha = 0.0;

  int count() const { return static_cast<int>(times.size()); }
};

struct RunProtocol
{
  int warmup_steps = 0;
  int n_steps = 1;
  int stride = 1;

  void validate() const;
};

// Number of steps in the given number of periods; must be an integer.
int steps_per_periods(double periods, double period, double dt);

using StepObserver = std::function<void(const State &)>;

// Zero initial state, warm-up, then n_steps recorded steps sampled every stride.
SnapshotSet run(const HifiModel &model, const RunProtocol &protocol, double alpha,
                const StepObserver &observer = {});

// Re = 4 rho_f Q / (pi D mu).
double reynolds(const PhysicalParams &params, double flow_rate, double diameter);

}  // namespace rfsi

#endif  // RFSI_HIFI_HPP
