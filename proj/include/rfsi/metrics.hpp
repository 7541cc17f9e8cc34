#ifndef RFSI_METRICS_HPP
#define RFSI_METRICS_HPP

#include <iosfwd>
#include <vector>

#include "rfsi/fem.hpp"
#include "rfsi/types.hpp"

namespace rfsi
{

struct ErrorReport
{
  // Per snapshot instant.
  std::vector<double> times;
  std::vector<double> eps_u, eps_p;
  std::vector<double> err_u, err_p;    // ||u_N - u_h||_V, ||p_N - p_h||_Q
  std::vector<double> norm_u, norm_p;  // ||u_h||_V, ||p_h||_Q
  // Per step of the recorded window.
  std::vector<double> dual_norms;

  double E_u = 0.0;
  double E_p = 0.0;
  double R_N = 0.0;
  int n_velocity_modes = 0;
  int n_pressure_modes = 0;
  int basis_size = 0;
};

// Columns of U_rom / P_rom are the reduced solutions at the snapshot instants.
// dual_norms covers every step of the recorded window.
ErrorReport space_time_errors(const Mat &U_truth, const Mat &P_truth, const Mat &U_rom,
                              const Mat &P_rom, const std::vector<double> &times,
                              const std::vector<double> &dual_norms, const SpMat &X_u,
                              const SpMat &X_p);

// Aggregates from stored per-instant norms.
double aggregate_error(const std::vector<double> &errors, const std::vector<double> &norms);
double aggregate_residual(const std::vector<double> &dual_norms, const std::vector<double> &norm_u,
                          const std::vector<double> &norm_p);

// Outlet flux of the full velocity u.
double outlet_flow_rate(const FunctionSpace &space, const Vec &u);

enum class WallSide
{
  Bottom,
  Top,
  Both,
};

// Part of the wall: edges on the given side whose midpoint x lies in [x_min, x_max].
struct WallArea
{
  WallSide side = WallSide::Both;
  double x_min = 0.0;
  double x_max = 0.0;
};

// (1/|A|) int_A |sigma n - (sigma n . n) n| with sigma = 2 mu D(u) - p I,
// gradients taken from the element adjacent to each edge.
double wall_shear_stress(const FunctionSpace &space, double mu, const Vec &u, const Vec &p,
                         const WallArea &area);

// Rank correlation with average ranks for ties.
double spearman(const std::vector<double> &x, const std::vector<double> &y);

void write_errors_csv(std::ostream &os, const ErrorReport &r, const std::vector<double> &step_times,
                      int stride);
// Per snapshot instant: t, err_u, err_p, norm_u, norm_p.
void write_norms_csv(std::ostream &os, const ErrorReport &r);

}  // namespace rfsi

#endif  // RFSI_METRICS_HPP
