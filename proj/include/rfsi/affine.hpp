#ifndef RFSI_AFFINE_HPP
#define RFSI_AFFINE_HPP

#include <string>
#include <vector>

#include "rfsi/fem.hpp"
#include "rfsi/types.hpp"

namespace rfsi
{

constexpr double kMaxAlpha = 0.2;

// theta(alpha, t) = 1 + alpha sin(2 pi t / period), alpha in [0, 0.2].
double theta(double alpha, double t, double period = 0.8);

// [sigma1(t_{n+1}), sigma2(t_{n+1}), sigma1(t_n), theta(alpha, t_n)].
struct ParameterVector
{
  double mu0 = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double mu3 = 1.0;

  // Coefficients after the perturbation substitution mu0 -> mu3 mu0, mu2 -> mu2 mu3.
  double e0() const { return mu3 * mu0; }
  double e1() const { return mu1; }
  double e2() const { return mu2 * mu3; }
};

ParameterVector make_parameter(int n, const BoundaryData &data, double dt, double alpha);

enum class Coefficient
{
  One,
  E1,
  E2,
  NegE0,
  NegE0E2,
};

double coefficient_value(Coefficient c, const ParameterVector &mu);

struct OperatorTerm
{
  std::string name;
  Coefficient coefficient;
  SpMat matrix;  // coupled layout, n_total x n_total
};

struct LoadTerm
{
  std::string name;
  Coefficient coefficient;
  Vec vector;  // coupled layout, n_total
};

//
// One backward-Euler step written as an affine sum of fixed pieces plus the
// terms that depend on the previous velocity u~^n and displacement d^n:
//
//   A = sum_q c_q(mu) A_q + rho_f C(u~^n)
//   b = sum_q c_q(mu) f_q + M_prev u~^n - e0 rho_f C(u~^n) L - K_Gamma d^n
//
struct AffineSystem
{
  int n_u = 0;
  int n_p = 0;
  double rho_f = 1.0;

  SpMat A0;       // time-step Stokes + wall operator, coupled
  SpMat M_prev;   // rho_f/dt M_f + h_s rho_s/dt M_Gamma, velocity block
  SpMat K_Gamma;  // displacement load operator, velocity block
  Vec lift;       // n_u

  std::vector<OperatorTerm> operator_terms;
  std::vector<LoadTerm> load_terms;

  int n_total() const { return n_u + n_p; }
};

AffineSystem build_affine_system(const FunctionSpace &space, const AssembledOperators &ops,
                                 const PhysicalParams &params);

struct LinearSystem
{
  SpMat matrix;
  Vec load;
};

// prev_velocity is the homogeneous part u~^n (n_u entries), prev_displacement d^n (n_u).
LinearSystem evaluate_system(const FunctionSpace &space, const AffineSystem &sys,
                             const ParameterVector &mu, const Vec &prev_velocity,
                             const Vec &prev_displacement);

}  // namespace rfsi

#endif  // RFSI_AFFINE_HPP
