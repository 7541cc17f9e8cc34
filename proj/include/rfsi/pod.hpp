#ifndef RFSI_POD_HPP
#define RFSI_POD_HPP

#include <memory>
#include <vector>

#include "rfsi/fem.hpp"
#include "rfsi/hifi.hpp"
#include "rfsi/types.hpp"

namespace rfsi
{

struct GramianPair
{
  Mat G_u;  // (u_i, u_j)_V
  Mat G_p;  // (p_i, p_j)_Q
};

GramianPair compute_gramians(const Mat &U, const Mat &P, const SpMat &X_u, const SpMat &X_p);

// Symmetric eigendecomposition, eigenvalues in descending order; equal
// eigenvalues keep their index order.
struct Spectrum
{
  Vec values;
  Mat vectors;
};

Spectrum symmetric_spectrum(const Mat &G);

// Smallest N whose discarded tail carries at most tol of the total energy.
int select_modes(const Vec &eigenvalues, double tol);

// phi_j = (1/lambda_j) sum_i zeta_ij s_i, normalised and re-orthonormalised in X.
Mat reconstruct_modes(const Mat &snapshots, const Spectrum &spectrum, int n_modes, const SpMat &X);

// Riesz solver for X_u on the velocity dofs that are free of Dirichlet constraints.
class SupremizerSolver
{
public:
  SupremizerSolver(const FunctionSpace &space, const AssembledOperators &ops);

  // sigma with (sigma, v)_V = (p, div v) for all free v, sigma = 0 on the inlet.
  Vec solve(const Vec &pressure) const;
  // Solution of X_u sigma = rhs on free dofs; rhs on Dirichlet dofs is ignored.
  Vec solve_velocity_load(const Vec &rhs) const;

private:
  const FunctionSpace *space_;
  const AssembledOperators *ops_;
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// Raw supremizers, one column per pressure mode, before orthonormalisation.
Mat compute_supremizers(const FunctionSpace &space, const AssembledOperators &ops,
                        const Mat &pressure_modes);

// Two-pass classical Gram-Schmidt of v against X-orthonormal columns of Q.
// Returns ||v_out|| / ||v_in|| in the X norm and normalises v unless the
// ratio is below reject_ratio (v is then left unnormalised).
double gram_schmidt(Vec &v, const Mat &Q, const SpMat &X, double reject_ratio = 1e-10);

enum class BasisKind
{
  Velocity,
  Pressure,
  Supremizer,
};

const char *to_string(BasisKind k);

//
// Block basis in the coupled layout: velocity modes [phi_u, 0], pressure
// modes [0, phi_p], supremizers [sigma, 0]. Greedy enrichment appends further
// (velocity, pressure, supremizer) triplets.
//
struct ReducedBasis
{
  int n_u = 0;
  int n_p = 0;
  Mat columns;  // (n_u + n_p) x N
  std::vector<BasisKind> kinds;

  int size() const { return static_cast<int>(kinds.size()); }
  int count(BasisKind k) const;
  bool carries_velocity(int j) const { return kinds[j] != BasisKind::Pressure; }
  // Velocity parts of all velocity-carrying columns, in column order.
  Mat velocity_block() const;
  // Pressure parts of the pressure columns.
  Mat pressure_block() const;
  void append(const Vec &column, BasisKind kind);
};

int basis_count(int n_velocity_modes, int n_pressure_modes);

struct PodResult
{
  GramianPair gramians;
  Spectrum velocity_spectrum;
  Spectrum pressure_spectrum;
  int n_velocity_modes = 0;
  int n_pressure_modes = 0;
  ReducedBasis basis;
};

// Gramians -> spectra -> truncation (same tol for both fields) -> modes ->
// supremizers -> orthonormalisation of the supremizers against the velocity block.
PodResult build_basis(const SnapshotSet &snapshots, const FunctionSpace &space,
                      const AssembledOperators &ops, double tol);

}  // namespace rfsi

#endif  // RFSI_POD_HPP
