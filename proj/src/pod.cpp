#include "rfsi/pod.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "rfsi/sparse_util.hpp"

namespace rfsi
{

GramianPair compute_gramians(const Mat &U, const Mat &P, const SpMat &X_u, const SpMat &X_p)
{
  if (U.rows() != X_u.rows() || P.rows() != X_p.rows())
    throw InvalidArgument("compute_gramians: snapshot rows do not match the Gram matrices");
  if (U.cols() != P.cols())
    throw InvalidArgument("compute_gramians: velocity and pressure snapshot counts differ");
  GramianPair g;
  const Mat XU = X_u * U;
  const Mat XP = X_p * P;
  g.G_u = U.transpose() * XU;
  g.G_p = P.transpose() * XP;
  // Exact symmetry.
  g.G_u = 0.5 * (g.G_u + g.G_u.transpose()).eval();
  g.G_p = 0.5 * (g.G_p + g.G_p.transpose()).eval();
  return g;
}

Spectrum symmetric_spectrum(const Mat &G)
{
  if (G.rows() != G.cols())
    throw InvalidArgument("symmetric_spectrum: matrix is not square");
  Eigen::SelfAdjointEigenSolver<Mat> es(G);
  if (es.info() != Eigen::Success)
    throw NumericalError("symmetric_spectrum: eigensolver failed");
  const int n = static_cast<int>(G.rows());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const Vec &ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return ev[a] > ev[b]; });
  Spectrum s;
  s.values.resize(n);
  s.vectors.resize(n, n);
  for (int k = 0; k < n; ++k)
  {
    s.values[k] = ev[order[k]];
    s.vectors.col(k) = es.eigenvectors().col(order[k]);
  }
  return s;
}

int select_modes(const Vec &eigenvalues, double tol)
{
  if (!(tol >= 0.0 && tol < 1.0))
    throw InvalidArgument("select_modes: tol must lie in [0, 1)");
  const int n = static_cast<int>(eigenvalues.size());
  double total = 0.0;
  for (int k = 0; k < n; ++k)
    total += std::max(0.0, eigenvalues[k]);
  if (!(total > 0.0))
    throw InvalidArgument("select_modes: spectrum is identically zero");
  // tail[N] = sum_{k >= N} lambda_k, summed from the small end.
  std::vector<double> tail(n + 1, 0.0);
  for (int k = n - 1; k >= 0; --k)
    tail[k] = tail[k + 1] + std::max(0.0, eigenvalues[k]);
  for (int N = 0; N <= n; ++N)
    if (tail[N] <= tol * total)
      return N;
  return n;
}

Mat reconstruct_modes(const Mat &snapshots, const Spectrum &spectrum, int n_modes, const SpMat &X)
{
  if (n_modes < 0 || n_modes > snapshots.cols() || n_modes > spectrum.values.size())
    throw InvalidArgument("reconstruct_modes: requested more modes than snapshots");
  Mat modes(snapshots.rows(), n_modes);
  if (n_modes == 0)
    return modes;
  const double l1 = spectrum.values[0];
  for (int j = 0; j < n_modes; ++j)
  {
    const double lj = spectrum.values[j];
    if (!(lj > 1e-14 * l1))
      throw NumericalError("reconstruct_modes: eigenvalue " + std::to_string(j) +
                           " is degenerate relative to the largest");
    Vec phi = (snapshots * spectrum.vectors.col(j)) / lj;
    const double nrm = std::sqrt(phi.dot(X * phi));
    phi /= nrm;
    const double ratio = gram_schmidt(phi, modes.leftCols(j), X, 0.0);
    if (!(ratio > 1e-10))
      throw NumericalError("reconstruct_modes: mode " + std::to_string(j) +
                           " lost orthogonality beyond repair");
    modes.col(j) = phi;
  }
  return modes;
}

struct SupremizerSolver::Impl
{
  std::vector<int> free;
  Eigen::SimplicialLLT<SpMat> llt;
};

SupremizerSolver::SupremizerSolver(const FunctionSpace &space, const AssembledOperators &ops)
    : space_(&space), ops_(&ops)
{
  auto impl = std::make_shared<Impl>();
  impl->free = space.free_velocity_dofs();
  impl->llt.compute(restrict_symmetric(ops.X_u, impl->free, space.n_u()));
  if (impl->llt.info() != Eigen::Success)
    throw NumericalError("supremizer: X_u is not positive definite on free dofs");
  impl_ = std::move(impl);
}

Vec SupremizerSolver::solve_velocity_load(const Vec &rhs) const
{
  const auto &free = impl_->free;
  Vec r(free.size());
  for (std::size_t i = 0; i < free.size(); ++i)
    r[i] = rhs[free[i]];
  const Vec x = impl_->llt.solve(r);
  if (impl_->llt.info() != Eigen::Success)
    throw NumericalError("supremizer: Riesz solve failed");
  Vec out = Vec::Zero(space_->n_u());
  for (std::size_t i = 0; i < free.size(); ++i)
    out[free[i]] = x[i];
  return out;
}

Vec SupremizerSolver::solve(const Vec &pressure) const
{
  return solve_velocity_load(supremizer_rhs(ops_->B, pressure));
}

Mat compute_supremizers(const FunctionSpace &space, const AssembledOperators &ops,
                        const Mat &pressure_modes)
{
  const SupremizerSolver solver(space, ops);
  Mat out(space.n_u(), pressure_modes.cols());
  for (int j = 0; j < pressure_modes.cols(); ++j)
    out.col(j) = solver.solve(pressure_modes.col(j));
  return out;
}

double gram_schmidt(Vec &v, const Mat &Q, const SpMat &X, double reject_ratio)
{
  const double n0 = std::sqrt(std::max(0.0, v.dot(X * v)));
  if (!(n0 > 0.0))
    return 0.0;
  for (int pass = 0; pass < 2; ++pass)
  {
    if (Q.cols() == 0)
      break;
    const Vec coeffs = Q.transpose() * (X * v);
    v -= Q * coeffs;
  }
  const double n1 = std::sqrt(std::max(0.0, v.dot(X * v)));
  const double ratio = n1 / n0;
  if (ratio > reject_ratio && n1 > 0.0)
    v /= n1;
  return ratio;
}

const char *to_string(BasisKind k)
{
  switch (k)
  {
    case BasisKind::Velocity:
      return "velocity";
    case BasisKind::Pressure:
      return "pressure";
    case BasisKind::Supremizer:
      return "supremizer";
  }
  return "velocity";
}

int ReducedBasis::count(BasisKind k) const
{
  return static_cast<int>(std::count(kinds.begin(), kinds.end(), k));
}

Mat ReducedBasis::velocity_block() const
{
  Mat out(n_u, size() - count(BasisKind::Pressure));
  int c = 0;
  for (int j = 0; j < size(); ++j)
    if (carries_velocity(j))
      out.col(c++) = columns.col(j).head(n_u);
  return out;
}

Mat ReducedBasis::pressure_block() const
{
  Mat out(n_p, count(BasisKind::Pressure));
  int c = 0;
  for (int j = 0; j < size(); ++j)
    if (!carries_velocity(j))
      out.col(c++) = columns.col(j).tail(n_p);
  return out;
}

void ReducedBasis::append(const Vec &column, BasisKind kind)
{
  if (column.size() != n_u + n_p)
    throw InvalidArgument("ReducedBasis::append: column has the wrong length");
  columns.conservativeResize(n_u + n_p, size() + 1);
  columns.col(size()) = column;
  kinds.push_back(kind);
}

int basis_count(int n_velocity_modes, int n_pressure_modes)
{
  if (n_velocity_modes < 0 || n_pressure_modes < 0)
    throw InvalidArgument("basis_count: negative mode count");
  return n_velocity_modes + 2 * n_pressure_modes;
}

PodResult build_basis(const SnapshotSet &snapshots, const FunctionSpace &space,
                      const AssembledOperators &ops, double tol)
{
  if (snapshots.count() == 0)
    throw InvalidArgument("build_basis: empty snapshot set");
  PodResult out;
  out.gramians = compute_gramians(snapshots.u, snapshots.p, ops.X_u, ops.X_p);
  out.velocity_spectrum = symmetric_spectrum(out.gramians.G_u);
  out.pressure_spectrum = symmetric_spectrum(out.gramians.G_p);
  out.n_velocity_modes = select_modes(out.velocity_spectrum.values, tol);
  // A pressure-free snapshot set contributes no pressure modes.
  const double p_energy = out.pressure_spectrum.values.cwiseMax(0.0).sum();
  out.n_pressure_modes = p_energy > 0.0 ? select_modes(out.pressure_spectrum.values, tol) : 0;

  const Mat Pu = reconstruct_modes(snapshots.u, out.velocity_spectrum, out.n_velocity_modes, ops.X_u);
  const Mat Pp = reconstruct_modes(snapshots.p, out.pressure_spectrum, out.n_pressure_modes, ops.X_p);
  const Mat S = compute_supremizers(space, ops, Pp);

  ReducedBasis &b = out.basis;
  b.n_u = space.n_u();
  b.n_p = space.n_p();
  const int nt = b.n_u + b.n_p;
  for (int j = 0; j < Pu.cols(); ++j)
  {
    Vec c = Vec::Zero(nt);
    c.head(b.n_u) = Pu.col(j);
    b.append(c, BasisKind::Velocity);
  }
  for (int j = 0; j < Pp.cols(); ++j)
  {
    Vec c = Vec::Zero(nt);
    c.tail(b.n_p) = Pp.col(j);
    b.append(c, BasisKind::Pressure);
  }
  for (int j = 0; j < S.cols(); ++j)
  {
    Vec s = S.col(j);
    const double ratio = gram_schmidt(s, b.velocity_block(), ops.X_u);
    if (!(ratio > 1e-10))
      throw NumericalError("build_basis: supremizer " + std::to_string(j) +
                           " lies in the span of the velocity block");
    Vec c = Vec::Zero(nt);
    c.head(b.n_u) = s;
    b.append(c, BasisKind::Supremizer);
  }
  return out;
}

}  // namespace rfsi
