#include "rfsi/rom.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SparseCholesky>

#include "json.hpp"
#include "rfsi/mesh.hpp"
#include "rfsi/snapshot_io.hpp"
#include "rfsi/sparse_util.hpp"

namespace rfsi
{

using json = nlohmann::json;

struct ReducedModel::RieszSolver
{
  std::vector<int> free;  // coupled dofs
  Eigen::SimplicialLLT<SpMat> llt;
};

namespace
{

SpMat block_diag(const SpMat &Xu, const SpMat &Xp)
{
  const int nu = static_cast<int>(Xu.rows()), np = static_cast<int>(Xp.rows());
  std::vector<Triplet> trip;
  trip.reserve(Xu.nonZeros() + Xp.nonZeros());
  for (int k = 0; k < Xu.outerSize(); ++k)
    for (SpMat::InnerIterator it(Xu, k); it; ++it)
      trip.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < Xp.outerSize(); ++k)
    for (SpMat::InnerIterator it(Xp, k); it; ++it)
      trip.emplace_back(nu + it.row(), nu + it.col(), it.value());
  SpMat X(nu + np, nu + np);
  X.setFromTriplets(trip.begin(), trip.end());
  X.makeCompressed();
  return X;
}

Vec pad(const Vec &u, int n)
{
  Vec out = Vec::Zero(n);
  out.head(u.size()) = u;
  return out;
}

const char *kind_name(RieszTerm::Kind k)
{
  switch (k)
  {
    case RieszTerm::Kind::Neumann:
      return "neumann";
    case RieszTerm::Kind::MassLift:
      return "mass_lift";
    case RieszTerm::Kind::A0Lift:
      return "a0_lift";
    case RieszTerm::Kind::ConvLiftLift:
      return "conv_lift_lift";
    case RieszTerm::Kind::Mass:
      return "mass";
    case RieszTerm::Kind::ConvPsiLift:
      return "conv_psi_lift";
    case RieszTerm::Kind::Displacement:
      return "displacement";
    case RieszTerm::Kind::ConvLiftPsi:
      return "conv_lift_psi";
    case RieszTerm::Kind::A0Psi:
      return "a0_psi";
    case RieszTerm::Kind::ConvPsiPsi:
      return "conv_psi_psi";
  }
  return "?";
}

RieszTerm::Kind kind_from_name(const std::string &s)
{
  for (int k = 0; k <= static_cast<int>(RieszTerm::Kind::ConvPsiPsi); ++k)
    if (s == kind_name(static_cast<RieszTerm::Kind>(k)))
      return static_cast<RieszTerm::Kind>(k);
  throw DataError("archive: unknown residual term '" + s + "'");
}

std::string fmt17(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ReducedModel::ReducedModel(std::shared_ptr<const HifiModel> hifi, const ReducedBasis &basis)
    : hifi_(std::move(hifi))
{
  if (basis.size() == 0)
    throw InvalidArgument("project: empty reduced basis");
  const HifiModel &h = *hifi_;
  if (basis.n_u != h.space.n_u() || basis.n_p != h.space.n_p())
    throw InvalidArgument("project: basis does not match the function space");

  const int nt = h.space.n_total();
  const double rho = h.params.rho_f;
  CL_ = rho * assemble_convection(h.space, h.sys.lift);
  M_prev_c_ = embed_velocity_block(h.sys.M_prev, nt);
  K_Gamma_c_ = embed_velocity_block(h.sys.K_Gamma, nt);
  CL_c_ = embed_velocity_block(CL_, nt);
  Lc_ = pad(h.sys.lift, nt);
  fN_c_ = pad(h.ops.f_N, nt);
  FuL_c_ = M_prev_c_ * Lc_;
  A0L_c_ = h.sys.A0 * Lc_;
  CLL_c_ = CL_c_ * Lc_;

  auto rs = std::make_shared<RieszSolver>();
  rs->free = coupled_free_dofs(h.space.free_velocity_dofs(), h.space.n_u(), h.space.n_p());
  rs->llt.compute(restrict_symmetric(block_diag(h.ops.X_u, h.ops.X_p), rs->free, nt));
  if (rs->llt.info() != Eigen::Success)
    throw NumericalError("project: X is not positive definite on the free dofs");
  riesz_ = std::move(rs);

  basis_.n_u = basis.n_u;
  basis_.n_p = basis.n_p;
  basis_.columns.resize(nt, 0);
  for (auto kind : {RieszTerm::Kind::Neumann, RieszTerm::Kind::MassLift, RieszTerm::Kind::A0Lift,
                    RieszTerm::Kind::ConvLiftLift})
    terms_.push_back({kind, -1, -1});
  F_.resize(static_cast<Eigen::Index>(riesz_->free.size()), 4);
  for (int q = 0; q < 4; ++q)
    F_.col(q) = representer(term_vector(terms_[q]));

  for (int j = 0; j < basis.size(); ++j)
  {
    basis_.append(basis.columns.col(j), basis.kinds[j]);
    const Vec vel = basis_.columns.col(j).head(basis_.n_u);
    conv_.push_back(basis_.carries_velocity(j) ? SpMat(rho * assemble_convection(h.space, vel)) : SpMat());
    add_riesz_terms_for(j);
  }
  rebuild_projections();
  recompress();
}

void ReducedModel::append(const Vec &column, BasisKind kind)
{
  const HifiModel &h = *hifi_;
  basis_.append(column, kind);
  const int m = size() - 1;
  conv_.push_back(basis_.carries_velocity(m)
                      ? SpMat(h.params.rho_f * assemble_convection(h.space, column.head(basis_.n_u)))
                      : SpMat());
  add_riesz_terms_for(m);
  rebuild_projections();
  recompress();
}

void ReducedModel::add_riesz_terms_for(int m)
{
  std::vector<RieszTerm> added;
  if (basis_.carries_velocity(m))
  {
    added.push_back({RieszTerm::Kind::Mass, -1, m});
    added.push_back({RieszTerm::Kind::ConvPsiLift, -1, m});
    added.push_back({RieszTerm::Kind::Displacement, -1, m});
    added.push_back({RieszTerm::Kind::ConvLiftPsi, -1, m});
  }
  added.push_back({RieszTerm::Kind::A0Psi, -1, m});
  if (basis_.carries_velocity(m))
  {
    // C(psi_j) psi_m for every advecting j <= m, and C(psi_m) psi_j for earlier j.
    for (int j = 0; j <= m; ++j)
    {
      if (!basis_.carries_velocity(j))
        continue;
      added.push_back({RieszTerm::Kind::ConvPsiPsi, j, m});
      if (j < m)
        added.push_back({RieszTerm::Kind::ConvPsiPsi, m, j});
    }
  }
  const Eigen::Index q0 = F_.cols();
  F_.conservativeResize(F_.rows(), q0 + static_cast<Eigen::Index>(added.size()));
  for (std::size_t i = 0; i < added.size(); ++i)
  {
    F_.col(q0 + static_cast<Eigen::Index>(i)) = representer(term_vector(added[i]));
    terms_.push_back(added[i]);
  }
}

Vec ReducedModel::term_vector(const RieszTerm &t) const
{
  const int nt = basis_.n_u + basis_.n_p;
  switch (t.kind)
  {
    case RieszTerm::Kind::Neumann:
      return fN_c_;
    case RieszTerm::Kind::MassLift:
      return FuL_c_;
    case RieszTerm::Kind::A0Lift:
      return A0L_c_;
    case RieszTerm::Kind::ConvLiftLift:
      return CLL_c_;
    case RieszTerm::Kind::Mass:
      return M_prev_c_ * basis_.columns.col(t.k);
    case RieszTerm::Kind::ConvPsiLift:
      return pad(conv_[t.k] * hifi_->sys.lift, nt);
    case RieszTerm::Kind::Displacement:
      return K_Gamma_c_ * basis_.columns.col(t.k);
    case RieszTerm::Kind::ConvLiftPsi:
      return CL_c_ * basis_.columns.col(t.k);
    case RieszTerm::Kind::A0Psi:
      return hifi_->sys.A0 * basis_.columns.col(t.k);
    case RieszTerm::Kind::ConvPsiPsi:
      return pad(conv_[t.j] * basis_.columns.col(t.k).head(basis_.n_u), nt);
  }
  return Vec::Zero(nt);
}

Vec ReducedModel::representer(const Vec &r) const
{
  const auto &free = riesz_->free;
  Vec rf(static_cast<Eigen::Index>(free.size()));
  for (std::size_t i = 0; i < free.size(); ++i)
    rf[static_cast<Eigen::Index>(i)] = r[free[i]];
  const Vec y = riesz_->llt.permutationP() * rf;
  return riesz_->llt.matrixL().solve(y);
}

void ReducedModel::recompress()
{
  const Eigen::Index q = F_.cols(), rows = F_.rows();
  compressed_ = q < rows;
  if (!compressed_)
  {
    R_.resize(0, 0);
    return;
  }
  Eigen::HouseholderQR<Mat> qr(F_);
  R_ = qr.matrixQR().topRows(q).triangularView<Eigen::Upper>();
  Qthin_ = qr.householderQ() * Mat::Identity(rows, q);
}

void ReducedModel::rebuild_projections()
{
  const HifiModel &h = *hifi_;
  const Mat &Psi = basis_.columns;
  const int N = size();
  A0r_ = Psi.transpose() * (h.sys.A0 * Psi);
  CLr_ = Psi.transpose() * (CL_c_ * Psi);
  Mr_ = Psi.transpose() * (M_prev_c_ * Psi);
  KGr_ = Psi.transpose() * (K_Gamma_c_ * Psi);
  fNr_ = Psi.transpose() * fN_c_;
  FuLr_ = Psi.transpose() * FuL_c_;
  A0Lr_ = Psi.transpose() * A0L_c_;
  CLLr_ = Psi.transpose() * CLL_c_;

  const Mat Psi_u = Psi.topRows(basis_.n_u);
  GLr_ = Mat::Zero(N, N);
  Cr_.assign(N, Mat());
  for (int k = 0; k < N; ++k)
  {
    if (!basis_.carries_velocity(k))
      continue;
    GLr_.col(k) = Psi_u.transpose() * (conv_[k] * h.sys.lift);
    Cr_[k] = Psi_u.transpose() * (conv_[k] * Psi_u);
  }
}

Mat ReducedModel::matrix(const ParameterVector &mu, const Vec &c_prev) const
{
  if (c_prev.size() != size())
    throw InvalidArgument("reduced matrix: coefficient vector has the wrong length");
  Mat A = A0r_ + mu.e2() * CLr_;
  for (int k = 0; k < size(); ++k)
    if (Cr_[k].size() != 0 && c_prev[k] != 0.0)
      A.noalias() += c_prev[k] * Cr_[k];
  return A;
}

Vec ReducedModel::load(const ParameterVector &mu, const Vec &c_prev, const Vec &D_prev,
                       const DisplacementOffset *offset) const
{
  if (c_prev.size() != size() || D_prev.size() != size())
    throw InvalidArgument("reduced load: coefficient vector has the wrong length");
  Vec b = mu.e1() * fNr_ + mu.e2() * FuLr_ - mu.e0() * A0Lr_ - mu.e0() * mu.e2() * CLLr_;
  b.noalias() += Mr_ * c_prev;
  b.noalias() -= mu.e0() * (GLr_ * c_prev);
  b.noalias() -= KGr_ * D_prev;
  if (offset)
    b -= offset->load_r;
  return b;
}

Vec ReducedModel::residual_coefficients(const ParameterVector &mu, const Vec &c_prev,
                                        const Vec &D_prev, const Vec &c_new) const
{
  Vec th(static_cast<Eigen::Index>(terms_.size()));
  for (std::size_t q = 0; q < terms_.size(); ++q)
  {
    const RieszTerm &t = terms_[q];
    double v = 0.0;
    switch (t.kind)
    {
      case RieszTerm::Kind::Neumann:
        v = mu.e1();
        break;
      case RieszTerm::Kind::MassLift:
        v = mu.e2();
        break;
      case RieszTerm::Kind::A0Lift:
        v = -mu.e0();
        break;
      case RieszTerm::Kind::ConvLiftLift:
        v = -mu.e0() * mu.e2();
        break;
      case RieszTerm::Kind::Mass:
        v = c_prev[t.k];
        break;
      case RieszTerm::Kind::ConvPsiLift:
        v = -mu.e0() * c_prev[t.k];
        break;
      case RieszTerm::Kind::Displacement:
        v = -D_prev[t.k];
        break;
      case RieszTerm::Kind::ConvLiftPsi:
        v = -mu.e2() * c_new[t.k];
        break;
      case RieszTerm::Kind::A0Psi:
        v = -c_new[t.k];
        break;
      case RieszTerm::Kind::ConvPsiPsi:
        v = -c_prev[t.j] * c_new[t.k];
        break;
    }
    th[static_cast<Eigen::Index>(q)] = v;
  }
  return th;
}

double ReducedModel::residual_dual_norm(const ParameterVector &mu, const Vec &c_prev,
                                        const Vec &D_prev, const Vec &c_new,
                                        const DisplacementOffset *offset) const
{
  if (c_prev.size() != size() || D_prev.size() != size() || c_new.size() != size())
    throw InvalidArgument("residual_dual_norm: coefficient vector has the wrong length");
  const Vec th = residual_coefficients(mu, c_prev, D_prev, c_new);
  Vec r = compressed_ ? Vec(R_.triangularView<Eigen::Upper>() * th) : Vec(F_ * th);
  if (!offset)
    return r.norm();
  if (offset->load_r.size() != size())
    throw InvalidArgument("residual_dual_norm: displacement offset built for another basis");
  r -= offset->w;
  return std::sqrt(r.squaredNorm() + offset->perp * offset->perp);
}

std::shared_ptr<const DisplacementOffset> ReducedModel::make_offset(const Vec &d0) const
{
  const HifiModel &h = *hifi_;
  if (d0.size() != h.space.n_u())
    throw InvalidArgument("make_offset: displacement has the wrong length");
  auto off = std::make_shared<DisplacementOffset>();
  off->d = Vec::Zero(d0.size());
  for (int dof : h.space.wall_dofs())
    off->d[dof] = d0[dof];
  const Vec r = h.sys.K_Gamma * off->d;
  const Vec rc = pad(r, h.space.n_total());
  off->load_r = basis_.columns.transpose() * rc;
  const Vec z = representer(rc);
  if (compressed_)
  {
    off->w = Qthin_.transpose() * z;
    off->perp = (z - Qthin_ * off->w).norm();
  }
  else
  {
    off->w = z;
  }
  return off;
}

Mat ReducedModel::riesz_gram() const { return F_.transpose() * F_; }

int ReducedModel::n_convection_blocks() const
{
  int n = 0;
  for (const auto &c : Cr_)
    n += c.size() > 0 ? 1 : 0;
  return n;
}

Vec ReducedModel::project(const Vec &coupled) const
{
  const HifiModel &h = *hifi_;
  const int nu = basis_.n_u;
  const Mat &Psi = basis_.columns;
  Vec Xw(coupled.size());
  Xw.head(nu) = h.ops.X_u * coupled.head(nu);
  Xw.tail(basis_.n_p) = h.ops.X_p * coupled.tail(basis_.n_p);
  Mat XPsi(Psi.rows(), Psi.cols());
  XPsi.topRows(nu) = h.ops.X_u * Psi.topRows(nu);
  XPsi.bottomRows(basis_.n_p) = h.ops.X_p * Psi.bottomRows(basis_.n_p);
  const Mat G = Psi.transpose() * XPsi;
  return G.ldlt().solve(Psi.transpose() * Xw);
}

ReducedState ReducedModel::zero_state() const
{
  ReducedState s;
  s.c = Vec::Zero(size());
  s.D = Vec::Zero(size());
  return s;
}

ReducedState ReducedModel::project_state(const Vec &u_tilde, const Vec &p, const Vec &d, double t,
                                         int n) const
{
  ReducedState s;
  s.c = project(join(u_tilde, p));
  s.D = Vec::Zero(size());
  if (d.size() != basis_.n_u)
    throw InvalidArgument("project_state: displacement has the wrong length");
  if (d.cwiseAbs().maxCoeff() > 0.0)
    s.offset = make_offset(d);
  s.t = t;
  s.n = n;
  return s;
}

void ReducedModel::save(std::ostream &os) const
{
  const HifiModel &h = *hifi_;
  json man;
  man["version"] = kArchiveVersion;
  man["n_u"] = basis_.n_u;
  man["n_p"] = basis_.n_p;
  man["mesh_hash"] = hex64(mesh_hash(h.space.mesh()));
  json kinds = json::array();
  for (auto k : basis_.kinds)
    kinds.push_back(to_string(k));
  man["kinds"] = kinds;
  json terms = json::array();
  for (const auto &t : terms_)
    terms.push_back({kind_name(t.kind), t.j, t.k});
  man["riesz_terms"] = terms;
  man["dt"] = fmt17(h.params.dt);
  man["blocks"] = {"basis", "A0r", "CLr", "Mr", "KGr", "GLr", "loads", "Cr", "riesz"};
  const std::string text = man.dump();

  os.write("ROMA", 4);
  const std::uint32_t ver = kArchiveVersion;
  os.write(reinterpret_cast<const char *>(&ver), sizeof(ver));
  const std::uint64_t len = text.size();
  os.write(reinterpret_cast<const char *>(&len), sizeof(len));
  os.write(text.data(), static_cast<std::streamsize>(text.size()));

  const int N = size();
  Mat loads(N, 4);
  loads << fNr_, FuLr_, A0Lr_, CLLr_;
  Mat Cr(N, static_cast<Eigen::Index>(N) * N);
  for (int k = 0; k < N; ++k)
    Cr.middleCols(static_cast<Eigen::Index>(k) * N, N) = Cr_[k].size() ? Cr_[k] : Mat::Zero(N, N);
  for (const Mat *m : std::initializer_list<const Mat *>{&basis_.columns, &A0r_, &CLr_, &Mr_, &KGr_, &GLr_, &loads, &Cr, &F_})
    write_snap(os, *m);
  if (!os)
    throw DataError("archive: write failed");
}

ReducedModel ReducedModel::load(std::istream &is, std::shared_ptr<const HifiModel> hifi)
{
  char magic[4] = {};
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "ROMA", 4) != 0)
    throw DataError("archive: bad magic");
  std::uint32_t ver = 0;
  is.read(reinterpret_cast<char *>(&ver), sizeof(ver));
  if (!is || ver != kArchiveVersion)
    throw DataError("archive: version " + std::to_string(ver) + " does not match supported version " +
                    std::to_string(kArchiveVersion));
  std::uint64_t len = 0;
  is.read(reinterpret_cast<char *>(&len), sizeof(len));
  if (!is || len > (1ull << 30))
    throw DataError("archive: bad manifest length");
  std::string text(len, '\0');
  is.read(text.data(), static_cast<std::streamsize>(len));
  if (!is)
    throw DataError("archive: truncated manifest");
  json man;
  try
  {
    man = json::parse(text);
  }
  catch (const json::exception &e)
  {
    throw DataError(std::string("archive: malformed manifest: ") + e.what());
  }
  if (man.value("version", 0u) != kArchiveVersion)
    throw DataError("archive: manifest version mismatch");

  const HifiModel &h = *hifi;
  if (man.at("n_u").get<int>() != h.space.n_u() || man.at("n_p").get<int>() != h.space.n_p() ||
      man.at("mesh_hash").get<std::string>() != hex64(mesh_hash(h.space.mesh())))
    throw DataError("archive: built for a different mesh or function space");

  ReducedModel m;
  m.hifi_ = hifi;
  const Mat basis = read_snap(is);
  m.A0r_ = read_snap(is);
  m.CLr_ = read_snap(is);
  m.Mr_ = read_snap(is);
  m.KGr_ = read_snap(is);
  m.GLr_ = read_snap(is);
  const Mat loads = read_snap(is);
  const Mat Cr = read_snap(is);
  m.F_ = read_snap(is);

  const auto &kinds = man.at("kinds");
  const int N = static_cast<int>(kinds.size());
  if (basis.cols() != N || basis.rows() != h.space.n_total() || m.A0r_.rows() != N ||
      loads.rows() != N || Cr.cols() != static_cast<Eigen::Index>(N) * N)
    throw DataError("archive: block dimensions disagree with the manifest");
  m.basis_.n_u = h.space.n_u();
  m.basis_.n_p = h.space.n_p();
  m.basis_.columns = basis;
  for (const auto &k : kinds)
  {
    const std::string s = k.get<std::string>();
    m.basis_.kinds.push_back(s == "pressure"     ? BasisKind::Pressure
                             : s == "supremizer" ? BasisKind::Supremizer
                                                 : BasisKind::Velocity);
  }
  for (const auto &t : man.at("riesz_terms"))
    m.terms_.push_back({kind_from_name(t.at(0).get<std::string>()), t.at(1).get<int>(), t.at(2).get<int>()});
  if (static_cast<Eigen::Index>(m.terms_.size()) != m.F_.cols())
    throw DataError("archive: residual term list disagrees with the representer block");
  m.fNr_ = loads.col(0);
  m.FuLr_ = loads.col(1);
  m.A0Lr_ = loads.col(2);
  m.CLLr_ = loads.col(3);
  m.Cr_.assign(N, Mat());
  for (int k = 0; k < N; ++k)
    if (m.basis_.carries_velocity(k))
      m.Cr_[k] = Cr.middleCols(static_cast<Eigen::Index>(k) * N, N);

  // Full-space helpers are recomputed; they are needed only for enrichment.
  const int nt = h.space.n_total();
  const double rho = h.params.rho_f;
  m.CL_ = rho * assemble_convection(h.space, h.sys.lift);
  m.M_prev_c_ = embed_velocity_block(h.sys.M_prev, nt);
  m.K_Gamma_c_ = embed_velocity_block(h.sys.K_Gamma, nt);
  m.CL_c_ = embed_velocity_block(m.CL_, nt);
  m.Lc_ = pad(h.sys.lift, nt);
  m.fN_c_ = pad(h.ops.f_N, nt);
  m.FuL_c_ = m.M_prev_c_ * m.Lc_;
  m.A0L_c_ = h.sys.A0 * m.Lc_;
  m.CLL_c_ = m.CL_c_ * m.Lc_;
  for (int k = 0; k < N; ++k)
    m.conv_.push_back(m.basis_.carries_velocity(k)
                          ? SpMat(rho * assemble_convection(h.space, basis.col(k).head(m.basis_.n_u)))
                          : SpMat());
  auto rs = std::make_shared<RieszSolver>();
  rs->free = coupled_free_dofs(h.space.free_velocity_dofs(), h.space.n_u(), h.space.n_p());
  rs->llt.compute(restrict_symmetric(block_diag(h.ops.X_u, h.ops.X_p), rs->free, nt));
  if (rs->llt.info() != Eigen::Success)
    throw NumericalError("archive: X is not positive definite on the free dofs");
  if (static_cast<std::size_t>(m.F_.rows()) != rs->free.size())
    throw DataError("archive: representer block has the wrong row count");
  m.riesz_ = std::move(rs);
  m.recompress();
  return m;
}

ReducedState step_reduced(const ReducedModel &model, const ReducedState &state,
                          const ParameterVector &mu)
{
  const Mat A = model.matrix(mu, state.c);
  const Vec b = model.load(mu, state.c, state.D, state.offset.get());
  Eigen::PartialPivLU<Mat> lu(A);
  const double rc = lu.rcond();
  if (!(rc > 1e-14))
    throw NumericalError("reduced step: reduced matrix is singular (rcond " + fmt17(rc) +
                         "); is the basis missing supremizers?");
  ReducedState next;
  next.c = lu.solve(b);
  next.D = state.D + model.hifi().params.dt * next.c;
  next.offset = state.offset;
  next.n = state.n + 1;
  next.t = next.n * model.hifi().params.dt;
  return next;
}

State step_intermediate(const ReducedModel &model, const ReducedState &prev, const ParameterVector &mu)
{
  const HifiModel &h = model.hifi();
  const Vec u_prev = model.velocity(prev.c);
  const Vec D_full = model.velocity(prev.D);
  Vec d_prev = Vec::Zero(h.space.n_u());
  for (int dof : h.space.wall_dofs())
    d_prev[dof] = D_full[dof] + (prev.offset ? prev.offset->d[dof] : 0.0);
  const Vec x = solve_step(h, mu, u_prev, d_prev);
  State s;
  s.u_tilde = x.head(h.space.n_u());
  s.p = x.tail(h.space.n_p());
  s.u = s.u_tilde + mu.e0() * h.sys.lift;
  s.d = advance_displacement(h, d_prev, s.u_tilde);
  s.n = prev.n + 1;
  s.t = s.n * h.params.dt;
  return s;
}

ReducedState initial_state(const ReducedModel &model, const SnapshotSet &snapshots)
{
  if (snapshots.initial_u.size() != model.basis().n_u)
    throw InvalidArgument("initial_state: snapshot set carries no initial state for this space");
  return model.project_state(snapshots.initial_u, snapshots.initial_p, snapshots.initial_d,
                             snapshots.warmup_steps * snapshots.dt, snapshots.warmup_steps);
}

ReducedTrajectory run_reduced(const ReducedModel &model, const ReducedState &initial, int n_steps,
                              double alpha, bool with_residuals)
{
  if (n_steps < 0)
    throw InvalidArgument("run_reduced: negative step count");
  const HifiModel &h = model.hifi();
  ReducedTrajectory traj;
  traj.states.reserve(static_cast<std::size_t>(n_steps));
  ReducedState s = initial;
  for (int i = 0; i < n_steps; ++i)
  {
    const ParameterVector mu = make_parameter(s.n, h.data, h.params.dt, alpha);
    ReducedState next = step_reduced(model, s, mu);
    if (with_residuals)
      traj.dual_norms.push_back(model.residual_dual_norm(mu, s.c, s.D, next.c, s.offset.get()));
    s = std::move(next);
    traj.states.push_back(s);
  }
  return traj;
}

}  // namespace rfsi
