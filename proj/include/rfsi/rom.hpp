#ifndef RFSI_ROM_HPP
#define RFSI_ROM_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "rfsi/affine.hpp"
#include "rfsi/hifi.hpp"
#include "rfsi/pod.hpp"
#include "rfsi/types.hpp"

namespace rfsi
{

// One linear-in-coefficients piece of the full residual r = F - A U.
struct RieszTerm
{
  enum class Kind
  {
    Neumann,       // f_N                        [e1]
    MassLift,      // M_prev L                   [e2]
    A0Lift,        // A0 L                       [-e0]
    ConvLiftLift,  // rho C(L) L                 [-e0 e2]
    Mass,          // M_prev psi_k               [c_k]
    ConvPsiLift,   // rho C(psi_k) L             [-e0 c_k]
    Displacement,  // K_Gamma psi_k              [-D_k]
    ConvLiftPsi,   // rho C(L) psi_k             [-e2 c'_k]
    A0Psi,         // A0 psi_k                   [-c'_k]
    ConvPsiPsi,    // rho C(psi_j) psi_k         [-c_j c'_k]
  };
  Kind kind;
  int j = -1;
  int k = -1;
};

// Wall displacement present at the start of a reduced trajectory, kept in
// the full space: d^n = d_0 + Psi_u D^n on the wall.
struct DisplacementOffset
{
  Vec d;             // d_0, full velocity layout
  Vec load_r;        // Psi^T K_Gamma d_0
  Vec w;             // representer of K_Gamma d_0, in the (possibly compressed) Riesz frame
  double perp = 0.0; // part of that representer outside the compressed frame
};

struct ReducedState
{
  Vec c;  // coefficients of u~ and p
  Vec D;  // displacement accumulator
  std::shared_ptr<const DisplacementOffset> offset;  // null means d_0 = 0
  double t = 0.0;
  int n = 0;
};

//
// Galerkin projection of the affine time step onto a block basis, with the
// residual Riesz representers needed for online dual norms. Columns can be
// appended (greedy enrichment); only the new cross terms are then computed.
//
class ReducedModel
{
public:
  ReducedModel(std::shared_ptr<const HifiModel> hifi, const ReducedBasis &basis);

  const HifiModel &hifi() const { return *hifi_; }
  const ReducedBasis &basis() const { return basis_; }
  int size() const { return basis_.size(); }

  void append(const Vec &column, BasisKind kind);

  Mat matrix(const ParameterVector &mu, const Vec &c_prev) const;
  Vec load(const ParameterVector &mu, const Vec &c_prev, const Vec &D_prev,
           const DisplacementOffset *offset = nullptr) const;

  // Coefficients theta of the residual terms and the dual norm ||F theta||.
  Vec residual_coefficients(const ParameterVector &mu, const Vec &c_prev, const Vec &D_prev,
                            const Vec &c_new) const;
  double residual_dual_norm(const ParameterVector &mu, const Vec &c_prev, const Vec &D_prev,
                            const Vec &c_new, const DisplacementOffset *offset = nullptr) const;

  std::shared_ptr<const DisplacementOffset> make_offset(const Vec &d0) const;

  const std::vector<RieszTerm> &riesz_terms() const { return terms_; }
  // Gram matrix of the representers in the X inner product.
  Mat riesz_gram() const;
  bool riesz_compressed() const { return compressed_; }

  // Number of N x N convection blocks (one per velocity-carrying column).
  int n_convection_blocks() const;

  // Coefficients of the X-orthogonal projection of a coupled vector.
  Vec project(const Vec &coupled) const;
  Vec expand(const Vec &c) const { return basis_.columns * c; }
  Vec velocity(const Vec &c) const { return expand(c).head(basis_.n_u); }
  Vec pressure(const Vec &c) const { return expand(c).tail(basis_.n_p); }

  ReducedState zero_state() const;
  // Reduced initial state from a full (u~, p, d) state; d is carried exactly as an offset.
  ReducedState project_state(const Vec &u_tilde, const Vec &p, const Vec &d, double t, int n) const;

  void save(std::ostream &os) const;
  static ReducedModel load(std::istream &is, std::shared_ptr<const HifiModel> hifi);

  // Projected pieces, exposed for inspection and tests.
  const Mat &A0r() const { return A0r_; }
  const Mat &conv_lift_r() const { return CLr_; }
  const std::vector<Mat> &conv_r() const { return Cr_; }

private:
  ReducedModel() = default;
  void rebuild_projections();
  void add_riesz_terms_for(int m);
  Vec term_vector(const RieszTerm &t) const;
  Vec representer(const Vec &r) const;
  void recompress();

  std::shared_ptr<const HifiModel> hifi_;
  ReducedBasis basis_;

  SpMat CL_;                    // rho C(L), velocity block
  std::vector<SpMat> conv_;     // rho C(psi_k) per column (empty for pressure columns)
  SpMat M_prev_c_, K_Gamma_c_;  // embedded in the coupled layout
  SpMat CL_c_;
  Vec Lc_;
  Vec fN_c_, FuL_c_, A0L_c_, CLL_c_;

  Mat A0r_, CLr_, Mr_, KGr_, GLr_;
  std::vector<Mat> Cr_;
  Vec fNr_, FuLr_, A0Lr_, CLLr_;

  // Riesz machinery on free velocity dofs + pressure dofs.
  struct RieszSolver;
  std::shared_ptr<const RieszSolver> riesz_;
  std::vector<RieszTerm> terms_;
  Mat F_;  // L^{-1} P r_t, one column per term
  Mat R_;  // compressed factor when terms < rows
  Mat Qthin_;
  bool compressed_ = false;
};

// Dense reduced solve of one step; throws NumericalError when the reduced
// matrix is singular.
ReducedState step_reduced(const ReducedModel &model, const ReducedState &state,
                          const ParameterVector &mu);

// Full-space solve of one step whose advection field and loads come from the
// reduced previous state.
State step_intermediate(const ReducedModel &model, const ReducedState &prev,
                        const ParameterVector &mu);

struct ReducedTrajectory
{
  std::vector<ReducedState> states;  // state after each step
  std::vector<double> dual_norms;    // residual at each step (if requested)
};

// Projection of the snapshot set's initial state (start of the recorded window).
ReducedState initial_state(const ReducedModel &model, const SnapshotSet &snapshots);

ReducedTrajectory run_reduced(const ReducedModel &model, const ReducedState &initial, int n_steps,
                              double alpha, bool with_residuals);

constexpr std::uint32_t kArchiveVersion = 1;

}  // namespace rfsi

#endif  // RFSI_ROM_HPP
