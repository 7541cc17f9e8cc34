#ifndef RFSI_FEM_HPP
#define RFSI_FEM_HPP

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

#include "rfsi/mesh.hpp"
#include "rfsi/quadrature.hpp"
#include "rfsi/types.hpp"

namespace rfsi
{

//
// Taylor-Hood pair: continuous quadratic velocity (vertices + edge midpoints),
// continuous linear pressure (vertices). Velocity dofs are interleaved per node,
// dof = 2 * node + component. In the coupled system the pressure dofs follow
// the velocity dofs.
//
class FunctionSpace
{
public:
  explicit FunctionSpace(Mesh mesh);

  const Mesh &mesh() const { return mesh_; }

  int n_nodes() const { return static_cast<int>(nodes_.size()); }
  int n_u() const { return 2 * n_nodes(); }
  int n_p() const { return mesh_.n_vertices(); }
  int n_total() const { return n_u() + n_p(); }

  static int vdof(int node, int comp) { return 2 * node + comp; }

  const std::vector<Point> &nodes() const { return nodes_; }
  // Local node order: 3 vertices, then midpoints of (v0,v1), (v1,v2), (v2,v0).
  const std::array<int, 6> &element_nodes(int t) const { return element_nodes_[t]; }
  // Midpoint node of boundary edge i (same order as mesh.boundary_edges).
  int edge_midpoint(int boundary_edge) const { return boundary_mid_[boundary_edge]; }

  // Velocity dofs on the inlet (both components), sorted.
  const std::vector<int> &dirichlet_dofs() const { return dirichlet_dofs_; }
  bool is_dirichlet(int vdof) const { return is_dirichlet_[vdof] != 0; }
  // Velocity dofs carried by nodes that lie on a wall edge, sorted.
  const std::vector<int> &wall_dofs() const { return wall_dofs_; }
  bool is_wall(int vdof) const { return is_wall_[vdof] != 0; }

  // Velocity dofs with Dirichlet dofs removed, in increasing order.
  const std::vector<int> &free_velocity_dofs() const { return free_dofs_; }

private:
  Mesh mesh_;
  std::vector<Point> nodes_;
  std::vector<std::array<int, 6>> element_nodes_;
  std::vector<int> boundary_mid_;
  std::vector<int> dirichlet_dofs_, wall_dofs_, free_dofs_;
  std::vector<char> is_dirichlet_, is_wall_;
};

struct PhysicalParams
{
  double rho_f = 1.06;     // g/cm^3
  double rho_s = 1.1;      // g/cm^3
  double mu = 0.035;       // poise
  double h_s = 0.05;       // cm
  double lambda_s = 1e6;   // dyn/cm^2
  double mu_s = 1e6;       // dyn/cm^2
  double dt = 1e-3;        // s

  void validate() const;
};

using VectorField = std::function<Point(const Point &)>;
using Signal = std::function<double(double)>;

// Separable inlet / outlet data: g_D = sigma1(t) g_D_profile(x),
// g_N = sigma2(t) g_N_profile(x).
struct BoundaryData
{
  VectorField g_D_profile;  // cm/s
  Signal sigma1;
  VectorField g_N_profile;  // dyn/cm^2, traction
  Signal sigma2;
  double period = 0.8;      // s
};

// Parabolic inlet profile with the given peak velocity on a channel of height H.
VectorField poiseuille_profile(double peak_velocity, double height);

struct AssembledOperators
{
  SpMat M_f;      // velocity mass, unit density
  SpMat K_visc;   // 2 mu D(u):D(v)
  SpMat B;        // n_p x n_u, (q, div v)
  SpMat M_Gamma;  // wall mass, unit weight
  SpMat K_Gamma;  // h_s Pi_Gamma(u) : grad_Gamma v on the wall
  SpMat X_u;      // H1(Omega) + H1(Gamma) Gram matrix
  SpMat X_p;      // L2(Omega) pressure Gram matrix
  Vec lift;       // inlet profile at inlet nodes, zero elsewhere
  Vec f_N;        // (g_N_profile, v) on the outlet
};

struct ElementGeometry
{
  std::array<Point, 3> v;
  double area = 0.0;
  std::array<Point, 3> grad_lambda;
};

ElementGeometry element_geometry(const Mesh &mesh, int t);

void p2_values(const std::array<double, 3> &lam, double out[6]);
void p2_gradients(const std::array<double, 3> &lam, const ElementGeometry &g, Point out[6]);

// Quadratic trace on an edge parametrised by s in [0,1]: node order (start, mid, end).
void edge_p2_values(double s, double out[3]);
void edge_p2_derivatives(double s, double out[3]);  // d/ds

AssembledOperators assemble_constant_operators(const FunctionSpace &space,
                                               const PhysicalParams &params,
                                               const BoundaryData &data);

// Velocity-block matrix of (w . grad) u . v with unit density.
SpMat assemble_convection(const FunctionSpace &space, const Vec &advection);

// H1(Omega) Gram matrix alone (no wall contribution).
SpMat assemble_h1_gram(const FunctionSpace &space);

// Load vector (f, v) of a body force.
Vec assemble_body_force(const FunctionSpace &space, const VectorField &f);
// (g, v) on the boundary edges with the given tag.
Vec assemble_boundary_load(const FunctionSpace &space, BoundaryTag tag, const VectorField &g);

double velocity_norm(const SpMat &X_u, const Vec &u);
double pressure_norm(const SpMat &X_p, const Vec &p);

// Entries (p, div v) for every velocity basis function, i.e. B^T p.
Vec supremizer_rhs(const SpMat &B, const Vec &p);

Vec interpolate_velocity(const FunctionSpace &space, const VectorField &f);
Vec interpolate_pressure(const FunctionSpace &space, const std::function<double(const Point &)> &f);

// Embed velocity / pressure blocks into the coupled (n_u + n_p) layout.
SpMat embed_velocity_block(const SpMat &A, int n_total);
Vec join(const Vec &u, const Vec &p);

// Copy of a velocity-block matrix with Dirichlet rows and columns replaced by the identity.
SpMat constrain_homogeneous(const SpMat &A, const FunctionSpace &space);

// Coordinate triplet text export, 17 significant digits.
void write_triplets(std::ostream &os, const SpMat &A);

struct ErrorNorms
{
  double velocity_l2 = 0.0;
  double velocity_h1_semi = 0.0;
  double pressure_l2 = 0.0;
};

using TensorField = std::function<std::array<double, 4>(const Point &)>;  // du_i/dx_j row-major

ErrorNorms discretization_errors(const FunctionSpace &space, const Vec &u, const Vec &p,
                                 const VectorField &u_exact, const TensorField &grad_exact,
                                 const std::function<double(const Point &)> &p_exact,
                                 int degree = 8);

}  // namespace rfsi

#endif  // RFSI_FEM_HPP
