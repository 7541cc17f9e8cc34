#include "rfsi/fem.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>

namespace rfsi
{

namespace
{

constexpr std::array<std::array<int, 2>, 3> kLocalEdges = {{{0, 1}, {1, 2}, {2, 0}}};

// Degree 5 covers every volume form below: mass (4), convection (5).
constexpr int kVolumeDegree = 5;
constexpr int kEdgePoints = 3;

struct P2Eval
{
  double phi[6];
  Point grad[6];
  double weight;  // includes the element area
  Point x;
};

std::vector<P2Eval> evaluate_element(const TriangleRule &rule, const ElementGeometry &g)
{
  std::vector<P2Eval> out(rule.points.size());
  for (std::size_t q = 0; q < rule.points.size(); ++q)
  {
    const auto &lam = rule.points[q];
    p2_values(lam, out[q].phi);
    p2_gradients(lam, g, out[q].grad);
    out[q].weight = rule.weights[q] * g.area;
    out[q].x = {lam[0] * g.v[0].x + lam[1] * g.v[1].x + lam[2] * g.v[2].x,
                lam[0] * g.v[0].y + lam[1] * g.v[1].y + lam[2] * g.v[2].y};
  }
  return out;
}

// Nodes of a boundary edge in (start, mid, end) order.
std::array<int, 3> edge_nodes(const FunctionSpace &space, int bi)
{
  const auto &e = space.mesh().boundary_edges[bi];
  return {e.v[0], space.edge_midpoint(bi), e.v[1]};
}

SpMat from_triplets(int rows, int cols, const std::vector<Triplet> &trip)
{
  SpMat A(rows, cols);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  return A;
}

}  // namespace

FunctionSpace::FunctionSpace(Mesh mesh) : mesh_(std::move(mesh))
{
  nodes_ = mesh_.vertices;
  element_nodes_.resize(mesh_.triangles.size());
  std::map<std::pair<int, int>, int> mid;
  for (int t = 0; t < mesh_.n_triangles(); ++t)
  {
    const auto &tri = mesh_.triangles[t];
    auto &en = element_nodes_[t];
    for (int k = 0; k < 3; ++k)
      en[k] = tri[k];
    for (int e = 0; e < 3; ++e)
    {
      int a = tri[kLocalEdges[e][0]], b = tri[kLocalEdges[e][1]];
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it == mid.end())
      {
        const Point &pa = mesh_.vertices[a], &pb = mesh_.vertices[b];
        nodes_.push_back({0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)});
        it = mid.emplace(key, static_cast<int>(nodes_.size()) - 1).first;
      }
      en[3 + e] = it->second;
    }
  }

  is_dirichlet_.assign(n_u(), 0);
  is_wall_.assign(n_u(), 0);
  boundary_mid_.resize(mesh_.boundary_edges.size());
  for (std::size_t i = 0; i < mesh_.boundary_edges.size(); ++i)
  {
    const auto &e = mesh_.boundary_edges[i];
    boundary_mid_[i] = mid.at(std::minmax(e.v[0], e.v[1]));
    for (int node : {e.v[0], boundary_mid_[i], e.v[1]})
    {
      for (int c = 0; c < 2; ++c)
      {
        if (e.tag == BoundaryTag::DirichletInlet)
          is_dirichlet_[vdof(node, c)] = 1;
        if (e.tag == BoundaryTag::RobinWall)
          is_wall_[vdof(node, c)] = 1;
      }
    }
  }
  for (int i = 0; i < n_u(); ++i)
  {
    if (is_dirichlet_[i])
      dirichlet_dofs_.push_back(i);
    else
      free_dofs_.push_back(i);
    if (is_wall_[i])
      wall_dofs_.push_back(i);
  }
}

void PhysicalParams::validate() const
{
  const double v[] = {rho_f, rho_s, mu, h_s, lambda_s, mu_s, dt};
  for (double x : v)
    if (!(x > 0.0) || !std::isfinite(x))
      throw InvalidArgument("physical parameters must be finite and strictly positive");
}

VectorField poiseuille_profile(double peak_velocity, double height)
{
  return [peak_velocity, height](const Point &p) -> Point
  { return {4.0 * peak_velocity * p.y * (height - p.y) / (height * height), 0.0}; };
}

ElementGeometry element_geometry(const Mesh &mesh, int t)
{
  ElementGeometry g;
  const auto &tri = mesh.triangles[t];
  for (int k = 0; k < 3; ++k)
    g.v[k] = mesh.vertices[tri[k]];
  const double det = (g.v[1].x - g.v[0].x) * (g.v[2].y - g.v[0].y) -
                     (g.v[2].x - g.v[0].x) * (g.v[1].y - g.v[0].y);
  if (!(det > 0.0))
    throw NumericalError("assembly: degenerate or inverted triangle " + std::to_string(t));
  g.area = 0.5 * det;
  g.grad_lambda[0] = {(g.v[1].y - g.v[2].y) / det, (g.v[2].x - g.v[1].x) / det};
  g.grad_lambda[1] = {(g.v[2].y - g.v[0].y) / det, (g.v[0].x - g.v[2].x) / det};
  g.grad_lambda[2] = {(g.v[0].y - g.v[1].y) / det, (g.v[1].x - g.v[0].x) / det};
  return g;
}

void p2_values(const std::array<double, 3> &l, double out[6])
{
  for (int i = 0; i < 3; ++i)
    out[i] = l[i] * (2.0 * l[i] - 1.0);
  for (int e = 0; e < 3; ++e)
    out[3 + e] = 4.0 * l[kLocalEdges[e][0]] * l[kLocalEdges[e][1]];
}

void p2_gradients(const std::array<double, 3> &l, const ElementGeometry &g, Point out[6])
{
  for (int i = 0; i < 3; ++i)
  {
    const double f = 4.0 * l[i] - 1.0;
    out[i] = {f * g.grad_lambda[i].x, f * g.grad_lambda[i].y};
  }
  for (int e = 0; e < 3; ++e)
  {
    const int a = kLocalEdges[e][0], b = kLocalEdges[e][1];
    out[3 + e] = {4.0 * (l[a] * g.grad_lambda[b].x + l[b] * g.grad_lambda[a].x),
                  4.0 * (l[a] * g.grad_lambda[b].y + l[b] * g.grad_lambda[a].y)};
  }
}

void edge_p2_values(double s, double out[3])
{
  out[0] = (1.0 - s) * (1.0 - 2.0 * s);
  out[1] = 4.0 * s * (1.0 - s);
  out[2] = s * (2.0 * s - 1.0);
}

void edge_p2_derivatives(double s, double out[3])
{
  out[0] = 4.0 * s - 3.0;
  out[1] = 4.0 - 8.0 * s;
  out[2] = 4.0 * s - 1.0;
}

AssembledOperators assemble_constant_operators(const FunctionSpace &space,
                                               const PhysicalParams &params,
                                               const BoundaryData &data)
{
  params.validate();
  const Mesh &mesh = space.mesh();
  const int nu = space.n_u(), np = space.n_p();
  const TriangleRule rule = triangle_rule(kVolumeDegree);

  std::vector<Triplet> tm, tk, tb, th, tp;
  for (int t = 0; t < mesh.n_triangles(); ++t)
  {
    const ElementGeometry g = element_geometry(mesh, t);
    const auto qp = evaluate_element(rule, g);
    const auto &en = space.element_nodes(t);
    const auto &tri = mesh.triangles[t];
    double me[6][6] = {}, ge[6][6] = {};
    double ke[12][12] = {}, be[3][12] = {}, pe[3][3] = {};
    for (const auto &q : qp)
    {
      for (int a = 0; a < 6; ++a)
      {
        for (int b = 0; b < 6; ++b)
        {
          const double gg = q.grad[a].x * q.grad[b].x + q.grad[a].y * q.grad[b].y;
          me[b][a] += q.weight * q.phi[a] * q.phi[b];
          ge[b][a] += q.weight * gg;
          const double da[2] = {q.grad[a].x, q.grad[a].y};
          const double db[2] = {q.grad[b].x, q.grad[b].y};
          for (int c = 0; c < 2; ++c)
            for (int d = 0; d < 2; ++d)
              ke[2 * b + d][2 * a + c] +=
                  q.weight * params.mu * ((c == d ? gg : 0.0) + da[d] * db[c]);
        }
      }
    }
    // P1 pressure: barycentric coordinates at the same points.
    for (std::size_t iq = 0; iq < rule.points.size(); ++iq)
    {
      const auto &lam = rule.points[iq];
      const double w = rule.weights[iq] * g.area;
      Point grad[6];
      p2_gradients(lam, g, grad);
      for (int k = 0; k < 3; ++k)
      {
        for (int a = 0; a < 6; ++a)
        {
          be[k][2 * a] += w * lam[k] * grad[a].x;
          be[k][2 * a + 1] += w * lam[k] * grad[a].y;
        }
        for (int l = 0; l < 3; ++l)
          pe[k][l] += w * lam[k] * lam[l];
      }
    }
    for (int a = 0; a < 6; ++a)
    {
      for (int b = 0; b < 6; ++b)
      {
        for (int c = 0; c < 2; ++c)
        {
          const int ra = FunctionSpace::vdof(en[b], c), ca = FunctionSpace::vdof(en[a], c);
          tm.emplace_back(ra, ca, me[b][a]);
          th.emplace_back(ra, ca, me[b][a] + ge[b][a]);
        }
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d)
            tk.emplace_back(FunctionSpace::vdof(en[b], d), FunctionSpace::vdof(en[a], c),
                            ke[2 * b + d][2 * a + c]);
      }
    }
    for (int k = 0; k < 3; ++k)
    {
      for (int a = 0; a < 6; ++a)
        for (int c = 0; c < 2; ++c)
          tb.emplace_back(tri[k], FunctionSpace::vdof(en[a], c), be[k][2 * a + c]);
      for (int l = 0; l < 3; ++l)
        tp.emplace_back(tri[k], tri[l], pe[k][l]);
    }
  }

  // Wall terms.
  const LineRule line = gauss_line(kEdgePoints);
  std::vector<Triplet> tmg, tkg;
  for (std::size_t bi = 0; bi < mesh.boundary_edges.size(); ++bi)
  {
    const auto &e = mesh.boundary_edges[bi];
    if (e.tag != BoundaryTag::RobinWall)
      continue;
    const double len = edge_length(mesh, e);
    const Point tan = edge_tangent(mesh, e);
    const double tv[2] = {tan.x, tan.y};
    const auto nodes = edge_nodes(space, static_cast<int>(bi));
    for (std::size_t q = 0; q < line.points.size(); ++q)
    {
      double phi[3], dphi[3];
      edge_p2_values(line.points[q], phi);
      edge_p2_derivatives(line.points[q], dphi);
      const double w = line.weights[q] * len;
      for (int a = 0; a < 3; ++a)
      {
        for (int b = 0; b < 3; ++b)
        {
          const double ds = dphi[a] * dphi[b] / (len * len);
          for (int c = 0; c < 2; ++c)
          {
            const int r = FunctionSpace::vdof(nodes[b], c), col = FunctionSpace::vdof(nodes[a], c);
            tmg.emplace_back(r, col, w * phi[a] * phi[b]);
            th.emplace_back(r, col, w * (phi[a] * phi[b] + ds));
          }
          for (int c = 0; c < 2; ++c)
            for (int d = 0; d < 2; ++d)
              tkg.emplace_back(FunctionSpace::vdof(nodes[b], d), FunctionSpace::vdof(nodes[a], c),
                               w * params.h_s * ds *
                                   (params.lambda_s * (c == d ? 1.0 : 0.0) +
                                    (params.lambda_s + params.mu_s) * tv[c] * tv[d]));
        }
      }
    }
  }

  AssembledOperators ops;
  ops.M_f = from_triplets(nu, nu, tm);
  ops.K_visc = from_triplets(nu, nu, tk);
  ops.B = from_triplets(np, nu, tb);
  ops.M_Gamma = from_triplets(nu, nu, tmg);
  ops.K_Gamma = from_triplets(nu, nu, tkg);
  ops.X_u = from_triplets(nu, nu, th);
  ops.X_p = from_triplets(np, np, tp);

  ops.lift = Vec::Zero(nu);
  for (int dof : space.dirichlet_dofs())
  {
    const int node = dof / 2;
    const Point g = data.g_D_profile(space.nodes()[node]);
    ops.lift[dof] = (dof % 2 == 0) ? g.x : g.y;
  }
  ops.f_N = assemble_boundary_load(space, BoundaryTag::NeumannOutlet, data.g_N_profile);
  return ops;
}

SpMat assemble_convection(const FunctionSpace &space, const Vec &w)
{
  if (w.size() != space.n_u())
    throw InvalidArgument("assemble_convection: advection field has " + std::to_string(w.size()) +
                          " entries, expected " + std::to_string(space.n_u()));
  const Mesh &mesh = space.mesh();
  const TriangleRule rule = triangle_rule(kVolumeDegree);
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 72);
  for (int t = 0; t < mesh.n_triangles(); ++t)
  {
    const ElementGeometry g = element_geometry(mesh, t);
    const auto qp = evaluate_element(rule, g);
    const auto &en = space.element_nodes(t);
    double ce[6][6] = {};
    for (const auto &q : qp)
    {
      double wx = 0.0, wy = 0.0;
      for (int a = 0; a < 6; ++a)
      {
        wx += w[FunctionSpace::vdof(en[a], 0)] * q.phi[a];
        wy += w[FunctionSpace::vdof(en[a], 1)] * q.phi[a];
      }
      for (int a = 0; a < 6; ++a)
      {
        const double adv = wx * q.grad[a].x + wy * q.grad[a].y;
        for (int b = 0; b < 6; ++b)
          ce[b][a] += q.weight * adv * q.phi[b];
      }
    }
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        for (int c = 0; c < 2; ++c)
          trip.emplace_back(FunctionSpace::vdof(en[b], c), FunctionSpace::vdof(en[a], c), ce[b][a]);
  }
  return from_triplets(space.n_u(), space.n_u(), trip);
}

SpMat assemble_h1_gram(const FunctionSpace &space)
{
  const Mesh &mesh = space.mesh();
  const TriangleRule rule = triangle_rule(kVolumeDegree);
  std::vector<Triplet> trip;
  for (int t = 0; t < mesh.n_triangles(); ++t)
  {
    const ElementGeometry g = element_geometry(mesh, t);
    const auto qp = evaluate_element(rule, g);
    const auto &en = space.element_nodes(t);
    for (int a = 0; a < 6; ++a)
    {
      for (int b = 0; b < 6; ++b)
      {
        double v = 0.0;
        for (const auto &q : qp)
          v += q.weight * (q.phi[a] * q.phi[b] + q.grad[a].x * q.grad[b].x +
                           q.grad[a].y * q.grad[b].y);
        for (int c = 0; c < 2; ++c)
          trip.emplace_back(FunctionSpace::vdof(en[b], c), FunctionSpace::vdof(en[a], c), v);
      }
    }
  }
  return from_triplets(space.n_u(), space.n_u(), trip);
}

Vec assemble_body_force(const FunctionSpace &space, const VectorField &f)
{
  const Mesh &mesh = space.mesh();
  const TriangleRule rule = triangle_rule(8);
  Vec out = Vec::Zero(space.n_u());
  for (int t = 0; t < mesh.n_triangles(); ++t)
  {
    const ElementGeometry g = element_geometry(mesh, t);
    const auto qp = evaluate_element(rule, g);
    const auto &en = space.element_nodes(t);
    for (const auto &q : qp)
    {
      const Point fv = f(q.x);
      for (int a = 0; a < 6; ++a)
      {
        out[FunctionSpace::vdof(en[a], 0)] += q.weight * fv.x * q.phi[a];
        out[FunctionSpace::vdof(en[a], 1)] += q.weight * fv.y * q.phi[a];
      }
    }
  }
  return out;
}

Vec assemble_boundary_load(const FunctionSpace &space, BoundaryTag tag, const VectorField &g)
{
  const Mesh &mesh = space.mesh();
  const LineRule line = gauss_line(5);
  Vec out = Vec::Zero(space.n_u());
  for (std::size_t bi = 0; bi < mesh.boundary_edges.size(); ++bi)
  {
    const auto &e = mesh.boundary_edges[bi];
    if (e.tag != tag)
      continue;
    const double len = edge_length(mesh, e);
    const Point &pa = mesh.vertices[e.v[0]], &pb = mesh.vertices[e.v[1]];
    const auto nodes = edge_nodes(space, static_cast<int>(bi));
    for (std::size_t q = 0; q < line.points.size(); ++q)
    {
      const double s = line.points[q];
      const Point x = {pa.x + s * (pb.x - pa.x), pa.y + s * (pb.y - pa.y)};
      const Point gv = g(x);
      double phi[3];
      edge_p2_values(s, phi);
      const double w = line.weights[q] * len;
      for (int a = 0; a < 3; ++a)
      {
        out[FunctionSpace::vdof(nodes[a], 0)] += w * gv.x * phi[a];
        out[FunctionSpace::vdof(nodes[a], 1)] += w * gv.y * phi[a];
      }
    }
  }
  return out;
}

double velocity_norm(const SpMat &X_u, const Vec &u)
{
  if (X_u.cols() != u.size())
    throw InvalidArgument("velocity_norm: dimension mismatch");
  return std::sqrt(std::max(0.0, u.dot(X_u * u)));
}

double pressure_norm(const SpMat &X_p, const Vec &p)
{
  if (X_p.cols() != p.size())
    throw InvalidArgument("pressure_norm: dimension mismatch");
  return std::sqrt(std::max(0.0, p.dot(X_p * p)));
}

Vec supremizer_rhs(const SpMat &B, const Vec &p)
{
  if (B.rows() != p.size())
    throw InvalidArgument("supremizer_rhs: pressure vector has wrong size");
  return B.transpose() * p;
}

Vec interpolate_velocity(const FunctionSpace &space, const VectorField &f)
{
  Vec u(space.n_u());
  for (int n = 0; n < space.n_nodes(); ++n)
  {
    const Point v = f(space.nodes()[n]);
    u[FunctionSpace::vdof(n, 0)] = v.x;
    u[FunctionSpace::vdof(n, 1)] = v.y;
  }
  return u;
}

Vec interpolate_pressure(const FunctionSpace &space, const std::function<double(const Point &)> &f)
{
  Vec p(space.n_p());
  for (int v = 0; v < space.n_p(); ++v)
    p[v] = f(space.mesh().vertices[v]);
  return p;
}

SpMat embed_velocity_block(const SpMat &A, int n_total)
{
  SpMat out(n_total, n_total);
  std::vector<Triplet> trip;
  trip.reserve(A.nonZeros());
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it)
      trip.emplace_back(it.row(), it.col(), it.value());
  out.setFromTriplets(trip.begin(), trip.end());
  out.makeCompressed();
  return out;
}

Vec join(const Vec &u, const Vec &p)
{
  Vec out(u.size() + p.size());
  out << u, p;
  return out;
}

SpMat constrain_homogeneous(const SpMat &A, const FunctionSpace &space)
{
  SpMat out = A;
  for (int k = 0; k < out.outerSize(); ++k)
  {
    for (SpMat::InnerIterator it(out, k); it; ++it)
    {
      const bool rd = it.row() < space.n_u() && space.is_dirichlet(static_cast<int>(it.row()));
      const bool cd = it.col() < space.n_u() && space.is_dirichlet(static_cast<int>(it.col()));
      if (rd || cd)
        it.valueRef() = (it.row() == it.col()) ? 1.0 : 0.0;
    }
  }
  return out;
}

void write_triplets(std::ostream &os, const SpMat &A)
{
  char buf[96];
  for (int k = 0; k < A.outerSize(); ++k)
  {
    for (SpMat::InnerIterator it(A, k); it; ++it)
    {
      std::snprintf(buf, sizeof(buf), "%lld %lld %.17g\n", static_cast<long long>(it.row()),
                    static_cast<long long>(it.col()), it.value());
      os << buf;
    }
  }
}

ErrorNorms discretization_errors(const FunctionSpace &space, const Vec &u, const Vec &p,
                                 const VectorField &u_exact, const TensorField &grad_exact,
                                 const std::function<double(const Point &)> &p_exact, int degree)
{
  const Mesh &mesh = space.mesh();
  const TriangleRule rule = triangle_rule(degree);
  ErrorNorms e;
  for (int t = 0; t < mesh.n_triangles(); ++t)
  {
    const ElementGeometry g = element_geometry(mesh, t);
    const auto qp = evaluate_element(rule, g);
    const auto &en = space.element_nodes(t);
    const auto &tri = mesh.triangles[t];
    for (std::size_t iq = 0; iq < qp.size(); ++iq)
    {
      const auto &q = qp[iq];
      double uh[2] = {0.0, 0.0}, gh[4] = {0.0, 0.0, 0.0, 0.0};
      for (int a = 0; a < 6; ++a)
      {
        for (int c = 0; c < 2; ++c)
        {
          const double coef = u[FunctionSpace::vdof(en[a], c)];
          uh[c] += coef * q.phi[a];
          gh[2 * c] += coef * q.grad[a].x;
          gh[2 * c + 1] += coef * q.grad[a].y;
        }
      }
      const auto &lam = rule.points[iq];
      const double ph = lam[0] * p[tri[0]] + lam[1] * p[tri[1]] + lam[2] * p[tri[2]];
      const Point ue = u_exact(q.x);
      const auto ge = grad_exact(q.x);
      e.velocity_l2 += q.weight * ((uh[0] - ue.x) * (uh[0] - ue.x) + (uh[1] - ue.y) * (uh[1] - ue.y));
      for (int k = 0; k < 4; ++k)
        e.velocity_h1_semi += q.weight * (gh[k] - ge[k]) * (gh[k] - ge[k]);
      const double dp = ph - p_exact(q.x);
      e.pressure_l2 += q.weight * dp * dp;
    }
  }
  e.velocity_l2 = std::sqrt(e.velocity_l2);
  e.velocity_h1_semi = std::sqrt(e.velocity_h1_semi);
  e.pressure_l2 = std::sqrt(e.pressure_l2);
  return e;
}

}  // namespace rfsi
