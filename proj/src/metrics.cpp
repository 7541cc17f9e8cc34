#include "rfsi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace rfsi
{

ErrorReport space_time_errors(const Mat &U_truth, const Mat &P_truth, const Mat &U_rom,
                              const Mat &P_rom, const std::vector<double> &times,
                              const std::vector<double> &dual_norms, const SpMat &X_u,
                              const SpMat &X_p)
{
  const auto ns = U_truth.cols();
  if (U_rom.cols() != ns || P_truth.cols() != ns || P_rom.cols() != ns ||
      static_cast<Eigen::Index>(times.size()) != ns)
    throw InvalidArgument("space_time_errors: trajectories do not share the same instants");
  if (U_truth.rows() != U_rom.rows() || P_truth.rows() != P_rom.rows())
    throw InvalidArgument("space_time_errors: dimension mismatch");
  ErrorReport r;
  r.times = times;
  r.dual_norms = dual_norms;
  for (Eigen::Index k = 0; k < ns; ++k)
  {
    const double nu = velocity_norm(X_u, U_truth.col(k));
    const double np = pressure_norm(X_p, P_truth.col(k));
    const double eu = velocity_norm(X_u, U_rom.col(k) - U_truth.col(k));
    const double ep = pressure_norm(X_p, P_rom.col(k) - P_truth.col(k));
    r.norm_u.push_back(nu);
    r.norm_p.push_back(np);
    r.err_u.push_back(eu);
    r.err_p.push_back(ep);
    r.eps_u.push_back(nu > 0.0 ? eu / nu : std::nan(""));
    r.eps_p.push_back(np > 0.0 ? ep / np : std::nan(""));
  }
  r.E_u = aggregate_error(r.err_u, r.norm_u);
  r.E_p = aggregate_error(r.err_p, r.norm_p);
  r.R_N = dual_norms.empty() ? 0.0 : aggregate_residual(dual_norms, r.norm_u, r.norm_p);
  return r;
}

double aggregate_error(const std::vector<double> &errors, const std::vector<double> &norms)
{
  double num = 0.0, den = 0.0;
  for (double e : errors)
    num += e * e;
  for (double n : norms)
    den += n * n;
  if (!(den > 0.0))
    throw InvalidArgument("undefined metric: reference solution is identically zero");
  return std::sqrt(num / den);
}

double aggregate_residual(const std::vector<double> &dual_norms, const std::vector<double> &norm_u,
                          const std::vector<double> &norm_p)
{
  if (dual_norms.empty() || norm_u.empty() || norm_u.size() != norm_p.size())
    throw InvalidArgument("aggregate_residual: empty or inconsistent inputs");
  double num = 0.0, den = 0.0;
  for (double r : dual_norms)
    num += r * r;
  for (std::size_t k = 0; k < norm_u.size(); ++k)
    den += norm_u[k] * norm_u[k] + norm_p[k] * norm_p[k];
  if (!(den > 0.0))
    throw InvalidArgument("undefined metric: reference solution is identically zero");
  const double ratio = static_cast<double>(norm_u.size()) / static_cast<double>(dual_norms.size());
  return std::sqrt(ratio) * std::sqrt(num) / std::sqrt(den);
}

double outlet_flow_rate(const FunctionSpace &space, const Vec &u)
{
  if (u.size() != space.n_u())
    throw InvalidArgument("outlet_flow_rate: velocity has the wrong length");
  const Mesh &mesh = space.mesh();
  const LineRule line = gauss_line(3);
  double q = 0.0;
  for (std::size_t bi = 0; bi < mesh.boundary_edges.size(); ++bi)
  {
    const auto &e = mesh.boundary_edges[bi];
    if (e.tag != BoundaryTag::NeumannOutlet)
      continue;
    const Point n = edge_normal(mesh, e);
    const double len = edge_length(mesh, e);
    const int nodes[3] = {e.v[0], space.edge_midpoint(static_cast<int>(bi)), e.v[1]};
    for (std::size_t k = 0; k < line.points.size(); ++k)
    {
      double phi[3];
      edge_p2_values(line.points[k], phi);
      double ux = 0.0, uy = 0.0;
      for (int a = 0; a < 3; ++a)
      {
        ux += phi[a] * u[FunctionSpace::vdof(nodes[a], 0)];
        uy += phi[a] * u[FunctionSpace::vdof(nodes[a], 1)];
      }
      q += line.weights[k] * len * (ux * n.x + uy * n.y);
    }
  }
  return q;
}

double wall_shear_stress(const FunctionSpace &space, double mu, const Vec &u, const Vec &p,
                         const WallArea &area)
{
  if (u.size() != space.n_u() || p.size() != space.n_p())
    throw InvalidArgument("wall_shear_stress: state has the wrong dimension");
  const Mesh &mesh = space.mesh();
  const LineRule line = gauss_line(4);
  double integral = 0.0, measure = 0.0;
  for (const auto &e : mesh.boundary_edges)
  {
    if (e.tag != BoundaryTag::RobinWall)
      continue;
    const Point &a = mesh.vertices[e.v[0]], &b = mesh.vertices[e.v[1]];
    const double xm = 0.5 * (a.x + b.x), ym = 0.5 * (a.y + b.y);
    const bool bottom = ym < 0.5 * mesh.height;
    if ((area.side == WallSide::Bottom && !bottom) || (area.side == WallSide::Top && bottom))
      continue;
    if (xm < area.x_min || xm > area.x_max)
      continue;

    const int t = e.triangle;
    const ElementGeometry g = element_geometry(mesh, t);
    const auto &en = space.element_nodes(t);
    const auto &tri = mesh.triangles[t];
    const Point n = edge_normal(mesh, e);
    const double len = edge_length(mesh, e);
    // Local vertices of the edge inside the triangle.
    const int la = e.local_edge, lb = (e.local_edge + 1) % 3;
    for (std::size_t k = 0; k < line.points.size(); ++k)
    {
      const double s = line.points[k];
      std::array<double, 3> lam = {0.0, 0.0, 0.0};
      lam[la] = 1.0 - s;
      lam[lb] = s;
      Point grad[6];
      p2_gradients(lam, g, grad);
      double G[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
      for (int i = 0; i < 6; ++i)
      {
        for (int c = 0; c < 2; ++c)
        {
          const double coef = u[FunctionSpace::vdof(en[i], c)];
          G[c][0] += coef * grad[i].x;
          G[c][1] += coef * grad[i].y;
        }
      }
      const double ph = lam[0] * p[tri[0]] + lam[1] * p[tri[1]] + lam[2] * p[tri[2]];
      const double S[2][2] = {{2.0 * mu * G[0][0] - ph, mu * (G[0][1] + G[1][0])},
                              {mu * (G[0][1] + G[1][0]), 2.0 * mu * G[1][1] - ph}};
      const double sn[2] = {S[0][0] * n.x + S[0][1] * n.y, S[1][0] * n.x + S[1][1] * n.y};
      const double snn = sn[0] * n.x + sn[1] * n.y;
      const double tx = sn[0] - snn * n.x, ty = sn[1] - snn * n.y;
      integral += line.weights[k] * len * std::hypot(tx, ty);
    }
    measure += len;
  }
  if (!(measure > 0.0))
    throw InvalidArgument("wall_shear_stress: the selected wall area is empty");
  return integral / measure;
}

namespace
{

std::vector<double> ranks(const std::vector<double> &x)
{
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n;)
  {
    std::size_t j = i;
    while (j + 1 < n && x[idx[j + 1]] == x[idx[i]])
      ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k)
      r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(const std::vector<double> &x, const std::vector<double> &y)
{
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidArgument("spearman: need two equally long samples of size >= 2");
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i)
  {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (!(sxx > 0.0 && syy > 0.0))
    throw InvalidArgument("spearman: a sample is constant");
  return sxy / std::sqrt(sxx * syy);
}

void write_errors_csv(std::ostream &os, const ErrorReport &r, const std::vector<double> &step_times,
                      int stride)
{
  if (step_times.size() != r.dual_norms.size())
    throw InvalidArgument("write_errors_csv: one dual norm per step is required");
  os << "t,eps_u,eps_p,dual_norm,err_X\n";
  char buf[200];
  for (std::size_t i = 0; i < step_times.size(); ++i)
  {
    const bool snap = stride > 0 && (i + 1) % static_cast<std::size_t>(stride) == 0;
    const std::size_t k = snap ? (i + 1) / static_cast<std::size_t>(stride) - 1 : 0;
    if (snap && k < r.eps_u.size())
    {
      const double ex = std::sqrt(r.err_u[k] * r.err_u[k] + r.err_p[k] * r.err_p[k]);
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", step_times[i], r.eps_u[k],
                    r.eps_p[k], r.dual_norms[i], ex);
    }
    else
    {
      std::snprintf(buf, sizeof(buf), "%.17g,nan,nan,%.17g,nan\n", step_times[i], r.dual_norms[i]);
    }
    os << buf;
  }
}

void write_norms_csv(std::ostream &os, const ErrorReport &r)
{
  os << "t,err_u,err_p,norm_u,norm_p\n";
  char buf[200];
  for (std::size_t k = 0; k < r.times.size(); ++k)
  {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.times[k], r.err_u[k],
                  r.err_p[k], r.norm_u[k], r.norm_p[k]);
    os << buf;
  }
}

}  // namespace rfsi
