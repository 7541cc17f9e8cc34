#include "rfsi/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include "rfsi/types.hpp"

namespace rfsi
{

std::string to_string(BoundaryTag tag)
{
  switch (tag)
  {
    case BoundaryTag::DirichletInlet:
      return "DIRICHLET_INLET";
    case BoundaryTag::NeumannOutlet:
      return "NEUMANN_OUTLET";
    case BoundaryTag::RobinWall:
      return "ROBIN_WALL";
  }
  return "UNKNOWN";
}

double Mesh::signed_area(int t) const
{
  const auto &tri = triangles[t];
  const Point &a = vertices[tri[0]], &b = vertices[tri[1]], &c = vertices[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

Mesh build_channel(double length, double height, int nx, int ny)
{
  if (!(length > 0.0) || !(height > 0.0))
    throw InvalidArgument("build_channel: length and height must be positive");
  if (nx < 2 || ny < 2)
    throw InvalidArgument("build_channel: nx and ny must be at least 2");

  Mesh mesh;
  mesh.length = length;
  mesh.height = height;
  mesh.nx = nx;
  mesh.ny = ny;

  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  mesh.vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.vertices.push_back({length * i / nx, height * j / ny});

  mesh.triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j)
  {
    for (int i = 0; i < nx; ++i)
    {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      if ((i + j) % 2 == 0)
      {
        mesh.triangles.push_back({v00, v10, v11});
        mesh.triangles.push_back({v00, v11, v01});
      }
      else
      {
        mesh.triangles.push_back({v00, v10, v01});
        mesh.triangles.push_back({v10, v11, v01});
      }
    }
  }

  // Directed edge (a, b) of a counter-clockwise triangle -> (triangle, local edge).
  std::map<std::pair<int, int>, std::pair<int, int>> owner;
  for (int t = 0; t < mesh.n_triangles(); ++t)
  {
    const auto &tri = mesh.triangles[t];
    for (int e = 0; e < 3; ++e)
      owner[{tri[e], tri[(e + 1) % 3]}] = {t, e};
  }
  auto push = [&](int a, int b, BoundaryTag tag)
  {
    const auto it = owner.find({a, b});
    if (it == owner.end())
      throw std::logic_error("build_channel: boundary edge without owner");
    mesh.boundary_edges.push_back({{a, b}, tag, it->second.first, it->second.second});
  };
  // Counter-clockwise traversal: bottom, right, top, left.
  for (int i = 0; i < nx; ++i)
    push(vid(i, 0), vid(i + 1, 0), BoundaryTag::RobinWall);
  for (int j = 0; j < ny; ++j)
    push(vid(nx, j), vid(nx, j + 1), BoundaryTag::NeumannOutlet);
  for (int i = nx; i > 0; --i)
    push(vid(i, ny), vid(i - 1, ny), BoundaryTag::RobinWall);
  for (int j = ny; j > 0; --j)
    push(vid(0, j), vid(0, j - 1), BoundaryTag::DirichletInlet);
  return mesh;
}

double edge_length(const Mesh &mesh, const BoundaryEdge &e)
{
  const Point &a = mesh.vertices[e.v[0]], &b = mesh.vertices[e.v[1]];
  return std::hypot(b.x - a.x, b.y - a.y);
}

Point edge_tangent(const Mesh &mesh, const BoundaryEdge &e)
{
  const Point &a = mesh.vertices[e.v[0]], &b = mesh.vertices[e.v[1]];
  const double l = edge_length(mesh, e);
  return {(b.x - a.x) / l, (b.y - a.y) / l};
}

Point edge_normal(const Mesh &mesh, const BoundaryEdge &e)
{
  const Point t = edge_tangent(mesh, e);
  return {t.y, -t.x};
}

double boundary_measure(const Mesh &mesh, BoundaryTag tag)
{
  double sum = 0.0;
  for (const auto &e : mesh.boundary_edges)
    if (e.tag == tag)
      sum += edge_length(mesh, e);
  return sum;
}

void write_mesh(std::ostream &os, const Mesh &mesh)
{
  char buf[128];
  os << "VERTICES " << mesh.vertices.size() << " TRIANGLES " << mesh.triangles.size()
     << " EDGES " << mesh.boundary_edges.size() << '\n';
  for (const auto &p : mesh.vertices)
  {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", p.x, p.y);
    os << buf;
  }
  for (const auto &t : mesh.triangles)
    os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto &e : mesh.boundary_edges)
    os << e.v[0] << ' ' << e.v[1] << ' ' << to_string(e.tag) << '\n';
}

std::string mesh_to_string(const Mesh &mesh)
{
  std::ostringstream os;
  write_mesh(os, mesh);
  return os.str();
}

std::uint64_t fnv1a(const void *data, std::size_t size, std::uint64_t seed)
{
  const auto *bytes = static_cast<const unsigned char *>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i)
  {
    h ^= bytes[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t mesh_hash(const Mesh &mesh)
{
  const std::string s = mesh_to_string(mesh);
  return fnv1a(s.data(), s.size());
}

std::string hex64(std::uint64_t h)
{
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rfsi
