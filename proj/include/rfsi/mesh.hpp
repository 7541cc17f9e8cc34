#ifndef RFSI_MESH_HPP
#define RFSI_MESH_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rfsi
{

struct Point
{
  double x = 0.0;
  double y = 0.0;
};

enum class BoundaryTag
{
  DirichletInlet,
  NeumannOutlet,
  RobinWall
};

std::string to_string(BoundaryTag tag);

// Boundary edge oriented counter-clockwise around the domain, so the outward
// normal is (dy, -dx) / length.
struct BoundaryEdge
{
  std::array<int, 2> v;
  BoundaryTag tag;
  int triangle;    // owning triangle
  int local_edge;  // 0: (v0,v1), 1: (v1,v2), 2: (v2,v0) of the owning triangle
};

//
// Structured triangulation of the rectangle [0, length] x [0, height]. The left
// side is the inlet, the right side the outlet, top and bottom the compliant
// wall. Vertices are numbered row-major: (i, j) -> j * (nx + 1) + i.
//
struct Mesh
{
  double length = 0.0;
  double height = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise
  std::vector<BoundaryEdge> boundary_edges;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }

  double signed_area(int t) const;
};

// Crossed-diagonal structured mesh with (nx+1)(ny+1) vertices and 2 nx ny
// triangles; the diagonal direction alternates in a checkerboard pattern.
Mesh build_channel(double length, double height, int nx, int ny);

double boundary_measure(const Mesh &mesh, BoundaryTag tag);

double edge_length(const Mesh &mesh, const BoundaryEdge &e);

// Outward unit normal and counter-clockwise unit tangent of a boundary edge.
Point edge_normal(const Mesh &mesh, const BoundaryEdge &e);
Point edge_tangent(const Mesh &mesh, const BoundaryEdge &e);

// Plain-text export: `VERTICES n TRIANGLES m EDGES k`, then n coordinate rows,
// m connectivity rows and k tagged edge rows.
void write_mesh(std::ostream &os, const Mesh &mesh);
std::string mesh_to_string(const Mesh &mesh);

// FNV-1a hash of the text export; links artifacts to the mesh they came from.
std::uint64_t mesh_hash(const Mesh &mesh);

std::uint64_t fnv1a(const void *data, std::size_t size,
                    std::uint64_t seed = 14695981039346656037ull);
std::string hex64(std::uint64_t h);

}  // namespace rfsi

#endif  // RFSI_MESH_HPP
