#include "doctest.h"

#include <map>
#include <sstream>

#include "rfsi/mesh.hpp"
#include "rfsi/types.hpp"

using namespace rfsi;

TEST_CASE("channel counts and areas")
{
  const Mesh m = build_channel(2.5, 0.5, 20, 6);
  CHECK(m.n_vertices() == 21 * 7);
  CHECK(m.n_triangles() == 2 * 20 * 6);
  CHECK(m.boundary_edges.size() == 2u * (20 + 6));
  double area = 0.0;
  for (int t = 0; t < m.n_triangles(); ++t)
  {
    CHECK(m.signed_area(t) > 0.0);
    area += m.signed_area(t);
  }
  CHECK(area == doctest::Approx(2.5 * 0.5).epsilon(1e-14));
}

TEST_CASE("boundary tags cover the sides")
{
  const Mesh m = build_channel(3.0, 1.0, 6, 4);
  CHECK(boundary_measure(m, BoundaryTag::DirichletInlet) == doctest::Approx(1.0));
  CHECK(boundary_measure(m, BoundaryTag::NeumannOutlet) == doctest::Approx(1.0));
  CHECK(boundary_measure(m, BoundaryTag::RobinWall) == doctest::Approx(6.0));
  for (const auto &e : m.boundary_edges)
  {
    const Point a = m.vertices[e.v[0]], b = m.vertices[e.v[1]];
    const Point mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    const Point n = edge_normal(m, e);
    switch (e.tag)
    {
      case BoundaryTag::DirichletInlet:
        CHECK(mid.x == 0.0);
        CHECK(n.x == doctest::Approx(-1.0));
        break;
      case BoundaryTag::NeumannOutlet:
        CHECK(mid.x == doctest::Approx(3.0));
        CHECK(n.x == doctest::Approx(1.0));
        break;
      case BoundaryTag::RobinWall:
        CHECK((mid.y == 0.0 || mid.y == doctest::Approx(1.0)));
        CHECK(n.y == doctest::Approx(mid.y == 0.0 ? -1.0 : 1.0));
        break;
    }
  }
}

TEST_CASE("boundary edges belong to their owning triangle")
{
  const Mesh m = build_channel(1.0, 1.0, 5, 3);
  for (const auto &e : m.boundary_edges)
  {
    const auto &tri = m.triangles[e.triangle];
    CHECK(tri[e.local_edge] == e.v[0]);
    CHECK(tri[(e.local_edge + 1) % 3] == e.v[1]);
  }
}

TEST_CASE("interior edges are shared by exactly two triangles")
{
  const Mesh m = build_channel(2.0, 1.0, 7, 5);
  std::map<std::pair<int, int>, int> count;
  for (const auto &t : m.triangles)
    for (int e = 0; e < 3; ++e)
      ++count[std::minmax(t[e], t[(e + 1) % 3])];
  int boundary = 0;
  for (const auto &[edge, c] : count)
  {
    CHECK((c == 1 || c == 2));
    boundary += c == 1;
  }
  CHECK(boundary == static_cast<int>(m.boundary_edges.size()));
}

TEST_CASE("invalid dimensions are rejected")
{
  CHECK_THROWS_AS(build_channel(0.0, 1.0, 4, 4), InvalidArgument);
  CHECK_THROWS_AS(build_channel(1.0, -1.0, 4, 4), InvalidArgument);
  CHECK_THROWS_AS(build_channel(1.0, 1.0, 1, 4), InvalidArgument);
}

TEST_CASE("text export and hash are deterministic")
{
  const Mesh a = build_channel(2.5, 0.5, 4, 2), b = build_channel(2.5, 0.5, 4, 2);
  CHECK(mesh_to_string(a) == mesh_to_string(b));
  CHECK(mesh_hash(a) == mesh_hash(b));
  CHECK(mesh_hash(a) != mesh_hash(build_channel(2.5, 0.5, 4, 3)));
  const std::string s = mesh_to_string(a);
  CHECK(s.rfind("VERTICES 15 TRIANGLES 16 EDGES 12\n", 0) == 0);
  CHECK(s.find("ROBIN_WALL") != std::string::npos);
  CHECK(hex64(0x1234abcdull) == "000000001234abcd");
}
