#ifndef RFSI_QUADRATURE_HPP
#define RFSI_QUADRATURE_HPP

#include <array>
#include <vector>

namespace rfsi
{

// Gauss-Legendre rule on [0, 1].
struct LineRule
{
  std::vector<double> points;
  std::vector<double> weights;  // sum to 1
};

// Rule on the reference triangle in barycentric coordinates; weights sum to 1
// (multiply by the triangle area).
struct TriangleRule
{
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

LineRule gauss_line(int n_points);

// Collapsed (Duffy) tensor-product Gauss rule, exact for polynomials of total
// degree <= degree.
TriangleRule triangle_rule(int degree);

}  // namespace rfsi

#endif  // RFSI_QUADRATURE_HPP
