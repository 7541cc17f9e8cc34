#include "rfsi/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "rfsi/types.hpp"

namespace rfsi
{

LineRule gauss_line(int n_points)
{
  if (n_points < 1)
    throw InvalidArgument("gauss_line: need at least one point");
  LineRule rule;
  rule.points.resize(n_points);
  rule.weights.resize(n_points);
  const int n = n_points;
  for (int i = 0; i < n; ++i)
  {
    // Newton on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it)
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k)
      {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? x : p1;
      const double pnm1 = (n == 1) ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    // Map [-1, 1] -> [0, 1]; weights halved so they sum to 1.
    rule.points[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

TriangleRule triangle_rule(int degree)
{
  if (degree < 0)
    throw InvalidArgument("triangle_rule: negative degree");
  // Integrand of degree d picks up the (1 - u) Jacobian in u.
  const int n = (degree + 3) / 2;
  const LineRule g = gauss_line(n);
  TriangleRule rule;
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      const double u = g.points[i], v = g.points[j];
      const double xi = u, eta = v * (1.0 - u);
      rule.points.push_back({1.0 - xi - eta, xi, eta});
      // Reference area is 1/2; normalise so weights sum to 1.
      rule.weights.push_back(2.0 * g.weights[i] * g.weights[j] * (1.0 - u));
    }
  }
  return rule;
}

}  // namespace rfsi
