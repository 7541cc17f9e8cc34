#include "rfsi/sparse_util.hpp"

namespace rfsi
{

SpMat restrict_symmetric(const SpMat &A, const std::vector<int> &keep, int n)
{
  std::vector<int> map(n, -1);
  for (std::size_t i = 0; i < keep.size(); ++i)
    map[keep[i]] = static_cast<int>(i);
  std::vector<Triplet> trip;
  trip.reserve(A.nonZeros());
  for (int k = 0; k < A.outerSize(); ++k)
  {
    for (SpMat::InnerIterator it(A, k); it; ++it)
    {
      const int r = map[it.row()], c = map[it.col()];
      if (r >= 0 && c >= 0)
        trip.emplace_back(r, c, it.value());
    }
  }
  const int m = static_cast<int>(keep.size());
  SpMat out(m, m);
  out.setFromTriplets(trip.begin(), trip.end());
  out.makeCompressed();
  return out;
}

std::vector<int> coupled_free_dofs(const std::vector<int> &free_velocity, int n_u, int n_p)
{
  std::vector<int> out = free_velocity;
  for (int k = 0; k < n_p; ++k)
    out.push_back(n_u + k);
  return out;
}

}  // namespace rfsi
