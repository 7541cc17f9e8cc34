#ifndef RFSI_SPARSE_UTIL_HPP
#define RFSI_SPARSE_UTIL_HPP

#include <vector>

#include "rfsi/types.hpp"

namespace rfsi
{

// Submatrix A(keep, keep); keep sorted, entries in [0, n).
SpMat restrict_symmetric(const SpMat &A, const std::vector<int> &keep, int n);

// Sorted index list of the coupled dofs used for Riesz problems: free
// velocity dofs followed by every pressure dof (shifted by n_u).
std::vector<int> coupled_free_dofs(const std::vector<int> &free_velocity, int n_u, int n_p);

}  // namespace rfsi

#endif  // RFSI_SPARSE_UTIL_HPP
