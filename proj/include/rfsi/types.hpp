#ifndef RFSI_TYPES_HPP
#define RFSI_TYPES_HPP

#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace rfsi
{

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Bad input to a public entry point (precondition violation).
class InvalidArgument : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// Linear solver failure, singular reduced systems, degenerate modes.
class NumericalError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent files on disk.
class DataError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Configuration schema violations.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace rfsi

#endif  // RFSI_TYPES_HPP
