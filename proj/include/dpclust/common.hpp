#pragma once

// std
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

// lib
#include <Eigen/Dense>

namespace dpclust {

using Index = std::ptrdiff_t;
using IndexList = std::vector<Index>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

// Inputs that are inconsistent with each other (dimension mismatch, index out
// of range, dead slot, invalid system where a valid one is required).
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Caller-supplied parameter outside its domain (M > b, negative alpha, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed external data (files, event streams).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A class with users but zero intra-class weight: the interference ratio is 0/0 or x/0.
class DivisionError : public std::domain_error {
 public:
  DivisionError(Index cls, const std::string& what)
      : std::domain_error(what), cls_(cls) {}
  Index cls() const noexcept { return cls_; }

 private:
  Index cls_;
};

}  // namespace dpclust
