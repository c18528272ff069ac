#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace topk {

/// Dense square matrix, row-major. Sized for the small networks simulated
/// here (a few hundred nodes at most).
class Matrix {
public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  std::vector<double> multiply(std::span<const double> x) const;

  bool operator==(const Matrix&) const = default;

private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Eigenvalues of a symmetric matrix in ascending order, by cyclic Jacobi
/// rotations. Throws NumericalError if the off-diagonal mass does not vanish
/// within 100*n^2 sweeps.
std::vector<double> symmetric_eigenvalues(Matrix a);

/// Spectral norm of a symmetric matrix (largest |eigenvalue|).
double symmetric_spectral_norm(const Matrix& a);

} // namespace topk
