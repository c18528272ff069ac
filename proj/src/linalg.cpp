#include "topk/linalg.hpp"

#include "topk/error.hpp"

#include <algorithm>
#include <cmath>

namespace topk {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1.0;
  }
  return m;
}

std::vector<double> Matrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      acc += (*this)(i, j) * x[j];
    }
    y[i] = acc;
  }
  return y;
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      s += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(2.0 * s);
}

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      s += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(s);
}

// Zeroes a(p,q) with a two-sided rotation (Golub & Van Loan, Alg. 8.4.1).
void rotate(Matrix& a, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  if (apq == 0.0) {
    return;
  }
  const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
}

} // namespace

std::vector<double> symmetric_eigenvalues(Matrix a) {
  const std::size_t n = a.size();
  const double scale = std::max(1.0, frobenius_norm(a));
  const double tol = 1e-14 * scale;
  // Below this the residual is roundoff; a sweep that fails to shrink it ends the loop.
  const double floor_tol = 1e-11 * scale;
  const std::size_t max_sweeps = std::max<std::size_t>(1, 100 * n * n);

  std::size_t sweep = 0;
  double off = off_diagonal_norm(a);
  while (off > tol) {
    if (sweep++ >= max_sweeps) {
      throw NumericalError("Jacobi eigensolver did not converge");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        rotate(a, p, q);
      }
    }
    const double next = off_diagonal_norm(a);
    if (next >= off && next <= floor_tol) {
      break;
    }
    off = next;
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) {
    eig[i] = a(i, i);
  }
  std::sort(eig.begin(), eig.end());
  return eig;
}

double symmetric_spectral_norm(const Matrix& a) {
  const auto eig = symmetric_eigenvalues(a);
  double m = 0.0;
  for (double e : eig) {
    m = std::max(m, std::abs(e));
  }
  return m;
}

} // namespace topk
