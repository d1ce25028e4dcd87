#pragma once

// Symmetric tridiagonal eigensolver: implicit-shift QL iteration with
// accumulated Givens rotations (the tql2 scheme of EISPACK / JAMA).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spinwire {

/// Raised when an iterative numerical routine fails.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense column-major real matrix.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static RealMatrix identity(std::size_t n) {
    RealMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

  std::span<double> column(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
  std::span<const double> column(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct TridiagonalEigen {
  std::vector<double> eigenvalues;  // ascending
  RealMatrix eigenvectors;          // column k pairs with eigenvalues[k]
};

inline constexpr double kQLTolerance = 1e-14;
inline constexpr int kQLMaxIterations = 50;

/// Eigenvalues and orthonormal eigenvectors of the symmetric tridiagonal
/// matrix with the given diagonal and off-diagonal.
inline TridiagonalEigen tridiagonal_eigen(std::span<const double> diagonal, std::span<const double> offdiagonal) {
  const std::size_t n = diagonal.size();
  if (n == 0) throw std::invalid_argument("tridiagonal_eigen: empty matrix");
  if (offdiagonal.size() + 1 != n) throw std::invalid_argument("tridiagonal_eigen: off-diagonal length must be n-1");

  std::vector<double> d(diagonal.begin(), diagonal.end());
  std::vector<double> e(n, 0.0);
  std::copy(offdiagonal.begin(), offdiagonal.end(), e.begin());
  RealMatrix v = RealMatrix::identity(n);

  double shift_total = 0.0;
  double scale = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    scale = std::max(scale, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n - 1 && std::abs(e[m]) > kQLTolerance * scale) ++m;

    if (m > l) {
      int iter = 0;
      do {
        if (++iter > kQLMaxIterations)
          throw NumericalError("tridiagonal_eigen: eigenvalue " + std::to_string(l) + " did not converge after " +
                               std::to_string(kQLMaxIterations) + " iterations");

        // Wilkinson-type shift from the leading 2x2 block
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        shift_total += h;

        // implicit QL sweep from m back to l
        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          const std::size_t i = ii;
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);

          auto col_i = v.column(i);
          auto col_next = v.column(i + 1);
          for (std::size_t k = 0; k < n; ++k) {
            const double hk = col_next[k];
            col_next[k] = s * col_i[k] + c * hk;
            col_i[k] = c * col_i[k] - s * hk;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > kQLTolerance * scale);
    }
    d[l] += shift_total;
    e[l] = 0.0;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  TridiagonalEigen out;
  out.eigenvalues.resize(n);
  out.eigenvectors = RealMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = d[order[k]];
    auto src = v.column(order[k]);
    std::copy(src.begin(), src.end(), out.eigenvectors.column(k).begin());
  }
  return out;
}

}  // namespace spinwire
