#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fdgmaa {

using Vector = std::vector<double>;

/// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Takes ownership of `entries` (row-major); throws InvalidArgument when
  /// the size does not match or an entry is not finite.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> entries() const { return data_; }
  Vector column(std::size_t c) const;

  bool all_finite() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double norm(std::span<const double> a);
double squared_distance(std::span<const double> a, std::span<const double> b);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
Vector subtract(std::span<const double> a, std::span<const double> b);

/// y = A x
Vector multiply(const DenseMatrix& a, std::span<const double> x);
/// y = A^T x
Vector multiply_transposed(const DenseMatrix& a, std::span<const double> x);
/// A^T A
DenseMatrix gram(const DenseMatrix& a);
DenseMatrix transpose(const DenseMatrix& a);

/// Solution of a square system by Gaussian elimination with complete pivoting.
/// Pivots whose magnitude drops below `rank_tol` times the first pivot are
/// treated as zero; the matching unknowns are set to zero, which yields a
/// solution whenever the system is consistent.
struct PivotedSolution {
  Vector x;
  std::size_t rank = 0;
};
PivotedSolution solve_complete_pivoting(DenseMatrix k, Vector rhs, double rank_tol);

/// Minimizes ||M z||^2 + ridge ||z||^2 subject to A z = c through the KKT
/// system [2(M^T M + ridge I), A^T; A, 0] [z; nu] = [0; c].
///
/// When ridge == 0 and the factorization is rank deficient the system is
/// refactored with ridge = 1e-10 trace(M^T M) / p. Rank-deficient but
/// consistent constraint blocks are handled by the pivoted solve. Throws
/// SingularSystem when the constraint residual exceeds 1e-6 (1 + ||c||).
Vector solve_eq_constrained_lsq(const DenseMatrix& m, const DenseMatrix& a,
                                std::span<const double> c, double ridge);

/// All eigenvalues of a symmetric matrix in ascending order (cyclic Jacobi).
Vector symmetric_eigenvalues(const DenseMatrix& s);

/// Smallest eigenvalue of a graph Laplacian on the complement of the
/// all-ones vector (algebraic connectivity). Throws NotConnected when the
/// value is below 1e-10.
double smallest_nonzero_laplacian_eig(const DenseMatrix& laplacian);

/// Largest singular value squared, ||A||_2^2, from the top eigenvalue of A^T A.
double spectral_norm_squared(const DenseMatrix& a);

}  // namespace fdgmaa
