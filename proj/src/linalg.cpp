#include "fdgmaa/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "fdgmaa/errors.hpp"

namespace fdgmaa {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw InvalidArgument("DenseMatrix: entry count does not match shape");
  }
  if (!all_finite()) throw InvalidArgument("DenseMatrix: non-finite entry");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

Vector DenseMatrix::column(std::size_t c) const {
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

bool DenseMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

double norm(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vector multiply(const DenseMatrix& a, std::span<const double> x) {
  Vector y(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) y[r] = dot(a.row(r), x);
  return y;
}

Vector multiply_transposed(const DenseMatrix& a, std::span<const double> x) {
  Vector y(a.cols(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) axpy(x[r], a.row(r), y);
  return y;
}

DenseMatrix gram(const DenseMatrix& a) {
  const std::size_t p = a.cols();
  DenseMatrix g(p, p);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    for (std::size_t i = 0; i < p; ++i) {
      const double ri = row[i];
      if (ri == 0.0) continue;
      for (std::size_t j = i; j < p; ++j) g(i, j) += ri * row[j];
    }
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  }
  return g;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = a(r, c);
  }
  return t;
}

PivotedSolution solve_complete_pivoting(DenseMatrix k, Vector rhs, double rank_tol) {
  const std::size_t n = k.rows();
  if (k.cols() != n || rhs.size() != n) {
    throw InvalidArgument("solve_complete_pivoting: shape mismatch");
  }
  std::vector<std::size_t> col_perm(n);
  std::iota(col_perm.begin(), col_perm.end(), std::size_t{0});

  std::size_t rank = 0;
  double first_pivot = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pr = step;
    std::size_t pc = step;
    double best = 0.0;
    for (std::size_t r = step; r < n; ++r) {
      for (std::size_t c = step; c < n; ++c) {
        const double v = std::abs(k(r, c));
        if (v > best) {
          best = v;
          pr = r;
          pc = c;
        }
      }
    }
    if (step == 0) first_pivot = best;
    if (best == 0.0 || best <= rank_tol * first_pivot) break;

    if (pr != step) {
      for (std::size_t c = 0; c < n; ++c) std::swap(k(step, c), k(pr, c));
      std::swap(rhs[step], rhs[pr]);
    }
    if (pc != step) {
      for (std::size_t r = 0; r < n; ++r) std::swap(k(r, step), k(r, pc));
      std::swap(col_perm[step], col_perm[pc]);
    }
    const double pivot = k(step, step);
    for (std::size_t r = step + 1; r < n; ++r) {
      const double f = k(r, step) / pivot;
      if (f == 0.0) continue;
      k(r, step) = 0.0;
      auto target = k.row(r);
      const auto source = k.row(step);
      for (std::size_t c = step + 1; c < n; ++c) target[c] -= f * source[c];
      rhs[r] -= f * rhs[step];
    }
    ++rank;
  }

  // Back substitution over the leading rank x rank block; trailing unknowns
  // are fixed at zero.
  Vector y(n, 0.0);
  for (std::size_t ii = rank; ii-- > 0;) {
    double s = rhs[ii];
    for (std::size_t c = ii + 1; c < rank; ++c) s -= k(ii, c) * y[c];
    y[ii] = s / k(ii, ii);
  }
  Vector x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) x[col_perm[i]] = y[i];
  return {std::move(x), rank};
}

namespace {

constexpr double kRankTol = 1e-13;

struct KktAttempt {
  Vector z;
  std::size_t rank = 0;
};

KktAttempt solve_kkt(const DenseMatrix& mtm, const DenseMatrix& a, std::span<const double> c,
                     double ridge) {
  const std::size_t p = mtm.rows();
  const std::size_t r = a.rows();
  const std::size_t n = p + r;
  DenseMatrix k(n, n);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) k(i, j) = 2.0 * mtm(i, j);
    k(i, i) += 2.0 * ridge;
  }
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      k(p + i, j) = a(i, j);
      k(j, p + i) = a(i, j);
    }
  }
  Vector rhs(n, 0.0);
  std::copy(c.begin(), c.end(), rhs.begin() + static_cast<std::ptrdiff_t>(p));

  // Symmetric diagonal equilibration so the rank threshold is scale free.
  Vector scale(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    double mx = 0.0;
    for (std::size_t j = 0; j < n; ++j) mx = std::max(mx, std::abs(k(i, j)));
    if (mx > 0.0) scale[i] = 1.0 / std::sqrt(mx);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k(i, j) *= scale[i] * scale[j];
    rhs[i] *= scale[i];
  }

  auto sol = solve_complete_pivoting(std::move(k), std::move(rhs), kRankTol);
  KktAttempt out;
  out.rank = sol.rank;
  out.z.resize(p);
  for (std::size_t i = 0; i < p; ++i) out.z[i] = sol.x[i] * scale[i];
  return out;
}

bool constraint_ok(const DenseMatrix& a, std::span<const double> z, std::span<const double> c) {
  const Vector az = multiply(a, z);
  const double res = std::sqrt(squared_distance(az, c));
  return std::isfinite(res) && res <= 1e-6 * (1.0 + norm(c));
}

}  // namespace

Vector solve_eq_constrained_lsq(const DenseMatrix& m, const DenseMatrix& a,
                                std::span<const double> c, double ridge) {
  const std::size_t p = m.cols();
  if (a.cols() != p || c.size() != a.rows()) {
    throw InvalidArgument("solve_eq_constrained_lsq: shape mismatch");
  }
  if (!(ridge >= 0.0)) throw InvalidArgument("solve_eq_constrained_lsq: negative ridge");

  const DenseMatrix mtm = gram(m);
  KktAttempt attempt = solve_kkt(mtm, a, c, ridge);
  if (attempt.rank < p + a.rows() && ridge == 0.0) {
    double trace = 0.0;
    for (std::size_t i = 0; i < p; ++i) trace += mtm(i, i);
    if (trace > 0.0) attempt = solve_kkt(mtm, a, c, 1e-10 * trace / static_cast<double>(p));
  }
  for (double v : attempt.z) {
    if (!std::isfinite(v)) throw SingularSystem("KKT solve produced a non-finite entry");
  }
  if (!constraint_ok(a, attempt.z, c)) {
    throw SingularSystem("KKT solve violates the equality constraint");
  }
  return std::move(attempt.z);
}

Vector symmetric_eigenvalues(const DenseMatrix& s) {
  const std::size_t n = s.rows();
  if (s.cols() != n) throw InvalidArgument("symmetric_eigenvalues: matrix not square");
  DenseMatrix a = s;
  double total = 0.0;
  for (double v : a.entries()) total += v * v;
  const double tiny = 1e-30 * std::max(total, 1e-300);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    }
    if (off <= tiny) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double cs = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * cs;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = cs * akp - sn * akq;
          a(k, q) = sn * akp + cs * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = cs * apk - sn * aqk;
          a(q, k) = sn * apk + cs * aqk;
        }
      }
    }
  }
  Vector eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

double smallest_nonzero_laplacian_eig(const DenseMatrix& laplacian) {
  const std::size_t n = laplacian.rows();
  if (laplacian.cols() != n || n < 2) {
    throw InvalidArgument("smallest_nonzero_laplacian_eig: need a square matrix with n >= 2");
  }
  // Shift the all-ones direction out of the spectrum: L + s 11^T/n moves the
  // zero eigenvalue to s while leaving the rest untouched.
  double shift = 0.0;
  for (std::size_t i = 0; i < n; ++i) shift = std::max(shift, laplacian(i, i));
  shift = 2.0 * shift + 1.0;
  DenseMatrix shifted = laplacian;
  const double add = shift / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) shifted(i, j) += add;
  }
  const Vector eig = symmetric_eigenvalues(shifted);
  const double lambda = eig.front();
  if (lambda < 1e-10) throw NotConnected("graph Laplacian has a repeated zero eigenvalue");
  return lambda;
}

double spectral_norm_squared(const DenseMatrix& a) {
  const DenseMatrix g = gram(a);
  const std::size_t p = g.rows();
  if (p == 0) return 0.0;
  // The Gram matrix is tiny (d x d); its exact top eigenvalue is cheap.
  const Vector eig = symmetric_eigenvalues(g);
  return std::max(0.0, eig.back());
}

}  // namespace fdgmaa
