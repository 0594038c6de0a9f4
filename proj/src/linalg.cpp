#include "padgan/linalg.hpp"

#include <cmath>
#include <string>

namespace padgan {

namespace {

// Cholesky-Crout on the lower triangle. Returns false on a nonpositive or
// nonfinite pivot instead of producing a bogus factor.
bool try_factor(const Matrix& a, double jitter, Matrix& lower) {
  const Eigen::Index n = a.rows();
  lower.setZero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = a(j, j) + jitter;
    for (Eigen::Index k = 0; k < j; ++k) d -= lower(j, k) * lower(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    lower(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
      lower(i, j) = s / lower(j, j);
    }
  }
  return true;
}

void check_symmetric(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw DimensionMismatch("cholesky: matrix must be square, got " +
                            std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-12 * scale)
        throw DimensionMismatch("cholesky: matrix is not symmetric");
}

}  // namespace

CholFactor cholesky(const Matrix& a, double base_jitter) {
  check_symmetric(a);
  if (base_jitter < 0.0) throw DimensionMismatch("cholesky: base_jitter must be >= 0");

  CholFactor f;
  if (try_factor(a, 0.0, f.lower)) {
    f.jitter_used = 0.0;
    return f;
  }
  if (base_jitter > 0.0) {
    double jitter = base_jitter;
    for (int rung = 0; rung <= 6; ++rung, jitter *= 10.0) {
      if (try_factor(a, jitter, f.lower)) {
        f.jitter_used = jitter;
        return f;
      }
    }
  }
  throw NotPositiveDefinite("cholesky: all jitter rungs failed for dim " +
                            std::to_string(a.rows()) + " matrix (base_jitter " +
                            std::to_string(base_jitter) + ")");
}

double log_det_psd(const CholFactor& f) {
  return 2.0 * f.lower.diagonal().array().log().sum();
}

Matrix solve_psd(const CholFactor& f, const Matrix& b) {
  if (b.rows() != f.dim())
    throw DimensionMismatch("solve_psd: rhs has " + std::to_string(b.rows()) +
                            " rows, factor dim is " + std::to_string(f.dim()));
  Matrix y = f.lower.triangularView<Eigen::Lower>().solve(b);
  return f.lower.transpose().triangularView<Eigen::Upper>().solve(y);
}

Vector solve_psd(const CholFactor& f, const Vector& b) {
  return Vector(solve_psd(f, Matrix(b)));
}

}  // namespace padgan
