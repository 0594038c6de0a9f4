#ifndef PADGAN_LINALG_HPP
#define PADGAN_LINALG_HPP

#include <Eigen/Dense>

#include "padgan/errors.hpp"

namespace padgan {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Lower-triangular Cholesky factor of A + jitter_used * I.
struct CholFactor {
  Matrix lower;
  double jitter_used = 0.0;

  Eigen::Index dim() const { return lower.rows(); }
};

// Factor a symmetric positive-(semi)definite matrix, escalating the diagonal
// jitter through {0, base, 10*base, ..., 1e6*base} until a rung succeeds.
// The smallest successful jitter is recorded in the result. Throws
// NotPositiveDefinite when every rung fails (degenerate batch, e.g. exact
// duplicates with base_jitter = 0).
CholFactor cholesky(const Matrix& a, double base_jitter);

// log det(A + jitter_used * I) = 2 * sum(log(diag(lower))).
double log_det_psd(const CholFactor& f);

// Solve (A + jitter_used * I) x = b.
Matrix solve_psd(const CholFactor& f, const Matrix& b);
Vector solve_psd(const CholFactor& f, const Vector& b);

}  // namespace padgan

#endif
