#include "padgan/dpp.hpp"

#include <cmath>
#include <string>

namespace padgan {

namespace {
constexpr double kKernelJitter = 1e-6;
}

void QualityConfig::validate() const {
  if (gamma0 < 0.0) throw DimensionMismatch("QualityConfig: gamma0 must be >= 0");
  if (!(bandwidth > 0.0)) throw DimensionMismatch("QualityConfig: bandwidth must be > 0");
  if (!(quality_floor > 0.0 && quality_floor <= 1.0))
    throw DimensionMismatch("QualityConfig: quality_floor must be in (0, 1]");
  if (weights.size() > 0) {
    if (weights.minCoeff() < 0.0)
      throw DimensionMismatch("QualityConfig: weights must be nonnegative");
    if (std::abs(weights.sum() - 1.0) > 1e-12)
      throw DimensionMismatch("QualityConfig: weights must sum to 1");
  }
}

double rbf_similarity(const Vector& xi, const Vector& xj, double bandwidth) {
  if (xi.size() != xj.size())
    throw DimensionMismatch("rbf_similarity: dimension mismatch");
  if (!(bandwidth > 0.0)) throw DimensionMismatch("rbf_similarity: bandwidth must be > 0");
  return std::exp(-0.5 * (xi - xj).squaredNorm() / (bandwidth * bandwidth));
}

Vector sample_simplex_weights(int m, Rng& rng) {
  if (m < 1) throw DimensionMismatch("sample_simplex_weights: m must be >= 1");
  if (m == 1) return Vector::Ones(1);
  Vector w(m);
  double sum = 0.0;
  while (sum <= 0.0) {
    for (int i = 0; i < m; ++i) {
      w(i) = -std::log(1.0 - rng.uniform());
      sum += w(i);
    }
  }
  return w / sum;
}

double aggregate_quality(const Vector& p, const QualityConfig& cfg) {
  if (p.size() != cfg.weights.size())
    throw DimensionMismatch("aggregate_quality: performance length " +
                            std::to_string(p.size()) + " != weights length " +
                            std::to_string(cfg.weights.size()));
  return std::max(cfg.weights.dot(p), cfg.quality_floor);
}

double realisticity_weighted_quality(double q_raw, double d_out) {
  return d_out * q_raw;
}

double gamma1_schedule(long t, long t_total, double gamma1_final, double steepness) {
  if (t < 0 || t > t_total) throw DimensionMismatch("gamma1_schedule: t out of range");
  if (!(steepness > 0.0)) throw DimensionMismatch("gamma1_schedule: steepness must be > 0");
  if (t_total <= 0) return gamma1_final;
  if (t == t_total) return gamma1_final;  // endpoint exact for any steepness
  return gamma1_final * std::pow(static_cast<double>(t) / static_cast<double>(t_total), steepness);
}

DppKernel build_dpp_kernel(const Matrix& batch, const Vector& qualities,
                           const QualityConfig& cfg) {
  const Eigen::Index n = batch.rows();
  if (n < 2) throw DimensionMismatch("build_dpp_kernel: need at least 2 samples");
  if (qualities.size() != n)
    throw DimensionMismatch("build_dpp_kernel: qualities length != batch rows");
  if (qualities.minCoeff() < cfg.quality_floor)
    throw DimensionMismatch("build_dpp_kernel: qualities must be >= quality_floor");

  DppKernel k;
  k.qualities = qualities;
  k.similarities = Matrix::Zero(n, n);
  k.matrix = Matrix::Zero(n, n);
  const double inv_bw2 = 1.0 / (cfg.bandwidth * cfg.bandwidth);
  for (Eigen::Index i = 0; i < n; ++i) {
    k.similarities(i, i) = 1.0;
    k.matrix(i, i) = std::pow(qualities(i) * qualities(i), cfg.gamma0);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double sim =
          std::exp(-0.5 * (batch.row(i) - batch.row(j)).squaredNorm() * inv_bw2);
      const double entry = sim * std::pow(qualities(i) * qualities(j), cfg.gamma0);
      k.similarities(i, j) = k.similarities(j, i) = sim;
      k.matrix(i, j) = k.matrix(j, i) = entry;
    }
  }
  k.factor = cholesky(k.matrix, kKernelJitter);
  return k;
}

double pad_loss(const DppKernel& kernel, Eigen::Index batch_size) {
  if (batch_size != kernel.size())
    throw DimensionMismatch("pad_loss: batch_size != kernel dimension");
  return -log_det_psd(kernel.factor) / static_cast<double>(batch_size);
}

PadLossGrads pad_loss_grads(const Matrix& batch, const Vector& qualities,
                            const Matrix& dq_dx, const DppKernel& kernel,
                            const QualityConfig& cfg) {
  const Eigen::Index n = batch.rows();
  const Eigen::Index dim = batch.cols();
  if (kernel.size() != n || qualities.size() != n)
    throw DimensionMismatch("pad_loss_grads: kernel/qualities do not match batch");
  if (dq_dx.rows() != n || dq_dx.cols() != dim)
    throw DimensionMismatch("pad_loss_grads: dq_dx shape does not match batch");

  // d(-log det L)/dL = -L^{-1}; the 1/|B| factor folds into the scale.
  const Matrix inv = solve_psd(kernel.factor, Matrix(Matrix::Identity(n, n)));
  const Matrix grad_l = -inv / static_cast<double>(n);

  PadLossGrads out;
  out.d_loss_d_q = Vector::Zero(n);
  out.d_loss_d_x = Matrix::Zero(n, dim);

  // Quality path: dL_ij/dq_i = gamma0 * L_ij / q_i off-diagonal, twice that on
  // the diagonal; both triangles of the symmetric perturbation collapse to
  // 2 * gamma0 / q_i * sum_j G_ij L_ij.
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) acc += grad_l(i, j) * kernel.matrix(i, j);
    out.d_loss_d_q(i) = 2.0 * cfg.gamma0 * acc / qualities(i);
  }

  // Similarity path: dk(x_i, x_j)/dx_i = -(x_i - x_j)/bw^2 * k, entering via
  // both (i,j) and (j,i).
  const double inv_bw2 = 1.0 / (cfg.bandwidth * cfg.bandwidth);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double coeff = -2.0 * grad_l(i, j) * kernel.matrix(i, j) * inv_bw2;
      out.d_loss_d_x.row(i) += coeff * (batch.row(i) - batch.row(j));
    }
  }

  // Compose the quality path through dq/dx; qualities clamped at the floor get
  // no quality-path contribution.
  for (Eigen::Index i = 0; i < n; ++i) {
    if (qualities(i) > cfg.quality_floor)
      out.d_loss_d_x.row(i) += out.d_loss_d_q(i) * dq_dx.row(i);
  }
  return out;
}

}  // namespace padgan
