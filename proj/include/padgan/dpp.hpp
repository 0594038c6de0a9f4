#ifndef PADGAN_DPP_HPP
#define PADGAN_DPP_HPP

#include "padgan/linalg.hpp"
#include "padgan/rng.hpp"

namespace padgan {

struct QualityConfig {
  double gamma0 = 2.0;       // quality exponent
  Vector weights;            // aggregation weights, nonnegative, sum 1
  double bandwidth = 1.0;    // RBF bandwidth
  double quality_floor = 1e-6;
  bool use_realisticity_weighting = false;

  void validate() const;
};

// Batch kernel L(i,j) = k(x_i, x_j) * (q_i * q_j)^gamma0, with its similarity
// part, the clamped qualities, and the Cholesky factor kept together.
struct DppKernel {
  Matrix matrix;
  Matrix similarities;  // unit diagonal
  Vector qualities;
  CholFactor factor;

  Eigen::Index size() const { return matrix.rows(); }
};

struct PadLossGrads {
  Matrix d_loss_d_x;  // per-sample total gradient: similarity path + quality path
  Vector d_loss_d_q;  // partial wrt each quality, kept for diagnostics
};

// k(xi, xj) = exp(-0.5 * ||xi - xj||^2 / bandwidth^2), in (0, 1].
double rbf_similarity(const Vector& xi, const Vector& xj, double bandwidth);

// Uniform on the probability simplex via exponential spacings.
Vector sample_simplex_weights(int m, Rng& rng);

// Linear scalarization w^T p, clamped below at quality_floor so qualities stay
// strictly positive.
double aggregate_quality(const Vector& p, const QualityConfig& cfg);

// q = D(x) * q' — discounts quality by the discriminator's realism estimate.
double realisticity_weighted_quality(double q_raw, double d_out);

// gamma1(t) = gamma1_final * (t / t_total)^steepness.
double gamma1_schedule(long t, long t_total, double gamma1_final, double steepness);

// Assemble the batch kernel and factor it (base jitter 1e-6).
DppKernel build_dpp_kernel(const Matrix& batch, const Vector& qualities,
                           const QualityConfig& cfg);

// -log det(L_B) / |B|.
double pad_loss(const DppKernel& kernel, Eigen::Index batch_size);

// Analytic gradients of pad_loss. dq_dx holds per-sample dq/dx rows (the
// estimator Jacobians mapped through the aggregation weights); rows for
// qualities clamped at the floor contribute no quality-path gradient.
PadLossGrads pad_loss_grads(const Matrix& batch, const Vector& qualities,
                            const Matrix& dq_dx, const DppKernel& kernel,
                            const QualityConfig& cfg);

}  // namespace padgan

#endif
