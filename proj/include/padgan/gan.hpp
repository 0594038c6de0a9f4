#ifndef PADGAN_GAN_HPP
#define PADGAN_GAN_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "padgan/dpp.hpp"
#include "padgan/mlp.hpp"
#include "padgan/rng.hpp"

namespace padgan {

// Affine map from the generator's tanh range onto the data box:
// x = center + halfwidth .* raw.
struct BoxMap {
  Vector low, high;

  Vector center() const { return 0.5 * (low + high); }
  Vector halfwidth() const { return 0.5 * (high - low); }

  Matrix apply(const Matrix& raw) const;
  Matrix chain(const Matrix& d_loss_d_x) const;  // gradient through the map
};

// Performance estimator callback: designs (n x D) in, performances (n x M) and
// per-sample Jacobians (M x D) out.
struct PerformanceEval {
  Matrix perf;
  std::vector<Matrix> jacobians;
};
using PerformanceEstimator = std::function<PerformanceEval(const Matrix& designs)>;

struct TrainConfig {
  long iterations = 10000;
  int batch_size = 32;
  double lr = 1e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double gamma0 = 2.0;
  double gamma1_final = 0.5;
  std::optional<double> schedule_steepness;  // nullopt = constant gamma1
  int d_steps_per_g_step = 1;
  int noise_dim = 2;
  int n_objectives = 2;  // width of the estimator's performance vectors
  Vector data_box_low, data_box_high;  // per output dimension
  std::uint64_t seed = 0;

  double bandwidth = 1.0;
  double quality_floor = 1e-6;
  bool use_realisticity_weighting = false;
  bool saturating_adversarial = false;

  double leaky_slope = 0.2;
  int hidden_width = 128;
  int g_hidden_layers = 3;  // four fully connected layers total
  int d_hidden_layers = 2;  // three fully connected layers total
  long log_every = 100;

  void validate() const;
};

struct TrainState {
  MlpSpec g_spec, d_spec;
  MlpParams generator, discriminator;
  AdamState g_adam, d_adam;
  BoxMap box;
  long iteration = 0;
  Rng rng{0};
  std::size_t kernel_builds = 0;  // counts DPP kernel assemblies

  // Diagnostics from the most recent step, consumed by the history log.
  double last_d_loss = 0.0;
  double last_g_adv_loss = 0.0;
  double last_pad_loss = 0.0;
  double last_mean_quality = 0.0;
  double last_gamma1 = 0.0;
};

struct TrainHistoryRow {
  long iteration;
  double d_loss;
  double g_adv_loss;
  double pad_loss_value;
  double gamma1_current;
  double mean_quality;
};
using TrainHistory = std::vector<TrainHistoryRow>;

// -mean(log d_real) - mean(log(1 - d_fake)), with a 1e-7 clip inside the logs.
double discriminator_loss(const Vector& d_real, const Vector& d_fake);

// Non-saturating adversarial term plus the weighted DPP loss:
// -mean(log d_fake) + gamma1 * pad_loss_value.
double generator_loss(const Vector& d_fake, double pad_loss_value, double gamma1);

TrainState init_train_state(const TrainConfig& cfg, int data_dim);

// One adversarial round: d_steps_per_g_step discriminator updates, then a
// single generator update whose gradient combines the adversarial term with
// gamma1 times the DPP-loss gradient.
TrainState train_step(const TrainState& state, const Matrix& data_batch,
                      const PerformanceEstimator& estimator, const TrainConfig& cfg);

std::pair<TrainState, TrainHistory> train(const TrainConfig& cfg, const Matrix& dataset,
                                          const PerformanceEstimator& estimator);

// Deterministic decoding of latent rows into designs inside the data box.
Matrix generate(const TrainState& state, const Matrix& z_batch);

// Generator loss value and analytic parameter gradient for a fixed noise batch
// and fixed aggregation weights. train_step uses this; gradient checks drive
// it directly.
struct GeneratorStepEval {
  double adversarial = 0.0;
  double pad_value = 0.0;
  double mean_quality = 0.0;
  MlpParams param_grads;

  double total(double gamma1) const { return adversarial + gamma1 * pad_value; }
};
GeneratorStepEval eval_generator_step(const MlpParams& g_params, const MlpSpec& g_spec,
                                      const MlpParams& d_params, const MlpSpec& d_spec,
                                      const BoxMap& box, const Matrix& z,
                                      const PerformanceEstimator& estimator,
                                      const Vector& agg_weights, double gamma1,
                                      const TrainConfig& cfg, std::size_t* kernel_builds);

}  // namespace padgan

#endif
