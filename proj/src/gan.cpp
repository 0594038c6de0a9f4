#include "padgan/gan.hpp"

#include <cmath>
#include <string>

namespace padgan {

namespace {

constexpr double kLogClip = 1e-7;

double clipped(double v) { return std::min(std::max(v, kLogClip), 1.0 - kLogClip); }

bool is_clipped(double v) { return v <= kLogClip || v >= 1.0 - kLogClip; }

Matrix sample_noise(Rng& rng, Eigen::Index n, int dim) {
  Matrix z(n, dim);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int d = 0; d < dim; ++d) z(i, d) = rng.uniform(-0.5, 0.5);
  return z;
}

}  // namespace

Matrix BoxMap::apply(const Matrix& raw) const {
  if (raw.cols() != low.size()) throw DimensionMismatch("BoxMap: width mismatch");
  Matrix out = raw;
  const Vector c = center(), hw = halfwidth();
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    out.col(j) = (out.col(j).array() * hw(j) + c(j)).matrix();
  return out;
}

Matrix BoxMap::chain(const Matrix& d_loss_d_x) const {
  Matrix out = d_loss_d_x;
  const Vector hw = halfwidth();
  for (Eigen::Index j = 0; j < out.cols(); ++j) out.col(j) *= hw(j);
  return out;
}

void TrainConfig::validate() const {
  if (iterations < 0) throw DimensionMismatch("TrainConfig: iterations must be >= 0");
  if (batch_size < 1) throw DimensionMismatch("TrainConfig: batch_size must be >= 1");
  if (!(lr > 0.0)) throw DimensionMismatch("TrainConfig: lr must be > 0");
  if (beta1 < 0.0 || beta1 >= 1.0 || beta2 < 0.0 || beta2 >= 1.0)
    throw DimensionMismatch("TrainConfig: betas must be in [0, 1)");
  if (gamma0 < 0.0 || gamma1_final < 0.0)
    throw DimensionMismatch("TrainConfig: gamma0 and gamma1_final must be >= 0");
  if (d_steps_per_g_step < 1)
    throw DimensionMismatch("TrainConfig: d_steps_per_g_step must be >= 1");
  if (noise_dim < 1) throw DimensionMismatch("TrainConfig: noise_dim must be >= 1");
  if (n_objectives < 1) throw DimensionMismatch("TrainConfig: n_objectives must be >= 1");
  if (data_box_low.size() != data_box_high.size())
    throw DimensionMismatch("TrainConfig: data box bounds must have equal length");
  for (Eigen::Index d = 0; d < data_box_low.size(); ++d)
    if (!(data_box_low(d) < data_box_high(d)))
      throw DimensionMismatch("TrainConfig: data box must have low < high");
}

double discriminator_loss(const Vector& d_real, const Vector& d_fake) {
  double real_term = 0.0;
  for (Eigen::Index i = 0; i < d_real.size(); ++i) real_term -= std::log(clipped(d_real(i)));
  double fake_term = 0.0;
  for (Eigen::Index i = 0; i < d_fake.size(); ++i) fake_term -= std::log(1.0 - clipped(d_fake(i)));
  return real_term / static_cast<double>(d_real.size()) +
         fake_term / static_cast<double>(d_fake.size());
}

double generator_loss(const Vector& d_fake, double pad_loss_value, double gamma1) {
  if (gamma1 < 0.0) throw DimensionMismatch("generator_loss: gamma1 must be >= 0");
  double adv = 0.0;
  for (Eigen::Index i = 0; i < d_fake.size(); ++i) adv -= std::log(clipped(d_fake(i)));
  return adv / static_cast<double>(d_fake.size()) + gamma1 * pad_loss_value;
}

TrainState init_train_state(const TrainConfig& cfg, int data_dim) {
  cfg.validate();
  if (cfg.data_box_low.size() != data_dim)
    throw DimensionMismatch("init_train_state: data box does not match data dim " +
                            std::to_string(data_dim));
  TrainState s;
  s.g_spec.layer_sizes.push_back(cfg.noise_dim);
  for (int l = 0; l < cfg.g_hidden_layers; ++l) s.g_spec.layer_sizes.push_back(cfg.hidden_width);
  s.g_spec.layer_sizes.push_back(data_dim);
  s.g_spec.leaky_slope = cfg.leaky_slope;
  s.g_spec.output_activation = OutputActivation::Tanh;

  s.d_spec.layer_sizes.push_back(data_dim);
  for (int l = 0; l < cfg.d_hidden_layers; ++l) s.d_spec.layer_sizes.push_back(cfg.hidden_width);
  s.d_spec.layer_sizes.push_back(1);
  s.d_spec.leaky_slope = cfg.leaky_slope;
  s.d_spec.output_activation = OutputActivation::Sigmoid;

  Rng master(cfg.seed);
  s.generator = init_params(s.g_spec, master.raw());
  s.discriminator = init_params(s.d_spec, master.raw());
  s.g_adam = AdamState::zeros_like(s.generator);
  s.d_adam = AdamState::zeros_like(s.discriminator);
  s.rng = Rng(master.raw());
  s.box = BoxMap{cfg.data_box_low, cfg.data_box_high};
  return s;
}

GeneratorStepEval eval_generator_step(const MlpParams& g_params, const MlpSpec& g_spec,
                                      const MlpParams& d_params, const MlpSpec& d_spec,
                                      const BoxMap& box, const Matrix& z,
                                      const PerformanceEstimator& estimator,
                                      const Vector& agg_weights, double gamma1,
                                      const TrainConfig& cfg, std::size_t* kernel_builds) {
  const Eigen::Index n = z.rows();
  GeneratorStepEval ev;

  ForwardTrace g_trace;
  const Matrix raw = forward(g_params, g_spec, z, &g_trace);
  const Matrix x = box.apply(raw);

  ForwardTrace d_trace;
  const Matrix d_out = forward(d_params, d_spec, x, &d_trace);

  // Adversarial term and its gradient wrt the discriminator output. Values at
  // the clip boundary get zero gradient, matching finite differences of the
  // clipped loss.
  Matrix d_adv_grad(n, 1);
  double adv = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = d_out(i, 0);
    if (cfg.saturating_adversarial) {
      adv += std::log(1.0 - clipped(d));
      d_adv_grad(i, 0) = is_clipped(d) ? 0.0 : -1.0 / (n * (1.0 - d));
    } else {
      adv -= std::log(clipped(d));
      d_adv_grad(i, 0) = is_clipped(d) ? 0.0 : -1.0 / (n * d);
    }
  }
  ev.adversarial = adv / static_cast<double>(n);

  const BackwardResult adv_back = backward(d_params, d_spec, d_trace, d_adv_grad);
  Matrix total_dx = adv_back.input_grads;

  if (gamma1 > 0.0) {
    PerformanceEval perf;
    try {
      perf = estimator(x);
    } catch (const std::exception& e) {
      throw EstimatorFailure(std::string("performance estimator failed: ") + e.what());
    }
    if (perf.perf.rows() != n || static_cast<Eigen::Index>(perf.jacobians.size()) != n)
      throw EstimatorFailure("performance estimator returned mismatched shapes");

    QualityConfig qcfg;
    qcfg.gamma0 = cfg.gamma0;
    qcfg.weights = agg_weights;
    qcfg.bandwidth = cfg.bandwidth;
    qcfg.quality_floor = cfg.quality_floor;
    qcfg.use_realisticity_weighting = cfg.use_realisticity_weighting;

    Vector q(n);
    Matrix dq_dx = Matrix::Zero(n, x.cols());
    Matrix d_realism_grads;
    if (qcfg.use_realisticity_weighting)
      d_realism_grads = backward(d_params, d_spec, d_trace, Matrix::Ones(n, 1)).input_grads;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double q_agg = aggregate_quality(perf.perf.row(i).transpose(), qcfg);
      Vector base = perf.jacobians[static_cast<std::size_t>(i)].transpose() * agg_weights;
      if (q_agg <= qcfg.quality_floor) base.setZero();
      if (qcfg.use_realisticity_weighting) {
        // q = D(x) * q'(x): product rule through both factors; a floored final
        // value drops the whole quality path inside pad_loss_grads.
        q(i) = std::max(realisticity_weighted_quality(q_agg, d_out(i, 0)), qcfg.quality_floor);
        dq_dx.row(i) = d_out(i, 0) * base.transpose() + q_agg * d_realism_grads.row(i);
      } else {
        q(i) = q_agg;
        dq_dx.row(i) = base.transpose();
      }
    }

    const DppKernel kernel = build_dpp_kernel(x, q, qcfg);
    if (kernel_builds) ++*kernel_builds;
    ev.pad_value = pad_loss(kernel, n);
    ev.mean_quality = q.mean();
    const PadLossGrads grads = pad_loss_grads(x, q, dq_dx, kernel, qcfg);
    total_dx += gamma1 * grads.d_loss_d_x;
  }

  const Matrix d_raw = box.chain(total_dx);
  ev.param_grads = backward(g_params, g_spec, g_trace, d_raw).param_grads;
  return ev;
}

TrainState train_step(const TrainState& state, const Matrix& data_batch,
                      const PerformanceEstimator& estimator, const TrainConfig& cfg) {
  if (data_batch.rows() != cfg.batch_size)
    throw DimensionMismatch("train_step: data batch rows != batch_size");
  TrainState s = state;
  const Eigen::Index n = data_batch.rows();

  const double gamma1 =
      cfg.schedule_steepness
          ? gamma1_schedule(s.iteration, cfg.iterations, cfg.gamma1_final, *cfg.schedule_steepness)
          : cfg.gamma1_final;

  for (int step = 0; step < cfg.d_steps_per_g_step; ++step) {
    const Matrix z = sample_noise(s.rng, n, cfg.noise_dim);
    const Matrix fake = s.box.apply(forward(s.generator, s.g_spec, z));

    ForwardTrace real_trace, fake_trace;
    const Matrix d_real = forward(s.discriminator, s.d_spec, data_batch, &real_trace);
    const Matrix d_fake = forward(s.discriminator, s.d_spec, fake, &fake_trace);
    s.last_d_loss = discriminator_loss(d_real.col(0), d_fake.col(0));

    Matrix real_grad(n, 1), fake_grad(n, 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      real_grad(i, 0) = is_clipped(d_real(i, 0)) ? 0.0 : -1.0 / (n * d_real(i, 0));
      fake_grad(i, 0) = is_clipped(d_fake(i, 0)) ? 0.0 : 1.0 / (n * (1.0 - d_fake(i, 0)));
    }
    const MlpParams real_back =
        backward(s.discriminator, s.d_spec, real_trace, real_grad).param_grads;
    const MlpParams fake_back =
        backward(s.discriminator, s.d_spec, fake_trace, fake_grad).param_grads;
    MlpParams d_grads = real_back;
    for (std::size_t l = 0; l < d_grads.weights.size(); ++l) {
      d_grads.weights[l] += fake_back.weights[l];
      d_grads.biases[l] += fake_back.biases[l];
    }
    adam_step(s.discriminator, d_grads, s.d_adam, cfg.lr, cfg.beta1, cfg.beta2);
  }

  const Matrix z = sample_noise(s.rng, n, cfg.noise_dim);
  Vector weights;
  if (gamma1 > 0.0) weights = sample_simplex_weights(cfg.n_objectives, s.rng);
  const GeneratorStepEval ev =
      eval_generator_step(s.generator, s.g_spec, s.discriminator, s.d_spec, s.box, z, estimator,
                          weights, gamma1, cfg, &s.kernel_builds);
  adam_step(s.generator, ev.param_grads, s.g_adam, cfg.lr, cfg.beta1, cfg.beta2);

  s.last_g_adv_loss = ev.adversarial;
  s.last_pad_loss = ev.pad_value;
  s.last_mean_quality = ev.mean_quality;
  s.last_gamma1 = gamma1;
  s.iteration += 1;
  return s;
}

std::pair<TrainState, TrainHistory> train(const TrainConfig& cfg, const Matrix& dataset,
                                          const PerformanceEstimator& estimator) {
  cfg.validate();
  if (dataset.rows() < cfg.batch_size)
    throw DimensionMismatch("train: dataset smaller than one batch");

  TrainState state = init_train_state(cfg, static_cast<int>(dataset.cols()));
  TrainHistory history;
  int consecutive_degenerate = 0;

  for (long t = 0; t < cfg.iterations; ++t) {
    Matrix batch(cfg.batch_size, dataset.cols());
    for (int i = 0; i < cfg.batch_size; ++i)
      batch.row(i) = dataset.row(static_cast<Eigen::Index>(
          state.rng.below(static_cast<std::uint64_t>(dataset.rows()))));

    try {
      state = train_step(state, batch, estimator, cfg);
      consecutive_degenerate = 0;
    } catch (const NotPositiveDefinite&) {
      // A degenerate batch skips the update; give up only when it persists.
      if (++consecutive_degenerate > 10) throw;
      continue;
    }

    if (state.iteration % cfg.log_every == 0 || state.iteration == cfg.iterations)
      history.push_back({state.iteration, state.last_d_loss, state.last_g_adv_loss,
                         state.last_pad_loss, state.last_gamma1, state.last_mean_quality});
  }
  return {state, history};
}

Matrix generate(const TrainState& state, const Matrix& z_batch) {
  if (z_batch.cols() != state.g_spec.layer_sizes.front())
    throw DimensionMismatch("generate: z width != noise_dim");
  return state.box.apply(forward(state.generator, state.g_spec, z_batch));
}

}  // namespace padgan
