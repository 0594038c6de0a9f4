#include "padgan/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "padgan/rng.hpp"

namespace padgan {

void MlpSpec::validate() const {
  if (layer_sizes.size() < 2)
    throw DimensionMismatch("MlpSpec: need at least input and output sizes");
  for (int s : layer_sizes)
    if (s < 1) throw DimensionMismatch("MlpSpec: layer sizes must be positive");
  if (!(leaky_slope > 0.0 && leaky_slope < 1.0))
    throw DimensionMismatch("MlpSpec: leaky_slope must be in (0, 1)");
}

std::size_t MlpParams::count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l)
    n += static_cast<std::size_t>(weights[l].size()) + static_cast<std::size_t>(biases[l].size());
  return n;
}

AdamState AdamState::zeros_like(const MlpParams& params) {
  AdamState s;
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    s.m_w.push_back(Matrix::Zero(params.weights[l].rows(), params.weights[l].cols()));
    s.v_w.push_back(Matrix::Zero(params.weights[l].rows(), params.weights[l].cols()));
    s.m_b.push_back(Vector::Zero(params.biases[l].size()));
    s.v_b.push_back(Vector::Zero(params.biases[l].size()));
  }
  return s;
}

MlpParams init_params(const MlpSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  MlpParams p;
  for (int l = 0; l < spec.num_layers(); ++l) {
    const int fan_in = spec.layer_sizes[l];
    const int fan_out = spec.layer_sizes[l + 1];
    const double scale = std::sqrt(2.0 / fan_in);
    Matrix w(fan_out, fan_in);
    for (int i = 0; i < fan_out; ++i)
      for (int j = 0; j < fan_in; ++j) w(i, j) = scale * rng.normal();
    p.weights.push_back(std::move(w));
    p.biases.push_back(Vector::Zero(fan_out));
  }
  return p;
}

namespace {

Matrix apply_activation(const Matrix& z, const MlpSpec& spec, bool is_output) {
  if (!is_output)
    return z.unaryExpr([s = spec.leaky_slope](double v) { return v > 0.0 ? v : s * v; });
  switch (spec.output_activation) {
    case OutputActivation::Tanh:
      return z.array().tanh().matrix();
    case OutputActivation::Sigmoid:
      return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
    case OutputActivation::Identity:
      return z;
  }
  return z;
}

// d(act)/d(pre), elementwise, from the stored pre-activations and activations.
Matrix activation_grad(const Matrix& z, const Matrix& a, const MlpSpec& spec, bool is_output) {
  if (!is_output)
    return z.unaryExpr([s = spec.leaky_slope](double v) { return v > 0.0 ? 1.0 : s; });
  switch (spec.output_activation) {
    case OutputActivation::Tanh:
      return (1.0 - a.array().square()).matrix();
    case OutputActivation::Sigmoid:
      return (a.array() * (1.0 - a.array())).matrix();
    case OutputActivation::Identity:
      return Matrix::Ones(z.rows(), z.cols());
  }
  return Matrix::Ones(z.rows(), z.cols());
}

}  // namespace

Matrix forward(const MlpParams& params, const MlpSpec& spec, const Matrix& input,
               ForwardTrace* trace) {
  if (input.cols() != spec.layer_sizes.front())
    throw DimensionMismatch("forward: input width " + std::to_string(input.cols()) +
                            " != first layer size " + std::to_string(spec.layer_sizes.front()));
  if (static_cast<int>(params.weights.size()) != spec.num_layers())
    throw DimensionMismatch("forward: params do not match spec layer count");

  if (trace) {
    trace->input = input;
    trace->preactivations.clear();
    trace->activations.clear();
  }
  Matrix a = input;
  for (int l = 0; l < spec.num_layers(); ++l) {
    const bool is_output = (l == spec.num_layers() - 1);
    Matrix z = a * params.weights[l].transpose();
    z.rowwise() += params.biases[l].transpose();
    a = apply_activation(z, spec, is_output);
    if (trace) {
      trace->preactivations.push_back(std::move(z));
      trace->activations.push_back(a);
    }
  }
  return a;
}

BackwardResult backward(const MlpParams& params, const MlpSpec& spec,
                        const ForwardTrace& trace, const Matrix& output_grad) {
  const int layers = spec.num_layers();
  if (static_cast<int>(trace.activations.size()) != layers ||
      static_cast<int>(trace.preactivations.size()) != layers)
    throw TraceMismatch("backward: trace layer count does not match spec");
  if (output_grad.rows() != trace.input.rows() ||
      output_grad.cols() != trace.activations.back().cols())
    throw TraceMismatch("backward: output_grad shape does not match forward output");

  BackwardResult res;
  res.param_grads.weights.resize(layers);
  res.param_grads.biases.resize(layers);

  Matrix da = output_grad;
  for (int l = layers - 1; l >= 0; --l) {
    const bool is_output = (l == layers - 1);
    const Matrix dz =
        da.cwiseProduct(activation_grad(trace.preactivations[l], trace.activations[l], spec, is_output));
    const Matrix& layer_input = (l == 0) ? trace.input : trace.activations[l - 1];
    res.param_grads.weights[l] = dz.transpose() * layer_input;
    res.param_grads.biases[l] = dz.colwise().sum().transpose();
    da = dz * params.weights[l];
  }
  res.input_grads = std::move(da);
  return res;
}

void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state,
               double lr, double beta1, double beta2, double eps) {
  if (grads.weights.size() != params.weights.size())
    throw DimensionMismatch("adam_step: gradient layer count mismatch");
  if (!(lr >= 0.0)) throw DimensionMismatch("adam_step: lr must be >= 0");

  state.step_count += 1;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.step_count));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.step_count));

  auto update = [&](auto& p, const auto& g, auto& m, auto& v) {
    m = beta1 * m + (1.0 - beta1) * g;
    v = (beta2 * v.array() + (1.0 - beta2) * g.array().square()).matrix();
    const auto m_hat = m.array() / bc1;
    const auto v_hat = v.array() / bc2;
    p = (p.array() - lr * m_hat / (v_hat.sqrt() + eps)).matrix();
  };
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    update(params.weights[l], grads.weights[l], state.m_w[l], state.v_w[l]);
    update(params.biases[l], grads.biases[l], state.m_b[l], state.v_b[l]);
  }
}

double max_relative_deviation(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("max_relative_deviation: size mismatch");
  const double scale =
      std::max({a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff(), 1e-12});
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

double finite_difference_check(const MlpParams& params, const MlpSpec& spec,
                               const Matrix& input, const BatchLoss& loss_fn, double h) {
  if (!(h > 0.0)) throw DimensionMismatch("finite_difference_check: h must be > 0");

  ForwardTrace trace;
  const Matrix out = forward(params, spec, input, &trace);
  const auto [value, output_grad] = loss_fn(out);
  (void)value;
  const BackwardResult analytic = backward(params, spec, trace, output_grad);

  // Flat views over (layer, is_bias, row, col) in a fixed order.
  struct Slot {
    int layer;
    bool bias;
    Eigen::Index row, col;
  };
  std::vector<Slot> slots;
  for (int l = 0; l < spec.num_layers(); ++l) {
    for (Eigen::Index i = 0; i < params.weights[l].rows(); ++i)
      for (Eigen::Index j = 0; j < params.weights[l].cols(); ++j)
        slots.push_back({l, false, i, j});
    for (Eigen::Index i = 0; i < params.biases[l].size(); ++i)
      slots.push_back({l, true, i, 0});
  }

  std::vector<std::size_t> indices(slots.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  constexpr std::size_t kMaxChecks = 10000;
  if (indices.size() > kMaxChecks) {
    Rng rng(0x9e3779b97f4a7c15ULL ^ indices.size());
    for (std::size_t i = 0; i < kMaxChecks; ++i) {
      const std::size_t j = i + rng.below(indices.size() - i);
      std::swap(indices[i], indices[j]);
    }
    indices.resize(kMaxChecks);
  }

  MlpParams work = params;
  auto loss_at = [&]() { return loss_fn(forward(work, spec, input)).first; };
  auto slot_ref = [&](const Slot& s) -> double& {
    return s.bias ? work.biases[s.layer](s.row) : work.weights[s.layer](s.row, s.col);
  };
  auto analytic_at = [&](const Slot& s) {
    return s.bias ? analytic.param_grads.biases[s.layer](s.row)
                  : analytic.param_grads.weights[s.layer](s.row, s.col);
  };

  Vector a(indices.size()), fd(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const Slot& s = slots[indices[k]];
    double& ref = slot_ref(s);
    const double saved = ref;
    ref = saved + h;
    const double up = loss_at();
    ref = saved - h;
    const double down = loss_at();
    ref = saved;
    fd(static_cast<Eigen::Index>(k)) = (up - down) / (2.0 * h);
    a(static_cast<Eigen::Index>(k)) = analytic_at(s);
  }
  return max_relative_deviation(a, fd);
}

}  // namespace padgan
