#ifndef PADGAN_MLP_HPP
#define PADGAN_MLP_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "padgan/linalg.hpp"

namespace padgan {

enum class OutputActivation { Tanh, Sigmoid, Identity };

// Fully connected stack: LeakyReLU on every hidden layer, a configurable
// activation on the last.
struct MlpSpec {
  std::vector<int> layer_sizes;  // input size first, at least two entries
  double leaky_slope = 0.2;      // in (0, 1)
  OutputActivation output_activation = OutputActivation::Identity;

  int num_layers() const { return static_cast<int>(layer_sizes.size()) - 1; }
  void validate() const;
};

struct MlpParams {
  std::vector<Matrix> weights;  // (out x in) per layer
  std::vector<Vector> biases;   // (out) per layer

  std::size_t count() const;  // total scalar parameters
};

struct AdamState {
  long step_count = 0;
  std::vector<Matrix> m_w, v_w;
  std::vector<Vector> m_b, v_b;

  static AdamState zeros_like(const MlpParams& params);
};

// Per-layer intermediates kept for the backward pass.
struct ForwardTrace {
  Matrix input;                       // n x layer_sizes[0]
  std::vector<Matrix> preactivations;
  std::vector<Matrix> activations;
};

struct BackwardResult {
  MlpParams param_grads;  // gradients of sum over the batch
  Matrix input_grads;     // n x layer_sizes[0]
};

// He-style init: weights ~ N(0, 2/fan_in), biases zero. Deterministic per seed.
MlpParams init_params(const MlpSpec& spec, std::uint64_t seed);

// Batch forward (rows are samples). Fills *trace when given.
Matrix forward(const MlpParams& params, const MlpSpec& spec, const Matrix& input,
               ForwardTrace* trace = nullptr);

// Exact reverse-mode gradients of sum(output_grad .* output) with respect to
// the parameters and to the input batch.
BackwardResult backward(const MlpParams& params, const MlpSpec& spec,
                        const ForwardTrace& trace, const Matrix& output_grad);

void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state,
               double lr, double beta1 = 0.5, double beta2 = 0.999, double eps = 1e-8);

// Loss over a network output batch: value plus d(value)/d(output).
using BatchLoss = std::function<std::pair<double, Matrix>(const Matrix& output)>;

// Max deviation between analytic parameter gradients and central finite
// differences, normalized by the gradient's overall magnitude. Checks every
// parameter, or a seeded 10^4-element subset above 10^4 parameters.
double finite_difference_check(const MlpParams& params, const MlpSpec& spec,
                               const Matrix& input, const BatchLoss& loss_fn, double h);

// Shared deviation measure used by the gradient suites:
// max_i |a_i - b_i| / max(||a||_inf, ||b||_inf, tiny).
double max_relative_deviation(const Vector& a, const Vector& b);

}  // namespace padgan

#endif
