#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "whguard/matrix.hpp"
#include "whguard/random.hpp"

namespace whguard {

enum class Activation { sigmoid, relu, identity };
enum class Loss { binary_cross_entropy, mean_squared_error };

struct LayerParams {
  Matrix weights;  // out x in
  std::vector<double> biases;
  Activation activation = Activation::identity;

  std::size_t input_width() const noexcept { return weights.cols(); }
  std::size_t output_width() const noexcept { return weights.rows(); }

  friend bool operator==(const LayerParams&, const LayerParams&) = default;
};

using Network = std::vector<LayerParams>;

// pre[l] is layer l's affine output; post[0] is the input and post[l + 1]
// is layer l's activated output.
struct ForwardCache {
  std::vector<std::vector<double>> pre;
  std::vector<std::vector<double>> post;
};

double sigmoid(double z) noexcept;

std::vector<double> forward(const Network& net, std::span<const double> x,
                            ForwardCache* cache = nullptr);

struct LayerGradient {
  Matrix weights;
  std::vector<double> biases;
};

using NetworkGradient = std::vector<LayerGradient>;

// Mean loss over the batch. Binary cross-entropy expects a sigmoid output
// layer and is evaluated from the logits. Mean squared error averages over
// rows and output units.
double batch_loss(const Network& net, const Matrix& batch_x, const Matrix& batch_target, Loss loss);

// Gradient of batch_loss with respect to every weight and bias.
NetworkGradient gradients(const Network& net, const Matrix& batch_x, const Matrix& batch_target,
                          Loss loss);

// Weights uniform in +-sqrt(6 / (fan_in + fan_out)); biases zero.
Network init_network(std::size_t input_width, std::span<const std::size_t> widths,
                     std::span<const Activation> activations, Rng& rng);

struct TrainConfig {
  std::size_t epochs = 50;
  std::size_t batch_size = 32;
  double learning_rate = 0.05;
  std::vector<std::size_t> hidden_sizes = {32};
  std::uint64_t seed = 42;

  static TrainConfig mlp_defaults();
  // hidden_sizes holds the encoder widths; the last one is the latent width.
  static TrainConfig autoencoder_defaults();
};

struct MlpModel {
  Network layers;

  std::size_t input_width() const { return layers.front().input_width(); }
  friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

// Relu hidden layers, one sigmoid output unit, binary cross-entropy,
// plain mini-batch gradient descent. Batches larger than the training set
// are clamped to it.
MlpModel train_mlp(const Matrix& features, std::span<const int> labels, const TrainConfig& cfg);

// Strictly inside (0, 1).
double predict_proba_mlp(const MlpModel& model, std::span<const double> x);

struct AutoencoderModel {
  Network encoder;
  Network decoder;

  std::size_t input_width() const { return encoder.front().input_width(); }
  std::size_t latent_dim() const { return encoder.back().output_width(); }
  friend bool operator==(const AutoencoderModel&, const AutoencoderModel&) = default;
};

// Sigmoid encoder layers, decoder mirroring them with an identity output,
// mean squared reconstruction error.
AutoencoderModel train_autoencoder(const Matrix& features, const TrainConfig& cfg);

std::vector<double> encode(const AutoencoderModel& ae, std::span<const double> x);
std::vector<double> reconstruct(const AutoencoderModel& ae, std::span<const double> x);
Matrix encode_rows(const AutoencoderModel& ae, const Matrix& features);
double reconstruction_mse(const AutoencoderModel& ae, const Matrix& features);

// Concatenated encoder + decoder, handy for loss and gradient evaluation.
Network stacked(const AutoencoderModel& ae);

}  // namespace whguard
