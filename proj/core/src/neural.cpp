#include "whguard/neural.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "whguard/error.hpp"

namespace whguard {
namespace {

double activate(Activation a, double z) noexcept {
  switch (a) {
    case Activation::sigmoid: return sigmoid(z);
    case Activation::relu: return z > 0.0 ? z : 0.0;
    case Activation::identity: return z;
  }
  return z;
}

// Derivative expressed through the pre-activation and activated value.
double activation_slope(Activation a, double z, double y) noexcept {
  switch (a) {
    case Activation::sigmoid: return y * (1.0 - y);
    case Activation::relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::identity: return 1.0;
  }
  return 1.0;
}

// log(1 + e^z) without overflow.
double softplus(double z) noexcept {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

void check_batch(const Network& net, const Matrix& x, const Matrix& t) {
  if (net.empty()) throw Error(ErrorCode::InvalidArgument, "network has no layers");
  if (x.rows() == 0) throw Error(ErrorCode::EmptyMatrix, "empty batch");
  if (x.cols() != net.front().input_width() || t.rows() != x.rows() ||
      t.cols() != net.back().output_width()) {
    throw Error(ErrorCode::DimensionMismatch,
                "batch " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) + " / target " +
                    std::to_string(t.rows()) + "x" + std::to_string(t.cols()) + " vs network " +
                    std::to_string(net.front().input_width()) + "->" +
                    std::to_string(net.back().output_width()));
  }
}

void check_bce_head(const Network& net, Loss loss) {
  if (loss == Loss::binary_cross_entropy && net.back().activation != Activation::sigmoid) {
    throw Error(ErrorCode::InvalidArgument, "binary cross-entropy needs a sigmoid output layer");
  }
}

void apply_step(Network& net, const NetworkGradient& grad, double lr) {
  for (std::size_t l = 0; l < net.size(); ++l) {
    auto w = net[l].weights.values();
    const auto gw = grad[l].weights.values();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= lr * gw[i];
    for (std::size_t i = 0; i < net[l].biases.size(); ++i) {
      net[l].biases[i] -= lr * grad[l].biases[i];
    }
  }
}

// Shuffled mini-batch descent over (x, t) for cfg.epochs epochs.
void descend(Network& net, const Matrix& x, const Matrix& t, Loss loss, const TrainConfig& cfg,
             Rng& rng) {
  const std::size_t n = x.rows();
  const std::size_t batch = std::min(cfg.batch_size, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(start + batch, n);
      const std::span<const std::size_t> rows(order.data() + start, stop - start);
      const auto grad = gradients(net, x.select_rows(rows), t.select_rows(rows), loss);
      apply_step(net, grad, cfg.learning_rate);
    }
  }
}

void check_config(const TrainConfig& cfg) {
  if (cfg.batch_size == 0) throw Error(ErrorCode::InvalidArgument, "batch_size must be positive");
  if (!(cfg.learning_rate > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "learning_rate must be positive");
  }
  for (const auto w : cfg.hidden_sizes) {
    if (w == 0) throw Error(ErrorCode::InvalidArgument, "hidden layer widths must be positive");
  }
}

}  // namespace

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::vector<double> forward(const Network& net, std::span<const double> x, ForwardCache* cache) {
  if (net.empty()) throw Error(ErrorCode::InvalidArgument, "network has no layers");
  if (x.size() != net.front().input_width()) {
    throw Error(ErrorCode::DimensionMismatch, "input width " + std::to_string(x.size()) +
                                                  ", network expects " +
                                                  std::to_string(net.front().input_width()));
  }
  if (cache != nullptr) {
    cache->pre.clear();
    cache->post.assign(1, std::vector<double>(x.begin(), x.end()));
  }
  std::vector<double> current(x.begin(), x.end());
  for (const auto& layer : net) {
    std::vector<double> z(layer.output_width());
    for (std::size_t o = 0; o < z.size(); ++o) {
      const auto w = layer.weights.row(o);
      double acc = layer.biases[o];
      for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * current[i];
      z[o] = acc;
    }
    std::vector<double> y(z.size());
    for (std::size_t o = 0; o < z.size(); ++o) y[o] = activate(layer.activation, z[o]);
    if (cache != nullptr) {
      cache->pre.push_back(z);
      cache->post.push_back(y);
    }
    current = std::move(y);
  }
  return current;
}

double batch_loss(const Network& net, const Matrix& batch_x, const Matrix& batch_target, Loss loss) {
  check_batch(net, batch_x, batch_target);
  check_bce_head(net, loss);
  double total = 0.0;
  ForwardCache cache;
  for (std::size_t r = 0; r < batch_x.rows(); ++r) {
    forward(net, batch_x.row(r), &cache);
    const auto t = batch_target.row(r);
    if (loss == Loss::binary_cross_entropy) {
      const auto& z = cache.pre.back();
      for (std::size_t o = 0; o < z.size(); ++o) total += softplus(z[o]) - t[o] * z[o];
    } else {
      const auto& y = cache.post.back();
      for (std::size_t o = 0; o < y.size(); ++o) total += (y[o] - t[o]) * (y[o] - t[o]);
    }
  }
  const double units = loss == Loss::mean_squared_error
                           ? static_cast<double>(batch_target.cols())
                           : 1.0;
  return total / (static_cast<double>(batch_x.rows()) * units);
}

NetworkGradient gradients(const Network& net, const Matrix& batch_x, const Matrix& batch_target,
                          Loss loss) {
  check_batch(net, batch_x, batch_target);
  check_bce_head(net, loss);
  NetworkGradient grad;
  grad.reserve(net.size());
  for (const auto& layer : net) {
    grad.push_back({Matrix(layer.output_width(), layer.input_width()),
                    std::vector<double>(layer.output_width(), 0.0)});
  }
  const double rows = static_cast<double>(batch_x.rows());
  const double scale = loss == Loss::mean_squared_error
                           ? 2.0 / (rows * static_cast<double>(batch_target.cols()))
                           : 1.0 / rows;
  ForwardCache cache;
  std::vector<double> delta;
  for (std::size_t r = 0; r < batch_x.rows(); ++r) {
    forward(net, batch_x.row(r), &cache);
    const auto t = batch_target.row(r);
    const auto& out = cache.post.back();
    delta.assign(out.size(), 0.0);
    for (std::size_t o = 0; o < out.size(); ++o) {
      if (loss == Loss::binary_cross_entropy) {
        // Sigmoid and cross-entropy derivatives collapse to p - t.
        delta[o] = scale * (out[o] - t[o]);
      } else {
        delta[o] = scale * (out[o] - t[o]) *
                   activation_slope(net.back().activation, cache.pre.back()[o], out[o]);
      }
    }
    for (std::size_t l = net.size(); l-- > 0;) {
      const auto& input = cache.post[l];
      auto& g = grad[l];
      for (std::size_t o = 0; o < delta.size(); ++o) {
        g.biases[o] += delta[o];
        auto gw = g.weights.row(o);
        for (std::size_t i = 0; i < input.size(); ++i) gw[i] += delta[o] * input[i];
      }
      if (l == 0) break;
      std::vector<double> below(input.size(), 0.0);
      for (std::size_t o = 0; o < delta.size(); ++o) {
        const auto w = net[l].weights.row(o);
        for (std::size_t i = 0; i < input.size(); ++i) below[i] += w[i] * delta[o];
      }
      const auto& act = net[l - 1].activation;
      for (std::size_t i = 0; i < below.size(); ++i) {
        below[i] *= activation_slope(act, cache.pre[l - 1][i], input[i]);
      }
      delta = std::move(below);
    }
  }
  return grad;
}

Network init_network(std::size_t input_width, std::span<const std::size_t> widths,
                     std::span<const Activation> activations, Rng& rng) {
  if (widths.size() != activations.size()) {
    throw Error(ErrorCode::InvalidArgument, "one activation per layer is required");
  }
  Network net;
  std::size_t in = input_width;
  for (std::size_t l = 0; l < widths.size(); ++l) {
    LayerParams layer{Matrix(widths[l], in), std::vector<double>(widths[l], 0.0), activations[l]};
    const double limit = std::sqrt(6.0 / static_cast<double>(in + widths[l]));
    for (auto& w : layer.weights.values()) w = rng.uniform(-limit, limit);
    net.push_back(std::move(layer));
    in = widths[l];
  }
  return net;
}

TrainConfig TrainConfig::mlp_defaults() { return TrainConfig{}; }

TrainConfig TrainConfig::autoencoder_defaults() {
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.hidden_sizes = {8};
  return cfg;
}

MlpModel train_mlp(const Matrix& features, std::span<const int> labels, const TrainConfig& cfg) {
  if (features.rows() == 0) throw Error(ErrorCode::EmptyMatrix, "empty training set");
  if (labels.size() != features.rows()) {
    throw Error(ErrorCode::LengthMismatch, "labels do not match feature rows");
  }
  const bool has_pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
  const bool has_neg = std::find(labels.begin(), labels.end(), 0) != labels.end();
  if (!has_pos || !has_neg) {
    throw Error(ErrorCode::SingleClassTrainingSet, "MLP training needs both classes");
  }
  check_config(cfg);

  std::vector<std::size_t> widths = cfg.hidden_sizes;
  widths.push_back(1);
  std::vector<Activation> acts(cfg.hidden_sizes.size(), Activation::relu);
  acts.push_back(Activation::sigmoid);

  Rng rng(cfg.seed);
  MlpModel model{init_network(features.cols(), widths, acts, rng)};

  Matrix targets(labels.size(), 1);
  for (std::size_t i = 0; i < labels.size(); ++i) targets(i, 0) = labels[i] != 0 ? 1.0 : 0.0;
  descend(model.layers, features, targets, Loss::binary_cross_entropy, cfg, rng);
  return model;
}

double predict_proba_mlp(const MlpModel& model, std::span<const double> x) {
  constexpr double kFloor = 1e-15;
  const auto out = forward(model.layers, x);
  return std::clamp(out.front(), kFloor, 1.0 - kFloor);
}

AutoencoderModel train_autoencoder(const Matrix& features, const TrainConfig& cfg) {
  if (features.rows() == 0) throw Error(ErrorCode::EmptyMatrix, "empty training matrix");
  check_config(cfg);
  if (cfg.hidden_sizes.empty()) {
    throw Error(ErrorCode::InvalidArgument, "autoencoder needs at least one encoder layer");
  }
  const std::size_t d = features.cols();
  if (cfg.hidden_sizes.back() > d) {
    throw Error(ErrorCode::LatentTooLarge, "latent width " + std::to_string(cfg.hidden_sizes.back()) +
                                               " exceeds input width " + std::to_string(d));
  }

  Rng rng(cfg.seed);
  const std::vector<Activation> enc_acts(cfg.hidden_sizes.size(), Activation::sigmoid);
  AutoencoderModel ae;
  ae.encoder = init_network(d, cfg.hidden_sizes, enc_acts, rng);

  std::vector<std::size_t> dec_widths(cfg.hidden_sizes.rbegin() + 1, cfg.hidden_sizes.rend());
  dec_widths.push_back(d);
  std::vector<Activation> dec_acts(dec_widths.size(), Activation::sigmoid);
  dec_acts.back() = Activation::identity;
  ae.decoder = init_network(cfg.hidden_sizes.back(), dec_widths, dec_acts, rng);

  Network net = stacked(ae);
  descend(net, features, features, Loss::mean_squared_error, cfg, rng);
  const auto split = static_cast<std::ptrdiff_t>(ae.encoder.size());
  ae.encoder.assign(net.begin(), net.begin() + split);
  ae.decoder.assign(net.begin() + split, net.end());
  return ae;
}

std::vector<double> encode(const AutoencoderModel& ae, std::span<const double> x) {
  return forward(ae.encoder, x);
}

std::vector<double> reconstruct(const AutoencoderModel& ae, std::span<const double> x) {
  return forward(ae.decoder, forward(ae.encoder, x));
}

Matrix encode_rows(const AutoencoderModel& ae, const Matrix& features) {
  Matrix out(features.rows(), ae.latent_dim());
  for (std::size_t r = 0; r < features.rows(); ++r) {
    const auto z = encode(ae, features.row(r));
    std::copy(z.begin(), z.end(), out.row(r).begin());
  }
  return out;
}

double reconstruction_mse(const AutoencoderModel& ae, const Matrix& features) {
  return batch_loss(stacked(ae), features, features, Loss::mean_squared_error);
}

Network stacked(const AutoencoderModel& ae) {
  Network net = ae.encoder;
  net.insert(net.end(), ae.decoder.begin(), ae.decoder.end());
  return net;
}

}  // namespace whguard
