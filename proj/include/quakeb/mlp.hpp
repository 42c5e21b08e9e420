#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quakeb/error.hpp"
#include "quakeb/rng.hpp"
#include "quakeb/seismicity.hpp"
#include "quakeb/util.hpp"

namespace quakeb {

inline constexpr std::size_t kInputDim = 7;

struct NetworkConfig {
  std::size_t input_dim = kInputDim;
  std::size_t hidden_dim = 15;
  std::size_t output_dim = 1;
};

inline void validate(const NetworkConfig& config) {
  if (config.input_dim == 0 || config.hidden_dim == 0)
    throw ValidationError("network dimensions must be positive");
  if (config.output_dim != 1)
    throw ValidationError("only single-output networks are supported");
}

/// Two sigmoid layers. hidden_weights is hidden_dim x input_dim, row-major;
/// output_weights is the single output row of length hidden_dim.
struct Network {
  NetworkConfig config;
  std::vector<double> hidden_weights;
  std::vector<double> hidden_bias;
  std::vector<double> output_weights;
  double output_bias = 0;
};

struct TrainParams {
  std::size_t epochs = 500;
  double learning_rate = 0.1;
  std::uint64_t seed = 0;
  bool shuffle = false;  // default presentation order is the dataset order
};

inline void validate(const TrainParams& params) {
  if (params.epochs < 1) throw ValidationError("epoch count must be at least 1");
  // learning_rate 0 is allowed: it turns training into a no-op, which the
  // determinism tests rely on.
  if (!(params.learning_rate >= 0) || !std::isfinite(params.learning_rate))
    throw ValidationError("learning rate must be finite and non-negative");
}

/// One normalized training example.
struct Pattern {
  std::array<double, kInputDim> inputs{};
  double target = 0;
};

/// Min-max input scaling fitted on the training set, plus the fixed magnitude
/// scale that maps targets into the sigmoid's output range.
struct Normalizer {
  std::array<double, kInputDim> min{};
  std::array<double, kInputDim> max{};
  double magnitude_scale = 8.0;

  static Normalizer fit(const Dataset& dataset) {
    if (dataset.vectors.empty())
      throw ValidationError("cannot fit a normalizer on an empty dataset");
    Normalizer norm;
    const auto first = dataset.vectors.front().inputs();
    norm.min = first;
    norm.max = first;
    for (const FeatureVector& v : dataset.vectors) {
      const auto x = v.inputs();
      for (std::size_t i = 0; i < kInputDim; ++i) {
        if (x[i] < norm.min[i]) norm.min[i] = x[i];
        if (x[i] > norm.max[i]) norm.max[i] = x[i];
      }
    }
    return norm;
  }

  /// Maps each feature to [0,1] on the fitted range. A constant feature maps
  /// to 0. Out-of-range inputs (test data) are transformed, not clamped.
  std::array<double, kInputDim> transform(const std::array<double, kInputDim>& x) const {
    std::array<double, kInputDim> out{};
    for (std::size_t i = 0; i < kInputDim; ++i) {
      const double span = max[i] - min[i];
      out[i] = span == 0 ? 0.0 : (x[i] - min[i]) / span;
    }
    return out;
  }

  double normalize_target(double y) const { return y / magnitude_scale; }
  double denormalize_output(double yhat) const { return yhat * magnitude_scale; }
};

inline void validate(const Normalizer& norm) {
  for (std::size_t i = 0; i < kInputDim; ++i) {
    if (!(norm.min[i] <= norm.max[i]))
      throw ValidationError("normalizer feature " + std::to_string(i + 1) +
                            " has min above max");
  }
  if (!(norm.magnitude_scale > 0))
    throw ValidationError("magnitude scale must be positive");
}

inline std::vector<Pattern> to_patterns(const Dataset& dataset, const Normalizer& norm) {
  std::vector<Pattern> patterns;
  patterns.reserve(dataset.vectors.size());
  for (const FeatureVector& v : dataset.vectors)
    patterns.push_back({norm.transform(v.inputs()), norm.normalize_target(v.y)});
  return patterns;
}

/// Glorot-uniform weights: each layer drawn from (-r, r) with
/// r = sqrt(6 / (fan_in + fan_out)), biases zero. Draw order is fixed
/// (hidden row-major, then output) so a seed pins the network exactly.
inline Network init_network(const NetworkConfig& config, std::uint64_t seed) {
  validate(config);
  Network net;
  net.config = config;
  SplitMix64 rng(seed);
  const double r_hidden =
      std::sqrt(6.0 / static_cast<double>(config.input_dim + config.hidden_dim));
  net.hidden_weights.resize(config.hidden_dim * config.input_dim);
  for (double& w : net.hidden_weights) w = rng.uniform_in(-r_hidden, r_hidden);
  net.hidden_bias.assign(config.hidden_dim, 0.0);
  const double r_output = std::sqrt(6.0 / static_cast<double>(config.hidden_dim + 1));
  net.output_weights.resize(config.hidden_dim);
  for (double& w : net.output_weights) w = rng.uniform_in(-r_output, r_output);
  net.output_bias = 0.0;
  return net;
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// Forward pass keeping the hidden activations, which backprop reuses.
struct ForwardTrace {
  std::vector<double> hidden;
  double output = 0;
};

inline ForwardTrace forward_trace(const Network& net, std::span<const double> x) {
  const std::size_t in = net.config.input_dim;
  const std::size_t hid = net.config.hidden_dim;
  ForwardTrace trace;
  trace.hidden.resize(hid);
  for (std::size_t j = 0; j < hid; ++j) {
    double z = net.hidden_bias[j];
    const double* row = net.hidden_weights.data() + j * in;
    for (std::size_t i = 0; i < in; ++i) z += row[i] * x[i];
    trace.hidden[j] = sigmoid(z);
  }
  double z = net.output_bias;
  for (std::size_t j = 0; j < hid; ++j) z += net.output_weights[j] * trace.hidden[j];
  trace.output = sigmoid(z);
  return trace;
}

inline double forward(const Network& net, std::span<const double> x) {
  return forward_trace(net, x).output;
}

/// Gradients of L = (1/2)(yhat - y)^2, same shapes as the network.
struct Gradients {
  std::vector<double> hidden_weights;
  std::vector<double> hidden_bias;
  std::vector<double> output_weights;
  double output_bias = 0;
};

inline Gradients gradients(const Network& net, std::span<const double> x, double y) {
  const std::size_t in = net.config.input_dim;
  const std::size_t hid = net.config.hidden_dim;
  const ForwardTrace trace = forward_trace(net, x);
  const double yhat = trace.output;
  const double delta_out = (yhat - y) * yhat * (1.0 - yhat);

  Gradients g;
  g.output_bias = delta_out;
  g.output_weights.resize(hid);
  g.hidden_bias.resize(hid);
  g.hidden_weights.resize(hid * in);
  for (std::size_t j = 0; j < hid; ++j) {
    const double h = trace.hidden[j];
    g.output_weights[j] = delta_out * h;
    const double delta_h = delta_out * net.output_weights[j] * h * (1.0 - h);
    g.hidden_bias[j] = delta_h;
    double* row = g.hidden_weights.data() + j * in;
    for (std::size_t i = 0; i < in; ++i) row[i] = delta_h * x[i];
  }
  return g;
}

inline void apply_gradients(Network& net, const Gradients& g, double rate) {
  for (std::size_t i = 0; i < net.hidden_weights.size(); ++i)
    net.hidden_weights[i] -= rate * g.hidden_weights[i];
  for (std::size_t i = 0; i < net.hidden_bias.size(); ++i)
    net.hidden_bias[i] -= rate * g.hidden_bias[i];
  for (std::size_t i = 0; i < net.output_weights.size(); ++i)
    net.output_weights[i] -= rate * g.output_weights[i];
  net.output_bias -= rate * g.output_bias;
}

inline double mean_loss(const Network& net, std::span<const Pattern> patterns) {
  if (patterns.empty()) throw ValidationError("mean loss over an empty pattern set");
  double total = 0;
  for (const Pattern& p : patterns) {
    const double r = forward(net, p.inputs) - p.target;
    total += 0.5 * r * r;
  }
  return total / static_cast<double>(patterns.size());
}

struct TrainResult {
  Network net;
  std::vector<double> loss_history;  // per-epoch mean of pre-update losses
};

/// Online gradient descent: one update per pattern, patterns in dataset order
/// each epoch (or reshuffled per epoch when params.shuffle is set).
inline TrainResult train(Network net, std::span<const Pattern> patterns,
                         const TrainParams& params) {
  validate(params);
  if (patterns.empty()) throw ValidationError("cannot train on an empty dataset");
  std::vector<std::size_t> order(patterns.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  SplitMix64 rng(params.seed);

  TrainResult result;
  result.loss_history.reserve(params.epochs);
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    if (params.shuffle) {
      for (std::size_t i = order.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next() % i);
        std::swap(order[i - 1], order[j]);
      }
    }
    double total = 0;
    for (const std::size_t idx : order) {
      const Pattern& p = patterns[idx];
      const Gradients g = gradients(net, p.inputs, p.target);
      const double r = forward(net, p.inputs) - p.target;
      total += 0.5 * r * r;
      apply_gradients(net, g, params.learning_rate);
    }
    result.loss_history.push_back(total / static_cast<double>(patterns.size()));
  }
  result.net = std::move(net);
  return result;
}

/// Raw normalized outputs, one per vector, in dataset order. Inputs go
/// through the training-set normalizer; out-of-range test values are fine.
inline std::vector<double> predict(const Network& net, const Dataset& dataset,
                                   const Normalizer& norm) {
  std::vector<double> out;
  out.reserve(dataset.vectors.size());
  for (const FeatureVector& v : dataset.vectors)
    out.push_back(forward(net, norm.transform(v.inputs())));
  return out;
}

struct Model {
  Network net;
  Normalizer norm;
};

inline constexpr const char* kModelMagic = "QBNET v1";

/// Text format: magic line, dims line, normalizer line (min/max per input
/// then the magnitude scale), hidden weight rows, hidden bias row, output
/// weight row, output bias row. All values shortest-round-trip decimals.
inline void save_model(const Model& model, std::ostream& out) {
  const Network& net = model.net;
  out << kModelMagic << '\n'
      << net.config.input_dim << ' ' << net.config.hidden_dim << ' ' << net.config.output_dim
      << '\n';
  for (std::size_t i = 0; i < kInputDim; ++i) {
    if (i) out << ' ';
    out << format_double(model.norm.min[i]) << ' ' << format_double(model.norm.max[i]);
  }
  out << ' ' << format_double(model.norm.magnitude_scale) << '\n';
  const std::size_t in = net.config.input_dim;
  for (std::size_t j = 0; j < net.config.hidden_dim; ++j) {
    for (std::size_t i = 0; i < in; ++i) {
      if (i) out << ' ';
      out << format_double(net.hidden_weights[j * in + i]);
    }
    out << '\n';
  }
  for (std::size_t j = 0; j < net.config.hidden_dim; ++j) {
    if (j) out << ' ';
    out << format_double(net.hidden_bias[j]);
  }
  out << '\n';
  for (std::size_t j = 0; j < net.config.hidden_dim; ++j) {
    if (j) out << ' ';
    out << format_double(net.output_weights[j]);
  }
  out << '\n' << format_double(net.output_bias) << '\n';
}

namespace detail {

inline std::vector<double> parse_row(std::istream& in, std::size_t expect,
                                     const std::string& what) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("model file truncated before " + what);
  const auto tokens = split_ws(line);
  if (tokens.size() != expect)
    throw ParseError("model " + what + ": expected " + std::to_string(expect) +
                     " values, got " + std::to_string(tokens.size()));
  std::vector<double> row;
  row.reserve(expect);
  for (const std::string_view t : tokens) row.push_back(parse_double(t, "model " + what));
  return row;
}

}  // namespace detail

inline Model load_model(std::istream& in, const NetworkConfig& expect = {}) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty model file");
  if (std::string(trim(line)) != kModelMagic)
    throw ParseError("model file version mismatch: expected '" + std::string(kModelMagic) +
                     "', got '" + std::string(trim(line)) + "'");
  if (!std::getline(in, line)) throw ParseError("model file truncated before dimensions");
  const auto dims = split_ws(line);
  if (dims.size() != 3) throw ParseError("model dimension line must hold 3 integers");
  const auto in_dim = static_cast<std::size_t>(parse_int(dims[0], "model input dim"));
  const auto hid_dim = static_cast<std::size_t>(parse_int(dims[1], "model hidden dim"));
  const auto out_dim = static_cast<std::size_t>(parse_int(dims[2], "model output dim"));
  if (in_dim != expect.input_dim || hid_dim != expect.hidden_dim || out_dim != expect.output_dim)
    throw ParseError("model dimensions " + std::to_string(in_dim) + " " +
                     std::to_string(hid_dim) + " " + std::to_string(out_dim) +
                     " do not match the expected " + std::to_string(expect.input_dim) + " " +
                     std::to_string(expect.hidden_dim) + " " + std::to_string(expect.output_dim));

  Model model;
  model.net.config = {in_dim, hid_dim, out_dim};
  const auto norm_row = detail::parse_row(in, 2 * kInputDim + 1, "normalizer");
  for (std::size_t i = 0; i < kInputDim; ++i) {
    model.norm.min[i] = norm_row[2 * i];
    model.norm.max[i] = norm_row[2 * i + 1];
  }
  model.norm.magnitude_scale = norm_row[2 * kInputDim];
  validate(model.norm);

  model.net.hidden_weights.reserve(hid_dim * in_dim);
  for (std::size_t j = 0; j < hid_dim; ++j) {
    const auto row = detail::parse_row(in, in_dim, "hidden weight row " + std::to_string(j + 1));
    model.net.hidden_weights.insert(model.net.hidden_weights.end(), row.begin(), row.end());
  }
  model.net.hidden_bias = detail::parse_row(in, hid_dim, "hidden bias");
  model.net.output_weights = detail::parse_row(in, hid_dim, "output weights");
  model.net.output_bias = detail::parse_row(in, 1, "output bias")[0];
  return model;
}

}  // namespace quakeb
