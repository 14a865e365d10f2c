#include "fairrep/engine/network.hpp"

#include <cmath>
#include <string>

#include "fairrep/error.hpp"

namespace fairrep::engine {

namespace {

Matrix relu(const Matrix& x) { return x.cwiseMax(0.0); }

// d relu / dx, taking the derivative at 0 as 0.
Matrix relu_mask(const Matrix& pre) { return (pre.array() > 0.0).cast<double>().matrix(); }

}  // namespace

DenseNet::DenseNet(std::vector<Layer> layers, Activation output_activation)
    : layers_(std::move(layers)), output_activation_(output_activation) {
  validate();
}

DenseNet DenseNet::glorot(const std::vector<std::size_t>& widths, Activation output_activation,
                          Rng& rng) {
  if (widths.size() < 2) throw DimensionError("a network needs at least an input and output width");
  std::vector<Layer> layers;
  layers.reserve(widths.size() - 1);
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    const auto fan_in = static_cast<Eigen::Index>(widths[i]);
    const auto fan_out = static_cast<Eigen::Index>(widths[i + 1]);
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Layer layer{Matrix(fan_out, fan_in), Vector::Zero(fan_out)};
    // Row-major fill order so the draw sequence does not depend on storage.
    for (Eigen::Index r = 0; r < fan_out; ++r)
      for (Eigen::Index c = 0; c < fan_in; ++c) layer.weight(r, c) = rng.uniform(-limit, limit);
    layers.push_back(std::move(layer));
  }
  return DenseNet(std::move(layers), output_activation);
}

void DenseNet::validate() const {
  if (layers_.empty()) throw DimensionError("network has no layers");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Layer& l = layers_[i];
    if (l.weight.rows() == 0 || l.weight.cols() == 0)
      throw DimensionError("layer " + std::to_string(i) + " has an empty weight matrix");
    if (l.bias.size() != l.weight.rows())
      throw DimensionError("layer " + std::to_string(i) + " bias length does not match its outputs");
    if (i > 0 && layers_[i - 1].weight.rows() != l.weight.cols())
      throw DimensionError("layer " + std::to_string(i) + " input width " +
                           std::to_string(l.weight.cols()) + " does not chain with previous output " +
                           std::to_string(layers_[i - 1].weight.rows()));
  }
  require_finite("construction");
}

std::size_t DenseNet::input_dim() const { return layers_.empty() ? 0 : layers_.front().inputs(); }
std::size_t DenseNet::output_dim() const { return layers_.empty() ? 0 : layers_.back().outputs(); }

std::size_t DenseNet::parameter_count() const {
  std::size_t n = 0;
  for (const Layer& l : layers_) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

std::vector<std::size_t> DenseNet::widths() const {
  std::vector<std::size_t> w;
  if (layers_.empty()) return w;
  w.push_back(input_dim());
  for (const Layer& l : layers_) w.push_back(l.outputs());
  return w;
}

bool DenseNet::all_finite() const {
  for (const Layer& l : layers_)
    if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
  return true;
}

void DenseNet::require_finite(const char* context) const {
  for (std::size_t i = 0; i < layers_.size(); ++i)
    if (!layers_[i].weight.allFinite() || !layers_[i].bias.allFinite())
      throw NumericError(std::string("non-finite parameter in layer ") + std::to_string(i) +
                         " after " + context);
}

NetGradients& NetGradients::operator+=(const NetGradients& other) {
  if (other.layers.size() != layers.size()) throw DimensionError("gradient layer counts differ");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    layers[i].weight += other.layers[i].weight;
    layers[i].bias += other.layers[i].bias;
  }
  if (input.size() == other.input.size())
    input += other.input;
  else
    throw DimensionError("input gradient shapes differ");
  return *this;
}

bool NetGradients::all_finite() const {
  for (const Layer& l : layers)
    if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
  return input.allFinite();
}

ForwardResult forward(const DenseNet& net, const Matrix& batch,
                      std::optional<GradientReversal> reversal) {
  const auto& layers = net.layers();
  if (layers.empty()) throw DimensionError("forward through an empty network");
  if (static_cast<std::size_t>(batch.cols()) != net.input_dim())
    throw DimensionError("batch has " + std::to_string(batch.cols()) + " columns, network expects " +
                         std::to_string(net.input_dim()));
  if (!batch.allFinite()) throw NumericError("non-finite value in forward input");
  if (reversal) {
    if (reversal->boundary > layers.size())
      throw DimensionError("reversal boundary past the network output");
    if (!(reversal->scale >= 0.0) || !std::isfinite(reversal->scale))
      throw NumericError("reversal scale must be finite and non-negative");
  }

  ForwardResult result;
  Tape& tape = result.tape;
  tape.net_ = &net;
  tape.reversal_ = reversal;
  tape.batch_size_ = static_cast<std::size_t>(batch.rows());
  tape.inputs_.reserve(layers.size());
  tape.pre_activations_.reserve(layers.size());

  Matrix activation = batch;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const Layer& l = layers[i];
    Matrix pre = activation * l.weight.transpose();
    pre.rowwise() += l.bias.transpose();
    tape.inputs_.push_back(std::move(activation));
    const bool last = i + 1 == layers.size();
    if (!last || net.output_activation() == Activation::relu)
      activation = relu(pre);
    else
      activation = pre;
    tape.pre_activations_.push_back(std::move(pre));
  }
  if (!activation.allFinite()) throw NumericError("non-finite network output");
  result.output = std::move(activation);
  return result;
}

NetGradients backward(Tape& tape, const Matrix& output_grad) {
  if (tape.consumed_) throw Error("tape already consumed by a previous backward pass");
  if (tape.net_ == nullptr) throw Error("backward on a tape that was never recorded");
  const DenseNet& net = *tape.net_;
  const auto& layers = net.layers();
  const auto n = static_cast<Eigen::Index>(tape.batch_size_);
  if (output_grad.rows() != n || static_cast<std::size_t>(output_grad.cols()) != net.output_dim())
    throw DimensionError("output gradient shape does not match the recorded batch");
  tape.consumed_ = true;

  const auto reversed_at = [&](std::size_t boundary) {
    return tape.reversal_ && tape.reversal_->boundary == boundary;
  };

  NetGradients grads;
  grads.layers.resize(layers.size());

  Matrix upstream = output_grad;
  if (reversed_at(layers.size())) upstream *= -tape.reversal_->scale;

  for (std::size_t k = layers.size(); k-- > 0;) {
    const bool last = k + 1 == layers.size();
    Matrix delta;
    if (!last || net.output_activation() == Activation::relu)
      delta = upstream.cwiseProduct(relu_mask(tape.pre_activations_[k]));
    else
      delta = std::move(upstream);

    grads.layers[k].weight = delta.transpose() * tape.inputs_[k];
    grads.layers[k].bias = delta.colwise().sum().transpose();
    if (k == 0 && !tape.input_gradient_) {
      upstream = Matrix();
      break;
    }
    upstream = delta * layers[k].weight;
    if (reversed_at(k)) upstream *= -tape.reversal_->scale;
  }
  grads.input = std::move(upstream);

  tape.inputs_.clear();
  tape.pre_activations_.clear();
  return grads;
}

NetGradients backward(Tape& tape, const Vector& logit_grad) {
  return backward(tape, Matrix(logit_grad));
}

NetGradients zero_gradients(const DenseNet& net, std::size_t batch_size) {
  NetGradients g;
  for (const Layer& l : net.layers())
    g.layers.push_back({Matrix::Zero(l.weight.rows(), l.weight.cols()), Vector::Zero(l.bias.size())});
  g.input = Matrix::Zero(static_cast<Eigen::Index>(batch_size),
                         static_cast<Eigen::Index>(net.input_dim()));
  return g;
}

}  // namespace fairrep::engine
