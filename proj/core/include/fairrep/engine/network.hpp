#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fairrep/random.hpp"

namespace fairrep::engine {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Activation { identity, relu };

/// One affine map. `weight` is out x in.
struct Layer {
  Matrix weight;
  Vector bias;

  std::size_t inputs() const { return static_cast<std::size_t>(weight.cols()); }
  std::size_t outputs() const { return static_cast<std::size_t>(weight.rows()); }
};

/// Fully connected network: affine layers with rectified hidden units.
///
/// Rows of a batch are samples. The last layer's activation is
/// `output_activation`: identity for logit heads, relu for an encoder whose
/// output is a rectified representation.
class DenseNet {
 public:
  DenseNet() = default;
  DenseNet(std::vector<Layer> layers, Activation output_activation);

  /// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
  static DenseNet glorot(const std::vector<std::size_t>& widths,
                         Activation output_activation, Rng& rng);

  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& layers() { return layers_; }
  Activation output_activation() const { return output_activation_; }

  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::size_t parameter_count() const;
  std::vector<std::size_t> widths() const;
  bool all_finite() const;

  /// Throws NumericError naming the first layer holding a NaN or infinity.
  void require_finite(const char* context) const;

 private:
  void validate() const;

  std::vector<Layer> layers_;
  Activation output_activation_ = Activation::identity;
};

/// Multiplies the gradient crossing `boundary` by -scale on the way back.
/// Boundary k sits in front of layer k; boundary 0 is the network input and
/// boundary == layer count is the output.
struct GradientReversal {
  std::size_t boundary = 0;
  double scale = 1.0;
};

class Tape;
struct ForwardResult;
struct NetGradients;

/// The tape keeps a pointer to `net`; `net` must outlive the tape and stay
/// unmodified until backward() runs.
ForwardResult forward(const DenseNet& net, const Matrix& batch,
                      std::optional<GradientReversal> reversal = std::nullopt);

/// `output_grad` is d(loss)/d(output), batch x output_dim. Consumes the tape.
NetGradients backward(Tape& tape, const Matrix& output_grad);

/// Activations recorded by forward() for exactly one backward() call.
class Tape {
 public:
  bool consumed() const { return consumed_; }
  std::size_t batch_size() const { return batch_size_; }
  const std::optional<GradientReversal>& reversal() const { return reversal_; }

  /// Leaves NetGradients::input empty; saves one matrix product when the
  /// network input is data rather than another network's output.
  void skip_input_gradient() { input_gradient_ = false; }

 private:
  friend ForwardResult forward(const DenseNet&, const Matrix&, std::optional<GradientReversal>);
  friend NetGradients backward(Tape&, const Matrix&);

  const DenseNet* net_ = nullptr;
  std::vector<Matrix> inputs_;
  std::vector<Matrix> pre_activations_;
  std::optional<GradientReversal> reversal_;
  std::size_t batch_size_ = 0;
  bool consumed_ = false;
  bool input_gradient_ = true;
};

struct ForwardResult {
  Matrix output;  // batch x output_dim
  Tape tape;
};

/// Gradient of a scalar batch loss, one entry per layer, plus the gradient
/// with respect to the network input (after any reversal at boundary 0).
struct NetGradients {
  std::vector<Layer> layers;
  Matrix input;

  NetGradients& operator+=(const NetGradients& other);
  bool all_finite() const;
};

/// Convenience for single-logit heads.
NetGradients backward(Tape& tape, const Vector& logit_grad);

/// Zero-filled gradients shaped like `net`.
NetGradients zero_gradients(const DenseNet& net, std::size_t batch_size);

}  // namespace fairrep::engine
