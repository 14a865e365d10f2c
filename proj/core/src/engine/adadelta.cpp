#include "fairrep/engine/adadelta.hpp"

#include <cmath>
#include <string>

#include "fairrep/error.hpp"

namespace fairrep::engine {

namespace {

std::span<double> flat(Matrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
std::span<double> flat(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<const double> flat(const Matrix& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}
std::span<const double> flat(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

AdaDeltaState AdaDeltaState::zeros(const DenseNet& net, AdaDeltaSettings settings) {
  if (!(settings.rho > 0.0 && settings.rho < 1.0)) throw ConfigError("AdaDelta rho must lie in (0,1)");
  if (!(settings.epsilon > 0.0)) throw ConfigError("AdaDelta epsilon must be positive");
  if (!(settings.learning_rate > 0.0)) throw ConfigError("AdaDelta learning rate must be positive");
  AdaDeltaState s;
  s.settings = settings;
  for (const Layer& l : net.layers()) {
    Layer z{Matrix::Zero(l.weight.rows(), l.weight.cols()), Vector::Zero(l.bias.size())};
    s.sq_grad.push_back(z);
    s.sq_update.push_back(std::move(z));
  }
  return s;
}

void adadelta_update(std::span<double> params, std::span<const double> grads,
                     std::span<double> sq_grad, std::span<double> sq_update,
                     const AdaDeltaSettings& settings) {
  if (grads.size() != params.size() || sq_grad.size() != params.size() ||
      sq_update.size() != params.size())
    throw DimensionError("AdaDelta state shape does not mirror the parameters");
  const double rho = settings.rho;
  const double eps = settings.epsilon;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    if (!std::isfinite(g)) throw NumericError("non-finite gradient passed to AdaDelta");
    sq_grad[i] = rho * sq_grad[i] + (1.0 - rho) * g * g;
    const double dx = -settings.learning_rate * std::sqrt(sq_update[i] + eps) /
                      std::sqrt(sq_grad[i] + eps) * g;
    sq_update[i] = rho * sq_update[i] + (1.0 - rho) * dx * dx;
    params[i] += dx;
  }
}

void adadelta_step(DenseNet& net, const NetGradients& grads, AdaDeltaState& state) {
  auto& layers = net.layers();
  if (grads.layers.size() != layers.size() || state.sq_grad.size() != layers.size() ||
      state.sq_update.size() != layers.size())
    throw DimensionError("AdaDelta: gradient/state layer count does not match the network");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const Layer& g = grads.layers[k];
    if (g.weight.rows() != layers[k].weight.rows() || g.weight.cols() != layers[k].weight.cols() ||
        g.bias.size() != layers[k].bias.size())
      throw DimensionError("AdaDelta: gradient shape mismatch in layer " + std::to_string(k));
    if (!g.weight.allFinite() || !g.bias.allFinite())
      throw NumericError("non-finite gradient passed to AdaDelta");
  }
  for (std::size_t k = 0; k < layers.size(); ++k) {
    adadelta_update(flat(layers[k].weight), flat(grads.layers[k].weight),
                    flat(state.sq_grad[k].weight), flat(state.sq_update[k].weight), state.settings);
    adadelta_update(flat(layers[k].bias), flat(grads.layers[k].bias), flat(state.sq_grad[k].bias),
                    flat(state.sq_update[k].bias), state.settings);
  }
  net.require_finite("AdaDelta step");
}

}  // namespace fairrep::engine
