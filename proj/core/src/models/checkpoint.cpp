#include "fairrep/models/checkpoint.hpp"

#include <fstream>

#include "fairrep/error.hpp"

namespace fairrep::models {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json net_json(const DenseNet& net) {
  ordered_json layers = ordered_json::array();
  for (const auto& l : net.layers()) {
    ordered_json w = ordered_json::array();
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      ordered_json row = ordered_json::array();
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) row.push_back(l.weight(r, c));
      w.push_back(std::move(row));
    }
    ordered_json b = ordered_json::array();
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) b.push_back(l.bias[r]);
    layers.push_back({{"weight", std::move(w)}, {"bias", std::move(b)}});
  }
  return layers;
}

DenseNet net_from_json(const json& j, engine::Activation output) {
  std::vector<engine::Layer> layers;
  for (const auto& lj : j) {
    const auto& w = lj.at("weight");
    const auto& b = lj.at("bias");
    engine::Layer l;
    const auto rows = static_cast<Eigen::Index>(w.size());
    const auto cols = rows > 0 ? static_cast<Eigen::Index>(w.at(0).size()) : 0;
    l.weight.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto& row = w.at(static_cast<std::size_t>(r));
      if (static_cast<Eigen::Index>(row.size()) != cols)
        throw DimensionError("checkpoint weight matrix is ragged");
      for (Eigen::Index c = 0; c < cols; ++c)
        l.weight(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
    l.bias.resize(static_cast<Eigen::Index>(b.size()));
    for (std::size_t r = 0; r < b.size(); ++r)
      l.bias[static_cast<Eigen::Index>(r)] = b.at(r).get<double>();
    layers.push_back(std::move(l));
  }
  return DenseNet(std::move(layers), output);
}

ordered_json weights_json(const ClassWeights& w) { return ordered_json::array({w.negative, w.positive}); }

ClassWeights weights_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("class weights must be a pair");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

ordered_json to_json(const VariantConfig& c) {
  return {{"variant", to_string(c.variant)},
          {"lambda", c.lambda},
          {"input", c.arch.input},
          {"hidden", c.arch.hidden},
          {"adversary_hidden", c.arch.adversary_hidden},
          {"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"seed", c.seed},
          {"rho", c.optimizer.rho},
          {"epsilon", c.optimizer.epsilon},
          {"learning_rate", c.optimizer.learning_rate}};
}

VariantConfig config_from_json(const json& j) {
  VariantConfig c;
  c.variant = variant_from_string(j.at("variant").get<std::string>());
  c.lambda = j.at("lambda").get<double>();
  c.arch.input = j.at("input").get<std::size_t>();
  c.arch.hidden = j.at("hidden").get<std::size_t>();
  c.arch.adversary_hidden = j.at("adversary_hidden").get<std::size_t>();
  c.epochs = j.at("epochs").get<std::size_t>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.optimizer.rho = j.at("rho").get<double>();
  c.optimizer.epsilon = j.at("epsilon").get<double>();
  c.optimizer.learning_rate = j.at("learning_rate").get<double>();
  c.validate();
  return c;
}

ordered_json checkpoint_json(const FairModel& m) {
  ordered_json adv = ordered_json::array();
  for (const DenseNet& a : m.adversaries) adv.push_back(net_json(a));
  return {{"variant", to_string(m.config.variant)},
          {"config", to_json(m.config)},
          {"weights",
           {{"target", weights_json(m.weights.target)},
            {"adversary_y0", weights_json(m.weights.adversary[0])},
            {"adversary_y1", weights_json(m.weights.adversary[1])}}},
          {"encoder", net_json(m.encoder)},
          {"head", net_json(m.head)},
          {"adversaries", std::move(adv)},
          {"seed", m.config.seed},
          {"epoch", m.epoch}};
}

FairModel model_from_json(const json& j) {
  try {
    const VariantConfig config = config_from_json(j.at("config"));
    if (variant_from_string(j.at("variant").get<std::string>()) != config.variant)
      throw ConfigError("checkpoint variant disagrees with its config");
    WeightTable w;
    w.target = weights_from_json(j.at("weights").at("target"));
    w.adversary[0] = weights_from_json(j.at("weights").at("adversary_y0"));
    w.adversary[1] = weights_from_json(j.at("weights").at("adversary_y1"));
    FairModel m = build(config, w);
    m.encoder = net_from_json(j.at("encoder"), engine::Activation::relu);
    m.head = net_from_json(j.at("head"), engine::Activation::identity);
    const auto& adv = j.at("adversaries");
    if (adv.size() != m.adversaries.size())
      throw ConfigError("checkpoint has the wrong number of adversaries for its variant");
    for (std::size_t k = 0; k < adv.size(); ++k)
      m.adversaries[k] = net_from_json(adv.at(k), engine::Activation::identity);
    if (m.encoder.widths() != std::vector<std::size_t>{config.arch.input, config.arch.hidden} ||
        m.head.widths() != std::vector<std::size_t>{config.arch.hidden, 1})
      throw DimensionError("checkpoint network shapes disagree with its config");
    for (const DenseNet& a : m.adversaries)
      if (a.widths() !=
          std::vector<std::size_t>{config.arch.hidden, config.arch.adversary_hidden, 1})
        throw DimensionError("checkpoint adversary shape disagrees with its config");
    m.epoch = j.at("epoch").get<std::size_t>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const FairModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << checkpoint_json(model).dump(1) << '\n';
  if (!out) throw Error("write failed for " + path);
}

FairModel load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return model_from_json(j);
}

}  // namespace fairrep::models
