#include "fairrep/models/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "fairrep/error.hpp"

namespace fairrep::models {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

const char* to_string(Variant variant) {
  switch (variant) {
    case Variant::no_debias: return "nodebias";
    case Variant::fair: return "fair";
    case Variant::laftr: return "laftr";
    case Variant::cfair_eo: return "cfair-eo";
    case Variant::cfair: return "cfair";
  }
  return "?";
}

Variant variant_from_string(const std::string& name) {
  const std::string s = lower(name);
  if (s == "nodebias") return Variant::no_debias;
  if (s == "fair") return Variant::fair;
  if (s == "laftr") return Variant::laftr;
  if (s == "cfair-eo" || s == "cfaireo") return Variant::cfair_eo;
  if (s == "cfair") return Variant::cfair;
  throw ConfigError("unknown variant '" + name + "' (nodebias, fair, laftr, cfair-eo, cfair)");
}

std::size_t adversary_count(Variant variant) {
  switch (variant) {
    case Variant::no_debias: return 0;
    case Variant::fair:
    case Variant::laftr: return 1;
    case Variant::cfair_eo:
    case Variant::cfair: return 2;
  }
  return 0;
}

void VariantConfig::validate() const {
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw ConfigError("lambda must be finite and non-negative");
  if (arch.input == 0 || arch.hidden == 0) throw ConfigError("network widths must be positive");
  if (adversary_count(variant) > 0 && arch.adversary_hidden == 0)
    throw ConfigError("adversary hidden width must be positive");
  if (epochs == 0) throw ConfigError("epochs must be positive");
  if (batch_size == 0) throw ConfigError("batch size must be positive");
  if (!(optimizer.rho > 0.0 && optimizer.rho < 1.0)) throw ConfigError("AdaDelta rho must be in (0, 1)");
  if (!(optimizer.epsilon > 0.0)) throw ConfigError("AdaDelta epsilon must be positive");
  if (!(optimizer.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
}

const char* to_string(Preset preset) { return preset == Preset::adult ? "adult" : "compas"; }

Preset preset_from_string(const std::string& name) {
  const std::string s = lower(name);
  if (s == "adult") return Preset::adult;
  if (s == "compas") return Preset::compas;
  throw ConfigError("unknown preset '" + name + "'");
}

VariantConfig preset(Preset preset, Variant variant, double lambda, std::size_t input_dim,
                     std::uint64_t seed) {
  VariantConfig c;
  c.variant = variant;
  c.lambda = lambda;
  c.seed = seed;
  c.arch.input = input_dim;
  c.batch_size = 512;
  if (preset == Preset::adult) {
    c.arch.hidden = 60;
    c.arch.adversary_hidden = 50;
    c.epochs = 100;
  } else {
    c.arch.hidden = 10;
    c.arch.adversary_hidden = 10;
    c.epochs = lambda >= 10.0 ? 15 : 20;
  }
  return c;
}

}  // namespace fairrep::models
