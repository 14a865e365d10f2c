#pragma once

#include <cstdint>
#include <string>

#include "fairrep/engine/adadelta.hpp"

namespace fairrep::models {

enum class Variant { no_debias, fair, laftr, cfair_eo, cfair };

/// Lower-case names used on the command line and in JSON: nodebias, fair,
/// laftr, cfair-eo, cfair.
const char* to_string(Variant variant);
/// Accepts the names above case-insensitively; throws ConfigError otherwise.
Variant variant_from_string(const std::string& name);

/// 0 for NoDebias, 1 for Fair and Laftr, 2 for the conditional variants
/// (indexed by y).
std::size_t adversary_count(Variant variant);

struct Architecture {
  std::size_t input = 0;
  std::size_t hidden = 0;
  std::size_t adversary_hidden = 0;
};

struct VariantConfig {
  Variant variant = Variant::no_debias;
  double lambda = 0.0;
  Architecture arch;
  std::size_t epochs = 1;
  std::size_t batch_size = 512;
  std::uint64_t seed = 0;
  engine::AdaDeltaSettings optimizer;

  /// Throws ConfigError on negative or non-finite lambda, zero widths,
  /// zero epochs or batch size, or invalid optimizer settings.
  void validate() const;
};

enum class Preset { adult, compas };

const char* to_string(Preset preset);
Preset preset_from_string(const std::string& name);

/// Reference hyperparameters for the two datasets. The input width follows
/// the realized feature width of the dataset, not a hard-coded count.
///   adult:  hidden 60, adversary hidden 50, 100 epochs
///   compas: hidden 10, adversary hidden 10, 20 epochs (15 when lambda >= 10)
VariantConfig preset(Preset preset, Variant variant, double lambda, std::size_t input_dim,
                     std::uint64_t seed = 0);

}  // namespace fairrep::models
