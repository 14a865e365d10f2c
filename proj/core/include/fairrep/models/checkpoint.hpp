#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "fairrep/models/fair_model.hpp"

namespace fairrep::models {

/// {variant, config, weights, encoder, head, adversaries, seed, epoch}.
/// Networks are lists of {weight: [[...]], bias: [...]} layers. Doubles are
/// written in shortest round-trip form, so parameters reload bitwise.
/// Optimizer accumulators are not stored; a loaded model predicts but
/// restarts AdaDelta from zero state.
nlohmann::ordered_json to_json(const VariantConfig& config);
VariantConfig config_from_json(const nlohmann::json& json);

nlohmann::ordered_json checkpoint_json(const FairModel& model);
FairModel model_from_json(const nlohmann::json& json);

void save_checkpoint(const FairModel& model, const std::string& path);
FairModel load_checkpoint(const std::string& path);

}  // namespace fairrep::models
