#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairrep/data/compas.hpp"
#include "fairrep/data/dataset.hpp"
#include "fairrep/data/stats.hpp"
#include "fairrep/metrics/finite_joint.hpp"
#include "fairrep/metrics/report.hpp"
#include "fairrep/metrics/theorems.hpp"
#include "fairrep/models/config.hpp"
#include "fairrep/models/train.hpp"

namespace fairrep::cli {

// ---- datasets --------------------------------------------------------------

/// FAIRREP_DATA_DIR if set, else "data/raw".
std::string default_data_dir();

struct DatasetRequest {
  /// "adult", "compas", or a cache prefix with <prefix>_train.csv and
  /// <prefix>_test.csv next to it.
  std::string name;
  std::string data_dir;
  data::CompasRaces compas_races = data::CompasRaces::all;
  /// Architecture preset for cache prefixes; adult and compas use their own.
  models::Preset cache_preset = models::Preset::compas;
};

struct LoadedDataset {
  std::string name;
  data::DatasetPair data;
  models::Preset preset = models::Preset::compas;
};

LoadedDataset load_dataset(const DatasetRequest& request);

nlohmann::ordered_json stats_json(const data::DatasetStats& stats);
void print_stats(const data::DatasetStats& stats, std::ostream& out);

// ---- training --------------------------------------------------------------

/// Values given on the command line; unset fields fall back to the config
/// file, then to the preset.
struct ConfigOverrides {
  std::optional<std::string> variant;
  std::optional<double> lambda;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> batch_size;
};

/// Flags > flat JSON config file > preset defaults.
models::VariantConfig resolve_config(models::Preset preset, std::size_t input_dim,
                                     const nlohmann::json& config_file,
                                     const ConfigOverrides& flags);

/// Deterministic summary of one run (no timings).
nlohmann::ordered_json run_document(const std::string& dataset, const models::TrainResult& result,
                                    const data::DatasetPair& data);

void write_history_csv(const models::TrainHistory& history, const std::string& path);

// ---- sweep -----------------------------------------------------------------

struct SweepCell {
  models::Variant variant = models::Variant::no_debias;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string reason;
  std::optional<metrics::FairnessReport> test_report;
  double runtime_seconds = 0.0;
};

struct SweepRequest {
  std::vector<models::Variant> variants;
  std::vector<double> lambdas;
  std::vector<std::uint64_t> seeds{0, 1, 2};
  std::size_t jobs = 1;
  std::optional<std::size_t> epochs;  // overrides the preset
};

struct SweepResult {
  std::vector<SweepCell> cells;
  double delta_br = 0.0;  // test-split reference line
  std::vector<models::Variant> variants;
  std::vector<double> lambdas;
  std::vector<std::uint64_t> seeds;

  bool all_ok() const;
  /// Seed mean of a metric for (variant, lambda); NoDebias ignores lambda.
  std::optional<double> mean(models::Variant variant, double lambda,
                             const std::function<std::optional<double>(const metrics::FairnessReport&)>&
                                 metric) const;
  /// The cell for one seed, or nullptr.
  const SweepCell* find(models::Variant variant, double lambda, std::uint64_t seed) const;
};

/// NoDebias runs once per seed (lambda is meaningless for it) and is
/// reported against every lambda. `progress` may be null.
SweepResult run_sweep(const LoadedDataset& dataset, const SweepRequest& request,
                      std::ostream* progress);

/// err_gap.csv, eo_gap.csv, dp_gap.csv, joint_err.csv (rows lambda, columns
/// variants, seed means, plus delta_br) and cells.csv.
void write_sweep(const SweepResult& result, const std::string& dir);

// ---- audit -----------------------------------------------------------------

/// CSV with header score,label,group. Throws ParseError with the line number.
metrics::PredictionSet read_predictions(const std::string& path);

nlohmann::ordered_json audit_document(const metrics::PredictionSet& preds);

// ---- verify ----------------------------------------------------------------

enum class JointKind {
  random,  // random masses and predictor
  eo,      // predictor satisfies equalized odds by construction
};

struct SuiteEntry {
  std::string name;
  JointKind kind = JointKind::random;
  std::function<std::vector<metrics::TheoremCheck>(const metrics::FiniteJoint&)> run;
};

std::vector<SuiteEntry> theorem_suite();

struct SuiteRow {
  std::string name;
  std::size_t trials = 0;
  std::size_t passed = 0;
  double worst_slack = 0.0;
  std::optional<metrics::TheoremCheck> first_failure;
  std::optional<std::size_t> first_failure_trial;

  bool ok() const { return passed == trials; }
};

/// Trial t draws its joints from derive_seed(seed, t); rows are one per
/// check name in first-seen order.
std::vector<SuiteRow> run_suite(const std::vector<SuiteEntry>& suite, std::size_t trials,
                                std::uint64_t seed);

void print_suite(const std::vector<SuiteRow>& rows, std::ostream& out);
nlohmann::ordered_json suite_json(const std::vector<SuiteRow>& rows, std::size_t trials,
                                  std::uint64_t seed);

// ---- entry point -----------------------------------------------------------

/// Runs the command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fairrep::cli
