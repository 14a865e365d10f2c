#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fairrep/cli/commands.hpp"
#include "fairrep/data/cache.hpp"
#include "fairrep/data/synth.hpp"
#include "fairrep/error.hpp"
#include "fairrep/models/checkpoint.hpp"

namespace fairrep::cli {

namespace {

namespace fs = std::filesystem;

void write_json(const nlohmann::ordered_json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw Error("write failed for " + path);
}

data::CompasRaces races_from_string(const std::string& s) {
  if (s == "all") return data::CompasRaces::all;
  if (s == "black-white") return data::CompasRaces::black_white;
  throw ConfigError("unknown race selection '" + s + "' (all, black-white)");
}

struct DatasetFlags {
  std::string name;
  std::string data_dir;
  std::string races = "all";
  std::string preset = "compas";

  void add(CLI::App* cmd) {
    cmd->add_option("--dataset", name, "adult, compas, or a cache prefix")->required();
    cmd->add_option("--data-dir", data_dir, "raw data directory (default $FAIRREP_DATA_DIR)");
    cmd->add_option("--compas-races", races, "all or black-white")
        ->check(CLI::IsMember({"all", "black-white"}));
    cmd->add_option("--preset", preset, "architecture preset for cache prefixes")
        ->check(CLI::IsMember({"adult", "compas"}));
  }

  DatasetRequest request() const {
    return {name, data_dir, races_from_string(races), models::preset_from_string(preset)};
  }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fair representation learning toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "base rates and split sizes of a dataset");
  DatasetFlags stats_data;
  stats_data.add(stats_cmd);
  std::string stats_out;
  stats_cmd->add_option("--out", stats_out, "also write the record as JSON");

  // train
  auto* train_cmd = app.add_subcommand("train", "train one variant");
  DatasetFlags train_data;
  train_data.add(train_cmd);
  ConfigOverrides overrides;
  std::string variant, config_path, train_out = ".";
  double lambda = 0.0;
  std::uint64_t seed = 0;
  std::size_t epochs = 0, batch_size = 0, snapshot_every = 0;
  auto* variant_opt = train_cmd->add_option("--variant", variant, "nodebias, fair, laftr, cfair-eo, cfair");
  auto* lambda_opt = train_cmd->add_option("--lambda", lambda, "trade-off coefficient (>= 0)")
                         ->check(CLI::NonNegativeNumber);
  auto* seed_opt = train_cmd->add_option("--seed", seed);
  auto* epochs_opt = train_cmd->add_option("--epochs", epochs)->check(CLI::PositiveNumber);
  auto* batch_opt = train_cmd->add_option("--batch-size", batch_size)->check(CLI::PositiveNumber);
  train_cmd->add_option("--config", config_path, "flat JSON config file")->check(CLI::ExistingFile);
  train_cmd->add_option("--snapshot-every", snapshot_every, "report snapshot interval in epochs");
  train_cmd->add_option("--out", train_out, "output directory");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "lambda sweep over variants and seeds");
  DatasetFlags sweep_data;
  sweep_data.add(sweep_cmd);
  std::vector<std::string> sweep_variants = {"nodebias", "fair", "laftr", "cfair-eo", "cfair"};
  std::vector<double> sweep_lambdas;
  std::vector<std::uint64_t> sweep_seeds = {0, 1, 2};
  std::size_t jobs = 1, sweep_epochs = 0;
  std::string sweep_out = "sweep";
  sweep_cmd->add_option("--variants", sweep_variants)->delimiter(',');
  sweep_cmd->add_option("--lambdas", sweep_lambdas, "default: the dataset's reference grid")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--seeds", sweep_seeds)->delimiter(',');
  sweep_cmd->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  auto* sweep_epochs_opt =
      sweep_cmd->add_option("--epochs", sweep_epochs, "override preset epochs")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out-dir", sweep_out);

  // audit
  auto* audit_cmd = app.add_subcommand("audit", "fairness report for external predictions");
  std::string preds_path, audit_out;
  audit_cmd->add_option("--preds", preds_path, "CSV with header score,label,group")->required();
  audit_cmd->add_option("--out", audit_out, "write JSON here instead of stdout");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "check the theorems on random exact joints");
  std::string suite = "theorems", verify_out;
  std::size_t trials = 1000;
  std::uint64_t verify_seed = 0;
  verify_cmd->add_option("--suite", suite)->check(CLI::IsMember({"theorems"}));
  verify_cmd->add_option("--trials", trials);
  verify_cmd->add_option("--seed", verify_seed);
  verify_cmd->add_option("--json", verify_out, "also write results as JSON");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic dataset cache");
  std::vector<std::size_t> counts = {600, 400, 400, 600}, test_counts;
  std::size_t dim = 4;
  double label_signal = 1.5, group_signal = 1.0;
  std::uint64_t synth_seed = 0;
  std::string synth_out;
  synth_cmd->add_option("--counts", counts, "train counts a0y0,a0y1,a1y0,a1y1")
      ->delimiter(',')
      ->expected(4);
  synth_cmd->add_option("--test-counts", test_counts, "default: same as --counts")
      ->delimiter(',')
      ->expected(4);
  synth_cmd->add_option("--dim", dim)->check(CLI::Range(2, 100000));
  synth_cmd->add_option("--label-signal", label_signal);
  synth_cmd->add_option("--group-signal", group_signal);
  synth_cmd->add_option("--seed", synth_seed);
  synth_cmd->add_option("--out", synth_out, "cache prefix")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*stats_cmd) {
      const auto ds = load_dataset(stats_data.request());
      const auto s = data::stats(ds.data, ds.name);
      print_stats(s, out);
      if (!stats_out.empty()) write_json(stats_json(s), stats_out);
      return 0;
    }

    if (*train_cmd) {
      const auto ds = load_dataset(train_data.request());
      nlohmann::json file;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        try {
          file = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
          throw ConfigError(config_path + ": " + e.what());
        }
      }
      if (*variant_opt) overrides.variant = variant;
      if (*lambda_opt) overrides.lambda = lambda;
      if (*seed_opt) overrides.seed = seed;
      if (*epochs_opt) overrides.epochs = epochs;
      if (*batch_opt) overrides.batch_size = batch_size;
      const auto config = resolve_config(ds.preset, ds.data.train.dim(), file, overrides);
      models::TrainOptions opts;
      opts.test = &ds.data.test;
      opts.snapshot_every = snapshot_every;
      opts.on_epoch = [&](const models::EpochRecord& r) {
        err << "epoch " << r.epoch << "/" << config.epochs << " target loss " << r.target_loss
            << std::endl;
      };
      const auto result = models::train(config, ds.data.train, opts);
      fs::create_directories(train_out);
      const auto doc = run_document(ds.name, result, ds.data);
      models::save_checkpoint(result.model, (fs::path(train_out) / "checkpoint.json").string());
      write_json(doc, (fs::path(train_out) / "report.json").string());
      write_history_csv(result.history, (fs::path(train_out) / "history.csv").string());
      const auto& test = doc["test"];
      out << models::to_string(config.variant) << " lambda=" << config.lambda
          << " seed=" << config.seed << " test: err_gap " << test["err_gap"] << " eo_gap "
          << test["eo_gap"] << " dp_gap " << test["dp_gap"] << " joint_err " << test["joint_err"]
          << "\nwrote " << train_out << "/{checkpoint.json,report.json,history.csv}\n";
      return 0;
    }

    if (*sweep_cmd) {
      const auto ds = load_dataset(sweep_data.request());
      SweepRequest req;
      for (const auto& v : sweep_variants) req.variants.push_back(models::variant_from_string(v));
      req.lambdas = sweep_lambdas;
      if (req.lambdas.empty())
        req.lambdas = ds.preset == models::Preset::adult
                          ? std::vector<double>{0.1, 1.0, 10.0, 100.0, 1000.0}
                          : std::vector<double>{0.1, 1.0, 10.0};
      req.seeds = sweep_seeds;
      req.jobs = jobs;
      if (*sweep_epochs_opt) req.epochs = sweep_epochs;
      const auto result = run_sweep(ds, req, &err);
      write_sweep(result, sweep_out);
      std::size_t failed = 0;
      for (const auto& c : result.cells) failed += !c.ok;
      out << result.cells.size() << " cells, " << failed << " failed; wrote " << sweep_out << "\n";
      return failed == 0 ? 0 : 1;
    }

    if (*audit_cmd) {
      const auto preds = read_predictions(preds_path);
      const auto doc = audit_document(preds);
      if (audit_out.empty())
        out << doc.dump(2) << '\n';
      else
        write_json(doc, audit_out);
      for (const auto& c : doc["theorem_checks"])
        if (c["defined"].get<bool>() && !c["diagnostic"].get<bool>() && !c["pass"].get<bool>())
          return 1;
      return 0;
    }

    if (*verify_cmd) {
      const auto rows = run_suite(theorem_suite(), trials, verify_seed);
      print_suite(rows, out);
      if (!verify_out.empty()) write_json(suite_json(rows, trials, verify_seed), verify_out);
      for (const auto& r : rows)
        if (!r.ok()) return 1;
      return 0;
    }

    if (*synth_cmd) {
      if (test_counts.empty()) test_counts = counts;
      const auto make = [&](const std::vector<std::size_t>& c, std::uint64_t s) {
        return data::SynthSpec::planted({{{c[0], c[1]}, {c[2], c[3]}}}, dim, label_signal,
                                        group_signal, s);
      };
      const auto train = data::synth(make(counts, synth_seed), data::Split::train);
      const auto test = data::synth(make(test_counts, derive_seed(synth_seed, 1)), data::Split::test);
      data::write_cache(train, synth_out + "_train.csv");
      data::write_cache(test, synth_out + "_test.csv");
      print_stats(data::stats({train, test}, synth_out), out);
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace fairrep::cli
