#include <charconv>
#include <fstream>
#include <set>

#include "fairrep/cli/commands.hpp"
#include "fairrep/data/csv.hpp"
#include "fairrep/error.hpp"
#include "fairrep/metrics/json.hpp"
#include "fairrep/models/checkpoint.hpp"

namespace fairrep::cli {

models::VariantConfig resolve_config(models::Preset preset, std::size_t input_dim,
                                     const nlohmann::json& file, const ConfigOverrides& flags) {
  static const std::set<std::string> known = {"variant", "lambda",  "seed",    "epochs",
                                              "batch_size", "hidden", "adversary_hidden",
                                              "rho",     "epsilon", "learning_rate"};
  if (!file.is_null() && !file.is_object()) throw ConfigError("config file must be a JSON object");
  if (file.is_object())
    for (const auto& item : file.items())
      if (!known.count(item.key())) throw ConfigError("unknown config key '" + item.key() + "'");

  try {
    const auto pick = [&](auto flag, const char* key, auto fallback) {
      using T = decltype(fallback);
      if (flag) return static_cast<T>(*flag);
      if (file.is_object() && file.contains(key)) return file.at(key).get<T>();
      return fallback;
    };
    const models::Variant variant = models::variant_from_string(
        pick(flags.variant, "variant", std::string("nodebias")));
    const double lambda = pick(flags.lambda, "lambda", 0.0);
    const std::uint64_t seed = pick(flags.seed, "seed", std::uint64_t{0});

    models::VariantConfig c = models::preset(preset, variant, lambda, input_dim, seed);
    const std::optional<std::size_t> none;
    const std::optional<double> none_d;
    c.epochs = pick(flags.epochs, "epochs", c.epochs);
    c.batch_size = pick(flags.batch_size, "batch_size", c.batch_size);
    c.arch.hidden = pick(none, "hidden", c.arch.hidden);
    c.arch.adversary_hidden = pick(none, "adversary_hidden", c.arch.adversary_hidden);
    c.optimizer.rho = pick(none_d, "rho", c.optimizer.rho);
    c.optimizer.epsilon = pick(none_d, "epsilon", c.optimizer.epsilon);
    c.optimizer.learning_rate = pick(none_d, "learning_rate", c.optimizer.learning_rate);
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
}

nlohmann::ordered_json run_document(const std::string& dataset, const models::TrainResult& result,
                                    const data::DatasetPair& data) {
  const auto& m = result.model;
  nlohmann::ordered_json doc;
  doc["dataset"] = dataset;
  doc["variant"] = models::to_string(m.config.variant);
  doc["lambda"] = m.config.lambda;
  doc["seed"] = m.config.seed;
  doc["config"] = models::to_json(m.config);
  doc["steps"] = result.history.steps;
  for (const auto* ds : {&data.train, &data.test}) {
    const auto preds = models::predict(m, *ds);
    const auto report = metrics::empirical_report(preds);
    doc[data::to_string(ds->split)] =
        metrics::report_document(report, metrics::empirical_checks(preds, report));
  }
  doc["final_check"] = metrics::to_json(result.final_check);
  return doc;
}

namespace {

std::string num(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, *v);
  return ec == std::errc() ? std::string(buf, end) : "";
}

}  // namespace

void write_history_csv(const models::TrainHistory& history, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  std::size_t n_adv = history.epochs.empty() ? 0 : history.epochs.front().adversary_loss.size();
  out << "epoch,target_loss";
  for (std::size_t k = 0; k < n_adv; ++k) out << ",adversary" << k << "_loss";
  out << ",skipped_terms";
  static const char* metrics_cols[] = {"err_gap", "eo_gap", "dp_gap", "joint_err", "ber"};
  for (const char* split : {"train", "test"})
    for (const char* m : metrics_cols) out << ',' << split << '_' << m;
  out << '\n';
  for (const auto& r : history.epochs) {
    out << r.epoch << ',' << num(r.target_loss);
    for (const auto& a : r.adversary_loss) out << ',' << num(a);
    out << ',' << r.skipped_terms;
    for (const auto* rep : {&r.train_report, &r.test_report}) {
      if (*rep) {
        const auto& x = **rep;
        out << ',' << num(x.err_gap) << ',' << num(x.eo_gap) << ',' << num(x.dp_gap) << ','
            << num(x.joint_err) << ',' << num(x.ber);
      } else {
        out << ",,,,,";
      }
    }
    out << '\n';
  }
}

}  // namespace fairrep::cli
