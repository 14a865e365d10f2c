#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <ostream>

#include "fairrep/cli/commands.hpp"
#include "fairrep/data/adult.hpp"
#include "fairrep/data/cache.hpp"
#include "fairrep/error.hpp"

namespace fairrep::cli {

namespace fs = std::filesystem;

std::string default_data_dir() {
  if (const char* dir = std::getenv("FAIRREP_DATA_DIR"); dir != nullptr && *dir != '\0')
    return dir;
  return "data/raw";
}

namespace {

std::string require_file(const fs::path& path) {
  if (!fs::exists(path))
    throw Error("missing input file " + path.string() +
                " (set FAIRREP_DATA_DIR or --data-dir; scripts/fetch_data.sh downloads the raw data)");
  return path.string();
}

}  // namespace

LoadedDataset load_dataset(const DatasetRequest& request) {
  const fs::path dir = request.data_dir.empty() ? fs::path(default_data_dir()) : fs::path(request.data_dir);
  LoadedDataset out;
  out.name = request.name;
  if (request.name == "adult") {
    out.data = data::load_adult(require_file(dir / "adult.data"), require_file(dir / "adult.test")).data;
    out.preset = models::Preset::adult;
  } else if (request.name == "compas") {
    data::CompasOptions opts;
    opts.races = request.compas_races;
    out.data = data::load_compas(require_file(dir / "compas-scores-two-years.csv"), opts).data;
    out.preset = models::Preset::compas;
  } else {
    out.data.train = data::read_cache(require_file(request.name + "_train.csv"));
    out.data.test = data::read_cache(require_file(request.name + "_test.csv"));
    out.data.train.split = data::Split::train;
    out.data.test.split = data::Split::test;
    if (out.data.train.dim() != out.data.test.dim())
      throw DimensionError("cached train and test splits differ in width");
    out.preset = request.cache_preset;
  }
  return out;
}

namespace {

nlohmann::ordered_json split_json(const data::SplitStats& s) {
  return {{"n", s.n},
          {"base_rate0", s.base_rate0},
          {"base_rate1", s.base_rate1},
          {"delta_br", s.delta_br},
          {"positive_rate", s.positive_rate},
          {"group1_rate", s.group1_rate}};
}

}  // namespace

nlohmann::ordered_json stats_json(const data::DatasetStats& s) {
  return {{"dataset", s.name},
          {"n_train", s.n_train},
          {"n_test", s.n_test},
          {"train", split_json(s.train)},
          {"test", split_json(s.test)},
          {"pooled", split_json(s.pooled)}};
}

void print_stats(const data::DatasetStats& s, std::ostream& out) {
  out << "dataset " << s.name << "  train/test " << s.n_train << "/" << s.n_test << "\n";
  out << std::left << std::setw(8) << "split" << std::right << std::setw(8) << "n"
      << std::setw(10) << "D0(Y=1)" << std::setw(10) << "D1(Y=1)" << std::setw(10) << "dBR"
      << std::setw(10) << "D(Y=1)" << std::setw(10) << "D(A=1)" << "\n";
  const auto row = [&](const char* name, const data::SplitStats& x) {
    out << std::left << std::setw(8) << name << std::right << std::setw(8) << x.n << std::fixed
        << std::setprecision(4) << std::setw(10) << x.base_rate0 << std::setw(10) << x.base_rate1
        << std::setw(10) << x.delta_br << std::setw(10) << x.positive_rate << std::setw(10)
        << x.group1_rate << "\n";
    out.unsetf(std::ios::fixed);
  };
  row("train", s.train);
  row("test", s.test);
  row("pooled", s.pooled);
}

}  // namespace fairrep::cli
