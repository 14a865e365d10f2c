#include "fairrep/data/cache.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "fairrep/data/csv.hpp"
#include "fairrep/error.hpp"

namespace fairrep::data {

namespace {

// Shortest representation that reads back to the same double.
std::string format_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw NumericError("cannot format value");
  return std::string(buf, end);
}

}  // namespace

void write_cache(const Dataset& dataset, const std::string& csv_path) {
  dataset.validate();
  std::ofstream out(csv_path);
  if (!out) throw Error("cannot write " + csv_path);
  out << "y,a";
  for (std::size_t j = 0; j < dataset.dim(); ++j) out << ",f" << j;
  out << '\n';
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out << int(dataset.labels[i]) << ',' << int(dataset.groups[i]);
    for (std::size_t j = 0; j < dataset.dim(); ++j)
      out << ',' << format_double(dataset.features(static_cast<Eigen::Index>(i),
                                                   static_cast<Eigen::Index>(j)));
    out << '\n';
  }
  if (!out) throw Error("write failed for " + csv_path);

  nlohmann::ordered_json meta;
  meta["split"] = to_string(dataset.split);
  meta["provenance"] = dataset.provenance;
  meta["feature_names"] = dataset.feature_names;
  if (dataset.standardization) {
    const auto& s = *dataset.standardization;
    meta["standardization"] = {{"columns", s.columns}, {"means", s.means}, {"scales", s.scales}};
  } else {
    meta["standardization"] = nullptr;
  }
  std::ofstream side(csv_path + ".json");
  if (!side) throw Error("cannot write " + csv_path + ".json");
  side << meta.dump(2) << '\n';
}

Dataset read_cache(const std::string& csv_path) {
  LineReader reader(csv_path);
  std::string line;
  if (!reader.next(line)) throw ParseError(csv_path, 1, "empty file");
  const auto header = split_csv_line(line);
  if (header.size() < 2 || trim(header[0]) != "y" || trim(header[1]) != "a")
    throw ParseError(csv_path, 1, "header must start with y,a");
  const std::size_t d = header.size() - 2;

  std::vector<double> values;
  Dataset ds;
  while (reader.next(line)) {
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    const std::size_t ln = reader.line_number();
    if (f.size() != header.size())
      throw ParseError(csv_path, ln,
                       "expected " + std::to_string(header.size()) + " columns, found " +
                           std::to_string(f.size()));
    const long long y = parse_int(f[0], csv_path, ln);
    const long long a = parse_int(f[1], csv_path, ln);
    if ((y != 0 && y != 1) || (a != 0 && a != 1))
      throw ParseError(csv_path, ln, "label and group must be 0 or 1");
    ds.labels.push_back(static_cast<std::uint8_t>(y));
    ds.groups.push_back(static_cast<std::uint8_t>(a));
    for (std::size_t j = 0; j < d; ++j) values.push_back(parse_double(f[j + 2], csv_path, ln));
  }
  ds.features.resize(static_cast<Eigen::Index>(ds.labels.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < ds.labels.size(); ++i)
    for (std::size_t j = 0; j < d; ++j)
      ds.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * d + j];

  const std::string sidecar = csv_path + ".json";
  if (std::filesystem::exists(sidecar)) {
    std::ifstream in(sidecar);
    nlohmann::json meta;
    try {
      meta = nlohmann::json::parse(in);
      ds.split = split_from_string(meta.at("split").get<std::string>());
      ds.provenance = meta.value("provenance", "");
      ds.feature_names = meta.at("feature_names").get<std::vector<std::string>>();
      const auto& s = meta.at("standardization");
      if (!s.is_null()) {
        Standardization st;
        st.columns = s.at("columns").get<std::vector<std::size_t>>();
        st.means = s.at("means").get<std::vector<double>>();
        st.scales = s.at("scales").get<std::vector<double>>();
        ds.standardization = st;
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(sidecar, 0, e.what());
    }
  } else {
    for (std::size_t j = 0; j < d; ++j) ds.feature_names.push_back("f" + std::to_string(j));
    ds.provenance = "cache " + csv_path;
  }
  ds.validate();
  return ds;
}

}  // namespace fairrep::data
