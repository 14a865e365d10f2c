#include "fairrep/data/adult.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "fairrep/data/csv.hpp"
#include "fairrep/error.hpp"

namespace fairrep::data {

namespace {

constexpr std::size_t kColumns = 15;

enum Column : std::size_t {
  kAge = 0,
  kWorkclass,
  kFnlwgt,
  kEducation,
  kEducationNum,
  kMarital,
  kOccupation,
  kRelationship,
  kRace,
  kSex,
  kCapitalGain,
  kCapitalLoss,
  kHours,
  kCountry,
  kIncome,
};

constexpr std::array kCategorical = {kWorkclass, kMarital,  kEducation, kOccupation,
                                     kRelationship, kRace, kCountry};

const char* column_name(std::size_t c) {
  static constexpr std::array<const char*, kColumns> names = {
      "age",          "workclass",    "fnlwgt",         "education",    "education-num",
      "marital-status", "occupation", "relationship",   "race",         "sex",
      "capital-gain", "capital-loss", "hours-per-week", "native-country", "income"};
  return names[c];
}

struct RawRow {
  std::array<std::string, kColumns> fields;
  std::size_t line = 0;
};

struct RawSplit {
  std::vector<RawRow> rows;
  std::size_t dropped = 0;
};

RawSplit read_split(const std::string& path) {
  LineReader reader(path);
  RawSplit split;
  std::string line;
  while (reader.next(line)) {
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '|') continue;  // blank lines, test-file banner
    const auto parts = split_csv_line(body);
    if (parts.size() != kColumns)
      throw ParseError(path, reader.line_number(),
                       "expected " + std::to_string(kColumns) + " columns, found " +
                           std::to_string(parts.size()));
    RawRow row;
    row.line = reader.line_number();
    bool missing = false;
    for (std::size_t c = 0; c < kColumns; ++c) {
      row.fields[c] = std::string(trim(parts[c]));
      if (row.fields[c] == "?" || row.fields[c].empty()) missing = true;
    }
    if (missing) {
      ++split.dropped;
      continue;
    }
    split.rows.push_back(std::move(row));
  }
  return split;
}

std::uint8_t parse_income(std::string value, const std::string& path, std::size_t line) {
  if (!value.empty() && value.back() == '.') value.pop_back();  // adult.test writes ">50K."
  if (value == ">50K") return 1;
  if (value == "<=50K") return 0;
  throw ParseError(path, line, "unrecognized income label '" + value + "'");
}

std::uint8_t parse_sex(const std::string& value, const std::string& path, std::size_t line) {
  if (value == "Female") return 1;
  if (value == "Male") return 0;
  throw ParseError(path, line, "unrecognized sex '" + value + "'");
}

}  // namespace

AdultLoad load_adult(const std::string& train_path, const std::string& test_path,
                     const AdultOptions& options) {
  RawSplit raw_train = read_split(train_path);
  RawSplit raw_test = read_split(test_path);
  if (raw_train.rows.empty()) throw ConfigError("no complete rows in " + train_path);

  std::vector<std::size_t> continuous = {kAge};
  if (options.include_fnlwgt) continuous.push_back(kFnlwgt);
  if (options.include_education_num) continuous.push_back(kEducationNum);
  continuous.insert(continuous.end(), {kCapitalGain, kCapitalLoss, kHours});

  // Category vocabularies come from the training split only, sorted.
  std::vector<std::string> names;
  for (std::size_t c : continuous) names.emplace_back(column_name(c));
  std::map<std::size_t, std::map<std::string, std::size_t>> one_hot;  // column -> value -> feature
  for (std::size_t c : kCategorical) {
    std::set<std::string> values;
    for (const RawRow& r : raw_train.rows) values.insert(r.fields[c]);
    for (const std::string& v : values) {
      one_hot[c][v] = names.size();
      names.push_back(std::string(column_name(c)) + "=" + v);
    }
  }

  AdultLoad out;
  out.dropped_train = raw_train.dropped;
  out.dropped_test = raw_test.dropped;

  auto build = [&](const RawSplit& raw, const std::string& path, Split split) {
    Dataset d;
    d.split = split;
    d.feature_names = names;
    d.provenance = "UCI Adult " + std::string(to_string(split)) + " split from " + path;
    d.features = Matrix::Zero(static_cast<Eigen::Index>(raw.rows.size()),
                              static_cast<Eigen::Index>(names.size()));
    d.labels.reserve(raw.rows.size());
    d.groups.reserve(raw.rows.size());
    for (std::size_t i = 0; i < raw.rows.size(); ++i) {
      const RawRow& r = raw.rows[i];
      const auto row = static_cast<Eigen::Index>(i);
      for (std::size_t k = 0; k < continuous.size(); ++k)
        d.features(row, static_cast<Eigen::Index>(k)) =
            parse_double(r.fields[continuous[k]], path, r.line);
      for (std::size_t c : kCategorical) {
        const auto& vocab = one_hot[c];
        const auto it = vocab.find(r.fields[c]);
        if (it == vocab.end()) {
          ++out.unseen_test_categories;
          continue;
        }
        d.features(row, static_cast<Eigen::Index>(it->second)) = 1.0;
      }
      d.labels.push_back(parse_income(r.fields[kIncome], path, r.line));
      d.groups.push_back(parse_sex(r.fields[kSex], path, r.line));
    }
    return d;
  };

  out.data.train = build(raw_train, train_path, Split::train);
  out.data.test = build(raw_test, test_path, Split::test);

  if (options.standardize) {
    std::vector<std::size_t> columns(continuous.size());
    for (std::size_t k = 0; k < columns.size(); ++k) columns[k] = k;
    const Standardization s = fit_standardization(out.data.train, columns);
    apply_standardization(out.data.train, s);
    apply_standardization(out.data.test, s);
  }
  out.data.train.validate();
  out.data.test.validate();
  return out;
}

}  // namespace fairrep::data
