#include "fairrep/data/compas.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>

#include "fairrep/data/csv.hpp"
#include "fairrep/error.hpp"
#include "fairrep/random.hpp"

namespace fairrep::data {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date (Hinnant's algorithm).
long long days_from_civil(long long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

// "YYYY-MM-DD HH:MM:SS" as seconds since the epoch.
long long parse_timestamp(std::string_view s, const std::string& source, std::size_t line) {
  s = trim(s);
  if (s.size() != 19 || s[4] != '-' || s[7] != '-' || s[10] != ' ' || s[13] != ':' ||
      s[16] != ':')
    throw ParseError(source, line, "malformed timestamp '" + std::string(s) + "'");
  const auto field = [&](std::size_t pos, std::size_t len) {
    return parse_int(s.substr(pos, len), source, line);
  };
  const long long days = days_from_civil(field(0, 4), static_cast<unsigned>(field(5, 2)),
                                         static_cast<unsigned>(field(8, 2)));
  return days * 86400 + field(11, 2) * 3600 + field(14, 2) * 60 + field(17, 2);
}

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

const std::array<const char*, 3> kAgeCategories = {"Less than 25", "25 - 45", "Greater than 45"};

}  // namespace

CompasLoad load_compas(const std::string& path, const CompasOptions& options) {
  LineReader reader(path);
  std::string line;
  if (!reader.next(line)) throw ParseError(path, 1, "empty file");

  // Some column names appear twice; the first occurrence wins.
  std::map<std::string, std::size_t> index;
  const auto header = split_csv_line(line);
  for (std::size_t i = 0; i < header.size(); ++i) index.emplace(std::string(trim(header[i])), i);
  const auto col = [&](const char* name) {
    const auto it = index.find(name);
    if (it == index.end()) throw ParseError(path, 1, std::string("missing column '") + name + "'");
    return it->second;
  };
  const std::size_t c_age = col("age"), c_age_cat = col("age_cat"), c_race = col("race"),
                    c_sex = col("sex"), c_juv_fel = col("juv_fel_count"),
                    c_juv_misd = col("juv_misd_count"), c_juv_other = col("juv_other_count"),
                    c_priors = col("priors_count"), c_days_b = col("days_b_screening_arrest"),
                    c_jail_in = col("c_jail_in"), c_jail_out = col("c_jail_out"),
                    c_degree = col("c_charge_degree"), c_is_recid = col("is_recid"),
                    c_score_text = col("score_text"), c_label = col("two_year_recid");

  const std::vector<std::string> names = {
      "age",           "juv_fel_count", "juv_misd_count",   "juv_other_count",
      "priors_count",  "length_of_stay", "sex=Male",        "c_charge_degree=F",
      "age_cat=Less than 25", "age_cat=25 - 45", "age_cat=Greater than 45"};
  constexpr std::size_t kContinuous = 6;

  CompasLoad out;
  std::vector<std::array<double, 11>> rows;
  std::vector<std::uint8_t> labels, groups;
  while (reader.next(line)) {
    if (trim(line).empty()) continue;
    ++out.rows_read;
    const auto f = split_csv_line(line);
    if (f.size() != header.size())
      throw ParseError(path, reader.line_number(),
                       "expected " + std::to_string(header.size()) + " columns, found " +
                           std::to_string(f.size()));
    const std::size_t ln = reader.line_number();

    const std::string_view days_b = trim(f[c_days_b]);
    if (days_b.empty()) continue;
    if (std::fabs(parse_double(days_b, path, ln)) > 30.0) continue;
    if (parse_int(f[c_is_recid], path, ln) == -1) continue;
    const std::string_view degree = trim(f[c_degree]);
    if (degree == "O") continue;
    if (trim(f[c_score_text]).empty() || trim(f[c_score_text]) == "N/A") continue;

    const std::string_view race = trim(f[c_race]);
    if (options.races == CompasRaces::black_white && race != "African-American" &&
        race != "Caucasian")
      continue;

    std::array<double, 11> x{};
    x[0] = parse_double(f[c_age], path, ln);
    x[1] = parse_double(f[c_juv_fel], path, ln);
    x[2] = parse_double(f[c_juv_misd], path, ln);
    x[3] = parse_double(f[c_juv_other], path, ln);
    x[4] = parse_double(f[c_priors], path, ln);
    const long long stay = parse_timestamp(f[c_jail_out], path, ln) -
                           parse_timestamp(f[c_jail_in], path, ln);
    x[5] = static_cast<double>(floor_div(stay, 86400));
    const std::string_view sex = trim(f[c_sex]);
    if (sex != "Male" && sex != "Female")
      throw ParseError(path, ln, "unrecognized sex '" + std::string(sex) + "'");
    x[6] = sex == "Male" ? 1.0 : 0.0;
    if (degree != "F" && degree != "M")
      throw ParseError(path, ln, "unrecognized charge degree '" + std::string(degree) + "'");
    x[7] = degree == "F" ? 1.0 : 0.0;
    const std::string_view age_cat = trim(f[c_age_cat]);
    bool matched = false;
    for (std::size_t k = 0; k < kAgeCategories.size(); ++k) {
      if (age_cat == kAgeCategories[k]) {
        x[8 + k] = 1.0;
        matched = true;
      }
    }
    if (!matched) throw ParseError(path, ln, "unrecognized age_cat '" + std::string(age_cat) + "'");

    const long long y = parse_int(f[c_label], path, ln);
    if (y != 0 && y != 1) throw ParseError(path, ln, "two_year_recid must be 0 or 1");
    rows.push_back(x);
    labels.push_back(static_cast<std::uint8_t>(y));
    groups.push_back(race == "African-American" ? 1 : 0);
  }
  out.rows_kept = rows.size();
  if (options.test_size == 0 || options.test_size >= rows.size())
    throw ConfigError("COMPAS test size " + std::to_string(options.test_size) +
                      " must be in (0, " + std::to_string(rows.size()) + ")");

  // Stratified split on (A, Y): each cell contributes its proportional share
  // of the test set, largest remainders rounding up, so the size is exact.
  std::array<std::vector<std::size_t>, 4> cells;
  for (std::size_t i = 0; i < rows.size(); ++i) cells[groups[i] * 2 + labels[i]].push_back(i);
  Rng rng(options.split_seed);
  std::array<std::size_t, 4> take{};
  std::array<double, 4> remainder{};
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < 4; ++c) {
    rng.shuffle(std::span<std::size_t>(cells[c]));
    const double share = static_cast<double>(cells[c].size()) *
                         static_cast<double>(options.test_size) / static_cast<double>(rows.size());
    take[c] = static_cast<std::size_t>(std::floor(share));
    remainder[c] = share - std::floor(share);
    assigned += take[c];
  }
  std::array<std::size_t, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < options.test_size; ++k, ++assigned) ++take[order[k % 4]];

  std::vector<std::size_t> train_rows, test_rows;
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t k = 0; k < cells[c].size(); ++k)
      (k < take[c] ? test_rows : train_rows).push_back(cells[c][k]);
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());

  Dataset all;
  all.features.resize(static_cast<Eigen::Index>(rows.size()), 11);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < 11; ++j)
      all.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  all.labels = std::move(labels);
  all.groups = std::move(groups);
  all.feature_names = names;

  out.data.train = all.subset(train_rows);
  out.data.test = all.subset(test_rows);
  out.data.train.split = Split::train;
  out.data.test.split = Split::test;
  const std::string scope = options.races == CompasRaces::all ? "all races" : "black/white";
  out.data.train.provenance = "COMPAS two-year (" + scope + ") train split from " + path;
  out.data.test.provenance = "COMPAS two-year (" + scope + ") test split from " + path;

  if (options.standardize) {
    std::vector<std::size_t> columns(kContinuous);
    std::iota(columns.begin(), columns.end(), 0);
    const Standardization s = fit_standardization(out.data.train, columns);
    apply_standardization(out.data.train, s);
    apply_standardization(out.data.test, s);
  }
  out.data.train.validate();
  out.data.test.validate();
  return out;
}

}  // namespace fairrep::data
