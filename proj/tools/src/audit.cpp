#include "fairrep/cli/commands.hpp"
#include "fairrep/data/csv.hpp"
#include "fairrep/error.hpp"
#include "fairrep/metrics/json.hpp"

namespace fairrep::cli {

metrics::PredictionSet read_predictions(const std::string& path) {
  data::LineReader reader(path);
  std::string line;
  if (!reader.next(line)) throw ParseError(path, 1, "empty file; expected header score,label,group");
  const auto header = data::split_csv_line(line);
  if (header.size() != 3 || data::trim(header[0]) != "score" || data::trim(header[1]) != "label" ||
      data::trim(header[2]) != "group")
    throw ParseError(path, 1, "header must be score,label,group");

  std::vector<double> scores;
  std::vector<std::uint8_t> labels, groups;
  while (reader.next(line)) {
    const std::size_t ln = reader.line_number();
    if (data::trim(line).empty()) continue;
    const auto f = data::split_csv_line(line);
    if (f.size() != 3)
      throw ParseError(path, ln, "expected 3 fields, found " + std::to_string(f.size()));
    const double score = data::parse_double(f[0], path, ln);
    if (!(score >= 0.0 && score <= 1.0)) throw ParseError(path, ln, "score must be in [0, 1]");
    const long long y = data::parse_int(f[1], path, ln);
    const long long a = data::parse_int(f[2], path, ln);
    if (y != 0 && y != 1) throw ParseError(path, ln, "label must be 0 or 1");
    if (a != 0 && a != 1) throw ParseError(path, ln, "group must be 0 or 1");
    scores.push_back(score);
    labels.push_back(static_cast<std::uint8_t>(y));
    groups.push_back(static_cast<std::uint8_t>(a));
  }
  if (scores.empty()) throw ParseError(path, reader.line_number(), "no prediction rows");
  return metrics::PredictionSet(std::move(scores), std::move(labels), std::move(groups));
}

nlohmann::ordered_json audit_document(const metrics::PredictionSet& preds) {
  const auto report = metrics::empirical_report(preds);
  return metrics::report_document(report, metrics::empirical_checks(preds, report));
}

}  // namespace fairrep::cli
