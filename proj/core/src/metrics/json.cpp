#include "fairrep/metrics/json.hpp"

#include <string>

namespace fairrep::metrics {

namespace {

nlohmann::ordered_json value(const std::optional<double>& x) {
  if (x) return *x;
  return nullptr;
}

}  // namespace

const char* relation_symbol(Relation relation) {
  switch (relation) {
    case Relation::less_equal:
      return "<=";
    case Relation::greater_equal:
      return ">=";
    case Relation::equal:
      return "==";
  }
  return "?";
}

nlohmann::ordered_json to_json(const FairnessReport& r) {
  nlohmann::ordered_json j;
  if (r.confusion) j["n"] = r.confusion->total();
  j["err0"] = value(r.err0);
  j["err1"] = value(r.err1);
  j["joint_err"] = value(r.joint_err);
  j["err_gap"] = value(r.err_gap);
  j["ber"] = value(r.ber);
  j["fpr"] = value(r.fpr);
  j["fnr"] = value(r.fnr);
  j["dp_gap"] = value(r.dp_gap);
  j["eo_gap_y0"] = value(r.eo_gap_y0);
  j["eo_gap_y1"] = value(r.eo_gap_y1);
  j["eo_gap"] = value(r.eo_gap);
  j["base_rate0"] = value(r.base_rate0);
  j["base_rate1"] = value(r.base_rate1);
  j["delta_br"] = value(r.delta_br);
  if (r.confusion) {
    nlohmann::ordered_json c;
    for (int a = 0; a < 2; ++a)
      for (int y = 0; y < 2; ++y)
        c["a" + std::to_string(a) + "_y" + std::to_string(y)] = {
            {"yhat0", (*r.confusion)(a, y, 0)}, {"yhat1", (*r.confusion)(a, y, 1)}};
    j["confusion"] = std::move(c);
  }
  return j;
}

nlohmann::ordered_json to_json(const TheoremCheck& c) {
  nlohmann::ordered_json j;
  j["name"] = c.name;
  j["relation"] = relation_symbol(c.relation);
  if (c.defined) {
    j["lhs"] = c.lhs;
    j["rhs"] = c.rhs;
    j["slack"] = c.slack;
  } else {
    j["lhs"] = nullptr;
    j["rhs"] = nullptr;
    j["slack"] = nullptr;
  }
  j["pass"] = c.pass;
  j["defined"] = c.defined;
  j["diagnostic"] = c.diagnostic;
  return j;
}

nlohmann::ordered_json to_json(const std::vector<TheoremCheck>& checks) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) arr.push_back(to_json(c));
  return arr;
}

nlohmann::ordered_json report_document(const FairnessReport& report,
                                       const std::vector<TheoremCheck>& checks) {
  nlohmann::ordered_json j = to_json(report);
  j["theorem_checks"] = to_json(checks);
  return j;
}

}  // namespace fairrep::metrics
