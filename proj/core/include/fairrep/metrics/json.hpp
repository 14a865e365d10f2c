#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "fairrep/metrics/report.hpp"
#include "fairrep/metrics/theorems.hpp"

namespace fairrep::metrics {

/// Report fields by name; undefined rates become null.
nlohmann::ordered_json to_json(const FairnessReport& report);
nlohmann::ordered_json to_json(const TheoremCheck& check);
nlohmann::ordered_json to_json(const std::vector<TheoremCheck>& checks);

/// Report object with an embedded `theorem_checks` array.
nlohmann::ordered_json report_document(const FairnessReport& report,
                                       const std::vector<TheoremCheck>& checks);

const char* relation_symbol(Relation relation);

}  // namespace fairrep::metrics
