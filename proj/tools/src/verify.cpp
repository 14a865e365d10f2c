#include <iomanip>
#include <map>
#include <ostream>

#include "fairrep/cli/commands.hpp"
#include "fairrep/metrics/json.hpp"
#include "fairrep/random.hpp"

namespace fairrep::cli {

using metrics::FiniteJoint;
using metrics::TheoremCheck;

std::vector<SuiteEntry> theorem_suite() {
  using V = std::vector<TheoremCheck>;
  return {
      {"thm1", JointKind::random, [](const FiniteJoint& j) { return metrics::check_thm1(j); }},
      {"prop1", JointKind::random, [](const FiniteJoint& j) { return metrics::check_prop1(j); }},
      {"thm4", JointKind::random,
       [](const FiniteJoint& j) { return V{metrics::check_thm4(metrics::exact_report(j))}; }},
      {"thm2", JointKind::eo, [](const FiniteJoint& j) { return metrics::check_thm2(j); }},
      {"thm3", JointKind::eo, [](const FiniteJoint& j) { return V{metrics::check_thm3(j)}; }},
      {"cor41", JointKind::eo, [](const FiniteJoint& j) { return V{metrics::check_cor41(j)}; }},
      {"eo_identity", JointKind::eo,
       [](const FiniteJoint& j) { return V{metrics::check_eo_identity(j)}; }},
  };
}

std::vector<SuiteRow> run_suite(const std::vector<SuiteEntry>& suite, std::size_t trials,
                                std::uint64_t seed) {
  std::vector<SuiteRow> rows;
  std::map<std::string, std::size_t> index;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    const std::size_t support = 2 + static_cast<std::size_t>(rng.index(7));
    const FiniteJoint random = metrics::random_joint(support, rng);
    // Alternate between conditionally aligned and unaligned representations.
    auto spec = metrics::random_eo_spec(rng, t % 2 == 1);
    const FiniteJoint eo = metrics::make_eo_joint(spec);

    for (const SuiteEntry& entry : suite) {
      const FiniteJoint& joint = entry.kind == JointKind::random ? random : eo;
      for (const TheoremCheck& c : entry.run(joint)) {
        auto [it, inserted] = index.emplace(c.name, rows.size());
        if (inserted) {
          rows.emplace_back();
          rows.back().name = c.name;
        }
        SuiteRow& row = rows[it->second];
        const bool pass = c.defined && c.pass;
        if (row.trials == 0 || c.slack < row.worst_slack) row.worst_slack = c.slack;
        ++row.trials;
        if (pass) {
          ++row.passed;
        } else if (!row.first_failure) {
          row.first_failure = c;
          row.first_failure_trial = t;
        }
      }
    }
  }
  return rows;
}

void print_suite(const std::vector<SuiteRow>& rows, std::ostream& out) {
  out << std::left << std::setw(34) << "check" << std::right << std::setw(8) << "trials"
      << std::setw(8) << "passed" << std::setw(14) << "worst slack" << "  verdict\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(34) << r.name << std::right << std::setw(8) << r.trials
        << std::setw(8) << r.passed << std::setw(14) << std::setprecision(4) << r.worst_slack
        << "  " << (r.ok() ? "PASS" : "FAIL") << "\n";
    if (r.first_failure) {
      const auto& c = *r.first_failure;
      out << "    first failure at trial " << *r.first_failure_trial << ": lhs "
          << std::setprecision(17) << c.lhs << " " << metrics::relation_symbol(c.relation)
          << " rhs " << c.rhs << " (slack " << c.slack << ")\n";
    }
  }
  out << std::setprecision(6);
}

nlohmann::ordered_json suite_json(const std::vector<SuiteRow>& rows, std::size_t trials,
                                  std::uint64_t seed) {
  nlohmann::ordered_json doc;
  doc["suite"] = "theorems";
  doc["trials"] = trials;
  doc["seed"] = seed;
  bool all = true;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    all = all && r.ok();
    nlohmann::ordered_json row = {{"name", r.name},
                                  {"trials", r.trials},
                                  {"passed", r.passed},
                                  {"worst_slack", r.worst_slack},
                                  {"pass", r.ok()}};
    if (r.first_failure) {
      row["first_failure"] = metrics::to_json(*r.first_failure);
      row["first_failure_trial"] = *r.first_failure_trial;
    }
    arr.push_back(std::move(row));
  }
  doc["pass"] = all;
  doc["checks"] = std::move(arr);
  return doc;
}

}  // namespace fairrep::cli
