#include "fairrep/metrics/theorems.hpp"

#include <algorithm>
#include <cmath>

#include "fairrep/error.hpp"

namespace fairrep::metrics {

namespace {

double eo_violation(const ConditionalRates& r) {
  return std::max(std::abs(r.positive_given_ay[0][0] - r.positive_given_ay[1][0]),
                  std::abs(r.positive_given_ay[0][1] - r.positive_given_ay[1][1]));
}

// Returns true when the checks should be marked diagnostic.
bool gate_on_equalized_odds(const CellTable& cells, CheckMode mode, double tolerance,
                            const char* theorem) {
  const double violation = eo_violation(conditional_rates(cells));
  if (violation <= tolerance) return false;
  if (mode == CheckMode::exact)
    throw PreconditionError(std::string(theorem) + " requires equalized odds; EO gap is " +
                            std::to_string(violation));
  return true;
}

struct Quantities {
  double err0, err1, ber, fpr, fnr, delta_br, err_gap;
};

Quantities quantities(const CellTable& cells) {
  const FairnessReport r = report_from_cells(cells);
  return {require_defined(r.err0, "Err0"),     require_defined(r.err1, "Err1"),
          require_defined(r.ber, "BER"),       require_defined(r.fpr, "FPR"),
          require_defined(r.fnr, "FNR"),       require_defined(r.delta_br, "base-rate gap"),
          require_defined(r.err_gap, "error gap")};
}

TheoremCheck mark(TheoremCheck c, bool diagnostic) {
  c.diagnostic = diagnostic;
  return c;
}

double positive_mass_rate(const CellTable& t, int a) {
  const double n = t(a, 0, 0) + t(a, 0, 1) + t(a, 1, 0) + t(a, 1, 1);
  return (t(a, 0, 1) + t(a, 1, 1)) / n;
}

}  // namespace

TheoremCheck make_check(std::string name, Relation relation, double lhs, double rhs,
                        double tolerance) {
  TheoremCheck c;
  c.name = std::move(name);
  c.relation = relation;
  c.lhs = lhs;
  c.rhs = rhs;
  switch (relation) {
    case Relation::less_equal:
      c.slack = rhs - lhs;
      break;
    case Relation::greater_equal:
      c.slack = lhs - rhs;
      break;
    case Relation::equal:
      c.slack = -std::abs(lhs - rhs);
      break;
  }
  c.pass = c.slack >= -tolerance;
  return c;
}

std::vector<TheoremCheck> check_thm1(const FiniteJoint& joint, double tolerance) {
  const CellTable cells = joint.cells();
  const FairnessReport r = report_from_cells(cells);
  const double err0 = require_defined(r.err0, "Err0");
  const double err1 = require_defined(r.err1, "Err1");
  const double dbr = require_defined(r.delta_br, "base-rate gap");
  const double tv_z = total_variation(joint.representation(std::nullopt, 0),
                                      joint.representation(std::nullopt, 1));
  const double p0 = positive_mass_rate(cells, 0);
  const double p1 = positive_mass_rate(cells, 1);
  const double tv_yhat = std::abs(p0 - p1);
  return {
      make_check("thm1_joint_error_lower_bound", Relation::greater_equal, err0 + err1, dbr - tv_z,
                 tolerance),
      make_check("thm1_pigeonhole", Relation::greater_equal, std::max(err0, err1),
                 (dbr - tv_z) / 2.0, tolerance),
      make_check("thm1_prediction_form", Relation::greater_equal, err0 + err1, dbr - tv_yhat,
                 tolerance),
  };
}

std::vector<TheoremCheck> check_prop1(const FiniteJoint& joint, double tolerance) {
  const ConditionalRates rates = conditional_rates(joint.cells());
  std::vector<TheoremCheck> out;
  double worst_tv = 0.0;
  for (int y = 0; y < 2; ++y) {
    const double tv_z =
        total_variation(joint.representation(y, 0), joint.representation(y, 1));
    worst_tv = std::max(worst_tv, tv_z);
    const double tv_yhat = std::abs(rates.positive_given_ay[0][y] - rates.positive_given_ay[1][y]);
    out.push_back(make_check(y == 0 ? "prop1_data_processing_y0" : "prop1_data_processing_y1",
                             Relation::less_equal, tv_yhat, tv_z, tolerance));
  }
  out.push_back(
      make_check("prop1_eo_gap", Relation::less_equal, eo_violation(rates), worst_tv, tolerance));
  return out;
}

std::vector<TheoremCheck> check_thm2(const CellTable& cells, CheckMode mode, double tolerance) {
  const bool diagnostic = gate_on_equalized_odds(cells, mode, tolerance, "the dp-gap bound");
  const ConditionalRates rates = conditional_rates(cells);
  const double gamma_gap = std::abs(rates.negative_rate[0] - rates.negative_rate[1]);
  const double p0 = positive_mass_rate(cells, 0);
  const double p1 = positive_mass_rate(cells, 1);
  // |P0(yhat=v) - P1(yhat=v)| for v = 0, 1
  const double gap[2] = {std::abs((1.0 - p0) - (1.0 - p1)), std::abs(p0 - p1)};
  std::vector<TheoremCheck> out;
  out.push_back(mark(make_check("thm2_dp_gap", Relation::less_equal, std::abs(p0 - p1), gamma_gap,
                                tolerance),
                     diagnostic));
  for (int v = 0; v < 2; ++v) {
    const double given_y0 = v == 1 ? rates.positive_given_y[0] : 1.0 - rates.positive_given_y[0];
    const double given_y1 = v == 1 ? rates.positive_given_y[1] : 1.0 - rates.positive_given_y[1];
    out.push_back(mark(make_check(v == 0 ? "lemma1_y0" : "lemma1_y1", Relation::less_equal, gap[v],
                                  gamma_gap * (given_y0 + given_y1), tolerance),
                       diagnostic));
  }
  out.push_back(mark(make_check("prop2_prediction_tv", Relation::less_equal,
                                0.5 * (gap[0] + gap[1]), gamma_gap, tolerance),
                     diagnostic));
  return out;
}

std::vector<TheoremCheck> check_thm2(const FiniteJoint& joint, double tolerance) {
  return check_thm2(joint.cells(), CheckMode::exact, tolerance);
}

TheoremCheck check_thm3(const CellTable& cells, CheckMode mode, double tolerance) {
  const bool diagnostic = gate_on_equalized_odds(cells, mode, tolerance, "the joint-error upper bound");
  const Quantities q = quantities(cells);
  return mark(make_check("thm3_joint_error_upper_bound", Relation::less_equal, q.err0 + q.err1,
                         2.0 * q.ber, tolerance),
              diagnostic);
}

TheoremCheck check_thm3(const FiniteJoint& joint, double tolerance) {
  return check_thm3(joint.cells(), CheckMode::exact, tolerance);
}

TheoremCheck check_thm4(const FairnessReport& r, double tolerance) {
  if (!r.err_gap || !r.delta_br || !r.ber || !r.eo_gap) {
    TheoremCheck c;
    c.name = "thm4_error_gap_bound";
    c.defined = false;
    c.pass = false;
    return c;
  }
  return make_check("thm4_error_gap_bound", Relation::less_equal, *r.err_gap,
                    *r.delta_br * *r.ber + 2.0 * *r.eo_gap, tolerance);
}

TheoremCheck check_cor41(const CellTable& cells, CheckMode mode, double tolerance) {
  const bool diagnostic = gate_on_equalized_odds(cells, mode, tolerance, "the max-group-error bound");
  const Quantities q = quantities(cells);
  return mark(make_check("cor41_max_group_error", Relation::less_equal, std::max(q.err0, q.err1),
                         q.delta_br * q.ber / 2.0 + q.ber, tolerance),
              diagnostic);
}

TheoremCheck check_cor41(const FiniteJoint& joint, double tolerance) {
  return check_cor41(joint.cells(), CheckMode::exact, tolerance);
}

TheoremCheck check_eo_identity(const CellTable& cells, CheckMode mode, double tolerance) {
  const bool diagnostic = gate_on_equalized_odds(cells, mode, tolerance, "the EO error-gap identity");
  const Quantities q = quantities(cells);
  return mark(make_check("eo_error_gap_identity", Relation::equal, q.err_gap,
                         q.delta_br * std::abs(q.fpr - q.fnr), tolerance),
              diagnostic);
}

TheoremCheck check_eo_identity(const FiniteJoint& joint, double tolerance) {
  return check_eo_identity(joint.cells(), CheckMode::exact, tolerance);
}

std::vector<TheoremCheck> empirical_checks(const PredictionSet& preds, const FairnessReport& report) {
  std::vector<TheoremCheck> out;
  out.push_back(check_thm4(report));
  if (!report.eo_gap || !report.ber || !report.err_gap) return out;

  const CellTable cells = CellTable::from_counts(confusion(preds));
  // Prediction-level lower bound holds for every classifier.
  const double p0 = positive_mass_rate(cells, 0);
  const double p1 = positive_mass_rate(cells, 1);
  out.push_back(make_check("thm1_prediction_form", Relation::greater_equal, *report.joint_err,
                           *report.delta_br - std::abs(p0 - p1)));
  for (auto& c : check_thm2(cells, CheckMode::empirical)) out.push_back(std::move(c));
  out.push_back(check_thm3(cells, CheckMode::empirical));
  out.push_back(check_cor41(cells, CheckMode::empirical));
  out.push_back(check_eo_identity(cells, CheckMode::empirical));
  return out;
}

}  // namespace fairrep::metrics
