#pragma once

#include <string>
#include <vector>

#include "fairrep/metrics/finite_joint.hpp"
#include "fairrep/metrics/report.hpp"

namespace fairrep::metrics {

/// Default violation allowance for exact-mode checks.
inline constexpr double kExactTolerance = 1e-12;

enum class Relation { less_equal, greater_equal, equal };

enum class CheckMode {
  /// Preconditions must hold; a violated precondition throws.
  exact,
  /// Preconditions are not enforced; results whose preconditions fail are
  /// marked diagnostic and carry no pass/fail meaning.
  empirical,
};

/// One inequality (or identity) evaluated on concrete numbers.
/// slack = rhs - lhs for <=, lhs - rhs for >=, and -|lhs - rhs| for identities.
struct TheoremCheck {
  std::string name;
  Relation relation = Relation::less_equal;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass = false;
  /// False when an input metric is undefined (empty conditioning cell).
  bool defined = true;
  /// True when the theorem's precondition does not hold for this input.
  bool diagnostic = false;
};

TheoremCheck make_check(std::string name, Relation relation, double lhs, double rhs,
                        double tolerance = kExactTolerance);

/// Lower bound on the joint error: Err0 + Err1 >= dBR - dTV(Z|A=0, Z|A=1),
/// plus the pigeonhole form max(Err0, Err1) >= (dBR - dTV) / 2.
std::vector<TheoremCheck> check_thm1(const FiniteJoint& joint,
                                     double tolerance = kExactTolerance);

/// Conditional alignment implies equalized odds, in its quantitative form:
/// eo_gap <= max_y dTV(Z|A=0,Y=y, Z|A=1,Y=y). Also checks the data-processing
/// step dTV(yhat|A=0,Y=y, yhat|A=1,Y=y) <= dTV(Z|A=0,Y=y, Z|A=1,Y=y) per y.
std::vector<TheoremCheck> check_prop1(const FiniteJoint& joint,
                                      double tolerance = kExactTolerance);

/// Under equalized odds: dDP <= dBR, the per-y bound
/// |P0(yhat=y) - P1(yhat=y)| <= |g0 - g1| (P^0(yhat=y) + P^1(yhat=y)), and
/// dTV(yhat|A=0, yhat|A=1) <= dBR.
std::vector<TheoremCheck> check_thm2(const CellTable& cells, CheckMode mode = CheckMode::exact,
                                     double tolerance = kExactTolerance);
std::vector<TheoremCheck> check_thm2(const FiniteJoint& joint, double tolerance = kExactTolerance);

/// Under equalized odds: Err0 + Err1 <= 2 BER.
TheoremCheck check_thm3(const CellTable& cells, CheckMode mode = CheckMode::exact,
                        double tolerance = kExactTolerance);
TheoremCheck check_thm3(const FiniteJoint& joint, double tolerance = kExactTolerance);

/// For any classifier: dErr <= dBR * BER + 2 dEO.
TheoremCheck check_thm4(const FairnessReport& report, double tolerance = kExactTolerance);

/// Under equalized odds: max(Err0, Err1) <= dBR * BER / 2 + BER.
TheoremCheck check_cor41(const CellTable& cells, CheckMode mode = CheckMode::exact,
                         double tolerance = kExactTolerance);
TheoremCheck check_cor41(const FiniteJoint& joint, double tolerance = kExactTolerance);

/// Under equalized odds: dErr = dBR * |FPR - FNR|.
TheoremCheck check_eo_identity(const CellTable& cells, CheckMode mode = CheckMode::exact,
                               double tolerance = kExactTolerance);
TheoremCheck check_eo_identity(const FiniteJoint& joint, double tolerance = kExactTolerance);

/// Every check applicable to a sample-based report: thm4 as pass/fail, the
/// equalized-odds results as diagnostics unless the sample's EO gap is zero.
std::vector<TheoremCheck> empirical_checks(const PredictionSet& preds,
                                           const FairnessReport& report);

}  // namespace fairrep::metrics
