#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fairrep/error.hpp"
#include "fairrep/metrics/finite_joint.hpp"
#include "fairrep/metrics/json.hpp"
#include "fairrep/metrics/predictions.hpp"
#include "fairrep/metrics/report.hpp"
#include "fairrep/metrics/theorems.hpp"
#include "fairrep/random.hpp"

using namespace fairrep;
using namespace fairrep::metrics;

namespace {

using Bytes = std::vector<std::uint8_t>;

PredictionSet hard_set(const Bytes& yhat, const Bytes& y, const Bytes& a) {
  return PredictionSet::from_hard(yhat, y, a);
}

// The 10-sample case: one false negative, one false positive, one group.
PredictionSet mixed_fixture() {
  return hard_set({1, 1, 1, 1, 0, 0, 0, 0, 0, 1}, {1, 1, 1, 1, 1, 0, 0, 0, 0, 0},
                  Bytes(10, 0));
}

PredictionSet random_set(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> s(n);
  Bytes y(n), a(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = rng.uniform() < 0.4;
    y[i] = rng.uniform() < (a[i] ? 0.3 : 0.6);
    s[i] = std::clamp(0.5 + (y[i] ? 0.2 : -0.2) + (a[i] ? 0.1 : 0.0) + 0.3 * rng.normal(), 0.0, 1.0);
  }
  return PredictionSet(s, y, a);
}

double counted_rate(const PredictionSet& p, int a, int y) {
  double pos = 0, n = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p.groups()[i] == a && p.labels()[i] == y) {
      ++n;
      pos += p.hard()[i];
    }
  return pos / n;
}

}  // namespace

TEST_CASE("prediction sets validate and threshold at 0.5") {
  const PredictionSet p({0.0, 0.49, 0.5, 1.0}, {0, 0, 1, 1}, {0, 1, 0, 1});
  CHECK(p.hard() == Bytes{0, 0, 1, 1});
  CHECK_THROWS_AS(PredictionSet({0.5}, {1, 0}, {0}), DimensionError);
  CHECK_THROWS_AS(PredictionSet({1.5}, {1}, {0}), Error);
  CHECK_THROWS_AS(PredictionSet({0.5}, {2}, {0}), Error);
  CHECK_THROWS_AS(confusion(PredictionSet()), Error);
}

TEST_CASE("confusion: perfect predictions have empty off-diagonals") {
  const auto c = confusion(hard_set({1, 0, 1, 0}, {1, 0, 1, 0}, {0, 0, 1, 1}));
  for (int a = 0; a < 2; ++a) {
    CHECK(c(a, 0, 1) == 0);
    CHECK(c(a, 1, 0) == 0);
  }
  CHECK(c.total() == 4);
}

TEST_CASE("mixed fixture: FNR = FPR = 0.2, BER = 0.4") {
  const auto p = mixed_fixture();
  const auto c = confusion(p);
  CHECK(c(0, 1, 1) == 4);
  CHECK(c(0, 1, 0) == 1);
  CHECK(c(0, 0, 0) == 4);
  CHECK(c(0, 0, 1) == 1);
  CHECK(fnr(p) == 0.2);
  CHECK(fpr(p) == 0.2);
  CHECK(ber(p) == 0.4);
  // Only group 0 is present, so every gap is undefined.
  CHECK_THROWS_AS(dp_gap(p), UndefinedMetricError);
  CHECK_THROWS_AS(eo_gap(p), UndefinedMetricError);
  CHECK_THROWS_AS(err_gap(p), UndefinedMetricError);
  CHECK_THROWS_AS(base_rates(p), UndefinedMetricError);
  const auto r = empirical_report(p);
  CHECK_FALSE(r.dp_gap.has_value());
  CHECK_FALSE(r.eo_gap.has_value());
  CHECK(*r.err0 == 0.2);
  CHECK_FALSE(r.err1.has_value());
}

TEST_CASE("ber: perfect and always-positive") {
  const Bytes y{1, 0, 1, 0}, a{0, 0, 1, 1};
  CHECK(ber(hard_set(y, y, a)) == 0.0);
  const auto ones = hard_set({1, 1, 1, 1}, y, a);
  CHECK(fnr(ones) == 0.0);
  CHECK(fpr(ones) == 1.0);
  CHECK(ber(ones) == 1.0);
  CHECK_THROWS_AS(ber(hard_set({1, 1}, {1, 1}, {0, 1})), UndefinedMetricError);
}

TEST_CASE("dp_gap: constant predictor and yhat = A") {
  const Bytes y{1, 0, 1, 0, 1, 0}, a{0, 0, 0, 1, 1, 1};
  CHECK(dp_gap(hard_set(Bytes(6, 1), y, a)) == 0.0);
  CHECK(dp_gap(hard_set(a, y, a)) == 1.0);
}

TEST_CASE("eo_gap: yhat = Y and yhat = A on balanced labels") {
  const Bytes y{1, 0, 1, 0}, a{0, 0, 1, 1};
  CHECK(eo_gap(hard_set(y, y, a)).max == 0.0);
  const auto g = eo_gap(hard_set(a, y, a));
  CHECK(g.y0 == 1.0);
  CHECK(g.y1 == 1.0);
  CHECK(g.max == 1.0);
}

TEST_CASE("eo_gap of a group-blind sampled predictor vanishes with n") {
  Rng rng(4);
  const std::size_t n = 100000;
  Bytes yhat(n), y(n), a(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = rng.uniform() < 0.35;
    y[i] = rng.uniform() < (a[i] ? 0.25 : 0.55);
    yhat[i] = rng.uniform() < (y[i] ? 0.8 : 0.3);  // depends on Y only
  }
  CHECK(eo_gap(hard_set(yhat, y, a)).max < 0.05);
}

TEST_CASE("err_gap and joint_err by hand") {
  // group 0: 3 samples, 1 wrong; group 1: 4 samples, 3 wrong
  const Bytes yhat{1, 0, 0, 1, 1, 0, 0}, y{1, 0, 1, 0, 0, 1, 0}, a{0, 0, 0, 1, 1, 1, 1};
  const auto p = hard_set(yhat, y, a);
  CHECK(joint_err(p) == doctest::Approx(1.0 / 3.0 + 3.0 / 4.0).epsilon(1e-15));
  CHECK(err_gap(p) == doctest::Approx(3.0 / 4.0 - 1.0 / 3.0).epsilon(1e-15));
  CHECK(err_gap(hard_set(y, y, a)) == 0.0);
  CHECK(joint_err(hard_set(y, y, a)) == 0.0);
  // Symmetric noise: one error per group of equal size.
  CHECK(err_gap(hard_set({0, 0, 1, 0}, {1, 0, 1, 1}, {0, 0, 1, 1})) == 0.0);
}

TEST_CASE("base rates") {
  const Bytes y{1, 0, 0, 0, 1, 1, 1, 0}, a{0, 0, 0, 0, 1, 1, 1, 1};
  const auto br = base_rates(y, a);
  CHECK(br.group0 == 0.25);
  CHECK(br.group1 == 0.75);
  CHECK(br.delta == 0.5);
  CHECK_THROWS_AS(base_rates(Bytes{1, 0}, Bytes{1, 1}), UndefinedMetricError);
}

TEST_CASE("metric properties on random sets") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = random_set(300, seed);
    const auto r = empirical_report(p);
    CHECK(*r.ber == *r.fnr + *r.fpr);
    CHECK(*r.eo_gap == std::max(*r.eo_gap_y0, *r.eo_gap_y1));
    CHECK(*r.delta_br == std::abs(*r.base_rate0 - *r.base_rate1));
    CHECK(*r.joint_err == *r.err0 + *r.err1);
    CHECK(*r.eo_gap_y1 == doctest::Approx(std::abs(counted_rate(p, 0, 1) - counted_rate(p, 1, 1))));

    // dp gap from P(yhat=0) equals the one from P(yhat=1)
    double n0 = 0, n1 = 0, neg0 = 0, neg1 = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      (p.groups()[i] ? n1 : n0) += 1;
      (p.groups()[i] ? neg1 : neg0) += p.hard()[i] == 0;
    }
    CHECK(*r.dp_gap == doctest::Approx(std::abs(neg0 / n0 - neg1 / n1)).epsilon(1e-14));

    // Permutation invariance
    std::vector<std::size_t> idx(p.size());
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed + 100);
    rng.shuffle(std::span(idx));
    std::vector<double> s;
    Bytes y, a, flipped;
    for (auto i : idx) {
      s.push_back(p.scores()[i]);
      y.push_back(p.labels()[i]);
      a.push_back(p.groups()[i]);
      flipped.push_back(1 - p.groups()[i]);
    }
    const auto permuted = PredictionSet(s, y, a);
    CHECK(confusion(permuted) == confusion(p));
    const auto rp = empirical_report(permuted);
    CHECK(*rp.dp_gap == *r.dp_gap);
    CHECK(*rp.eo_gap == *r.eo_gap);

    // Swapping group labels leaves every gap unchanged.
    const auto rs = empirical_report(PredictionSet(s, y, flipped));
    CHECK(*rs.dp_gap == *r.dp_gap);
    CHECK(*rs.eo_gap == *r.eo_gap);
    CHECK(*rs.err_gap == *r.err_gap);
    CHECK(*rs.delta_br == *r.delta_br);
    CHECK(*rs.ber == *r.ber);

    // Rates in range
    for (auto v : {r.err0, r.err1, r.fpr, r.fnr, r.dp_gap, r.eo_gap, r.err_gap}) {
      CHECK(*v >= 0.0);
      CHECK(*v <= 1.0);
    }
  }
}

TEST_CASE("total variation") {
  const std::vector<double> p{0.7, 0.3}, q{0.4, 0.6};
  CHECK(total_variation(p, q) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(total_variation(p, p) == 0.0);
  CHECK(total_variation(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 1.0);
  CHECK_THROWS_AS(total_variation(p, std::vector<double>{1.0}), DimensionError);
}

TEST_CASE("finite joints validate their masses") {
  CHECK_THROWS_AS(FiniteJoint(1, {0.5, 0.5, 0.5, 0.5}), Error);
  CHECK_THROWS_AS(FiniteJoint(1, {1.5, -0.5, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(FiniteJoint(2, {0.25, 0.25, 0.25, 0.25}), DimensionError);
  const FiniteJoint j(1, {0.25, 0.25, 0.25, 0.25});
  CHECK_THROWS_AS(j.cells(), PreconditionError);
  CHECK(j.event_mass(1, std::nullopt) == 0.5);
}

TEST_CASE("exact_report: perfect predictor has zero gaps") {
  // z encodes y exactly; predictor z -> z.
  const FiniteJoint j(2, {0.2, 0.3, 0.0, 0.0, 0.0, 0.0, 0.1, 0.4}, {0, 1});
  const auto r = exact_report(j);
  CHECK(*r.err_gap == 0.0);
  CHECK(*r.eo_gap == 0.0);
  CHECK(*r.ber == 0.0);
  CHECK(*r.joint_err == 0.0);
}

TEST_CASE("make_eo_joint: fpr = fnr = 0 is perfect") {
  EoJointSpec spec;
  spec.base_rate0 = 0.3;
  spec.base_rate1 = 0.7;
  spec.group1_mass = 0.4;
  const auto r = exact_report(make_eo_joint(spec));
  CHECK(*r.ber == 0.0);
  CHECK(*r.joint_err == 0.0);
  CHECK(*r.eo_gap == 0.0);
}

TEST_CASE("make_eo_joint: hand-computed rates") {
  // gamma_a = P(Y=0 | A=a): 0.6 and 0.4.
  EoJointSpec spec;
  spec.base_rate0 = 0.4;
  spec.base_rate1 = 0.6;
  spec.group1_mass = 0.5;
  spec.fpr = 0.3;
  spec.fnr = 0.1;
  spec.seed = 3;
  const auto r = exact_report(make_eo_joint(spec));
  const double tol = 1e-7;  // grid snapping
  CHECK(*r.fpr == doctest::Approx(0.3).epsilon(tol));
  CHECK(*r.fnr == doctest::Approx(0.1).epsilon(tol));
  CHECK(*r.ber == doctest::Approx(0.4).epsilon(tol));
  CHECK(*r.err0 == doctest::Approx(0.6 * 0.3 + 0.4 * 0.1).epsilon(tol));
  CHECK(*r.err1 == doctest::Approx(0.4 * 0.3 + 0.6 * 0.1).epsilon(tol));
  CHECK(*r.err_gap == doctest::Approx(0.04).epsilon(tol));
  CHECK(*r.dp_gap == doctest::Approx(std::abs(0.6 * 0.3 + 0.4 * 0.9 - (0.4 * 0.3 + 0.6 * 0.9))).epsilon(tol));
  CHECK(*r.delta_br == doctest::Approx(0.2).epsilon(tol));
  CHECK(*r.eo_gap == 0.0);
}

TEST_CASE("make_eo_joint: eo_gap is exactly zero for any spec") {
  Rng rng(21);
  for (int t = 0; t < 500; ++t) {
    auto spec = random_eo_spec(rng, t % 2 == 0);
    CHECK(*exact_report(make_eo_joint(spec)).eo_gap == 0.0);
  }
}

TEST_CASE("exact_report agrees with a large sample") {
  Rng rng(17);
  for (int t = 0; t < 3; ++t) {
    const auto joint = random_joint(5, rng);
    const auto exact = exact_report(joint);
    const std::size_t n = 1000000;
    const auto sample = joint.sample(n, rng);
    const auto emp = empirical_report(sample);
    const auto c = confusion(sample);
    // Each conditional rate lies within 3 binomial standard errors of its cell.
    const auto within = [](double e, double p, double cell_n) {
      return std::abs(e - p) <= 3.0 * std::sqrt(p * (1 - p) / cell_n) + 1e-12;
    };
    CHECK(within(*emp.err0, *exact.err0, double(c.group(0))));
    CHECK(within(*emp.err1, *exact.err1, double(c.group(1))));
    CHECK(within(*emp.fpr, *exact.fpr, double(c.cell(0, 0) + c.cell(1, 0))));
    CHECK(within(*emp.fnr, *exact.fnr, double(c.cell(0, 1) + c.cell(1, 1))));
    CHECK(within(*emp.base_rate0, *exact.base_rate0, double(c.group(0))));
    CHECK(within(*emp.base_rate1, *exact.base_rate1, double(c.group(1))));
  }
}

TEST_CASE("empirical rates converge to the joint within 5 sigma") {
  Rng rng(33);
  const auto joint = random_joint(4, rng);
  const auto exact = conditional_rates(joint.cells());
  const auto sample = joint.sample(100000, rng);
  const auto c = confusion(sample);
  const auto emp = conditional_rates(CellTable::from_counts(c));
  for (int a = 0; a < 2; ++a)
    for (int y = 0; y < 2; ++y) {
      const double p = exact.positive_given_ay[a][y];
      const double n = static_cast<double>(c.cell(a, y));
      CHECK(std::abs(emp.positive_given_ay[a][y] - p) <= 5.0 * std::sqrt(p * (1 - p) / n));
    }
}

TEST_CASE("thm1: a group-independent representation") {
  // P(z | a) identical across groups; Y depends on (z, a).
  const double pz[3] = {0.5, 0.3, 0.2}, pa[2] = {0.6, 0.4};
  const double py1[3][2] = {{0.2, 0.7}, {0.5, 0.1}, {0.9, 0.4}};
  std::vector<double> mass(12);
  for (int z = 0; z < 3; ++z)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        mass[z * 4 + y * 2 + a] = pz[z] * pa[a] * (y ? py1[z][a] : 1 - py1[z][a]);
  const FiniteJoint j(3, mass, {0, 1, 1});
  const auto checks = check_thm1(j);
  CHECK(checks[0].name == "thm1_joint_error_lower_bound");
  const auto r = exact_report(j);
  CHECK(checks[0].rhs == doctest::Approx(*r.delta_br).epsilon(1e-12));
  for (const auto& c : checks) CHECK(c.pass);
}

TEST_CASE("thm1: constant predictor") {
  Rng rng(2);
  const auto j = random_joint(3, rng).with_predictor({1, 1, 1});
  const auto r = exact_report(j);
  const double g0 = 1.0 - *r.base_rate0, g1 = 1.0 - *r.base_rate1;
  CHECK(*r.joint_err == doctest::Approx(g0 + g1).epsilon(1e-14));
  CHECK(g0 + g1 >= std::abs(g0 - g1));
  for (const auto& c : check_thm1(j)) CHECK(c.pass);
}

TEST_CASE("thm1: predictor equal to Y") {
  // z = y, so dTV of the representations equals the base-rate gap.
  const FiniteJoint j(2, {0.42, 0.18, 0.0, 0.0, 0.0, 0.0, 0.18, 0.22}, {0, 1});
  const auto checks = check_thm1(j);
  CHECK(checks[0].lhs == 0.0);
  CHECK(std::abs(checks[0].rhs) <= 1e-15);
  CHECK(checks[0].pass);
}

TEST_CASE("thm2: equal base rates and the Y predictor") {
  EoJointSpec spec;
  spec.base_rate0 = spec.base_rate1 = 0.35;
  spec.group1_mass = 0.3;
  spec.fpr = 0.2;
  spec.fnr = 0.25;
  const auto c = check_thm2(make_eo_joint(spec));
  // Base rates are honored to the construction grid, so dBR ~ 1e-8, not 0.
  CHECK(c[0].lhs <= 1e-7);
  CHECK(c[0].pass);

  // yhat = y: dDP equals dBR.
  const FiniteJoint j(2, {0.42, 0.18, 0.0, 0.0, 0.0, 0.0, 0.18, 0.22}, {0, 1});
  const auto tight = check_thm2(j);
  CHECK(tight[0].lhs == doctest::Approx(tight[0].rhs).epsilon(1e-14));
  CHECK(tight[0].pass);
}

TEST_CASE("equalized-odds checks refuse joints without EO in exact mode") {
  Rng rng(8);
  const auto j = random_joint(4, rng);
  CHECK_THROWS_AS(check_thm2(j), PreconditionError);
  CHECK_THROWS_AS(check_thm3(j), PreconditionError);
  CHECK_THROWS_AS(check_cor41(j), PreconditionError);
  CHECK_THROWS_AS(check_eo_identity(j), PreconditionError);
  CHECK(check_thm3(j.cells(), CheckMode::empirical).diagnostic);
}

TEST_CASE("thm3: perfect predictor and equal group masses") {
  EoJointSpec spec;
  spec.base_rate0 = 0.2;
  spec.base_rate1 = 0.6;
  const auto perfect = check_thm3(make_eo_joint(spec));
  CHECK(perfect.lhs == 0.0);
  CHECK(perfect.rhs == 0.0);

  // Equal group masses: the marginal is the average of the two groups, so
  // Err0 + Err1 = 2 Err, which the 2 BER bound then dominates.
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    auto s = random_eo_spec(rng);
    s.group1_mass = 0.5;
    const auto j = make_eo_joint(s);
    const auto r = exact_report(j);
    const auto cells = j.cells();
    double err = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int y = 0; y < 2; ++y) err += cells(a, y, 1 - y);
    CHECK(*r.joint_err == doctest::Approx(2.0 * err).epsilon(1e-12));
    CHECK(check_thm3(j).pass);
  }
}

TEST_CASE("thm4: perfect predictor and random joints") {
  const Bytes y{1, 0, 1, 0}, a{0, 0, 1, 1};
  const auto c = check_thm4(empirical_report(hard_set(y, y, a)));
  CHECK(c.lhs == 0.0);
  CHECK(c.rhs == 0.0);
  CHECK(c.pass);
  Rng rng(13);
  for (int t = 0; t < 1000; ++t) {
    const auto j = random_joint(2 + rng.index(6), rng);
    CHECK(check_thm4(exact_report(j)).pass);
  }
  // Undefined inputs give an undefined verdict, not a pass.
  const auto undefined = check_thm4(empirical_report(mixed_fixture()));
  CHECK_FALSE(undefined.defined);
}

TEST_CASE("cor41 and the EO identity") {
  EoJointSpec spec;
  spec.base_rate0 = 0.3;
  spec.base_rate1 = 0.5;
  CHECK(check_cor41(make_eo_joint(spec)).lhs == 0.0);

  // yhat = 1 - y under EO: BER = 2.
  spec.fpr = 1.0;
  spec.fnr = 1.0;
  const auto flipped = make_eo_joint(spec);
  CHECK(*exact_report(flipped).ber == 2.0);
  CHECK(check_cor41(flipped).pass);

  // FPR = FNR: no error gap, positive BER.
  spec.fpr = spec.fnr = 0.25;
  const auto eq = make_eo_joint(spec);
  const auto id = check_eo_identity(eq);
  CHECK(std::abs(id.lhs) <= 1e-15);
  CHECK(*exact_report(eq).ber > 0.0);
  CHECK(id.pass);

  spec.fpr = spec.fnr = 0.0;
  const auto perfect = check_eo_identity(make_eo_joint(spec));
  CHECK(perfect.lhs == 0.0);
  CHECK(perfect.rhs == 0.0);
}

TEST_CASE("EO-conditioned theorems hold on 1000 constructed joints") {
  Rng rng(1234);
  for (int t = 0; t < 1000; ++t) {
    const auto j = make_eo_joint(random_eo_spec(rng, t % 2 == 0));
    for (const auto& c : check_thm2(j)) CHECK(c.pass);
    CHECK(check_thm3(j).pass);
    CHECK(check_cor41(j).pass);
    CHECK(check_eo_identity(j).pass);
  }
}

TEST_CASE("prop1 on random and aligned joints") {
  Rng rng(77);
  for (int t = 0; t < 200; ++t) {
    for (const auto& c : check_prop1(random_joint(3, rng))) CHECK(c.pass);
    auto s = random_eo_spec(rng, true);
    for (const auto& c : check_prop1(make_eo_joint(s))) CHECK(c.pass);
  }
}

TEST_CASE("empirical checks mark EO-conditioned theorems as diagnostics") {
  const auto p = random_set(500, 3);
  const auto r = empirical_report(p);
  const auto checks = empirical_checks(p, r);
  CHECK(checks.front().name == "thm4_error_gap_bound");
  CHECK(checks.front().pass);
  for (const auto& c : checks)
    if (c.name == "thm3_joint_error_upper_bound") CHECK(c.diagnostic);
}

TEST_CASE("report JSON uses the field names and nulls for undefined rates") {
  const auto doc = report_document(empirical_report(mixed_fixture()), {});
  CHECK(doc["ber"].get<double>() == 0.4);
  CHECK(doc["dp_gap"].is_null());
  CHECK(doc["confusion"]["a0_y1"]["yhat0"].get<int>() == 1);
  CHECK(doc["theorem_checks"].is_array());
}
