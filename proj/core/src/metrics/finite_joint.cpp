#include "fairrep/metrics/finite_joint.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairrep/error.hpp"

namespace fairrep::metrics {

FiniteJoint::FiniteJoint(std::size_t support, std::vector<double> mass,
                         std::vector<std::uint8_t> predictor)
    : support_(support), mass_(std::move(mass)), predictor_(std::move(predictor)) {
  if (support_ == 0) throw DimensionError("finite joint needs a nonempty support");
  if (mass_.size() != support_ * 4)
    throw DimensionError("finite joint: expected " + std::to_string(support_ * 4) + " masses, got " +
                         std::to_string(mass_.size()));
  double total = 0.0;
  for (double m : mass_) {
    if (!std::isfinite(m) || m < 0.0) throw NumericError("finite joint masses must be nonnegative");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw NumericError("finite joint masses sum to " + std::to_string(total) + ", not 1");
  if (!predictor_.empty()) {
    if (predictor_.size() != support_)
      throw DimensionError("predictor table size does not match the support");
    for (std::uint8_t p : predictor_)
      if (p > 1) throw DimensionError("predictor table entries must be 0 or 1");
  }
}

FiniteJoint FiniteJoint::with_predictor(std::vector<std::uint8_t> predictor) const {
  return FiniteJoint(support_, mass_, std::move(predictor));
}

double FiniteJoint::event_mass(std::optional<int> y, std::optional<int> a) const {
  double total = 0.0;
  for (std::size_t z = 0; z < support_; ++z)
    for (int yy = 0; yy < 2; ++yy)
      for (int aa = 0; aa < 2; ++aa)
        if ((!y || *y == yy) && (!a || *a == aa)) total += mass(z, yy, aa);
  return total;
}

std::vector<double> FiniteJoint::representation(std::optional<int> y, std::optional<int> a) const {
  const double norm = event_mass(y, a);
  if (!(norm > 0.0)) throw UndefinedMetricError("conditioning event has zero mass");
  std::vector<double> p(support_, 0.0);
  for (std::size_t z = 0; z < support_; ++z) {
    double m = 0.0;
    for (int yy = 0; yy < 2; ++yy)
      for (int aa = 0; aa < 2; ++aa)
        if ((!y || *y == yy) && (!a || *a == aa)) m += mass(z, yy, aa);
    p[z] = m / norm;
  }
  return p;
}

CellTable FiniteJoint::cells() const {
  if (!has_predictor()) throw PreconditionError("finite joint has no predictor table");
  CellTable t;
  for (std::size_t z = 0; z < support_; ++z)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a) t(a, y, predictor_[z]) += mass(z, y, a);
  return t;
}

PredictionSet FiniteJoint::sample(std::size_t n, Rng& rng) const {
  if (!has_predictor()) throw PreconditionError("finite joint has no predictor table");
  std::vector<double> cumulative(mass_.size());
  double running = 0.0;
  for (std::size_t i = 0; i < mass_.size(); ++i) cumulative[i] = running += mass_[i];
  std::vector<double> scores(n);
  std::vector<std::uint8_t> labels(n), groups(n);
  for (std::size_t s = 0; s < n; ++s) {
    const double u = rng.uniform() * running;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    const auto idx = static_cast<std::size_t>(it - cumulative.begin());
    const std::size_t z = idx / 4;
    labels[s] = static_cast<std::uint8_t>((idx / 2) % 2);
    groups[s] = static_cast<std::uint8_t>(idx % 2);
    scores[s] = predictor_[z];
  }
  return PredictionSet(std::move(scores), std::move(labels), std::move(groups));
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DimensionError("total variation of distributions on different supports");
  double l1 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) l1 += std::abs(p[i] - q[i]);
  return 0.5 * l1;
}

FairnessReport exact_report(const FiniteJoint& joint) { return report_from_cells(joint.cells()); }

namespace {

constexpr std::int64_t kGrid = std::int64_t{1} << 26;

std::int64_t snap(double x) {
  return std::clamp<std::int64_t>(std::llround(x * static_cast<double>(kGrid)), 0, kGrid);
}

// Splits `total` grid units over `slots` parts with uniformly random cut points.
std::vector<std::int64_t> random_partition(std::int64_t total, std::size_t slots, Rng& rng) {
  std::vector<std::int64_t> cuts{0, total};
  for (std::size_t i = 1; i < slots; ++i)
    cuts.push_back(static_cast<std::int64_t>(rng.index(static_cast<std::uint64_t>(total) + 1)));
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::int64_t> parts(slots);
  for (std::size_t i = 0; i < slots; ++i) parts[i] = cuts[i + 1] - cuts[i];
  return parts;
}

void require_probability(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0,1]");
}

}  // namespace

FiniteJoint make_eo_joint(const EoJointSpec& spec) {
  require_probability(spec.base_rate0, "base_rate0");
  require_probability(spec.base_rate1, "base_rate1");
  require_probability(spec.group1_mass, "group1_mass");
  require_probability(spec.fpr, "fpr");
  require_probability(spec.fnr, "fnr");
  if (spec.support < 2) throw ConfigError("an EO joint needs at least two support points");

  Rng rng(spec.seed);
  const std::size_t k = spec.support;

  std::vector<std::uint8_t> predictor(k);
  for (auto& p : predictor) p = static_cast<std::uint8_t>(rng.index(2));
  const auto one_at = static_cast<std::size_t>(rng.index(k));
  auto zero_at = static_cast<std::size_t>(rng.index(k - 1));
  if (zero_at >= one_at) ++zero_at;
  predictor[one_at] = 1;
  predictor[zero_at] = 0;

  std::vector<std::size_t> ones, zeros;
  for (std::size_t z = 0; z < k; ++z) (predictor[z] ? ones : zeros).push_back(z);

  // Cell masses c[a][y] in grid units, summing to kGrid.
  std::int64_t c[2][2];
  const std::int64_t group1 = snap(spec.group1_mass);
  const std::int64_t groups[2] = {kGrid - group1, group1};
  const double base[2] = {spec.base_rate0, spec.base_rate1};
  for (int a = 0; a < 2; ++a) {
    c[a][1] = std::clamp<std::int64_t>(
        std::llround(base[a] * static_cast<double>(groups[a])), 0, groups[a]);
    c[a][0] = groups[a] - c[a][1];
  }

  // Grid units of P(yhat = 1 | Y = y), shared by both groups.
  const std::int64_t positive[2] = {snap(spec.fpr), snap(1.0 - spec.fnr)};

  // p[a][y][z] in grid units; each row sums to kGrid with `positive[y]` on the ones.
  std::vector<std::int64_t> p[2][2];
  auto make_row = [&](int y) {
    std::vector<std::int64_t> row(k, 0);
    const auto on = random_partition(positive[y], ones.size(), rng);
    const auto off = random_partition(kGrid - positive[y], zeros.size(), rng);
    for (std::size_t i = 0; i < ones.size(); ++i) row[ones[i]] = on[i];
    for (std::size_t i = 0; i < zeros.size(); ++i) row[zeros[i]] = off[i];
    return row;
  };
  for (int y = 0; y < 2; ++y) {
    p[0][y] = make_row(y);
    p[1][y] = spec.aligned ? p[0][y] : make_row(y);
  }

  // Both factors are integers below 2^26, so each product is exact and every
  // partial sum of masses is a multiple of 2^-52 below 1, hence exact too.
  std::vector<double> mass(k * 4);
  for (std::size_t z = 0; z < k; ++z)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        mass[z * 4 + static_cast<std::size_t>(y) * 2 + static_cast<std::size_t>(a)] =
            static_cast<double>(c[a][y]) * static_cast<double>(p[a][y][z]) * 0x1.0p-52;
  return FiniteJoint(k, std::move(mass), std::move(predictor));
}

FiniteJoint random_joint(std::size_t support, Rng& rng) {
  if (support < 1) throw ConfigError("random joint needs a nonempty support");
  std::vector<double> mass(support * 4);
  double total = 0.0;
  for (double& m : mass) total += m = rng.uniform(0.05, 1.0);
  for (double& m : mass) m /= total;
  std::vector<std::uint8_t> predictor(support);
  for (auto& p : predictor) p = static_cast<std::uint8_t>(rng.index(2));
  return FiniteJoint(support, std::move(mass), std::move(predictor));
}

EoJointSpec random_eo_spec(Rng& rng, bool aligned) {
  EoJointSpec s;
  s.base_rate0 = rng.uniform(0.05, 0.95);
  s.base_rate1 = rng.uniform(0.05, 0.95);
  s.group1_mass = rng.uniform(0.05, 0.95);
  s.fpr = rng.uniform();
  s.fnr = rng.uniform();
  s.support = 2 + static_cast<std::size_t>(rng.index(9));
  s.aligned = aligned;
  s.seed = rng.index(UINT64_MAX);
  return s;
}

}  // namespace fairrep::metrics
