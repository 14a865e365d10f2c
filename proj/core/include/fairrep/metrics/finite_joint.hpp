#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fairrep/metrics/predictions.hpp"
#include "fairrep/metrics/report.hpp"
#include "fairrep/random.hpp"

namespace fairrep::metrics {

/// Exact distribution over (Z, Y, A) with Z in {0, ..., support-1}, and an
/// optional deterministic predictor table Z -> {0,1}.
class FiniteJoint {
 public:
  /// `mass` is laid out [z][y][a]; it must be nonnegative and sum to 1 within 1e-12.
  FiniteJoint(std::size_t support, std::vector<double> mass,
              std::vector<std::uint8_t> predictor = {});

  std::size_t support() const { return support_; }
  double mass(std::size_t z, int y, int a) const { return mass_[index(z, y, a)]; }
  bool has_predictor() const { return !predictor_.empty(); }
  const std::vector<std::uint8_t>& predictor() const { return predictor_; }

  FiniteJoint with_predictor(std::vector<std::uint8_t> predictor) const;

  /// Probability of the conditioning event.
  double event_mass(std::optional<int> y, std::optional<int> a) const;

  /// Distribution of Z given the event; throws UndefinedMetricError when the
  /// event has zero mass.
  std::vector<double> representation(std::optional<int> y, std::optional<int> a) const;

  /// Masses aggregated to [a][y][yhat] through the predictor.
  CellTable cells() const;

  /// Draws n i.i.d. samples; scores are the hard predictions.
  PredictionSet sample(std::size_t n, Rng& rng) const;

 private:
  std::size_t index(std::size_t z, int y, int a) const {
    return z * 4 + static_cast<std::size_t>(y) * 2 + static_cast<std::size_t>(a);
  }

  std::size_t support_;
  std::vector<double> mass_;
  std::vector<std::uint8_t> predictor_;
};

/// sup_E |p(E) - q(E)| = half the L1 distance.
double total_variation(std::span<const double> p, std::span<const double> q);

/// Population-level report: closed-form rates from the joint's masses.
FairnessReport exact_report(const FiniteJoint& joint);

/// Parameters for a joint whose predictor satisfies equalized odds exactly.
struct EoJointSpec {
  double base_rate0 = 0.5;   // P(Y=1 | A=0)
  double base_rate1 = 0.5;   // P(Y=1 | A=1)
  double group1_mass = 0.5;  // P(A=1)
  double fpr = 0.0;
  double fnr = 0.0;
  std::size_t support = 8;
  /// When set, Z | (A, Y) does not depend on A (conditionally aligned representation).
  bool aligned = false;
  std::uint64_t seed = 0;
};

/// Builds a joint in which P(yhat=1 | A=a, Y=y) does not depend on a.
///
/// Cell masses and per-cell predictor rates are snapped to the dyadic grid
/// k / 2^26 so every mass is an exact product and every sum is exact; the
/// conditional rates then come out bit-identical across groups and
/// exact_report(...).eo_gap is exactly 0. Rates differ from the requested
/// values by at most 2^-27.
FiniteJoint make_eo_joint(const EoJointSpec& spec);

/// Random joint with random predictor; every (y, a) cell has positive mass.
FiniteJoint random_joint(std::size_t support, Rng& rng);

/// Random EoJointSpec with rates bounded away from 0 and 1.
EoJointSpec random_eo_spec(Rng& rng, bool aligned = false);

/// Snapping resolution used by make_eo_joint.
inline constexpr double kDyadicResolution = 0x1.0p-26;

}  // namespace fairrep::metrics
