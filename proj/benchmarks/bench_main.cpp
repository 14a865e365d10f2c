#include <benchmark/benchmark.h>

#include <vector>

#include "fairrep/data/synth.hpp"
#include "fairrep/engine/adadelta.hpp"
#include "fairrep/engine/loss.hpp"
#include "fairrep/engine/network.hpp"
#include "fairrep/metrics/finite_joint.hpp"
#include "fairrep/metrics/report.hpp"
#include "fairrep/metrics/theorems.hpp"
#include "fairrep/models/fair_model.hpp"
#include "fairrep/models/train.hpp"
#include "fairrep/random.hpp"

using namespace fairrep;

namespace {

// Adult-sized shapes: 101 inputs, 60 hidden, batch 512.
constexpr std::size_t kDim = 101;
constexpr std::size_t kBatch = 512;

engine::Matrix random_batch(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  engine::Matrix x(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  return x;
}

data::Dataset planted(std::size_t per_cell) {
  return data::synth(data::SynthSpec::planted({{{per_cell, per_cell}, {per_cell, per_cell}}}, kDim,
                                              1.0, 1.0, 3));
}

void BM_Forward(benchmark::State& state) {
  Rng rng(1);
  const auto net = engine::DenseNet::glorot({kDim, 60, 1}, engine::Activation::identity, rng);
  const auto x = random_batch(kBatch, kDim, 2);
  for (auto _ : state) benchmark::DoNotOptimize(engine::forward(net, x).output.data());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kBatch));
}
BENCHMARK(BM_Forward);

void BM_ForwardBackward(benchmark::State& state) {
  Rng rng(1);
  const auto net = engine::DenseNet::glorot({kDim, 60, 1}, engine::Activation::identity, rng);
  const auto x = random_batch(kBatch, kDim, 2);
  std::vector<std::uint8_t> y(kBatch);
  for (std::size_t i = 0; i < kBatch; ++i) y[i] = i % 3 == 0;
  for (auto _ : state) {
    auto f = engine::forward(net, x);
    const auto l = engine::weighted_bce(f.output.col(0), y, {1.0, 1.0});
    benchmark::DoNotOptimize(engine::backward(f.tape, l.grad).layers.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kBatch));
}
BENCHMARK(BM_ForwardBackward);

void BM_BatchLoss(benchmark::State& state) {
  const auto variant = static_cast<models::Variant>(state.range(0));
  const auto ds = planted(kBatch / 4);
  const auto cfg = models::preset(models::Preset::adult, variant, 1.0, kDim, 0);
  const auto model = models::build(cfg, ds);
  for (auto _ : state)
    benchmark::DoNotOptimize(models::batch_loss(model, ds.features, ds.labels, ds.groups).losses.target);
  state.SetLabel(models::to_string(variant));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kBatch));
}
BENCHMARK(BM_BatchLoss)->DenseRange(0, 4);

void BM_TrainEpoch(benchmark::State& state) {
  const auto ds = planted(2048);
  auto cfg = models::preset(models::Preset::adult, models::Variant::cfair, 1.0, kDim, 0);
  cfg.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(models::train(cfg, ds).history.steps);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ds.size()));
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

void BM_EmpiricalReport(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  std::vector<double> s(n);
  std::vector<std::uint8_t> y(n), a(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = rng.uniform();
    y[i] = rng.uniform() < 0.3;
    a[i] = rng.uniform() < 0.4;
  }
  const metrics::PredictionSet p(s, y, a);
  for (auto _ : state) benchmark::DoNotOptimize(metrics::empirical_report(p).ber);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_EmpiricalReport)->Arg(1852)->Arg(15060);

void BM_ExactTheorems(benchmark::State& state) {
  Rng rng(5);
  const auto joint = metrics::make_eo_joint(metrics::random_eo_spec(rng));
  for (auto _ : state) {
    benchmark::DoNotOptimize(metrics::check_thm2(joint).size());
    benchmark::DoNotOptimize(metrics::check_thm3(joint).lhs);
  }
}
BENCHMARK(BM_ExactTheorems);

}  // namespace

BENCHMARK_MAIN();
