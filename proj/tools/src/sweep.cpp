#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "fairrep/cli/commands.hpp"
#include "fairrep/data/csv.hpp"
#include "fairrep/data/stats.hpp"
#include "fairrep/error.hpp"

namespace fairrep::cli {

using models::Variant;

bool SweepResult::all_ok() const {
  for (const auto& c : cells)
    if (!c.ok) return false;
  return true;
}

const SweepCell* SweepResult::find(Variant variant, double lambda, std::uint64_t seed) const {
  for (const auto& c : cells)
    if (c.variant == variant && c.seed == seed && (variant == Variant::no_debias || c.lambda == lambda))
      return &c;
  return nullptr;
}

std::optional<double> SweepResult::mean(
    Variant variant, double lambda,
    const std::function<std::optional<double>(const metrics::FairnessReport&)>& metric) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::uint64_t seed : seeds) {
    const SweepCell* c = find(variant, lambda, seed);
    if (c == nullptr || !c->ok || !c->test_report) continue;
    const auto v = metric(*c->test_report);
    if (!v) continue;
    sum += *v;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

namespace {

SweepCell make_cell(Variant variant, double lambda, std::uint64_t seed) {
  SweepCell c;
  c.variant = variant;
  c.lambda = lambda;
  c.seed = seed;
  return c;
}

}  // namespace

SweepResult run_sweep(const LoadedDataset& dataset, const SweepRequest& request,
                      std::ostream* progress) {
  SweepResult result;
  result.variants = request.variants;
  result.lambdas = request.lambdas;
  result.seeds = request.seeds;
  result.delta_br = data::split_stats(dataset.data.test).delta_br;

  for (Variant v : request.variants) {
    if (v == Variant::no_debias) {
      for (std::uint64_t s : request.seeds) result.cells.push_back(make_cell(v, 0.0, s));
      continue;
    }
    for (double l : request.lambdas)
      for (std::uint64_t s : request.seeds) result.cells.push_back(make_cell(v, l, s));
  }

  std::mutex log_mutex;
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < result.cells.size(); i = next++) {
      SweepCell& cell = result.cells[i];
      const auto start = std::chrono::steady_clock::now();
      try {
        auto config = models::preset(dataset.preset, cell.variant, cell.lambda,
                                     dataset.data.train.dim(), cell.seed);
        if (request.epochs) config.epochs = *request.epochs;
        models::TrainOptions opts;
        opts.test = &dataset.data.test;
        auto trained = models::train(config, dataset.data.train, opts);
        cell.test_report = trained.history.epochs.back().test_report;
        cell.ok = true;
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.reason = e.what();
      }
      cell.runtime_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (progress != nullptr) {
        std::lock_guard lock(log_mutex);
        *progress << "[" << (i + 1) << "/" << result.cells.size() << "] "
                  << models::to_string(cell.variant) << " lambda=" << cell.lambda
                  << " seed=" << cell.seed << (cell.ok ? " ok" : " FAILED: " + cell.reason)
                  << " (" << cell.runtime_seconds << " s)" << std::endl;
      }
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min(request.jobs, result.cells.size()));
  std::vector<std::thread> threads;
  for (std::size_t j = 1; j < jobs; ++j) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  return result;
}

namespace {

std::string num(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, *v);
  return ec == std::errc() ? std::string(buf, end) : "";
}

using Metric = std::function<std::optional<double>(const metrics::FairnessReport&)>;

}  // namespace

void write_sweep(const SweepResult& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::vector<std::pair<std::string, Metric>> metric_files = {
      {"err_gap", [](const metrics::FairnessReport& x) { return x.err_gap; }},
      {"eo_gap", [](const metrics::FairnessReport& x) { return x.eo_gap; }},
      {"dp_gap", [](const metrics::FairnessReport& x) { return x.dp_gap; }},
      {"joint_err", [](const metrics::FairnessReport& x) { return x.joint_err; }},
  };
  for (const auto& [name, metric] : metric_files) {
    const std::string path = (std::filesystem::path(dir) / (name + ".csv")).string();
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "lambda";
    for (Variant v : r.variants) out << ',' << models::to_string(v);
    out << ",delta_br\n";
    for (double l : r.lambdas) {
      out << num(l);
      for (Variant v : r.variants) out << ',' << num(r.mean(v, l, metric));
      out << ',' << num(r.delta_br) << '\n';
    }
  }

  const std::string path = (std::filesystem::path(dir) / "cells.csv").string();
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "variant,lambda,seed,status,err_gap,eo_gap,dp_gap,joint_err,ber,runtime_seconds,reason\n";
  for (const auto& c : r.cells) {
    out << models::to_string(c.variant) << ',' << num(c.lambda) << ',' << c.seed << ','
        << (c.ok ? "ok" : "failed");
    if (c.test_report) {
      const auto& x = *c.test_report;
      out << ',' << num(x.err_gap) << ',' << num(x.eo_gap) << ',' << num(x.dp_gap) << ','
          << num(x.joint_err) << ',' << num(x.ber);
    } else {
      out << ",,,,,";
    }
    out << ',' << num(c.runtime_seconds) << ',' << data::csv_escape(c.reason) << '\n';
  }
}

}  // namespace fairrep::cli
